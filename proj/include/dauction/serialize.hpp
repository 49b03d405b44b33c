#pragma once

#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "graph.hpp"
#include "harness.hpp"
#include "mechanisms.hpp"
#include "rational.hpp"

namespace dauction {

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

// The file formats are closed: a key the schema does not define is a typo
// or a version mismatch, never silently ignored.
inline void expect_keys(const nlohmann::json& obj, std::initializer_list<const char*> keys,
                        const std::string& ctx) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : keys)
            if (it.key() == k) known = true;
        if (!known) throw ParseError("unknown key '" + it.key() + "' in " + ctx);
    }
}

inline const nlohmann::json& require(const nlohmann::json& obj, const char* key,
                                     const std::string& ctx) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError("missing key '" + std::string(key) + "' in " + ctx);
    return *it;
}

inline std::string require_string(const nlohmann::json& obj, const char* key,
                                  const std::string& ctx) {
    const nlohmann::json& v = require(obj, key, ctx);
    if (!v.is_string()) throw ParseError("key '" + std::string(key) + "' in " + ctx +
                                         " must be a string");
    return v.get<std::string>();
}

// Rationals travel as strings ("p", "p/q" or decimal); plain JSON integers
// are accepted too since they are exact.
inline Rat rational_field(const nlohmann::json& v, const std::string& ctx) {
    if (v.is_string()) {
        try {
            return parse_rational(v.get<std::string>());
        } catch (const RationalParseError& e) {
            throw ParseError(ctx + ": " + e.what());
        }
    }
    if (v.is_number_integer()) return Rat(v.get<long long>());
    throw ParseError(ctx + ": expected a rational string");
}

}  // namespace detail

inline Graph graph_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("graph file must hold a JSON object");
    detail::expect_keys(j, {"seller", "nodes", "edges"}, "graph");
    std::string seller = detail::require_string(j, "seller", "graph");

    const nlohmann::json& jn = detail::require(j, "nodes", "graph");
    if (!jn.is_array()) throw ParseError("'nodes' must be an array");
    std::vector<NodeSpec> nodes;
    for (const auto& n : jn) {
        if (!n.is_object()) throw ParseError("each node must be an object");
        detail::expect_keys(n, {"id", "value"}, "node");
        std::string id = detail::require_string(n, "id", "node");
        nodes.push_back({id, detail::rational_field(detail::require(n, "value", "node"),
                                                    "value of node " + id)});
    }

    const nlohmann::json& je = detail::require(j, "edges", "graph");
    if (!je.is_array()) throw ParseError("'edges' must be an array");
    std::vector<EdgeSpec> edges;
    for (const auto& e : je) {
        if (!e.is_object()) throw ParseError("each edge must be an object");
        detail::expect_keys(e, {"from", "to", "weight"}, "edge");
        std::string from = detail::require_string(e, "from", "edge");
        std::string to = detail::require_string(e, "to", "edge");
        edges.push_back({from, to,
                         detail::rational_field(detail::require(e, "weight", "edge"),
                                                "weight of edge " + from + " -> " + to)});
    }
    return Graph(std::move(seller), std::move(nodes), std::move(edges));
}

inline nlohmann::json graph_to_json(const Graph& g) {
    nlohmann::json j;
    j["seller"] = g.seller_id();
    j["nodes"] = nlohmann::json::array();
    for (int i = 0; i < g.node_count(); ++i)
        j["nodes"].push_back({{"id", g.id(i)}, {"value", to_string(g.value(i))}});
    j["edges"] = nlohmann::json::array();
    for (const auto& [key, w] : g.edges())
        j["edges"].push_back({{"from", g.id_or_seller(key.first)},
                              {"to", g.id_or_seller(key.second)},
                              {"weight", to_string(w)}});
    return j;
}

inline std::string graph_to_json_text(const Graph& g) { return graph_to_json(g).dump(2); }

inline Graph load_graph(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open graph file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return graph_from_json_text(ss.str());
}

inline nlohmann::json outcome_to_json(const Graph& g, const AuctionOutcome& out) {
    nlohmann::json j;
    j["mechanism"] = out.mechanism;
    j["winner"] = out.winner ? nlohmann::json(g.id(*out.winner)) : nlohmann::json(nullptr);
    if (out.path) {
        nlohmann::json p = nlohmann::json::array();
        for (int i : out.path->seq) p.push_back(g.id(i));
        j["path"] = p;
    } else {
        j["path"] = nullptr;
    }
    j["payments"] = nlohmann::json::object();
    for (const auto& [node, x] : out.payments) j["payments"][g.id(node)] = to_string(x);
    j["revenue"] = to_string(out.revenue);
    j["welfare"] = to_string(out.welfare);
    return j;
}

// The slice of an outcome file that downstream tools (DOT export) need.
struct OutcomeSummary {
    std::optional<std::string> winner;
    std::vector<std::string> path;
};

inline OutcomeSummary outcome_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("outcome file must hold a JSON object");
    detail::expect_keys(j, {"mechanism", "winner", "path", "payments", "revenue", "welfare"},
                        "outcome");
    OutcomeSummary out;
    const nlohmann::json& w = detail::require(j, "winner", "outcome");
    if (w.is_string()) out.winner = w.get<std::string>();
    const nlohmann::json& p = detail::require(j, "path", "outcome");
    if (p.is_array())
        for (const auto& id : p) {
            if (!id.is_string()) throw ParseError("path entries must be node ids");
            out.path.push_back(id.get<std::string>());
        }
    return out;
}

inline OutcomeSummary load_outcome(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open outcome file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return outcome_from_json_text(ss.str());
}

inline nlohmann::json report_to_json(const PropertyReport& r) {
    nlohmann::json j;
    j["property"] = r.property;
    j["instances_checked"] = r.instances_checked;
    j["instances_excluded_ties"] = r.instances_excluded_ties;
    j["cases_checked"] = r.cases_checked;
    j["violation_count"] = r.violation_count;
    j["max_gain"] = to_string(r.max_gain);
    j["passed"] = r.passed();
    j["violations"] = nlohmann::json::array();
    for (const auto& v : r.violations)
        j["violations"].push_back({{"instance", v.instance},
                                   {"node", v.node},
                                   {"deviation", v.deviation},
                                   {"gain", to_string(v.gain)}});
    return j;
}

}  // namespace dauction
