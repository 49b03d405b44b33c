#pragma once

#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include "graph.hpp"
#include "serialize.hpp"

namespace dauction {

namespace detail {

inline std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

}  // namespace detail

// Graphviz rendering of a market. Node and edge order follow the graph's
// canonical (id-sorted) order so the output is byte-identical across runs.
// When an outcome is supplied the allocation path, including the seller's
// entry edge, is drawn highlighted and the winner gets a double border.
inline std::string export_dot(const Graph& g,
                              const std::optional<OutcomeSummary>& outcome = std::nullopt) {
    std::set<std::pair<std::string, std::string>> hot;
    std::string winner;
    if (outcome) {
        if (outcome->winner) winner = *outcome->winner;
        std::string prev = g.seller_id();
        for (const std::string& id : outcome->path) {
            hot.insert({prev, id});
            prev = id;
        }
    }

    std::ostringstream os;
    os << "digraph market {\n";
    os << "  rankdir=LR;\n";
    os << "  \"" << detail::dot_escape(g.seller_id()) << "\" [shape=box];\n";
    for (int i = 0; i < g.node_count(); ++i) {
        os << "  \"" << detail::dot_escape(g.id(i)) << "\" [label=\""
           << detail::dot_escape(g.id(i)) << "\\n" << to_string(g.value(i)) << "\"";
        if (!winner.empty() && g.id(i) == winner) os << " peripheries=2";
        os << "];\n";
    }
    for (const auto& [key, w] : g.edges()) {
        std::string from = g.id_or_seller(key.first);
        std::string to = g.id_or_seller(key.second);
        os << "  \"" << detail::dot_escape(from) << "\" -> \"" << detail::dot_escape(to)
           << "\" [label=\"" << to_string(w) << "\"";
        if (hot.count({from, to})) os << " color=red penwidth=2";
        os << "];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace dauction
