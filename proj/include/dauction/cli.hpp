#pragma once

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "dot.hpp"
#include "generator.hpp"
#include "harness.hpp"
#include "mechanisms.hpp"
#include "serialize.hpp"

namespace dauction {

namespace detail {

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

inline int degree_cap_from_env(int fallback) {
    const char* v = std::getenv("AUCTION_DEGREE_CAP");
    if (!v || !*v) return fallback;
    std::size_t pos = 0;
    int cap = 0;
    try {
        cap = std::stoi(v, &pos);
    } catch (...) {
        pos = 0;
    }
    if (pos != std::strlen(v) || cap < 0)
        throw std::invalid_argument("AUCTION_DEGREE_CAP must be a non-negative integer");
    return cap;
}

// Quoting only when needed keeps the common all-bare case loss-free and
// byte-stable; rational strings never need it.
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q.push_back(c);
    }
    return q + "\"";
}

inline void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write file: " + path);
    f << text;
}

inline Rat probability_arg(const std::string& text) {
    Rat p;
    try {
        p = parse_rational(text);
    } catch (const RationalParseError& e) {
        throw CLI::ValidationError("--edge-prob", e.what());
    }
    if (p < Rat(0) || p > Rat(1))
        throw CLI::ValidationError("--edge-prob", "must lie in [0, 1]");
    return p;
}

}  // namespace detail

// Full command-line surface as a testable function: parses `args` (without
// the program name), writes to the given streams and returns the process
// exit code.  Usage problems exit 2, domain failures and property
// violations exit 1, success exits 0.
inline int run_command(const std::vector<std::string>& args, std::ostream& out,
                       std::ostream& err) {
    CLI::App app{"single-item diffusion auctions on social graphs", "dauction"};
    app.require_subcommand(1);
    std::string tie_break = "lexicographic";
    app.add_option("--tie-break", tie_break, "tie-breaking order across equal scores")
        ->check(CLI::IsMember({"lexicographic"}));

    CLI::App* c_run = app.add_subcommand("run", "evaluate one mechanism at the truthful profile");
    c_run->fallthrough();
    std::string run_mech, run_graph, run_output = "json";
    c_run->add_option("--mechanism", run_mech, "vickrey|cdm-idm|cdm-beta|wdm")
        ->required()
        ->check(CLI::IsMember({"vickrey", "cdm-idm", "cdm-beta", "wdm"}));
    c_run->add_option("--graph", run_graph, "graph JSON file")->required();
    c_run->add_option("--output", run_output, "output format")->check(CLI::IsMember({"json"}));

    CLI::App* c_gen = app.add_subcommand("gen", "emit a seeded random market graph");
    c_gen->fallthrough();
    long long gen_n = 5, gen_vmax = 10, gen_wmax = 5;
    unsigned long long gen_seed = 1;
    std::string gen_prob = "1/2", gen_out;
    bool gen_negw = false;
    c_gen->add_option("--n", gen_n, "non-seller node count")->check(CLI::Range(0, 64));
    c_gen->add_option("--edge-prob", gen_prob, "edge probability, rational in [0,1]");
    c_gen->add_option("--value-max", gen_vmax, "values drawn from [1, value-max]")
        ->check(CLI::Range(1, 1000000000));
    c_gen->add_option("--weight-max", gen_wmax, "weights drawn from [0, weight-max]")
        ->check(CLI::Range(0, 1000000000));
    c_gen->add_option("--seed", gen_seed, "generator seed");
    c_gen->add_flag("--allow-negative-weights", gen_negw,
                    "draw weights from [-weight-max, weight-max] with cycle rejection");
    c_gen->add_option("--out", gen_out, "output file (default stdout)");

    CLI::App* c_bench = app.add_subcommand("bench", "CSV of outcomes across mechanisms");
    c_bench->fallthrough();
    std::vector<std::string> bench_graphs;
    long long bench_seeds = 0, bench_n = 5, bench_vmax = 10, bench_wmax = 5;
    unsigned long long bench_seed = 1;
    std::string bench_prob = "1/2", bench_output = "csv";
    c_bench->add_option("--graph", bench_graphs, "graph JSON file (repeatable)");
    c_bench->add_option("--seeds", bench_seeds, "number of generated instances")
        ->check(CLI::Range(0, 1000000));
    c_bench->add_option("--n", bench_n, "non-seller node count")->check(CLI::Range(0, 64));
    c_bench->add_option("--edge-prob", bench_prob, "edge probability, rational in [0,1]");
    c_bench->add_option("--value-max", bench_vmax, "values drawn from [1, value-max]")
        ->check(CLI::Range(1, 1000000000));
    c_bench->add_option("--weight-max", bench_wmax, "weights drawn from [0, weight-max]")
        ->check(CLI::Range(0, 1000000000));
    c_bench->add_option("--seed", bench_seed, "base generator seed");
    c_bench->add_option("--output", bench_output, "output format")
        ->check(CLI::IsMember({"csv"}));

    CLI::App* c_verify = app.add_subcommand("verify", "run property suites over a seeded corpus");
    c_verify->fallthrough();
    std::string verify_suites = "all", verify_prob = "1/2", verify_output = "text";
    long long verify_seeds = 500, verify_n = 5, verify_vmax = 10, verify_wmax = 5;
    unsigned long long verify_seed = 1;
    c_verify->add_option("--suite", verify_suites,
                         "comma-separated suites (ic,ir,dominance,floor,oracle,zero-payment,"
                         "degeneracy) or 'all'");
    c_verify->add_option("--seeds", verify_seeds, "corpus size")->check(CLI::Range(1, 1000000));
    c_verify->add_option("--n", verify_n, "non-seller node count")->check(CLI::Range(0, 64));
    c_verify->add_option("--edge-prob", verify_prob, "edge probability, rational in [0,1]");
    c_verify->add_option("--value-max", verify_vmax, "values drawn from [1, value-max]")
        ->check(CLI::Range(1, 1000000000));
    c_verify->add_option("--weight-max", verify_wmax, "weights drawn from [0, weight-max]")
        ->check(CLI::Range(0, 1000000000));
    c_verify->add_option("--seed", verify_seed, "base corpus seed");
    c_verify->add_option("--output", verify_output, "text or json report")
        ->check(CLI::IsMember({"text", "json"}));

    CLI::App* c_dot = app.add_subcommand("export-dot", "render a graph (and outcome) to DOT");
    c_dot->fallthrough();
    std::string dot_graph, dot_outcome, dot_out;
    c_dot->add_option("--graph", dot_graph, "graph JSON file")->required();
    c_dot->add_option("--outcome", dot_outcome, "outcome JSON file to highlight");
    c_dot->add_option("--out", dot_out, "output file (default stdout)");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("dauction");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*c_run) {
            Graph g = load_graph(run_graph);
            AuctionOutcome o = run_mechanism(*parse_mechanism(run_mech), g, truthful(g));
            out << outcome_to_json(g, o).dump(2) << "\n";
            return 0;
        }

        if (*c_gen) {
            GenConfig cfg;
            cfg.n = static_cast<int>(gen_n);
            cfg.edge_prob = detail::probability_arg(gen_prob);
            cfg.value_max = static_cast<int>(gen_vmax);
            cfg.weight_max = static_cast<int>(gen_wmax);
            cfg.seed = gen_seed;
            cfg.allow_negative_weights = gen_negw;
            detail::write_text(gen_out, graph_to_json_text(gen_random(cfg)) + "\n", out);
            return 0;
        }

        if (*c_bench) {
            std::vector<std::pair<std::string, Graph>> instances;
            for (const std::string& path : bench_graphs)
                instances.emplace_back(path, load_graph(path));
            for (long long k = 0; k < bench_seeds; ++k) {
                GenConfig cfg;
                cfg.n = static_cast<int>(bench_n);
                cfg.edge_prob = detail::probability_arg(bench_prob);
                cfg.value_max = static_cast<int>(bench_vmax);
                cfg.weight_max = static_cast<int>(bench_wmax);
                cfg.seed = bench_seed + static_cast<unsigned long long>(k);
                instances.emplace_back("seed=" + std::to_string(cfg.seed), gen_random(cfg));
            }
            if (instances.empty()) {
                err << "bench needs at least one --graph file or --seeds > 0\n";
                return 2;
            }
            std::stable_sort(instances.begin(), instances.end(),
                             [](const auto& a, const auto& b) { return a.first < b.first; });

            out << "instance,mechanism,winner,revenue,welfare,vickrey_revenue,vickrey_welfare\n";
            for (const auto& [label, g] : instances) {
                Profile truth = truthful(g);
                AuctionOutcome vick = run_or_empty(Mechanism::vickrey, g, truth);
                auto emit = [&](const std::string& mech, const Graph& gg,
                                const AuctionOutcome& o) {
                    out << detail::csv_field(label) << "," << detail::csv_field(mech) << ","
                        << detail::csv_field(o.winner ? gg.id(*o.winner) : "") << ","
                        << to_string(o.revenue) << "," << to_string(o.welfare) << ","
                        << to_string(vick.revenue) << "," << to_string(vick.welfare) << "\n";
                };
                emit("vickrey", g, vick);
                for (Mechanism m : {Mechanism::cdm_idm, Mechanism::cdm_beta}) {
                    if (g.unweighted()) {
                        emit(mechanism_name(m), g, run_or_empty(m, g, truth));
                    } else {
                        Graph z = g.zero_weight_view();
                        emit(mechanism_name(m) + ":zeroed", z,
                             run_or_empty(m, z, truthful(z)));
                    }
                }
                emit("wdm", g, run_or_empty(Mechanism::wdm, g, truth));
            }
            return 0;
        }

        if (*c_verify) {
            std::vector<std::string> suites = verify_suites == "all" || verify_suites.empty()
                                                  ? all_suites()
                                                  : detail::split_list(verify_suites);
            for (const std::string& s : suites)
                if (std::find(all_suites().begin(), all_suites().end(), s) ==
                    all_suites().end()) {
                    err << "unknown suite: " << s << "\n";
                    return 2;
                }
            SuiteConfig cfg;
            cfg.seeds = verify_seeds;
            cfg.gen.n = static_cast<int>(verify_n);
            cfg.gen.edge_prob = detail::probability_arg(verify_prob);
            cfg.gen.value_max = static_cast<int>(verify_vmax);
            cfg.gen.weight_max = static_cast<int>(verify_wmax);
            cfg.gen.seed = verify_seed;
            cfg.degree_cap = detail::degree_cap_from_env(cfg.degree_cap);

            std::vector<PropertyReport> reports = run_suites(suites, cfg);
            bool all_pass = true;
            for (const PropertyReport& r : reports) {
                const bool p = r.passed();
                all_pass = all_pass && p;
                out << r.property << ": " << (p ? "PASS" : "FAIL")
                    << " instances=" << r.instances_checked
                    << " excluded_ties=" << r.instances_excluded_ties
                    << " cases=" << r.cases_checked << " violations=" << r.violation_count
                    << " max_gain=" << to_string(r.max_gain) << "\n";
                if (!p)
                    for (std::size_t i = 0; i < r.violations.size() && i < 5; ++i) {
                        const Violation& v = r.violations[i];
                        out << "  violation: instance=" << v.instance << " node=" << v.node
                            << " " << v.deviation << " gain=" << to_string(v.gain) << "\n";
                    }
            }
            if (verify_output == "json") {
                nlohmann::json j;
                j["passed"] = all_pass;
                j["reports"] = nlohmann::json::array();
                for (const PropertyReport& r : reports) j["reports"].push_back(report_to_json(r));
                out << j.dump(2) << "\n";
            }
            return all_pass ? 0 : 1;
        }

        if (*c_dot) {
            Graph g = load_graph(dot_graph);
            std::optional<OutcomeSummary> summary;
            if (!dot_outcome.empty()) summary = load_outcome(dot_outcome);
            detail::write_text(dot_out, export_dot(g, summary), out);
            return 0;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace dauction
