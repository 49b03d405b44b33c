#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "critical.hpp"
#include "generator.hpp"
#include "graph.hpp"
#include "mechanisms.hpp"
#include "node_set.hpp"
#include "paths.hpp"
#include "profile.hpp"
#include "rational.hpp"

namespace dauction {

struct DegreeTooLargeError : std::runtime_error {
    explicit DegreeTooLargeError(int deg, int cap)
        : std::runtime_error("deviation space for degree " + std::to_string(deg) +
                             " exceeds the cap of " + std::to_string(cap)) {}
};
struct TooLargeError : std::runtime_error {
    TooLargeError() : std::runtime_error("brute-force oracle limited to 10 informed nodes") {}
};

// One unilateral report a node can try instead of the truth.
struct Deviation {
    int node = -1;
    std::optional<Rat> bid;
    NodeSet diffusion;
};

struct Violation {
    std::string instance;
    std::string node;
    std::string deviation;
    Rat gain{0};
};

// Merged result of one property over many instances.  Violations beyond a
// small sample are counted but not stored.
struct PropertyReport {
    static constexpr std::size_t kMaxStoredViolations = 50;

    std::string property;
    long instances_checked = 0;
    long instances_excluded_ties = 0;
    long cases_checked = 0;
    long violation_count = 0;
    std::vector<Violation> violations;
    Rat max_gain{0};

    bool passed() const { return violation_count == 0 && max_gain <= Rat(0); }

    void add_violation(Violation v) {
        ++violation_count;
        if (violations.size() < kMaxStoredViolations) violations.push_back(std::move(v));
    }

    void merge(const PropertyReport& o) {
        instances_checked += o.instances_checked;
        instances_excluded_ties += o.instances_excluded_ties;
        cases_checked += o.cases_checked;
        violation_count += o.violation_count;
        for (const auto& v : o.violations) {
            if (violations.size() >= kMaxStoredViolations) break;
            violations.push_back(v);
        }
        if (o.max_gain > max_gain) max_gain = o.max_gain;
    }
};

// Every payment in these mechanisms is a welfare level of some restricted
// market, i.e. a sum of existing values and weights; bracketing each true
// value by one unit and adding the extremes covers every threshold an
// integer-valued corpus can produce.
inline std::vector<Rat> default_bid_grid(const Graph& g) {
    std::vector<Rat> grid{Rat(0)};
    Rat maxv{0};
    for (int i = 0; i < g.node_count(); ++i) {
        const Rat& v = g.value(i);
        grid.push_back(v);
        grid.push_back(v + 1);
        if (v >= Rat(1)) grid.push_back(v - 1);
        if (v > maxv) maxv = v;
    }
    grid.push_back(maxv + 1);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

// (bidGrid ∪ {no bid}) × every diffusion subset.  The no-bid, no-diffusion
// entry doubles as the fully silent deviation; the identity deviation is
// present whenever the grid contains the node's true value.
inline std::vector<Deviation> deviation_space(const Graph& g, int node,
                                              const std::vector<Rat>& grid,
                                              int degree_cap = 10) {
    NodeSet nbrs = g.true_neighbors(node);
    const int deg = nbrs.size();
    if (deg > degree_cap) throw DegreeTooLargeError(deg, degree_cap);
    std::vector<int> nv;
    for (int j : nbrs) nv.push_back(j);
    std::vector<Deviation> out;
    out.reserve((grid.size() + 1) << deg);
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << deg); ++bits) {
        NodeSet d;
        for (int b = 0; b < deg; ++b)
            if ((bits >> b) & 1) d.add(nv[b]);
        out.push_back({node, std::nullopt, d});
        for (const Rat& b : grid) out.push_back({node, b, d});
    }
    return out;
}

inline Rat utility(const Graph& g, const AuctionOutcome& out, int node) {
    Rat u = -payment_of(out, node);
    if (out.winner && *out.winner == node) u += g.value(node);
    return u;
}

// A deviation can empty the market entirely; the mechanism then trades
// nothing and everyone's payment is zero.
inline AuctionOutcome run_or_empty(Mechanism m, const Graph& g, const Profile& p,
                                   MarketFlags* flags = nullptr) {
    try {
        return run_mechanism(m, g, p, flags);
    } catch (const EmptyMarketError&) {
        AuctionOutcome out;
        out.mechanism = mechanism_name(m);
        return out;
    }
}

namespace detail {

inline std::string describe_nodes(const Graph& g, NodeSet s) {
    std::string out = "{";
    bool first = true;
    for (int i : s) {
        if (!first) out += ",";
        out += g.id(i);
        first = false;
    }
    return out + "}";
}

inline std::string describe(const Graph& g, const Deviation& d) {
    std::string out = "bid=";
    out += d.bid ? to_string(*d.bid) : "nil";
    out += " diffusion=" + describe_nodes(g, d.diffusion);
    return out;
}

inline Profile with_report(const Profile& base, int node, std::optional<Rat> bid,
                           NodeSet diffusion) {
    Profile q = base;
    q.reports[node] = Report{std::move(bid), diffusion};
    return q;
}

inline std::optional<Report> random_opponent_report(const Graph& g, int node,
                                                    const std::vector<Rat>& grid,
                                                    std::mt19937_64& rng) {
    if (rng() % 6 == 0) return std::nullopt;
    Report r;
    std::size_t k = rng() % (grid.size() + 1);
    if (k < grid.size()) r.bid = grid[k];
    r.diffusion = NodeSet(rng()) & g.true_neighbors(node);
    return r;
}

}  // namespace detail

struct IcOptions {
    int degree_cap = 10;
    int spot_checks = 16;
    std::uint64_t seed = 2026;
    std::string instance = "instance";
};

// Exhaustive unilateral-deviation check at the truthful profile, plus
// randomized opponent-profile spot checks.  Instances whose truthful run
// hits an exact top-score tie are excluded: the strict-inequality reasoning
// the claim rests on does not apply there.  Spot checks are skipped when
// the base run is tied or trades at negative surplus, and individual
// deviation evaluations that trade at negative surplus are not counted:
// once some market's best trade loses money, an emptied comparison market
// (pinned at welfare zero) can outscore a nonempty one, and the claim's
// monotonicity reasoning is void.  Truthful runs never trade negative
// (seller-adjacent bidders score their full nonnegative bids), so only
// spot checks can hit these skips.
inline PropertyReport check_ic(Mechanism m, const Graph& g, std::vector<Rat> grid = {},
                               const IcOptions& opts = {}) {
    PropertyReport rep;
    rep.property = "ic[" + mechanism_name(m) + "]";
    rep.instances_checked = 1;
    if (grid.empty()) grid = default_bid_grid(g);

    Profile truth = truthful(g);
    MarketFlags base_flags;
    AuctionOutcome base = run_or_empty(m, g, truth, &base_flags);
    if (base_flags.tie) {
        rep.instances_excluded_ties = 1;
        return rep;
    }

    auto sweep = [&](const Profile& opponents, int node, const Rat& baseline,
                     const std::string& label) {
        for (const Deviation& dev : deviation_space(g, node, grid, opts.degree_cap)) {
            Profile q = detail::with_report(opponents, node, dev.bid, dev.diffusion);
            MarketFlags dev_flags;
            AuctionOutcome out = run_or_empty(m, g, q, &dev_flags);
            if (dev_flags.negative_trade) continue;
            Rat gain = utility(g, out, node) - baseline;
            ++rep.cases_checked;
            if (gain > rep.max_gain) rep.max_gain = gain;
            if (gain > Rat(0))
                rep.add_violation({label, g.id(node), detail::describe(g, dev), gain});
        }
    };

    for (int node = 0; node < g.node_count(); ++node)
        sweep(truth, node, utility(g, base, node), opts.instance);

    std::mt19937_64 rng(opts.seed);
    for (int t = 0; t < opts.spot_checks && g.node_count() > 0; ++t) {
        const int focal = static_cast<int>(rng() % g.node_count());
        Profile opponents = truth;
        for (int j = 0; j < g.node_count(); ++j) {
            if (j == focal || rng() % 2) continue;
            opponents.reports[j] = detail::random_opponent_report(g, j, grid, rng);
        }
        MarketFlags spot_flags;
        AuctionOutcome spot_base = run_or_empty(m, g, opponents, &spot_flags);
        if (spot_flags.tie || spot_flags.negative_trade) continue;
        sweep(opponents, focal, utility(g, spot_base, focal),
              opts.instance + " spot" + std::to_string(t));
    }
    return rep;
}

// Truthful bid, every diffusion subset: utility must never go negative,
// ties or not.
inline PropertyReport check_ir(Mechanism m, const Graph& g, const std::string& instance = "instance",
                               int degree_cap = 10) {
    PropertyReport rep;
    rep.property = "ir[" + mechanism_name(m) + "]";
    rep.instances_checked = 1;
    Profile truth = truthful(g);
    for (int node = 0; node < g.node_count(); ++node) {
        NodeSet nbrs = g.true_neighbors(node);
        const int deg = nbrs.size();
        if (deg > degree_cap) throw DegreeTooLargeError(deg, degree_cap);
        std::vector<int> nv;
        for (int j : nbrs) nv.push_back(j);
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << deg); ++bits) {
            NodeSet d;
            for (int b = 0; b < deg; ++b)
                if ((bits >> b) & 1) d.add(nv[b]);
            Profile q = detail::with_report(truth, node, g.value(node), d);
            AuctionOutcome out = run_or_empty(m, g, q);
            Rat u = utility(g, out, node);
            ++rep.cases_checked;
            if (-u > rep.max_gain) rep.max_gain = -u;
            if (u < Rat(0))
                rep.add_violation({instance, g.id(node),
                                   "bid=truth diffusion=" + detail::describe_nodes(g, d), -u});
        }
    }
    return rep;
}

// Revenue and welfare must weakly dominate the Vickrey baseline.
inline PropertyReport check_dominance(Mechanism m, const Graph& g,
                                      const std::string& instance = "instance") {
    PropertyReport rep;
    rep.property = "dominance[" + mechanism_name(m) + "]";
    rep.instances_checked = 1;
    Profile truth = truthful(g);
    AuctionOutcome mech = run_or_empty(m, g, truth);
    AuctionOutcome vick = run_or_empty(Mechanism::vickrey, g, truth);
    rep.cases_checked = 2;
    if (vick.revenue > mech.revenue) {
        rep.max_gain = std::max(rep.max_gain, vick.revenue - mech.revenue);
        rep.add_violation({instance, "-", "revenue below vickrey", vick.revenue - mech.revenue});
    }
    if (vick.welfare > mech.welfare) {
        rep.max_gain = std::max(rep.max_gain, vick.welfare - mech.welfare);
        rep.add_violation({instance, "-", "welfare below vickrey", vick.welfare - mech.welfare});
    }
    return rep;
}

// On unweighted instances: every strategy's revenue is at least the idm
// revenue, and the idm revenue telescopes to the welfare of the market
// without the first critical node.
inline PropertyReport check_idm_floor(const Graph& g,
                                      const std::vector<const CutStrategy*>& strategies,
                                      const std::string& instance = "instance") {
    PropertyReport rep;
    rep.property = "floor";
    rep.instances_checked = 1;
    Profile truth = truthful(g);
    Profile pn = normalized(g, truth);
    WelfareLight top = welfare_and_winner(g, pn);
    if (!top.winner) return rep;

    AuctionOutcome idm_out = cdm(g, truth, idm_strategy());
    CriticalSequence cs = critical_sequence(g, pn, *top.winner);
    Rat floor = welfare_and_winner(g, remove_node(g, pn, cs.seq.front())).welfare;
    ++rep.cases_checked;
    if (idm_out.revenue != floor) {
        Rat diff = idm_out.revenue > floor ? idm_out.revenue - floor : floor - idm_out.revenue;
        rep.max_gain = std::max(rep.max_gain, diff);
        rep.add_violation({instance, "-",
                           "idm revenue " + to_string(idm_out.revenue) +
                               " differs from first-critical-removed welfare " + to_string(floor),
                           diff});
    }
    for (const CutStrategy* s : strategies) {
        AuctionOutcome out = cdm(g, truth, *s);
        ++rep.cases_checked;
        if (out.revenue < idm_out.revenue) {
            Rat diff = idm_out.revenue - out.revenue;
            rep.max_gain = std::max(rep.max_gain, diff);
            rep.add_violation({instance, "-",
                               "cdm-" + s->name + " revenue below cdm-idm", diff});
        }
    }
    return rep;
}

// Payment-support filter: a losing path node is paid exactly zero when the
// cut-market efficient path reaches past it on the main path without
// passing through it.  The avoidance clause is load-bearing: when the top
// scorer's only onward neighbor is the losing node itself, the cut keeps
// the direct edge into the top scorer, the cut market reaches the tail
// through the loser, and the equal-welfare argument fails (the loser is
// then legitimately paid for that access).
inline PropertyReport check_zero_payment(const Graph& g,
                                         const std::string& instance = "instance") {
    PropertyReport rep;
    rep.property = "zero-payment";
    rep.instances_checked = 1;
    Profile truth = truthful(g);
    Profile pn = normalized(g, truth);
    NodeSet informed = informed_set(g, pn);
    bool any_bidder = false;
    for (int i : informed)
        if (pn.reports[i] && pn.reports[i]->bid) any_bidder = true;
    if (!any_bidder) return rep;

    auto [winner, alloc, ctx] = wdm_allocate(g, pn);
    ctx.secondary = secondary_nodes(g, pn, ctx, winner, alloc);
    auto pay = wdm_pay(g, pn, ctx, winner, alloc);

    const std::vector<int>& main_seq = ctx.efficient_path.seq;
    for (std::size_t pos = 0; pos < alloc.seq.size(); ++pos) {
        const int i = alloc.seq[pos];
        if (i == winner) continue;
        WelfareResult sub = efficient_allocation(g, remove_edges(g, pn, ctx.gamma_cuts.at(i)));
        if (!sub.winner) continue;
        NodeSet tail;  // nodes of the main path strictly after i
        for (std::size_t k = pos + 1; k < main_seq.size(); ++k) tail.add(main_seq[k]);
        bool touches_tail = false;
        bool through_i = false;
        for (int node : sub.path->seq) {
            if (tail.contains(node)) touches_tail = true;
            if (node == i) through_i = true;
        }
        if (!touches_tail || through_i) continue;
        ++rep.cases_checked;
        Rat x = pay.count(i) ? pay.at(i) : Rat(0);
        if (x != Rat(0)) {
            Rat mag = x > Rat(0) ? x : -x;
            rep.max_gain = std::max(rep.max_gain, mag);
            rep.add_violation({instance, g.id(i), "nonzero payment " + to_string(x), mag});
        }
    }
    return rep;
}

// Zero-weight instances: wdm must pick a critical node of the top bidder
// and collect at least the idm floor.
inline PropertyReport check_degeneracy(const Graph& g, const std::string& instance = "instance") {
    PropertyReport rep;
    rep.property = "degeneracy";
    rep.instances_checked = 1;
    Profile truth = truthful(g);
    AuctionOutcome out = run_or_empty(Mechanism::wdm, g, truth);
    if (!out.winner) return rep;

    Profile pn = normalized(g, truth);
    WelfareLight top = welfare_and_winner(g, pn);
    CriticalSequence cs = critical_sequence(g, pn, *top.winner);
    rep.cases_checked += 2;
    if (std::find(cs.seq.begin(), cs.seq.end(), *out.winner) == cs.seq.end())
        rep.add_violation({instance, g.id(*out.winner),
                           "wdm winner outside the top bidder's critical sequence", Rat(1)});
    Rat floor = welfare_and_winner(g, remove_node(g, pn, cs.seq.front())).welfare;
    if (out.revenue < floor) {
        rep.max_gain = std::max(rep.max_gain, floor - out.revenue);
        rep.add_violation({instance, "-", "wdm revenue below the idm floor",
                           floor - out.revenue});
    }
    return rep;
}

// Exhaustive simple-path enumeration: the independent oracle for distances,
// canonical paths and efficient allocation.
inline std::vector<std::optional<TradingPath>> brute_force_paths(const Graph& g,
                                                                 const Profile& p) {
    NodeSet informed = informed_set(g, p);
    if (informed.size() > 10) throw TooLargeError();
    std::vector<std::optional<TradingPath>> best(g.node_count());
    std::vector<int> stack;
    NodeSet onpath;
    std::function<void(int, Rat)> dfs = [&](int u, Rat w) {
        stack.push_back(u);
        onpath.add(u);
        auto& b = best[u];
        if (!b || w < b->weight || (w == b->weight && detail::shortlex_less(stack, b->seq)))
            b = TradingPath{stack, w};
        if (p.reports[u]) {
            NodeSet targets = p.reports[u]->diffusion & informed;
            for (const auto& [v, ew] : g.out(u)) {
                if (!targets.contains(v) || onpath.contains(v)) continue;
                dfs(v, w + ew);
            }
        }
        stack.pop_back();
        onpath.remove(u);
    };
    for (int r : p.seller_roots & informed) dfs(r, Rat(0));
    return best;
}

inline WelfareResult brute_force_welfare(const Graph& g, const Profile& p) {
    auto paths = brute_force_paths(g, p);
    WelfareResult out;
    for (int i : informed_set(g, p)) {
        if (!p.reports[i] || !p.reports[i]->bid || !paths[i]) continue;
        Rat score = *p.reports[i]->bid - paths[i]->weight;
        if (!out.winner || score > out.welfare) {
            out.winner = i;
            out.welfare = score;
        }
    }
    if (out.winner)
        out.path = paths[*out.winner];
    else
        out.welfare = Rat(0);
    return out;
}

// Engine-vs-oracle agreement on one profile: per-target canonical paths and
// the full allocation.
inline PropertyReport check_oracle(const Graph& g, const Profile& p,
                                   const std::string& instance = "instance") {
    PropertyReport rep;
    rep.property = "oracle";
    rep.instances_checked = 1;
    NodeSet informed = informed_set(g, p);
    if (informed.size() > 10) return rep;

    auto brute = brute_force_paths(g, p);
    for (int t : informed) {
        ++rep.cases_checked;
        auto engine = shortest_trading_path(g, p, t);
        if (!engine || !(*engine == *brute[t]))
            rep.add_violation({instance, g.id(t), "canonical path disagrees with enumeration",
                               Rat(1)});
    }
    ++rep.cases_checked;
    WelfareResult oracle = brute_force_welfare(g, p);
    WelfareResult engine = efficient_allocation(g, p);
    bool same = oracle.winner == engine.winner && oracle.welfare == engine.welfare &&
                oracle.path == engine.path;
    if (!same)
        rep.add_violation({instance, oracle.winner ? g.id(*oracle.winner) : "-",
                           "efficient allocation disagrees with enumeration", Rat(1)});
    return rep;
}

// Corpus-driven execution of the property suites.  One weighted instance
// per seed; mechanisms scoped to unweighted graphs run on its zero-weight
// projection of the same topology.
struct SuiteConfig {
    long seeds = 500;
    GenConfig gen;
    int degree_cap = 10;
    int spot_checks = 16;
};

inline const std::vector<std::string>& all_suites() {
    static const std::vector<std::string> s{"ic",     "ir",           "dominance", "floor",
                                            "oracle", "zero-payment", "degeneracy"};
    return s;
}

inline std::vector<PropertyReport> run_suites(const std::vector<std::string>& suites,
                                              const SuiteConfig& cfg) {
    for (const auto& s : suites)
        if (std::find(all_suites().begin(), all_suites().end(), s) == all_suites().end())
            throw std::invalid_argument("unknown suite: " + s);
    auto wants = [&](const std::string& s) {
        return std::find(suites.begin(), suites.end(), s) != suites.end();
    };

    const std::vector<std::pair<Mechanism, bool>> zeroed_mechanisms{
        {Mechanism::cdm_idm, true}, {Mechanism::cdm_beta, true}, {Mechanism::wdm, false}};

    std::vector<PropertyReport> reports;
    auto merged = [&](const std::string& property) -> PropertyReport& {
        for (auto& r : reports)
            if (r.property == property) return r;
        reports.push_back({});
        reports.back().property = property;
        return reports.back();
    };

    for (long k = 0; k < cfg.seeds; ++k) {
        GenConfig gk = cfg.gen;
        gk.seed = cfg.gen.seed + static_cast<std::uint64_t>(k);
        const std::string label = "seed=" + std::to_string(gk.seed);
        Graph weighted = gen_random(gk);
        Graph zeroed = weighted.zero_weight_view();
        auto graph_for = [&](bool zero) -> const Graph& { return zero ? zeroed : weighted; };

        if (wants("ic")) {
            IcOptions opts;
            opts.degree_cap = cfg.degree_cap;
            opts.spot_checks = cfg.spot_checks;
            opts.seed = gk.seed * 1000003ull + 17;
            opts.instance = label;
            for (const auto& [m, zero] : zeroed_mechanisms)
                merged("ic[" + mechanism_name(m) + "]")
                    .merge(check_ic(m, graph_for(zero), {}, opts));
        }
        if (wants("ir"))
            for (const auto& [m, zero] : zeroed_mechanisms)
                merged("ir[" + mechanism_name(m) + "]")
                    .merge(check_ir(m, graph_for(zero), label, cfg.degree_cap));
        if (wants("dominance"))
            for (const auto& [m, zero] : zeroed_mechanisms)
                merged("dominance[" + mechanism_name(m) + "]")
                    .merge(check_dominance(m, graph_for(zero), label));
        if (wants("floor"))
            merged("floor").merge(
                check_idm_floor(zeroed, {&beta_strategy()}, label));
        if (wants("oracle")) {
            merged("oracle").merge(check_oracle(weighted, truthful(weighted), label));
            merged("oracle").merge(check_oracle(zeroed, truthful(zeroed), label + " zeroed"));
        }
        if (wants("zero-payment"))
            merged("zero-payment").merge(check_zero_payment(weighted, label));
        if (wants("degeneracy")) merged("degeneracy").merge(check_degeneracy(zeroed, label));
    }
    return reports;
}

}  // namespace dauction
