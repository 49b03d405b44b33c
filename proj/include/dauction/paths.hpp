#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "graph.hpp"
#include "node_set.hpp"
#include "profile.hpp"
#include "rational.hpp"

namespace dauction {

// A trading path: seller-adjacent entry node first, target last, never the
// seller itself.  Weight sums the edges between consecutive path nodes.
struct TradingPath {
    std::vector<int> seq;
    Rat weight{0};

    friend bool operator==(const TradingPath& a, const TradingPath& b) {
        return a.seq == b.seq && a.weight == b.weight;
    }
};

// Sticky monitors for degenerate market evaluations.  An exact tie at the
// top score makes the winner choice and the payment levels tie-break
// dependent.  A best trade below zero means the argmax allocation loses
// money, which voids the welfare-monotonicity arguments behind the
// incentive claims: an emptied comparison market scores zero and can then
// beat a nonempty one.  Callers that assert strict-inequality properties
// skip flagged evaluations.
struct MarketFlags {
    bool tie = false;
    bool negative_trade = false;
};

// Minimum trading-path weight from the seller to each informed node, over
// reported diffusion edges between informed nodes.  Relaxation over walks;
// with no negative cycles the walk optimum equals the simple-path optimum.
inline std::vector<std::optional<Rat>> trading_distances(const Graph& g, const Profile& p,
                                                         NodeSet informed) {
    const int n = g.node_count();
    std::vector<std::optional<Rat>> dist(n);
    if (g.unweighted()) {
        for (int v : informed) dist[v] = Rat(0);
        return dist;
    }
    for (int r : p.seller_roots & informed) dist[r] = Rat(0);
    bool changed = true;
    for (int round = 0; changed && round <= n; ++round) {
        changed = false;
        for (int u : informed) {
            if (!dist[u] || !p.reports[u]) continue;
            NodeSet targets = p.reports[u]->diffusion & informed;
            for (const auto& [v, w] : g.out(u)) {
                if (!targets.contains(v)) continue;
                Rat cand = *dist[u] + w;
                if (!dist[v] || cand < *dist[v]) {
                    dist[v] = cand;
                    changed = true;
                }
            }
        }
        if (changed && round == n)
            throw std::logic_error("distance relaxation failed to settle");
    }
    return dist;
}

namespace detail {

inline bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Path tie order: fewer hops first, then the lexicographically smaller node
// sequence.  Hop count must dominate: on all-zero weights a hop-insensitive
// order can route the canonical path around a direct edge into the winner,
// which leaves that edge out of the successor cut, lets cut markets keep
// the top bidder informed and breaks the revenue-floor guarantee.
inline bool shortlex_less(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return lex_less(a, b);
}

}  // namespace detail

// Canonical minimum-weight simple trading path per node: fewest hops, then
// lexicographically smallest sequence.  Fixpoint over tight edges: labels
// start at trivial root paths and only ever shrink in the tie order.  One
// label per node suffices: the least path's predecessor label never contains
// the endpoint (a prefix of it would already reach the endpoint in fewer
// hops), so the least path to any node always extends the least path of its
// penultimate node and settles within one round per hop.
inline std::vector<std::optional<std::vector<int>>> canonical_paths(
    const Graph& g, const Profile& p, NodeSet informed,
    const std::vector<std::optional<Rat>>& dist) {
    const int n = g.node_count();
    std::vector<std::optional<std::vector<int>>> best(n);
    for (int r : p.seller_roots & informed)
        if (dist[r] && *dist[r] == Rat(0)) best[r] = std::vector<int>{r};
    bool changed = true;
    for (int round = 0; changed; ++round) {
        if (round > n + 1) throw std::logic_error("path labels failed to settle");
        changed = false;
        for (int u : informed) {
            if (!best[u] || !p.reports[u]) continue;
            NodeSet targets = p.reports[u]->diffusion & informed;
            for (const auto& [v, w] : g.out(u)) {
                if (!targets.contains(v)) continue;
                if (!dist[u] || !dist[v] || *dist[u] + w != *dist[v]) continue;
                const auto& pu = *best[u];
                if (std::find(pu.begin(), pu.end(), v) != pu.end()) continue;
                std::vector<int> cand = pu;
                cand.push_back(v);
                if (!best[v] || detail::shortlex_less(cand, *best[v])) {
                    best[v] = std::move(cand);
                    changed = true;
                }
            }
        }
    }
    return best;
}

// Canonical efficient path to one node; empty when the node is not an
// informed participant.
inline std::optional<TradingPath> shortest_trading_path(const Graph& g, const Profile& p,
                                                        int target) {
    NodeSet informed = informed_set(g, p);
    if (!informed.contains(target)) return std::nullopt;
    auto dist = trading_distances(g, p, informed);
    auto paths = canonical_paths(g, p, informed, dist);
    if (!paths[target]) return std::nullopt;
    return TradingPath{*paths[target], *dist[target]};
}

struct WelfareLight {
    std::optional<int> winner;
    Rat welfare{0};
};

struct WelfareResult {
    std::optional<int> winner;
    Rat welfare{0};
    std::optional<TradingPath> path;
};

namespace detail {

// Shared candidate scan: highest bid-minus-distance score, lowest index on
// equal scores.  A later equal score never displaces the current leader, so
// the winner is the lexicographically smallest argmax; it does mark the
// market as tied.
inline WelfareLight scan_candidates(const Graph& g, const Profile& p, NodeSet informed,
                                    const std::vector<std::optional<Rat>>* dist,
                                    MarketFlags* flags) {
    WelfareLight out;
    bool tied_at_top = false;
    for (int i : informed) {
        if (!p.reports[i] || !p.reports[i]->bid) continue;
        if (dist && !(*dist)[i]) continue;
        Rat score = *p.reports[i]->bid;
        if (dist) score -= *(*dist)[i];
        if (!out.winner || score > out.welfare) {
            out.winner = i;
            out.welfare = score;
            tied_at_top = false;
        } else if (score == out.welfare) {
            tied_at_top = true;
        }
    }
    if (flags && tied_at_top) flags->tie = true;
    if (flags && out.winner && out.welfare < Rat(0)) flags->negative_trade = true;
    if (!out.winner) out.welfare = Rat(0);
    return out;
}

}  // namespace detail

// Efficient welfare and winner only; skips path reconstruction so the
// harness's inner loops stay cheap.  Empty markets yield welfare zero and
// no winner.
inline WelfareLight welfare_and_winner(const Graph& g, const Profile& p,
                                       MarketFlags* flags = nullptr) {
    NodeSet informed = informed_set(g, p);
    if (g.unweighted()) return detail::scan_candidates(g, p, informed, nullptr, flags);
    auto dist = trading_distances(g, p, informed);
    return detail::scan_candidates(g, p, informed, &dist, flags);
}

// Full efficient allocation including the winner's canonical trading path.
inline WelfareResult efficient_allocation(const Graph& g, const Profile& p,
                                          MarketFlags* flags = nullptr) {
    WelfareResult out;
    NodeSet informed = informed_set(g, p);
    auto dist = trading_distances(g, p, informed);
    WelfareLight light = detail::scan_candidates(g, p, informed, &dist, flags);
    out.winner = light.winner;
    out.welfare = light.welfare;
    if (out.winner) {
        auto paths = canonical_paths(g, p, informed, dist);
        out.path = TradingPath{*paths[*out.winner], *dist[*out.winner]};
    }
    return out;
}

}  // namespace dauction
