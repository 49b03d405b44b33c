#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "graph.hpp"
#include "node_set.hpp"
#include "paths.hpp"
#include "profile.hpp"
#include "rational.hpp"

namespace dauction {

// Ordered critical relay nodes of a target: every trading path to the
// target passes all of them, in this order; the target itself is last.
struct CriticalSequence {
    int target = -1;
    std::vector<int> seq;
};

// Nodes silenced by removing `node`: they lose all information routes.
inline NodeSet dependents(const Graph& g, const Profile& p, int node) {
    return informed_set(g, p) - informed_set(g, remove_node(g, p, node));
}

// Removal probe per informed node.  Critical nodes are ordered by strictly
// shrinking dependent sets, so sorting by dependent-set size descending
// reproduces the order in which any trading path visits them.
inline CriticalSequence critical_sequence(const Graph& g, const Profile& p, int target) {
    NodeSet informed = informed_set(g, p);
    if (!informed.contains(target))
        throw std::invalid_argument("critical_sequence: target is not an informed participant");
    std::vector<std::pair<int, int>> ranked;  // (-|dependents|, node)
    for (int c : informed) {
        if (c == target) continue;
        NodeSet after = informed_set(g, remove_node(g, p, c));
        if (!after.contains(target)) ranked.emplace_back(-(informed - after).size(), c);
    }
    std::sort(ranked.begin(), ranked.end());
    CriticalSequence out;
    out.target = target;
    for (const auto& [neg, c] : ranked) out.seq.push_back(c);
    out.seq.push_back(target);
    return out;
}

// Directed buyer-to-buyer edges, sorted by (from, to).
using EdgeCut = std::vector<std::pair<int, int>>;

struct LastPositionError : std::logic_error {
    LastPositionError() : std::logic_error("no cut is defined at the terminal position") {}
};

// A rule assigning to every non-terminal position of a critical sequence an
// edge set whose removal silences the next critical node.
struct CutStrategy {
    std::string name;
    std::function<EdgeCut(const Graph&, const Profile&, const std::vector<int>&, int)> compute;
};

// Every in-edge of the next critical node in the true graph.  Restricting
// by this cut silences exactly the same nodes as deleting that node.
inline EdgeCut alpha_idm(const Graph& g, const Profile& p, const std::vector<int>& seq, int pos) {
    if (pos + 1 >= static_cast<int>(seq.size())) return {};
    const int next = seq[pos + 1];
    EdgeCut cut;
    for (int j : g.in_sources(next)) cut.emplace_back(j, next);
    return cut;
}

namespace detail {

// Reachability over reported diffusion edges, never entering `avoid`.
inline bool reaches_avoiding(const Graph& g, const Profile& p, int from, int to, int avoid) {
    if (from == to) return true;
    NodeSet seen;
    seen.add(from);
    NodeSet frontier;
    frontier.add(from);
    while (!frontier.empty()) {
        NodeSet next;
        for (int u : frontier) {
            if (u == avoid || !p.reports[u]) continue;
            next |= p.reports[u]->diffusion;
        }
        next = (next & g.all_nodes()) - seen;
        next.remove(avoid);
        if (next.contains(to)) return true;
        seen |= next;
        frontier = next;
    }
    return false;
}

}  // namespace detail

// Minimum subset of the current node's reported out-edges that silences the
// next critical node: cut (i,j) exactly when the next node is reachable
// from j without re-entering i.  Edges to the remaining js can never carry
// information to the next node, so the set is both sufficient and minimal.
inline EdgeCut alpha_beta(const Graph& g, const Profile& p, const std::vector<int>& seq, int pos) {
    if (pos + 1 >= static_cast<int>(seq.size())) return {};
    const int i = seq[pos];
    const int next = seq[pos + 1];
    EdgeCut cut;
    if (!p.reports[i]) return cut;
    for (int j : p.reports[i]->diffusion)
        if (detail::reaches_avoiding(g, p, j, next, i)) cut.emplace_back(i, j);
    return cut;
}

inline const CutStrategy& idm_strategy() {
    static const CutStrategy s{"idm", alpha_idm};
    return s;
}

inline const CutStrategy& beta_strategy() {
    static const CutStrategy s{"beta", alpha_beta};
    return s;
}

struct CutValidation {
    bool passed = true;
    std::string counterexample;  // empty when passed
};

namespace detail {

inline NodeSet non_nil(const Graph& g, const Profile& p) {
    NodeSet out;
    for (int i = 0; i < g.node_count(); ++i)
        if (p.reports[i]) out.add(i);
    return out;
}

inline Report random_report(const Graph& g, int node, long long value_cap, std::mt19937_64& rng) {
    Report r;
    if (rng() % 4 != 0) r.bid = Rat(static_cast<long long>(rng() % (value_cap + 2)));
    r.diffusion = NodeSet(rng()) & g.true_neighbors(node);
    return r;
}

}  // namespace detail

// Checks a cut strategy on each instance's highest-bidder critical walk:
// (1) the cut silences the next critical node; (2) the cut is unchanged
// under re-reports by that node's dependents; (3) growing the current
// node's diffusion set only grows the surviving participant set.  Property
// 2 enumerates dependent subsets exhaustively when there are at most four,
// otherwise samples; perturbed report contents are always sampled.
inline CutValidation validate_cut_strategy(const CutStrategy& strategy,
                                           const std::vector<std::pair<Graph, Profile>>& corpus,
                                           std::uint64_t seed = 7) {
    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < corpus.size(); ++k) {
        const Graph& g = corpus[k].first;
        const Profile base = normalized(g, corpus[k].second);
        long long value_cap = 1;
        for (int i = 0; i < g.node_count(); ++i)
            value_cap = std::max(value_cap, boost::rational_cast<long long>(g.value(i)));
        MarketFlags unused;
        WelfareLight top = welfare_and_winner(g, base, &unused);
        if (!top.winner) continue;
        CriticalSequence cs = critical_sequence(g, base, *top.winner);
        const auto fail = [&](int pos, const std::string& what) {
            return CutValidation{false, "instance " + std::to_string(k) + ", position " +
                                            std::to_string(pos) + " (node " +
                                            g.id(cs.seq[pos]) + "): " + what};
        };
        for (int pos = 0; pos + 1 < static_cast<int>(cs.seq.size()); ++pos) {
            const int i = cs.seq[pos];
            const int next = cs.seq[pos + 1];
            EdgeCut cut = strategy.compute(g, base, cs.seq, pos);

            // property 1: information blocking
            if (informed_set(g, remove_edges(g, base, cut)).contains(next))
                return fail(pos, "property 1 violated: " + g.id(next) +
                                     " stays informed after removing the cut");

            // property 2: node independence from the next node's dependents
            NodeSet dep = dependents(g, base, next);
            std::vector<int> dep_nodes;
            for (int d : dep) dep_nodes.push_back(d);
            const bool exhaustive = dep_nodes.size() <= 4;
            const int trials = exhaustive ? (1 << dep_nodes.size()) : 64;
            for (int t = 0; t < trials; ++t) {
                Profile q = base;
                for (std::size_t b = 0; b < dep_nodes.size(); ++b) {
                    bool touch = exhaustive ? ((t >> b) & 1) : (rng() % 2 == 0);
                    if (touch)
                        q.reports[dep_nodes[b]] =
                            detail::random_report(g, dep_nodes[b], value_cap, rng);
                }
                if (strategy.compute(g, q, cs.seq, pos) != cut)
                    return fail(pos, "property 2 violated: cut depends on dependent reports");
            }

            // property 3: diffusion monotonicity in the current node's report
            NodeSet full = g.true_neighbors(i);
            std::vector<int> nbr;
            for (int j : full) nbr.push_back(j);
            const int deg = static_cast<int>(nbr.size());
            auto survivors = [&](NodeSet diffusion) {
                Profile q = base;
                q.reports[i]->diffusion = diffusion;
                EdgeCut c = strategy.compute(g, q, cs.seq, pos);
                return detail::non_nil(g, restrict_profile(g, q, RemovalSpec{{}, c}));
            };
            auto as_mask = [&](unsigned bits) {
                NodeSet s;
                for (int b = 0; b < deg; ++b)
                    if ((bits >> b) & 1) s.add(nbr[b]);
                return s;
            };
            if (deg <= 6) {
                for (unsigned lo = 0; lo < (1u << deg); ++lo) {
                    NodeSet small = as_mask(lo);
                    NodeSet small_set = survivors(small);
                    for (unsigned hi = lo;; hi = (hi + 1) | lo) {
                        if ((hi & lo) == lo) {
                            if (!small_set.subset_of(survivors(as_mask(hi))))
                                return fail(pos, "property 3 violated: survivors shrink as " +
                                                     g.id(i) + "'s diffusion grows");
                        }
                        if (hi >= (1u << deg) - 1) break;
                    }
                }
            } else {
                for (int t = 0; t < 128; ++t) {
                    NodeSet hi = NodeSet(rng()) & full;
                    NodeSet lo = NodeSet(rng()) & hi;
                    if (!survivors(lo).subset_of(survivors(hi)))
                        return fail(pos, "property 3 violated: survivors shrink as " + g.id(i) +
                                             "'s diffusion grows");
                }
            }
        }
    }
    return {};
}

}  // namespace dauction
