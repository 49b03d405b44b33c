#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "critical.hpp"
#include "graph.hpp"
#include "node_set.hpp"
#include "paths.hpp"
#include "profile.hpp"
#include "rational.hpp"

namespace dauction {

struct EmptyMarketError : std::runtime_error {
    EmptyMarketError() : std::runtime_error("no informed bidder in the market") {}
};
struct WeightedGraphError : std::runtime_error {
    WeightedGraphError()
        : std::runtime_error("this mechanism requires all edge weights to be zero") {}
};
struct UnreachableError : std::runtime_error {
    explicit UnreachableError(const std::string& what) : std::runtime_error(what) {}
};

// Full result of one mechanism run.  Payments absent from the map are zero;
// negative payments mean the seller pays that node.  Revenue re-derives as
// the payment sum minus the allocation path weight.
struct AuctionOutcome {
    std::string mechanism;
    std::optional<int> winner;
    std::optional<TradingPath> path;
    std::map<int, Rat> payments;
    Rat revenue{0};
    Rat welfare{0};
};

inline Rat payment_of(const AuctionOutcome& out, int node) {
    auto it = out.payments.find(node);
    return it == out.payments.end() ? Rat(0) : it->second;
}

// Second-price auction among the seller's direct neighbors; diffusion is
// ignored entirely.  The baseline every diffusion mechanism is compared to.
inline AuctionOutcome vickrey(const Graph& g, const Profile& p, MarketFlags* flags = nullptr) {
    AuctionOutcome out;
    out.mechanism = "vickrey";
    std::optional<int> winner;
    Rat best{0};
    bool tied = false;
    for (int i : p.seller_roots & g.all_nodes()) {
        if (!p.reports[i] || !p.reports[i]->bid) continue;
        const Rat& bid = *p.reports[i]->bid;
        if (!winner || bid > best) {
            winner = i;
            best = bid;
            tied = false;
        } else if (bid == best) {
            tied = true;
        }
    }
    if (!winner) throw EmptyMarketError();
    if (flags && tied) flags->tie = true;
    Rat second{0};
    for (int i : p.seller_roots & g.all_nodes()) {
        if (i == *winner || !p.reports[i] || !p.reports[i]->bid) continue;
        if (*p.reports[i]->bid > second) second = *p.reports[i]->bid;
    }
    out.winner = winner;
    out.path = TradingPath{{*winner}, Rat(0)};
    out.payments[*winner] = second;
    out.revenue = second;
    out.welfare = best;
    return out;
}

// Critical-walk mechanism on unweighted graphs.  Walks the highest bidder's
// critical sequence; each node either wins (it is the efficient winner once
// its cut is removed) or is paid the welfare damage its cut would cause
// beyond its own absence.
inline AuctionOutcome cdm(const Graph& g, const Profile& p, const CutStrategy& strategy,
                          MarketFlags* flags = nullptr) {
    if (!g.unweighted()) throw WeightedGraphError();
    Profile pn = normalized(g, p);
    WelfareLight top = welfare_and_winner(g, pn, flags);
    if (!top.winner) throw EmptyMarketError();
    CriticalSequence cs = critical_sequence(g, pn, *top.winner);

    AuctionOutcome out;
    out.mechanism = "cdm-" + strategy.name;
    for (int pos = 0; pos < static_cast<int>(cs.seq.size()); ++pos) {
        const int i = cs.seq[pos];
        EdgeCut cut = strategy.compute(g, pn, cs.seq, pos);
        WelfareLight sub = welfare_and_winner(g, remove_edges(g, pn, cut), flags);
        Rat welfare_without_i = welfare_and_winner(g, remove_node(g, pn, i), flags).welfare;
        if (sub.winner && *sub.winner == i) {
            out.winner = i;
            out.payments[i] = welfare_without_i;
            out.path = *shortest_trading_path(g, pn, i);
            out.welfare = *pn.reports[i]->bid - out.path->weight;
            break;
        }
        out.payments[i] = welfare_without_i - sub.welfare;
    }
    if (!out.winner) throw std::logic_error("cdm: critical walk ended without a winner");
    Rat sum{0};
    for (const auto& [node, x] : out.payments) sum += x;
    out.revenue = sum - out.path->weight;
    return out;
}

// Neighbors of i that can pass the sale information onward to somebody
// other than i (including back to the seller).
inline NodeSet intermediaries(const Graph& g, const Profile& p, int i) {
    (void)p;  // determined by the true graph alone
    NodeSet out;
    for (int j : g.true_neighbors(i)) {
        NodeSet onward = g.true_neighbors(j);
        onward.remove(i);
        if (!onward.empty() || g.edge_to_seller(j)) out.add(j);
    }
    return out;
}

// Edges from a path node to its intermediaries and its path successor; the
// terminal node's cut is empty.
inline EdgeCut gamma(const Graph& g, const Profile& p, const std::vector<int>& path, int pos) {
    if (pos + 1 >= static_cast<int>(path.size())) return {};
    const int i = path[pos];
    NodeSet targets = intermediaries(g, p, i);
    targets.add(path[pos + 1]);
    EdgeCut cut;
    for (int j : targets) cut.emplace_back(i, j);
    return cut;
}

struct WdmContext {
    TradingPath efficient_path;              // canonical path to the highest scorer m
    std::map<int, EdgeCut> gamma_cuts;       // per walked path node
    std::map<std::pair<int, int>, Rat> reduced;  // cache of reduced distances
    NodeSet secondary;
    Rat critical_value{0};
    int m = -1;
};

// Walks the efficient path head to tail; the first node that becomes the
// efficient winner once its gamma cut is removed takes the item.  The tail
// node's cut is empty, so the walk always produces a winner.
inline std::tuple<int, TradingPath, WdmContext> wdm_allocate(const Graph& g, const Profile& p,
                                                             MarketFlags* flags = nullptr) {
    Profile pn = normalized(g, p);
    WelfareResult eff = efficient_allocation(g, pn, flags);
    if (!eff.winner) throw EmptyMarketError();
    WdmContext ctx;
    ctx.m = *eff.winner;
    ctx.efficient_path = *eff.path;
    const std::vector<int>& seq = ctx.efficient_path.seq;
    for (int pos = 0; pos < static_cast<int>(seq.size()); ++pos) {
        const int i = seq[pos];
        EdgeCut cut = gamma(g, pn, seq, pos);
        ctx.gamma_cuts[i] = cut;
        WelfareLight sub = welfare_and_winner(g, remove_edges(g, pn, cut), flags);
        if (sub.winner && *sub.winner == i) {
            TradingPath alloc;
            alloc.seq.assign(seq.begin(), seq.begin() + pos + 1);
            for (int k = 0; k + 1 <= pos; ++k) alloc.weight += g.weight(seq[k], seq[k + 1]);
            return {i, alloc, ctx};
        }
    }
    throw std::logic_error("wdm: path walk ended without a winner");
}

namespace detail {

inline Rat reduced_distance_cached(const Graph& g, const Profile& pn, WdmContext& ctx, int i,
                                   int j) {
    auto key = std::make_pair(i, j);
    auto it = ctx.reduced.find(key);
    if (it != ctx.reduced.end()) return it->second;
    Profile q = remove_edges(g, pn, ctx.gamma_cuts.at(i));
    NodeSet informed = informed_set(g, q);
    if (!informed.contains(j))
        throw UnreachableError("reduced distance: " + g.id(j) + " unreachable once " + g.id(i) +
                               "'s cut is removed");
    auto dist = trading_distances(g, q, informed);
    ctx.reduced.emplace(key, *dist[j]);
    return *dist[j];
}

}  // namespace detail

// Weight of the shortest trading path to j once i's gamma cut is removed.
// i must lie on the efficient path of the (normalized) profile.
inline Rat reduced_distance(const Graph& g, const Profile& p, int i, int j) {
    Profile pn = normalized(g, p);
    WelfareResult eff = efficient_allocation(g, pn);
    if (!eff.winner) throw EmptyMarketError();
    const std::vector<int>& seq = eff.path->seq;
    WdmContext ctx;
    for (int pos = 0; pos < static_cast<int>(seq.size()); ++pos) {
        if (seq[pos] != i) continue;
        ctx.gamma_cuts[i] = gamma(g, pn, seq, pos);
        return detail::reduced_distance_cached(g, pn, ctx, i, j);
    }
    throw std::invalid_argument("reduced_distance: node not on the efficient path");
}

// A non-winning path node is secondary when it would take the item in its
// own cut market once the winner's bid is silenced (the winner keeps
// relaying).  Secondary bids raise the winner's price.
inline NodeSet secondary_nodes(const Graph& g, const Profile& p, const WdmContext& ctx,
                               int winner, const TradingPath& alloc_path,
                               MarketFlags* flags = nullptr) {
    Profile pn = normalized(g, p);
    NodeSet out;
    for (int i : alloc_path.seq) {
        if (i == winner) continue;
        Profile q = remove_edges(g, pn, ctx.gamma_cuts.at(i));
        if (q.reports[winner]) q.reports[winner]->bid.reset();
        WelfareLight sub = welfare_and_winner(g, q, flags);
        if (sub.winner && *sub.winner == i) out.add(i);
    }
    return out;
}

// Losing path nodes are paid the welfare damage of their cut beyond their
// own absence; the winner pays the best of the fallback price (the market
// without her, shifted by her own reduced distance) and every secondary
// node's shifted bid.
inline std::map<int, Rat> wdm_pay(const Graph& g, const Profile& p, WdmContext& ctx, int winner,
                                  const TradingPath& alloc_path, MarketFlags* flags = nullptr) {
    Profile pn = normalized(g, p);
    std::map<int, Rat> pay;
    for (int i : alloc_path.seq) {
        if (i == winner) continue;
        Rat without_i = welfare_and_winner(g, remove_node(g, pn, i), flags).welfare;
        Rat gamma_market = welfare_and_winner(g, remove_edges(g, pn, ctx.gamma_cuts.at(i)), flags)
                               .welfare;
        pay[i] = without_i - gamma_market;
    }
    Rat price = welfare_and_winner(g, remove_node(g, pn, winner), flags).welfare +
                detail::reduced_distance_cached(g, pn, ctx, winner, winner);
    for (int i : ctx.secondary) {
        Rat cand = *pn.reports[i]->bid - detail::reduced_distance_cached(g, pn, ctx, i, i) +
                   detail::reduced_distance_cached(g, pn, ctx, i, winner);
        if (cand > price) price = cand;
    }
    pay[winner] = price;
    ctx.critical_value = price;
    return pay;
}

// Weighted diffusion mechanism: allocation walk, secondary detection and
// payment rule composed into one outcome.
inline AuctionOutcome wdm(const Graph& g, const Profile& p, MarketFlags* flags = nullptr) {
    Profile pn = normalized(g, p);
    auto [winner, alloc, ctx] = wdm_allocate(g, pn, flags);
    ctx.secondary = secondary_nodes(g, pn, ctx, winner, alloc, flags);
    std::map<int, Rat> pay = wdm_pay(g, pn, ctx, winner, alloc, flags);

    AuctionOutcome out;
    out.mechanism = "wdm";
    out.winner = winner;
    out.path = alloc;
    out.payments = std::move(pay);
    out.welfare = *pn.reports[winner]->bid - alloc.weight;
    Rat sum{0};
    for (const auto& [node, x] : out.payments) sum += x;
    out.revenue = sum - alloc.weight;
    return out;
}

enum class Mechanism { vickrey, cdm_idm, cdm_beta, wdm };

inline std::optional<Mechanism> parse_mechanism(const std::string& name) {
    if (name == "vickrey") return Mechanism::vickrey;
    if (name == "cdm-idm") return Mechanism::cdm_idm;
    if (name == "cdm-beta") return Mechanism::cdm_beta;
    if (name == "wdm") return Mechanism::wdm;
    return std::nullopt;
}

inline std::string mechanism_name(Mechanism m) {
    switch (m) {
        case Mechanism::vickrey: return "vickrey";
        case Mechanism::cdm_idm: return "cdm-idm";
        case Mechanism::cdm_beta: return "cdm-beta";
        case Mechanism::wdm: return "wdm";
    }
    return {};
}

inline AuctionOutcome run_mechanism(Mechanism m, const Graph& g, const Profile& p,
                                    MarketFlags* flags = nullptr) {
    switch (m) {
        case Mechanism::vickrey: return vickrey(g, p, flags);
        case Mechanism::cdm_idm: return cdm(g, p, idm_strategy(), flags);
        case Mechanism::cdm_beta: return cdm(g, p, beta_strategy(), flags);
        case Mechanism::wdm: return wdm(g, p, flags);
    }
    throw std::logic_error("unknown mechanism");
}

}  // namespace dauction
