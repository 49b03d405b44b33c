#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "graph.hpp"
#include "node_set.hpp"
#include "rational.hpp"

namespace dauction {

// A node's report.  A missing bid means the node forwards the sale
// information to its reported neighbors but does not compete for the item;
// a missing report altogether (the optional in Profile) means the node
// neither bids nor forwards anything.
struct Report {
    std::optional<Rat> bid;
    NodeSet diffusion;

    friend bool operator==(const Report& a, const Report& b) {
        return a.bid == b.bid && a.diffusion == b.diffusion;
    }
};

// One report slot per node plus the set of nodes the seller itself informs.
// The seller's outreach is part of the environment, not a strategic choice.
struct Profile {
    std::vector<std::optional<Report>> reports;
    NodeSet seller_roots;

    friend bool operator==(const Profile& a, const Profile& b) {
        return a.reports == b.reports && a.seller_roots == b.seller_roots;
    }
};

inline Profile truthful(const Graph& g) {
    Profile p;
    p.seller_roots = g.seller_roots();
    p.reports.resize(g.node_count());
    for (int i = 0; i < g.node_count(); ++i)
        p.reports[i] = Report{g.value(i), g.true_neighbors(i)};
    return p;
}

// Nodes that take part in the market: reachable from the seller's outreach
// through reporting relays, and reporting themselves.  A nil node neither
// joins nor forwards; a bid-less report still relays.
inline NodeSet informed_set(const Graph& g, const Profile& p) {
    NodeSet reached;
    NodeSet frontier = p.seller_roots & g.all_nodes();
    while (!frontier.empty()) {
        reached |= frontier;
        NodeSet next;
        for (int u : frontier)
            if (p.reports[u]) next |= p.reports[u]->diffusion;
        frontier = (next & g.all_nodes()) - reached;
    }
    NodeSet informed;
    for (int u : reached)
        if (p.reports[u]) informed.add(u);
    return informed;
}

// Nodes and/or individual edges to drop from a profile.  Edge sources may
// be Graph::kSeller; edges not present in the profile are ignored.
struct RemovalSpec {
    NodeSet nodes;
    std::vector<std::pair<int, int>> edges;
};

// Nils every report that is not informed under the profile itself.  The
// result is a fixpoint: normalizing twice changes nothing.
inline Profile normalized(const Graph& g, const Profile& p) {
    NodeSet informed = informed_set(g, p);
    Profile q = p;
    for (int i = 0; i < g.node_count(); ++i)
        if (!informed.contains(i)) q.reports[i].reset();
    return q;
}

inline Profile restrict_profile(const Graph& g, const Profile& p, const RemovalSpec& spec) {
    Profile q = p;
    for (int i : spec.nodes) q.reports[i].reset();
    for (const auto& [u, v] : spec.edges) {
        if (u == Graph::kSeller)
            q.seller_roots.remove(v);
        else if (q.reports[u])
            q.reports[u]->diffusion.remove(v);
    }
    return normalized(g, q);
}

inline Profile remove_node(const Graph& g, const Profile& p, int node) {
    RemovalSpec spec;
    spec.nodes.add(node);
    return restrict_profile(g, p, spec);
}

inline Profile remove_edges(const Graph& g, const Profile& p,
                            const std::vector<std::pair<int, int>>& edges) {
    RemovalSpec spec;
    spec.edges = edges;
    return restrict_profile(g, p, spec);
}

}  // namespace dauction
