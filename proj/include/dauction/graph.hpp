#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "node_set.hpp"
#include "rational.hpp"

namespace dauction {

struct GraphError : std::runtime_error {
    explicit GraphError(const std::string& what) : std::runtime_error(what) {}
};
struct UnknownNodeError : GraphError {
    explicit UnknownNodeError(const std::string& what) : GraphError(what) {}
};
struct DuplicateEdgeError : GraphError {
    explicit DuplicateEdgeError(const std::string& what) : GraphError(what) {}
};
struct InvalidGraphError : GraphError {
    explicit InvalidGraphError(const std::string& what) : GraphError(what) {}
};
struct NegativeCycleError : GraphError {
    NegativeCycleError(const std::string& what, std::vector<std::string> witness)
        : GraphError(what), cycle(std::move(witness)) {}
    std::vector<std::string> cycle;
};

struct NodeSpec {
    std::string id;
    Rat value;
};

struct EdgeSpec {
    std::string from;
    std::string to;
    Rat weight;
};

// Directed market graph: one seller plus at most 64 bidder nodes.  Bidder
// ids are stored sorted, so index order coincides with lexicographic id
// order and every tie-break in the library reduces to an integer
// comparison.  Negative edge weights are allowed; negative cycles are
// rejected at construction (shortest trading paths would be unbounded).
class Graph {
  public:
    static constexpr int kSeller = -1;

    Graph(std::string seller, std::vector<NodeSpec> nodes, std::vector<EdgeSpec> edge_specs) {
        seller_id_ = std::move(seller);
        if (nodes.size() > 64) throw InvalidGraphError("more than 64 non-seller nodes");
        std::sort(nodes.begin(), nodes.end(),
                  [](const NodeSpec& a, const NodeSpec& b) { return a.id < b.id; });
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (nodes[i].id == seller_id_)
                throw InvalidGraphError("seller id also listed as a node: " + seller_id_);
            if (i > 0 && nodes[i].id == nodes[i - 1].id)
                throw InvalidGraphError("duplicate node id: " + nodes[i].id);
            if (nodes[i].value < Rat(0))
                throw InvalidGraphError("negative value for node: " + nodes[i].id);
            index_[nodes[i].id] = static_cast<int>(i);
            ids_.push_back(nodes[i].id);
            values_.push_back(nodes[i].value);
        }
        const int n = static_cast<int>(ids_.size());
        out_.resize(n);
        out_mask_.resize(n);
        in_mask_.resize(n);
        edge_to_seller_.resize(n, false);
        unweighted_ = true;

        auto resolve = [&](const std::string& id) -> int {
            if (id == seller_id_) return kSeller;
            auto it = index_.find(id);
            if (it == index_.end()) throw UnknownNodeError("edge references unknown node: " + id);
            return it->second;
        };

        for (const EdgeSpec& e : edge_specs) {
            int u = resolve(e.from);
            int v = resolve(e.to);
            if (u == v) throw InvalidGraphError("self-loop on node: " + e.from);
            auto key = std::make_pair(u, v);
            if (edges_.count(key))
                throw DuplicateEdgeError("duplicate edge: " + e.from + " -> " + e.to);
            edges_.emplace(key, e.weight);
            if (e.weight != Rat(0)) unweighted_ = false;
            if (u == kSeller) {
                seller_roots_.add(v);
            } else if (v == kSeller) {
                edge_to_seller_[u] = true;
            } else {
                out_[u].emplace_back(v, e.weight);
                out_mask_[u].add(v);
                in_mask_[v].add(u);
            }
        }
        for (auto& adj : out_)
            std::sort(adj.begin(), adj.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
        check_negative_cycles();
    }

    int node_count() const { return static_cast<int>(ids_.size()); }
    NodeSet all_nodes() const { return NodeSet::first_n(node_count()); }
    const std::string& seller_id() const { return seller_id_; }
    const std::string& id(int i) const { return ids_[i]; }
    const std::string& id_or_seller(int i) const { return i == kSeller ? seller_id_ : ids_[i]; }

    // -2 when the id is unknown (kSeller is -1 and must stay distinct).
    int index_of(const std::string& id) const {
        auto it = index_.find(id);
        return it == index_.end() ? -2 : it->second;
    }

    const Rat& value(int i) const { return values_[i]; }
    NodeSet seller_roots() const { return seller_roots_; }
    NodeSet true_neighbors(int i) const { return out_mask_[i]; }
    NodeSet in_sources(int i) const { return in_mask_[i]; }
    bool edge_to_seller(int i) const { return edge_to_seller_[i]; }
    const std::vector<std::pair<int, Rat>>& out(int i) const { return out_[i]; }
    bool unweighted() const { return unweighted_; }

    Rat weight(int u, int v) const {
        for (const auto& [t, w] : out_[u])
            if (t == v) return w;
        throw InvalidGraphError("no edge " + ids_[u] + " -> " + ids_[v]);
    }

    // All edges keyed by (from, to) with kSeller as -1; map order makes
    // every edge iteration in the library deterministic.
    const std::map<std::pair<int, int>, Rat>& edges() const { return edges_; }

    Graph zero_weight_view() const {
        Graph g(*this);
        g.unweighted_ = true;
        for (auto& adj : g.out_)
            for (auto& [t, w] : adj) w = Rat(0);
        for (auto& [k, w] : g.edges_) w = Rat(0);
        return g;
    }

  private:
    // Bellman-Ford from the all-zeros potential (equivalent to a super
    // source): an improvement surviving V full rounds implies a negative
    // cycle, and the predecessor chain of the improved vertex reaches it.
    void check_negative_cycles() const {
        const int verts = node_count() + 1;  // index node_count() stands for the seller
        std::vector<Rat> dist(verts, Rat(0));
        std::vector<int> pred(verts, -1);
        auto vix = [&](int i) { return i == kSeller ? node_count() : i; };
        int touched = -1;
        for (int round = 0; round < verts && touched != 0; ++round) {
            touched = 0;
            for (const auto& [key, w] : edges_) {
                int u = vix(key.first), v = vix(key.second);
                if (dist[u] + w < dist[v]) {
                    dist[v] = dist[u] + w;
                    pred[v] = u;
                    ++touched;
                    if (round == verts - 1)
                        throw NegativeCycleError("negative cycle detected",
                                                 extract_cycle(pred, v));
                }
            }
        }
    }

    std::vector<std::string> extract_cycle(const std::vector<int>& pred, int v) const {
        const int verts = node_count() + 1;
        std::vector<char> seen(verts, 0);
        int cur = v;
        while (cur >= 0 && !seen[cur]) {
            seen[cur] = 1;
            cur = pred[cur];
        }
        std::vector<std::string> out;
        if (cur < 0) return out;
        const int start = cur;
        do {
            out.push_back(cur == node_count() ? seller_id_ : ids_[cur]);
            cur = pred[cur];
        } while (cur != start);
        std::reverse(out.begin(), out.end());
        return out;
    }

    std::string seller_id_;
    std::vector<std::string> ids_;
    std::map<std::string, int> index_;
    std::vector<Rat> values_;
    std::vector<std::vector<std::pair<int, Rat>>> out_;
    std::vector<NodeSet> out_mask_;
    std::vector<NodeSet> in_mask_;
    std::vector<bool> edge_to_seller_;
    std::map<std::pair<int, int>, Rat> edges_;
    NodeSet seller_roots_;
    bool unweighted_ = false;
};

}  // namespace dauction
