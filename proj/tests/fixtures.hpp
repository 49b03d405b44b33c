#pragma once

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include <dauction/graph.hpp>
#include <dauction/node_set.hpp>
#include <dauction/paths.hpp>
#include <dauction/rational.hpp>

namespace fixtures {

using dauction::Graph;
using dauction::NodeSet;
using dauction::Rat;

// Reference market used across the suite: two seller entry points, one
// neighbor that can only relay back to the seller, two parallel routes of
// different weight to the high bidder F, and a second tier (G, H) behind F.
inline Graph fig1() {
    return Graph("s",
                 {{"A", Rat(1)},
                  {"B", Rat(2)},
                  {"C", Rat(4)},
                  {"D", Rat(5)},
                  {"E", Rat(6)},
                  {"F", Rat(10)},
                  {"G", Rat(12)},
                  {"H", Rat(7)}},
                 {{"s", "A", Rat(0)},
                  {"s", "B", Rat(0)},
                  {"A", "s", Rat(0)},
                  {"B", "A", Rat(1)},
                  {"B", "C", Rat(1)},
                  {"B", "D", Rat(1)},
                  {"B", "E", Rat(0)},
                  {"E", "B", Rat(1)},
                  {"D", "F", Rat(2)},
                  {"E", "F", Rat(0)},
                  {"F", "G", Rat(4)},
                  {"F", "H", Rat(2)},
                  {"H", "G", Rat(3)}});
}

inline Graph fig1_zeroed() { return fig1().zero_weight_view(); }

inline int ix(const Graph& g, const std::string& id) {
    int i = g.index_of(id);
    if (i < 0) throw std::logic_error("fixture references unknown node: " + id);
    return i;
}

inline NodeSet nodes(const Graph& g, std::initializer_list<const char*> ids) {
    NodeSet s;
    for (const char* id : ids) s.add(ix(g, id));
    return s;
}

inline std::vector<std::string> ids_of(const Graph& g, const std::vector<int>& seq) {
    std::vector<std::string> out;
    for (int i : seq) out.push_back(g.id(i));
    return out;
}

inline std::vector<std::string> path_ids(const Graph& g, const dauction::TradingPath& path) {
    return ids_of(g, path.seq);
}

}  // namespace fixtures
