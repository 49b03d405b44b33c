#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "graph.hpp"
#include "rational.hpp"

namespace dauction {

struct GenConfig {
    int n = 5;
    Rat edge_prob{1, 2};
    int value_max = 10;
    int weight_max = 5;
    std::uint64_t seed = 1;
    bool allow_negative_weights = false;
};

struct RejectionExhaustedError : std::runtime_error {
    RejectionExhaustedError()
        : std::runtime_error("could not draw a negative-cycle-free graph in 1000 attempts") {}
};

namespace detail {

// Exact Bernoulli draw: accepts with probability num/den using one 64-bit
// variate; no floating point, so identical seeds give identical graphs on
// every platform.
inline bool bernoulli(std::mt19937_64& rng, const Rat& p) {
    unsigned long long r = rng();
    auto num = static_cast<unsigned long long>(p.numerator());
    auto den = static_cast<unsigned long long>(p.denominator());
    return static_cast<unsigned __int128>(r) * den < (static_cast<unsigned __int128>(num) << 64);
}

inline std::string gen_node_id(int i, int n) {
    if (n <= 26) return std::string(1, static_cast<char>('A' + i));
    std::string s = "n";
    s += static_cast<char>('0' + (i + 1) / 10);
    s += static_cast<char>('0' + (i + 1) % 10);
    return s;
}

}  // namespace detail

// Seeded directed G(n, p) over the buyer nodes plus seller-incident edges
// in both directions.  Values are uniform integers in [1, valueMax]; weights
// uniform in [0, weightMax], or [-weightMax, weightMax] with rejection
// against the negative-cycle check when negative weights are enabled.  A
// positive edge probability guarantees at least one seller out-edge; a zero
// probability produces an edgeless (empty) market.
inline Graph gen_random(const GenConfig& cfg) {
    if (cfg.n < 0 || cfg.n > 64) throw std::invalid_argument("gen_random: n must be in [0, 64]");
    if (cfg.edge_prob < Rat(0) || cfg.edge_prob > Rat(1))
        throw std::invalid_argument("gen_random: edge probability must be in [0, 1]");
    if (cfg.value_max < 1) throw std::invalid_argument("gen_random: valueMax must be positive");
    if (cfg.weight_max < 0)
        throw std::invalid_argument("gen_random: weightMax must be nonnegative");

    std::mt19937_64 rng(cfg.seed);
    const std::string seller = "s";
    auto draw_weight = [&]() -> Rat {
        if (cfg.allow_negative_weights) {
            long long span = 2LL * cfg.weight_max + 1;
            return Rat(static_cast<long long>(rng() % span) - cfg.weight_max);
        }
        return Rat(static_cast<long long>(rng() % (cfg.weight_max + 1)));
    };

    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<NodeSpec> nodes;
        for (int i = 0; i < cfg.n; ++i)
            nodes.push_back({detail::gen_node_id(i, cfg.n),
                             Rat(1 + static_cast<long long>(rng() % cfg.value_max))});

        std::vector<EdgeSpec> edges;
        bool seller_has_edge = false;
        for (int i = 0; i < cfg.n; ++i)
            if (detail::bernoulli(rng, cfg.edge_prob)) {
                edges.push_back({seller, nodes[i].id, draw_weight()});
                seller_has_edge = true;
            }
        for (int u = 0; u < cfg.n; ++u)
            for (int v = 0; v < cfg.n; ++v) {
                if (u == v) continue;
                if (detail::bernoulli(rng, cfg.edge_prob))
                    edges.push_back({nodes[u].id, nodes[v].id, draw_weight()});
            }
        for (int u = 0; u < cfg.n; ++u)
            if (detail::bernoulli(rng, cfg.edge_prob))
                edges.push_back({nodes[u].id, seller, draw_weight()});
        if (!seller_has_edge && cfg.n > 0 && cfg.edge_prob > Rat(0))
            edges.push_back({seller, nodes[rng() % cfg.n].id, draw_weight()});

        try {
            return Graph(seller, std::move(nodes), std::move(edges));
        } catch (const NegativeCycleError&) {
            if (!cfg.allow_negative_weights) throw;
        }
    }
    throw RejectionExhaustedError();
}

}  // namespace dauction
