#include "grank/csr.hpp"

#include <algorithm>
#include <numeric>

namespace grank {

CsrGraph CsrGraph::from_edges(std::uint32_t node_count,
                              std::span<const std::pair<std::uint32_t, std::uint32_t>> edges,
                              std::span<const double> edge_weights) {
    CsrGraph g;
    g.offsets.assign(static_cast<std::size_t>(node_count) + 1, 0);

    for (const auto& [a, b] : edges) {
        ++g.offsets[a + 1];
        ++g.offsets[b + 1];
    }
    for (std::size_t v = 1; v < g.offsets.size(); ++v) g.offsets[v] += g.offsets[v - 1];

    const bool weighted = !edge_weights.empty();
    g.neighbors.resize(g.offsets.back());
    if (weighted) g.weights.resize(g.offsets.back());

    std::vector<std::uint64_t> cursor(g.offsets.begin(), g.offsets.end() - 1);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto [a, b] = edges[e];
        g.neighbors[cursor[a]] = b;
        g.neighbors[cursor[b]] = a;
        if (weighted) {
            g.weights[cursor[a]] = edge_weights[e];
            g.weights[cursor[b]] = edge_weights[e];
        }
        ++cursor[a];
        ++cursor[b];
    }

    // canonical per-node ordering
    for (std::uint32_t v = 0; v < node_count; ++v) {
        const std::size_t lo = g.offsets[v], hi = g.offsets[v + 1];
        if (!weighted) {
            std::sort(g.neighbors.begin() + lo, g.neighbors.begin() + hi);
        } else {
            std::vector<std::size_t> order(hi - lo);
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
                return g.neighbors[lo + x] < g.neighbors[lo + y];
            });
            std::vector<std::uint32_t> nb(hi - lo);
            std::vector<double> wt(hi - lo);
            for (std::size_t i = 0; i < order.size(); ++i) {
                nb[i] = g.neighbors[lo + order[i]];
                wt[i] = g.weights[lo + order[i]];
            }
            std::copy(nb.begin(), nb.end(), g.neighbors.begin() + lo);
            std::copy(wt.begin(), wt.end(), g.weights.begin() + lo);
        }
    }
    return g;
}

}  // namespace grank
