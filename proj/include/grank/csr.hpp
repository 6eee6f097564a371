#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace grank {

/// Undirected graph in compressed sparse adjacency form. Each undirected edge
/// is stored twice, once per endpoint; neighbor lists are sorted so the layout
/// is canonical regardless of edge insertion order.
struct CsrGraph {
    std::vector<std::uint64_t> offsets;    // size node_count + 1
    std::vector<std::uint32_t> neighbors;  // size = sum of degrees
    std::vector<double> weights;           // empty, or parallel to neighbors

    std::uint32_t node_count() const {
        return static_cast<std::uint32_t>(offsets.empty() ? 0 : offsets.size() - 1);
    }

    std::uint64_t degree(std::uint32_t v) const { return offsets[v + 1] - offsets[v]; }

    std::span<const std::uint32_t> neighbors_of(std::uint32_t v) const {
        return {neighbors.data() + offsets[v], neighbors.data() + offsets[v + 1]};
    }

    bool weighted() const { return !weights.empty(); }

    /// Two-pass counting-sort construction from an undirected edge list,
    /// O(V + E). Weights, when given, are per undirected edge.
    static CsrGraph from_edges(std::uint32_t node_count,
                               std::span<const std::pair<std::uint32_t, std::uint32_t>> edges,
                               std::span<const double> edge_weights = {});
};

}  // namespace grank
