#pragma once

#include <cstdint>
#include <vector>

#include "grank/csr.hpp"

namespace grank::testing {

/// Exact restart-walk solution on a dense weight matrix, found by Gaussian
/// elimination instead of iteration. weights[i][j] is the weight of edge
/// (i, j); pass a symmetric matrix for an undirected graph. Mass leaves node j
/// proportionally to weight; degree-0 columns send everything back to the
/// target.
std::vector<double> dense_ppr(const std::vector<std::vector<double>>& weights,
                              std::uint32_t target, double alpha);

std::vector<std::vector<double>> to_dense(const CsrGraph& graph);

}  // namespace grank::testing
