#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "grank/csr.hpp"
#include "grank/types.hpp"

namespace grank {

struct PprConfig {
    double alpha = 0.85;
    double tolerance = 1e-8;  // L1 change between successive iterations
    std::uint32_t max_iterations = 100;

    void validate() const {
        if (!(alpha > 0.0 && alpha < 1.0)) throw validation_error("ppr: alpha must be in (0,1)");
        if (tolerance < 0.0) throw validation_error("ppr: tolerance must be >= 0");
        if (max_iterations < 1) throw validation_error("ppr: max_iterations must be >= 1");
    }
};

struct PprVector {
    std::vector<double> values;  // one per global node, sums to 1
    std::uint32_t iterations_used = 0;
    bool converged = false;
};

/// Mass-conserving walk operator: each node forwards its mass to neighbors in
/// equal shares (or proportionally to edge weight), i.e. the column-stochastic
/// transpose of the literal degree-reciprocal matrix. The literal row-oriented
/// reading is kept behind `literal_row` for comparison tests only; it does not
/// conserve probability.
enum class TransitionConvention : std::uint8_t { mass_conserving, literal_row };

class TransitionModel {
public:
    explicit TransitionModel(const CsrGraph& graph,
                             TransitionConvention convention = TransitionConvention::mass_conserving);

    const CsrGraph& graph() const { return *graph_; }
    TransitionConvention convention() const { return convention_; }
    const std::vector<std::uint32_t>& dangling_nodes() const { return dangling_; }
    double out_share(std::uint32_t node) const { return inv_out_[node]; }

private:
    const CsrGraph* graph_;
    std::vector<double> inv_out_;  // 1/degree, or 1/sum(weights) when weighted
    std::vector<std::uint32_t> dangling_;
    TransitionConvention convention_;
};

/// One application of the transition operator. Mass sitting on degree-0 nodes
/// is redirected to `restart_node`, matching the walk's restart semantics.
void transition_apply(const TransitionModel& model, std::span<const double> x,
                      std::uint32_t restart_node, std::span<double> out);
std::vector<double> transition_apply(const TransitionModel& model, const std::vector<double>& x,
                                     std::uint32_t restart_node);

struct PprTrace {
    std::vector<double> iteration_sums;  // total mass after every iteration
};

/// Damped power iteration restarted at `target`, from the deterministic start
/// x0 = PV. Converged when the L1 change drops below cfg.tolerance; otherwise
/// returns with converged=false after max_iterations.
PprVector personalized_pagerank(const TransitionModel& model, std::uint32_t target,
                                const PprConfig& cfg, PprTrace* trace = nullptr);

/// Same iteration from a caller-supplied start (normalized internally). The
/// fixed point is unique, so any start converges to the same vector; used to
/// check independence from the randomized initialization.
PprVector personalized_pagerank_from(const TransitionModel& model, std::uint32_t target,
                                     const PprConfig& cfg, std::span<const double> initial,
                                     PprTrace* trace = nullptr);

}  // namespace grank
