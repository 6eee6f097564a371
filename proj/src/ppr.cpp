#include "grank/ppr.hpp"

#include <cmath>

namespace grank {

TransitionModel::TransitionModel(const CsrGraph& graph, TransitionConvention convention)
    : graph_(&graph), convention_(convention) {
    const std::uint32_t n = graph.node_count();
    inv_out_.resize(n);
    for (std::uint32_t v = 0; v < n; ++v) {
        if (graph.weighted()) {
            double total = 0.0;
            const std::size_t lo = graph.offsets[v], hi = graph.offsets[v + 1];
            for (std::size_t e = lo; e < hi; ++e) total += graph.weights[e];
            if (total <= 0.0) {
                inv_out_[v] = 0.0;
                dangling_.push_back(v);
            } else {
                inv_out_[v] = 1.0 / total;
            }
        } else {
            const std::uint64_t d = graph.degree(v);
            if (d == 0) {
                inv_out_[v] = 0.0;
                dangling_.push_back(v);
            } else {
                inv_out_[v] = 1.0 / static_cast<double>(d);
            }
        }
    }
}

void transition_apply(const TransitionModel& model, std::span<const double> x,
                      std::uint32_t restart_node, std::span<double> out) {
    const CsrGraph& g = model.graph();
    const std::uint32_t n = g.node_count();

    std::fill(out.begin(), out.end(), 0.0);

    if (model.convention() == TransitionConvention::literal_row) {
        // out[i] = sum_{j in N(i)} x[j] / d_i, scaled by the row degree; this
        // convention leaks mass on irregular graphs and exists only for tests
        for (std::uint32_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (auto j : g.neighbors_of(i)) acc += x[j];
            out[i] = acc * model.out_share(i);
        }
        return;
    }

    double dangling_mass = 0.0;
    if (!g.weighted()) {
        for (std::uint32_t i = 0; i < n; ++i) {
            const double xi = x[i];
            if (xi == 0.0) continue;
            const double share = xi * model.out_share(i);
            if (share == 0.0) {
                dangling_mass += xi;
                continue;
            }
            for (auto j : g.neighbors_of(i)) out[j] += share;
        }
    } else {
        for (std::uint32_t i = 0; i < n; ++i) {
            const double xi = x[i];
            if (xi == 0.0) continue;
            const double scale = model.out_share(i);
            if (scale == 0.0) {
                dangling_mass += xi;
                continue;
            }
            const std::size_t lo = g.offsets[i], hi = g.offsets[i + 1];
            for (std::size_t e = lo; e < hi; ++e)
                out[g.neighbors[e]] += xi * scale * g.weights[e];
        }
    }
    out[restart_node] += dangling_mass;
}

std::vector<double> transition_apply(const TransitionModel& model, const std::vector<double>& x,
                                     std::uint32_t restart_node) {
    std::vector<double> out(x.size());
    transition_apply(model, x, restart_node, out);
    return out;
}

namespace {

PprVector iterate(const TransitionModel& model, std::uint32_t target, const PprConfig& cfg,
                  std::vector<double> x, PprTrace* trace) {
    const std::uint32_t n = model.graph().node_count();
    const double alpha = cfg.alpha;
    const double restart = 1.0 - alpha;

    PprVector result;
    std::vector<double> y(n);
    for (std::uint32_t t = 1; t <= cfg.max_iterations; ++t) {
        transition_apply(model, x, target, y);
        double diff = 0.0;
        for (std::uint32_t v = 0; v < n; ++v) {
            double yv = alpha * y[v];
            if (v == target) yv += restart;
            diff += std::abs(yv - x[v]);
            y[v] = yv;
        }
        x.swap(y);
        result.iterations_used = t;
        if (trace) {
            double sum = 0.0;
            for (double v : x) sum += v;
            trace->iteration_sums.push_back(sum);
        }
        if (diff < cfg.tolerance) {
            result.converged = true;
            break;
        }
    }
    result.values = std::move(x);
    return result;
}

}  // namespace

PprVector personalized_pagerank(const TransitionModel& model, std::uint32_t target,
                                const PprConfig& cfg, PprTrace* trace) {
    cfg.validate();
    const std::uint32_t n = model.graph().node_count();
    if (target >= n) throw validation_error("ppr: target node out of range");
    std::vector<double> x(n, 0.0);
    x[target] = 1.0;  // PV
    return iterate(model, target, cfg, std::move(x), trace);
}

PprVector personalized_pagerank_from(const TransitionModel& model, std::uint32_t target,
                                     const PprConfig& cfg, std::span<const double> initial,
                                     PprTrace* trace) {
    cfg.validate();
    const std::uint32_t n = model.graph().node_count();
    if (target >= n) throw validation_error("ppr: target node out of range");
    if (initial.size() != n) throw validation_error("ppr: initial vector size mismatch");
    double sum = 0.0;
    for (double v : initial) {
        if (v < 0.0) throw validation_error("ppr: initial vector must be non-negative");
        sum += v;
    }
    if (sum <= 0.0) throw validation_error("ppr: initial vector must have positive mass");
    std::vector<double> x(initial.begin(), initial.end());
    for (double& v : x) v /= sum;
    return iterate(model, target, cfg, std::move(x), trace);
}

}  // namespace grank
