#include "grank/synth.hpp"

#include <algorithm>
#include <cmath>

#include "grank/rng.hpp"

namespace grank::synth {

void SynthConfig::validate() const {
    if (user_count == 0) throw validation_error("synth: user_count must be >= 1");
    if (item_count < 2) throw validation_error("synth: item_count must be >= 2");
    if (latent_dim == 0) throw validation_error("synth: latent_dim must be >= 1");
    if (mean_ratings_per_user < 1.0)
        throw validation_error("synth: mean_ratings_per_user must be >= 1");
    if (min_ratings_per_user == 0 || min_ratings_per_user > max_ratings_per_user)
        throw validation_error("synth: rating count bounds are inconsistent");
    if (signal_gain < 0.0 || rating_noise < 0.0)
        throw validation_error("synth: gain and noise must be non-negative");
}

namespace {

// rng key tags, one stream family per concern
constexpr std::uint64_t kItemFactors = 1;
constexpr std::uint64_t kUserFactors = 2;
constexpr std::uint64_t kActivity = 3;
constexpr std::uint64_t kSelection = 4;
constexpr std::uint64_t kRating = 5;

std::vector<double> draw_factors(std::uint64_t seed, std::uint64_t tag, std::uint32_t count,
                                 std::uint32_t dim) {
    std::vector<double> f(static_cast<std::size_t>(count) * dim);
    const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
    for (std::uint32_t e = 0; e < count; ++e) {
        KeyedRng rng(seed, tag, e, 0);
        for (std::uint32_t d = 0; d < dim; ++d)
            f[static_cast<std::size_t>(e) * dim + d] = rng.normal() * scale;
    }
    return f;
}

}  // namespace

std::vector<RatingRecord> synthesize_ratings(const SynthConfig& cfg) {
    cfg.validate();
    const std::uint32_t m = cfg.user_count;
    const std::uint32_t n = cfg.item_count;
    const std::uint32_t dim = cfg.latent_dim;

    const std::vector<double> item_f = draw_factors(cfg.seed, kItemFactors, n, dim);
    const std::vector<double> user_f = draw_factors(cfg.seed, kUserFactors, m, dim);

    std::vector<double> item_bias(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        KeyedRng rng(cfg.seed, kItemFactors, i, 1);
        item_bias[i] = 0.4 * rng.normal();
    }

    // heavier weight on small ids gives the long-tailed item popularity
    std::vector<double> popularity(n);
    for (std::uint32_t i = 0; i < n; ++i)
        popularity[i] = 1.0 / std::pow(static_cast<double>(i) + 25.0, 0.85);

    // lognormal activity around the configured mean
    constexpr double kActivitySigma = 0.55;
    const double activity_base =
        cfg.mean_ratings_per_user / std::exp(0.5 * kActivitySigma * kActivitySigma);

    std::vector<RatingRecord> records;
    records.reserve(static_cast<std::size_t>(m) * static_cast<std::size_t>(
                        std::min<double>(cfg.mean_ratings_per_user, n)));

    std::vector<double> keys(n);
    std::vector<std::uint32_t> order(n);
    for (user_id u = 0; u < m; ++u) {
        KeyedRng activity_rng(cfg.seed, kActivity, u, 0);
        const double raw = activity_base * std::exp(kActivitySigma * activity_rng.normal());
        const std::uint32_t count = std::min(
            n, std::clamp(static_cast<std::uint32_t>(std::llround(raw)),
                          cfg.min_ratings_per_user, cfg.max_ratings_per_user));

        // weighted sample without replacement: top `count` items by u^(1/w),
        // taken in log form as log(u)/w
        KeyedRng select_rng(cfg.seed, kSelection, u, 0);
        for (std::uint32_t i = 0; i < n; ++i) {
            const double unit = std::max(select_rng.unit(), 1e-300);
            keys[i] = std::log(unit) / popularity[i];
            order[i] = i;
        }
        std::nth_element(order.begin(), order.begin() + count, order.end(),
                         [&](std::uint32_t a, std::uint32_t b) { return keys[a] > keys[b]; });
        std::sort(order.begin(), order.begin() + count);

        KeyedRng rating_rng(cfg.seed, kRating, u, 0);
        const double user_bias = 0.3 * rating_rng.normal();
        for (std::uint32_t s = 0; s < count; ++s) {
            const item_id i = order[s];
            double affinity = 0.0;
            for (std::uint32_t d = 0; d < dim; ++d)
                affinity += user_f[static_cast<std::size_t>(u) * dim + d] *
                            item_f[static_cast<std::size_t>(i) * dim + d];
            const double score = 3.5 + user_bias + item_bias[i] + cfg.signal_gain * affinity +
                                 cfg.rating_noise * rating_rng.normal();
            const double rating =
                std::clamp(static_cast<double>(std::llround(score)), 1.0, 5.0);
            const std::int64_t timestamp =
                880000000 + static_cast<std::int64_t>(
                                KeyedRng::mix(cfg.seed ^ (static_cast<std::uint64_t>(u) << 32 | i)) %
                                10000000);
            records.push_back({u, i, rating, timestamp});
        }
    }
    return records;
}

}  // namespace grank::synth
