#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "grank/baselines.hpp"
#include "grank/ppr.hpp"
#include "grank/types.hpp"

namespace grank::eval {

enum class Algorithm : std::uint8_t { grank, bgr, wbgr, eigenrank };

std::string_view algorithm_name(Algorithm a);
Algorithm algorithm_from_name(std::string_view name);

struct NdcgResult {
    user_id user = 0;
    std::uint32_t k = 0;
    double value = 0.0;  // in [0,1]
};

/// Discounted gain (2^r - 1)/log2(pos+1) over the first K positions of the
/// predicted order, normalized by the same sum over the rating-descending
/// order. An all-zero ideal sum means every ordering is ideal, so 1.
NdcgResult ndcg_at_k(user_id user, std::span<const double> ratings_in_predicted_order,
                     std::uint32_t k);

struct EvalConfig {
    std::vector<std::uint32_t> ks{1, 3, 5, 10};
    PprConfig ppr{};
    baselines::EigenRankConfig eigenrank{};
    bool pruned_tpg = false;
    std::uint32_t threads = 1;
};

struct UserNdcg {
    user_id user = 0;
    std::vector<double> by_k;  // parallel to the report's ks
};

struct EvalReport {
    Algorithm algorithm = Algorithm::grank;
    std::uint32_t variant = 0;
    std::uint32_t train_per_user = 0;
    std::vector<std::uint32_t> ks;
    std::vector<UserNdcg> users;  // ascending user id, cold starts omitted
    std::uint32_t cold_start_skipped = 0;

    double mean_ndcg(std::size_t k_index) const;
};

/// For every variant: rank each retained user's test items with the algorithm's
/// scores and compute NDCG at every cutoff. Cold-start users are skipped and
/// counted. Per-user work fans out across cfg.threads; results are identical
/// for any thread count.
std::vector<EvalReport> run_experiment(std::span<const Dataset> variants, Algorithm algorithm,
                                       std::uint32_t train_per_user, const EvalConfig& cfg);

struct TTestResult {
    Algorithm a = Algorithm::grank;
    Algorithm b = Algorithm::grank;
    double mean_diff = 0.0;
    double stddev_diff = 0.0;  // sample standard deviation, N-1 denominator
    std::uint64_t n = 0;
    double t = 0.0;
    double p_value = 1.0;  // two-tailed
    bool degenerate = false;  // zero variance in the differences
};

/// Paired t-test on elementwise differences a[i]-b[i]. Zero variance with zero
/// mean gives t=0, p=1; zero variance with nonzero mean gives p=0 and the
/// degenerate flag.
TTestResult paired_ttest(std::span<const double> a, std::span<const double> b);

struct PairedSamples {
    std::vector<double> a;
    std::vector<double> b;
};

/// Per-user NDCG values at ks[k_index], paired per (variant, user) and pooled
/// over all variants. Only users scored by both algorithms enter.
PairedSamples paired_ndcg(std::span<const EvalReport> a_reports,
                          std::span<const EvalReport> b_reports, std::size_t k_index);

/// Keeps only ratings of the top_n most-rated items (ties favor the smaller
/// item id). Item ids are unchanged, so the universe declaration stays valid.
std::vector<RatingRecord> subsample_popular_items(std::span<const RatingRecord> records,
                                                  std::uint32_t top_n);

enum class ScaleFactor : std::uint8_t { users, items, observations };

std::string_view scale_factor_name(ScaleFactor f);
ScaleFactor scale_factor_from_name(std::string_view name);

struct ScalabilityPoint {
    double level = 0.0;              // fraction of the factor kept
    std::uint64_t factor_value = 0;  // resulting M, N, or observation count
    double mean_seconds = 0.0;       // per recommendation, median batch
    double var_seconds = 0.0;        // across the repeated batches
};

struct ScalabilityConfig {
    std::vector<double> levels{0.2, 0.4, 0.6, 0.8, 1.0};
    std::uint32_t batch_users = 20;  // recommendations per timed batch
    std::uint32_t repeats = 5;
    std::uint32_t top_k = 10;
    PprConfig ppr{};
    bool pruned_tpg = false;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Times recommendation batches while one graph dimension is subsampled and
/// the others stay fixed. Varying users or items shrinks that universe (ids
/// are remapped); varying observations thins the preference assignments on the
/// full universe. Timing always runs on one worker. Levels whose subsample
/// leaves nothing to recommend are skipped with a warning.
std::vector<ScalabilityPoint> scalability_run(std::span<const RatingRecord> train,
                                              std::uint32_t user_count, std::uint32_t item_count,
                                              ScaleFactor factor, const ScalabilityConfig& cfg,
                                              std::vector<std::string>* warnings = nullptr);

}  // namespace grank::eval
