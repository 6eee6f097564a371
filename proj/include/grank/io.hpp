#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "grank/eval.hpp"
#include "grank/ppr.hpp"
#include "grank/ranking.hpp"
#include "grank/types.hpp"

namespace grank::io {

/// 17 significant digits, enough to round-trip any double exactly.
std::string format_double(double v);

/// Observation file: one "user<TAB>desirable<TAB>undesirable" triple per line,
/// dense ids, LF endings.
void write_observations(const std::string& path, const ObservationSet& obs);
ObservationSet read_observations(const std::string& path);

/// Id map: "raw<TAB>dense" per line, dense ids ascending from 0.
void write_id_map(const std::string& path, std::span<const std::int64_t> raw_by_dense);
std::vector<std::int64_t> read_id_map(const std::string& path);

/// Ratings in dense ids: "user<TAB>item<TAB>rating<TAB>timestamp" per line.
void write_ratings(const std::string& path, std::span<const RatingRecord> records);
std::vector<RatingRecord> read_ratings(const std::string& path);

/// Recommendation lists as "user,rank,item,gr"; rank starts at 1.
void write_recommendations(const std::string& path, std::span<const RecommendationList> lists);

/// Walk vector as "node,value" for debugging.
void write_ppr(const std::string& path, const PprVector& vec);

/// Evaluation reports as "algorithm,dataset,variant,T,K,mean_ndcg,n_users".
void write_report(const std::string& path, std::string_view dataset,
                  std::span<const eval::EvalReport> reports);

struct TTestRow {
    std::uint32_t train_per_user = 0;
    std::uint32_t k = 0;
    std::string algorithm_vs;  // e.g. "grank_vs_bgr"
    double p_value = 1.0;
};

/// Significance results as "T,K,algorithm_vs,p_value".
void write_ttests(const std::string& path, std::span<const TTestRow> rows);

struct ScalabilityRow {
    std::string factor;
    eval::ScalabilityPoint point;
};

/// Timing sweeps as "factor,level,factor_value,mean_seconds,var_seconds".
void write_scalability(const std::string& path, std::span<const ScalabilityRow> rows);

/// FNV-1a over the file bytes; io_error if the file cannot be read.
std::uint64_t fnv1a64_file(const std::string& path);

/// Plain "key=value" lines in the given order.
void write_manifest(const std::string& path,
                    std::span<const std::pair<std::string, std::string>> entries);

}  // namespace grank::io
