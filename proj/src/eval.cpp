#include "grank/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>

#include <boost/math/distributions/students_t.hpp>

#include "grank/ingest.hpp"
#include "grank/parallel.hpp"
#include "grank/ranking.hpp"
#include "grank/rng.hpp"
#include "grank/tpg.hpp"

namespace grank::eval {

std::string_view algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::grank: return "grank";
        case Algorithm::bgr: return "bgr";
        case Algorithm::wbgr: return "wbgr";
        case Algorithm::eigenrank: return "eigenrank";
    }
    throw validation_error("unknown algorithm enum value");
}

Algorithm algorithm_from_name(std::string_view name) {
    if (name == "grank") return Algorithm::grank;
    if (name == "bgr") return Algorithm::bgr;
    if (name == "wbgr") return Algorithm::wbgr;
    if (name == "eigenrank") return Algorithm::eigenrank;
    throw validation_error("unknown algorithm: " + std::string(name));
}

NdcgResult ndcg_at_k(user_id user, std::span<const double> ratings_in_predicted_order,
                     std::uint32_t k) {
    if (k == 0) throw validation_error("ndcg: cutoff must be >= 1");
    const std::size_t depth = std::min<std::size_t>(k, ratings_in_predicted_order.size());

    double dcg = 0.0;
    for (std::size_t pos = 0; pos < depth; ++pos)
        dcg += (std::exp2(ratings_in_predicted_order[pos]) - 1.0) /
               std::log2(static_cast<double>(pos) + 2.0);

    std::vector<double> ideal(ratings_in_predicted_order.begin(), ratings_in_predicted_order.end());
    std::sort(ideal.begin(), ideal.end(), std::greater<>());
    double idcg = 0.0;
    for (std::size_t pos = 0; pos < depth; ++pos)
        idcg += (std::exp2(ideal[pos]) - 1.0) / std::log2(static_cast<double>(pos) + 2.0);

    NdcgResult r;
    r.user = user;
    r.k = k;
    r.value = idcg == 0.0 ? 1.0 : dcg / idcg;
    return r;
}

double EvalReport::mean_ndcg(std::size_t k_index) const {
    if (k_index >= ks.size()) throw validation_error("report: cutoff index out of range");
    if (users.empty()) return 0.0;
    double total = 0.0;
    for (const auto& u : users) total += u.by_k[k_index];
    return total / static_cast<double>(users.size());
}

namespace {

// test-item ids (ascending) with their ratings, one entry per retained user
struct TestProfile {
    user_id user;
    std::vector<item_id> items;
    std::vector<double> ratings;  // parallel to items
};

std::vector<TestProfile> collect_test_profiles(const Dataset& ds) {
    std::vector<std::vector<std::pair<item_id, double>>> buckets(ds.user_count);
    for (const auto& r : ds.test) buckets[r.user].emplace_back(r.item, r.rating);
    std::vector<TestProfile> profiles;
    for (user_id u = 0; u < ds.user_count; ++u) {
        if (buckets[u].empty()) continue;
        std::sort(buckets[u].begin(), buckets[u].end());
        TestProfile p;
        p.user = u;
        p.items.reserve(buckets[u].size());
        p.ratings.reserve(buckets[u].size());
        for (const auto& [item, rating] : buckets[u]) {
            p.items.push_back(item);
            p.ratings.push_back(rating);
        }
        profiles.push_back(std::move(p));
    }
    return profiles;
}

// ratings of the profile's items in the order the algorithm ranked them
std::vector<double> gains_in_order(const TestProfile& profile, std::span<const item_id> order) {
    std::vector<double> gains;
    gains.reserve(order.size());
    for (item_id item : order) {
        const auto it = std::lower_bound(profile.items.begin(), profile.items.end(), item);
        gains.push_back(profile.ratings[static_cast<std::size_t>(it - profile.items.begin())]);
    }
    return gains;
}

std::vector<item_id> rank_by_score(std::span<const item_id> items, std::span<const double> scores,
                                   std::span<const std::uint8_t> defined) {
    std::vector<std::size_t> idx(items.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (defined[a] != defined[b]) return defined[a] != 0;
        if (defined[a] && scores[a] != scores[b]) return scores[a] > scores[b];
        return items[a] < items[b];
    });
    std::vector<item_id> order(items.size());
    for (std::size_t i = 0; i < idx.size(); ++i) order[i] = items[idx[i]];
    return order;
}

}  // namespace

std::vector<EvalReport> run_experiment(std::span<const Dataset> variants, Algorithm algorithm,
                                       std::uint32_t train_per_user, const EvalConfig& cfg) {
    if (variants.empty()) throw validation_error("experiment: no dataset variants");
    if (cfg.ks.empty()) throw validation_error("experiment: no NDCG cutoffs");
    cfg.ppr.validate();

    std::vector<EvalReport> reports;
    reports.reserve(variants.size());

    for (std::size_t v = 0; v < variants.size(); ++v) {
        const Dataset& ds = variants[v];

        // per-variant model state; built once, shared read-only by the workers
        std::optional<Tpg> tpg;
        std::optional<baselines::BipartiteGraph> bipartite;
        std::optional<TransitionModel> walk;
        std::optional<baselines::RatingMatrix> ratings;
        switch (algorithm) {
            case Algorithm::grank:
                tpg.emplace(Tpg::build(ds.user_count, ds.item_count,
                                       ingest::ratings_to_observations(ds.train), cfg.pruned_tpg));
                walk.emplace(tpg->adjacency());
                break;
            case Algorithm::bgr:
            case Algorithm::wbgr:
                bipartite.emplace(baselines::BipartiteGraph::build(
                    ds.user_count, ds.item_count, ds.train, algorithm == Algorithm::wbgr));
                walk.emplace(bipartite->adjacency());
                break;
            case Algorithm::eigenrank:
                ratings.emplace(
                    baselines::RatingMatrix::build(ds.user_count, ds.item_count, ds.train));
                break;
        }

        const std::vector<TestProfile> profiles = collect_test_profiles(ds);

        struct Slot {
            bool cold = false;
            std::vector<double> by_k;
        };
        std::vector<Slot> slots(profiles.size());

        parallel_for(profiles.size(), cfg.threads, [&](std::uint64_t i) {
            const TestProfile& profile = profiles[i];
            std::vector<item_id> order;
            try {
                switch (algorithm) {
                    case Algorithm::grank: {
                        const std::uint32_t node = tpg->user_node(profile.user);
                        if (tpg->degree(node) == 0)
                            throw cold_start_error("no training observations");
                        const PprVector ppr = personalized_pagerank(*walk, node, cfg.ppr);
                        std::vector<GrScore> scored = score_items(*tpg, ppr, profile.items);
                        sort_by_gr(scored);
                        order.reserve(scored.size());
                        for (const auto& s : scored) order.push_back(s.item);
                        break;
                    }
                    case Algorithm::bgr:
                    case Algorithm::wbgr: {
                        const std::uint32_t node = bipartite->user_node(profile.user);
                        if (bipartite->adjacency().degree(node) == 0)
                            throw cold_start_error("no training ratings");
                        const PprVector ppr = personalized_pagerank(*walk, node, cfg.ppr);
                        std::vector<double> scores(profile.items.size());
                        std::vector<std::uint8_t> defined(profile.items.size(), 1);
                        for (std::size_t j = 0; j < profile.items.size(); ++j)
                            scores[j] = ppr.values[bipartite->item_node(profile.items[j])];
                        order = rank_by_score(profile.items, scores, defined);
                        break;
                    }
                    case Algorithm::eigenrank: {
                        if (ratings->row(profile.user).empty())
                            throw cold_start_error("no training ratings");
                        const baselines::EigenScores es =
                            baselines::eigenrank_scores(*ratings, profile.user, cfg.eigenrank);
                        std::vector<double> scores(profile.items.size(), 0.0);
                        std::vector<std::uint8_t> defined(profile.items.size(), 0);
                        for (std::size_t j = 0; j < profile.items.size(); ++j) {
                            const auto it = std::lower_bound(es.chain_items.begin(),
                                                             es.chain_items.end(), profile.items[j]);
                            if (it != es.chain_items.end() && *it == profile.items[j]) {
                                scores[j] = es.stationary[static_cast<std::size_t>(
                                    it - es.chain_items.begin())];
                                defined[j] = 1;
                            }
                        }
                        order = rank_by_score(profile.items, scores, defined);
                        break;
                    }
                }
            } catch (const cold_start_error&) {
                slots[i].cold = true;
                return;
            }
            const std::vector<double> gains = gains_in_order(profile, order);
            slots[i].by_k.reserve(cfg.ks.size());
            for (std::uint32_t k : cfg.ks)
                slots[i].by_k.push_back(ndcg_at_k(profile.user, gains, k).value);
        });

        EvalReport report;
        report.algorithm = algorithm;
        report.variant = static_cast<std::uint32_t>(v);
        report.train_per_user = train_per_user;
        report.ks = cfg.ks;
        for (std::size_t i = 0; i < profiles.size(); ++i) {
            if (slots[i].cold) {
                ++report.cold_start_skipped;
                continue;
            }
            report.users.push_back({profiles[i].user, std::move(slots[i].by_k)});
        }
        reports.push_back(std::move(report));
    }
    return reports;
}

TTestResult paired_ttest(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw validation_error("paired t-test: sample sizes differ");
    if (a.size() < 2) throw validation_error("paired t-test: needs at least 2 pairs");

    const std::size_t n = a.size();
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = (a[i] - b[i]) - mean;
        ss += d * d;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));

    TTestResult r;
    r.n = n;
    r.mean_diff = mean;
    r.stddev_diff = sd;
    if (sd == 0.0) {
        if (mean == 0.0) {
            r.t = 0.0;
            r.p_value = 1.0;
        } else {
            r.t = mean > 0.0 ? std::numeric_limits<double>::infinity()
                             : -std::numeric_limits<double>::infinity();
            r.p_value = 0.0;
            r.degenerate = true;
        }
        return r;
    }
    r.t = mean / (sd / std::sqrt(static_cast<double>(n)));
    const boost::math::students_t dist(static_cast<double>(n - 1));
    r.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t)));
    return r;
}

PairedSamples paired_ndcg(std::span<const EvalReport> a_reports,
                          std::span<const EvalReport> b_reports, std::size_t k_index) {
    if (a_reports.size() != b_reports.size())
        throw validation_error("pairing: reports cover different variant counts");
    PairedSamples out;
    for (std::size_t v = 0; v < a_reports.size(); ++v) {
        const EvalReport& ra = a_reports[v];
        const EvalReport& rb = b_reports[v];
        if (ra.variant != rb.variant)
            throw validation_error("pairing: variant ids do not line up");
        if (k_index >= ra.ks.size() || k_index >= rb.ks.size() ||
            ra.ks[k_index] != rb.ks[k_index])
            throw validation_error("pairing: cutoff lists do not line up");
        std::size_t i = 0, j = 0;
        while (i < ra.users.size() && j < rb.users.size()) {
            if (ra.users[i].user < rb.users[j].user) {
                ++i;
            } else if (rb.users[j].user < ra.users[i].user) {
                ++j;
            } else {
                out.a.push_back(ra.users[i].by_k[k_index]);
                out.b.push_back(rb.users[j].by_k[k_index]);
                ++i;
                ++j;
            }
        }
    }
    return out;
}

std::vector<RatingRecord> subsample_popular_items(std::span<const RatingRecord> records,
                                                  std::uint32_t top_n) {
    if (top_n == 0) throw validation_error("subsample: top_n must be >= 1");
    item_id max_item = 0;
    for (const auto& r : records) max_item = std::max(max_item, r.item);
    std::vector<std::uint64_t> count(records.empty() ? 0 : max_item + 1, 0);
    for (const auto& r : records) ++count[r.item];

    std::vector<item_id> items;
    for (item_id i = 0; i < count.size(); ++i)
        if (count[i] > 0) items.push_back(i);
    std::sort(items.begin(), items.end(), [&](item_id a, item_id b) {
        if (count[a] != count[b]) return count[a] > count[b];
        return a < b;
    });
    if (items.size() > top_n) items.resize(top_n);

    std::vector<bool> keep(count.size(), false);
    for (item_id i : items) keep[i] = true;
    std::vector<RatingRecord> out;
    for (const auto& r : records)
        if (keep[r.item]) out.push_back(r);
    return out;
}

std::string_view scale_factor_name(ScaleFactor f) {
    switch (f) {
        case ScaleFactor::users: return "users";
        case ScaleFactor::items: return "items";
        case ScaleFactor::observations: return "observations";
    }
    throw validation_error("unknown scale factor enum value");
}

ScaleFactor scale_factor_from_name(std::string_view name) {
    if (name == "users") return ScaleFactor::users;
    if (name == "items") return ScaleFactor::items;
    if (name == "observations") return ScaleFactor::observations;
    throw validation_error("unknown scale factor: " + std::string(name));
}

void ScalabilityConfig::validate() const {
    if (levels.empty()) throw validation_error("scalability: no levels");
    for (double l : levels)
        if (!(l > 0.0 && l <= 1.0))
            throw validation_error("scalability: levels must lie in (0,1]");
    if (batch_users == 0) throw validation_error("scalability: batch_users must be >= 1");
    if (repeats == 0) throw validation_error("scalability: repeats must be >= 1");
    if (top_k == 0) throw validation_error("scalability: top_k must be >= 1");
    ppr.validate();
}

namespace {

// keeps ids selected by `kept` (sorted ascending) and renumbers them densely
std::vector<std::uint32_t> dense_remap(std::span<const std::uint32_t> kept, std::uint32_t total) {
    std::vector<std::uint32_t> map(total, std::numeric_limits<std::uint32_t>::max());
    for (std::uint32_t i = 0; i < kept.size(); ++i) map[kept[i]] = i;
    return map;
}

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

std::vector<ScalabilityPoint> scalability_run(std::span<const RatingRecord> train,
                                              std::uint32_t user_count, std::uint32_t item_count,
                                              ScaleFactor factor, const ScalabilityConfig& cfg,
                                              std::vector<std::string>* warnings) {
    cfg.validate();
    if (user_count == 0 || item_count < 2)
        throw validation_error("scalability: needs at least 1 user and 2 items");

    const auto warn = [&](const std::string& msg) {
        if (warnings) warnings->push_back(msg);
    };

    std::vector<ScalabilityPoint> points;
    for (std::size_t li = 0; li < cfg.levels.size(); ++li) {
        const double level = cfg.levels[li];
        KeyedRng rng(cfg.seed, static_cast<std::uint64_t>(factor) + 1, li, 0);

        std::uint32_t m = user_count;
        std::uint32_t n = item_count;
        ObservationSet obs;
        std::uint64_t factor_value = 0;

        switch (factor) {
            case ScaleFactor::users: {
                m = std::max<std::uint32_t>(
                    1, static_cast<std::uint32_t>(std::llround(level * user_count)));
                auto kept = sample_without_replacement(user_count, m, rng);
                std::sort(kept.begin(), kept.end());
                const auto map = dense_remap(kept, user_count);
                std::vector<RatingRecord> sub;
                for (const auto& r : train)
                    if (map[r.user] != std::numeric_limits<std::uint32_t>::max())
                        sub.push_back({map[r.user], r.item, r.rating, r.timestamp});
                obs = ingest::ratings_to_observations(sub);
                factor_value = m;
                break;
            }
            case ScaleFactor::items: {
                n = std::max<std::uint32_t>(
                    2, static_cast<std::uint32_t>(std::llround(level * item_count)));
                auto kept = sample_without_replacement(item_count, n, rng);
                std::sort(kept.begin(), kept.end());
                const auto map = dense_remap(kept, item_count);
                std::vector<RatingRecord> sub;
                for (const auto& r : train)
                    if (map[r.item] != std::numeric_limits<std::uint32_t>::max())
                        sub.push_back({r.user, map[r.item], r.rating, r.timestamp});
                obs = ingest::ratings_to_observations(sub);
                factor_value = n;
                break;
            }
            case ScaleFactor::observations: {
                const ObservationSet full = ingest::ratings_to_observations(train);
                const std::uint32_t s = std::max<std::uint32_t>(
                    1, static_cast<std::uint32_t>(std::llround(level * full.size())));
                auto kept = sample_without_replacement(
                    static_cast<std::uint32_t>(full.size()), s, rng);
                std::vector<Observation> sub;
                sub.reserve(kept.size());
                for (std::uint32_t idx : kept) sub.push_back(full[idx]);
                obs = ObservationSet::from_unsorted(std::move(sub));
                factor_value = obs.size();
                break;
            }
        }

        if (obs.empty()) {
            warn("scalability: level " + std::to_string(level) +
                 " leaves no observations, point skipped");
            continue;
        }

        const Tpg graph = Tpg::build(m, n, obs, cfg.pruned_tpg);
        const TransitionModel model(graph.adjacency());

        std::vector<user_id> batch;
        for (user_id u = 0; u < m && batch.size() < cfg.batch_users; ++u)
            if (graph.degree(graph.user_node(u)) > 0) batch.push_back(u);
        if (batch.empty()) {
            warn("scalability: level " + std::to_string(level) +
                 " leaves no connected users, point skipped");
            continue;
        }

        const auto recommend_once = [&](user_id u) {
            const PprVector ppr = personalized_pagerank(model, graph.user_node(u), cfg.ppr);
            std::vector<GrScore> scored = gr_scores(graph, ppr);
            sort_by_gr(scored);
            if (scored.size() > cfg.top_k) scored.resize(cfg.top_k);
            return scored;
        };
        recommend_once(batch.front());  // warm-up, untimed

        std::vector<double> per_rec(cfg.repeats);
        for (std::uint32_t rep = 0; rep < cfg.repeats; ++rep) {
            const auto start = std::chrono::steady_clock::now();
            for (user_id u : batch) recommend_once(u);
            const std::chrono::duration<double> elapsed =
                std::chrono::steady_clock::now() - start;
            per_rec[rep] = elapsed.count() / static_cast<double>(batch.size());
        }

        ScalabilityPoint point;
        point.level = level;
        point.factor_value = factor_value;
        point.mean_seconds = median_of(per_rec);
        if (cfg.repeats >= 2) {
            double mean = 0.0;
            for (double t : per_rec) mean += t;
            mean /= static_cast<double>(cfg.repeats);
            double ss = 0.0;
            for (double t : per_rec) ss += (t - mean) * (t - mean);
            point.var_seconds = ss / static_cast<double>(cfg.repeats - 1);
        }
        points.push_back(point);
    }
    return points;
}

}  // namespace grank::eval
