#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "grank/eval.hpp"
#include "grank/ingest.hpp"
#include "grank/io.hpp"
#include "grank/ranking.hpp"
#include "grank/synth.hpp"
#include "grank/tpg.hpp"
#include "grank/types.hpp"

namespace fs = std::filesystem;
using namespace grank;

namespace {

constexpr const char* kToolVersion = "grank 1.0.0";

std::uint32_t effective_threads(std::uint32_t requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

using Manifest = std::vector<std::pair<std::string, std::string>>;

void add_checksum(Manifest& manifest, const std::string& dir, const std::string& name) {
    manifest.emplace_back("checksum." + name, hex64(io::fnv1a64_file(join_path(dir, name))));
}

void emit_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

struct CommonOpts {
    std::uint64_t seed = 0;
    std::uint32_t threads = 0;  // 0 = all available cores
};

struct IngestOpts {
    std::string input;
    std::string format = "ml-100k";
    std::string out_dir;
};

void run_ingest(const CommonOpts& common, const IngestOpts& opt) {
    const ingest::RatingData data =
        ingest::parse_ratings(opt.input, ingest::format_from_name(opt.format));
    const ObservationSet obs = ingest::ratings_to_observations(data.records);

    fs::create_directories(opt.out_dir);
    io::write_observations(join_path(opt.out_dir, "observations.tsv"), obs);
    io::write_id_map(join_path(opt.out_dir, "users.tsv"), data.users.raw_ids());
    io::write_id_map(join_path(opt.out_dir, "items.tsv"), data.items.raw_ids());

    Manifest manifest;
    manifest.emplace_back("command", "ingest");
    manifest.emplace_back("tool", kToolVersion);
    manifest.emplace_back("input", opt.input);
    manifest.emplace_back("format", opt.format);
    manifest.emplace_back("seed", std::to_string(common.seed));
    manifest.emplace_back("ratings", std::to_string(data.records.size()));
    manifest.emplace_back("users", std::to_string(data.users.size()));
    manifest.emplace_back("items", std::to_string(data.items.size()));
    manifest.emplace_back("observations", std::to_string(obs.size()));
    add_checksum(manifest, opt.out_dir, "observations.tsv");
    add_checksum(manifest, opt.out_dir, "users.tsv");
    add_checksum(manifest, opt.out_dir, "items.tsv");
    io::write_manifest(join_path(opt.out_dir, "manifest.txt"), manifest);

    std::cout << "ingested " << data.records.size() << " ratings (" << data.users.size()
              << " users, " << data.items.size() << " items) -> " << obs.size()
              << " observations\n";
}

struct SplitOpts {
    std::string input;
    std::string format = "ml-100k";
    std::uint32_t train_per_user = 50;
    std::uint32_t min_test = 10;
    std::uint32_t variants = 5;
    std::string out_dir;
};

void run_split(const CommonOpts& common, const SplitOpts& opt) {
    const ingest::RatingData data =
        ingest::parse_ratings(opt.input, ingest::format_from_name(opt.format));
    const SplitSpec spec{opt.train_per_user, opt.min_test, opt.variants, common.seed};
    const std::vector<Dataset> datasets =
        ingest::split(data.records, spec, data.users.size(), data.items.size());

    fs::create_directories(opt.out_dir);
    io::write_id_map(join_path(opt.out_dir, "users.tsv"), data.users.raw_ids());
    io::write_id_map(join_path(opt.out_dir, "items.tsv"), data.items.raw_ids());

    Manifest manifest;
    manifest.emplace_back("command", "split");
    manifest.emplace_back("tool", kToolVersion);
    manifest.emplace_back("input", opt.input);
    manifest.emplace_back("format", opt.format);
    manifest.emplace_back("seed", std::to_string(common.seed));
    manifest.emplace_back("train_per_user", std::to_string(opt.train_per_user));
    manifest.emplace_back("min_test", std::to_string(opt.min_test));
    manifest.emplace_back("variants", std::to_string(opt.variants));

    std::uint32_t retained = 0;
    {
        std::vector<bool> seen(datasets[0].user_count, false);
        for (const auto& r : datasets[0].train) seen[r.user] = true;
        for (bool s : seen) retained += s ? 1 : 0;
    }
    manifest.emplace_back("retained_users", std::to_string(retained));

    for (std::size_t v = 0; v < datasets.size(); ++v) {
        const std::string train_name = "train_" + std::to_string(v) + ".tsv";
        const std::string test_name = "test_" + std::to_string(v) + ".tsv";
        io::write_ratings(join_path(opt.out_dir, train_name), datasets[v].train);
        io::write_ratings(join_path(opt.out_dir, test_name), datasets[v].test);
        add_checksum(manifest, opt.out_dir, train_name);
        add_checksum(manifest, opt.out_dir, test_name);
    }
    add_checksum(manifest, opt.out_dir, "users.tsv");
    add_checksum(manifest, opt.out_dir, "items.tsv");
    io::write_manifest(join_path(opt.out_dir, "manifest.txt"), manifest);

    std::cout << "split " << data.records.size() << " ratings into " << datasets.size()
              << " variants, " << retained << " of " << data.users.size()
              << " users retained at T=" << opt.train_per_user << "\n";
}

struct BuildGraphOpts {
    std::string observations;
    std::uint32_t users = 0;
    std::uint32_t items = 0;
    bool pruned = false;
    bool dump_text = false;
    std::string out_dir;
};

void run_build_graph(const CommonOpts& common, const BuildGraphOpts& opt) {
    const ObservationSet obs = io::read_observations(opt.observations);
    const Tpg graph = Tpg::build(opt.users, opt.items, obs, opt.pruned);

    fs::create_directories(opt.out_dir);
    graph.save(join_path(opt.out_dir, "graph.tpg"));
    if (opt.dump_text) {
        std::ofstream out(join_path(opt.out_dir, "graph.txt"), std::ios::binary);
        if (!out) throw io_error("cannot open " + join_path(opt.out_dir, "graph.txt"));
        graph.dump_text(out);
    }

    Manifest manifest;
    manifest.emplace_back("command", "build-graph");
    manifest.emplace_back("tool", kToolVersion);
    manifest.emplace_back("input", opt.observations);
    manifest.emplace_back("seed", std::to_string(common.seed));
    manifest.emplace_back("users", std::to_string(graph.user_count()));
    manifest.emplace_back("items", std::to_string(graph.item_count()));
    manifest.emplace_back("pruned", opt.pruned ? "1" : "0");
    manifest.emplace_back("nodes", std::to_string(graph.node_count()));
    manifest.emplace_back("edges", std::to_string(graph.edge_count()));
    add_checksum(manifest, opt.out_dir, "graph.tpg");
    if (opt.dump_text) add_checksum(manifest, opt.out_dir, "graph.txt");
    io::write_manifest(join_path(opt.out_dir, "manifest.txt"), manifest);

    std::cout << "built graph: " << graph.node_count() << " nodes, " << graph.edge_count()
              << " edges" << (opt.pruned ? " (pruned)" : "") << "\n";
}

struct RecommendOpts {
    std::string graph;
    std::uint32_t user = 0;
    std::uint32_t k = 10;
    std::string train;  // optional ratings file for profile exclusion
    bool export_ppr = false;
    PprConfig ppr{};
    std::string out_dir;
};

void run_recommend(const CommonOpts& common, const RecommendOpts& opt) {
    const Tpg graph = Tpg::load(opt.graph);

    std::vector<item_id> profile;
    if (!opt.train.empty()) {
        for (const auto& r : io::read_ratings(opt.train))
            if (r.user == opt.user) profile.push_back(r.item);
    }

    fs::create_directories(opt.out_dir);
    if (opt.export_ppr) {
        const TransitionModel model(graph.adjacency());
        const PprVector ppr =
            personalized_pagerank(model, graph.user_node(opt.user), opt.ppr);
        io::write_ppr(join_path(opt.out_dir, "ppr.csv"), ppr);
    }
    const RecommendationList rec = recommend(graph, opt.user, opt.k, opt.ppr, profile);
    io::write_recommendations(join_path(opt.out_dir, "recommendations.csv"), {&rec, 1});

    Manifest manifest;
    manifest.emplace_back("command", "recommend");
    manifest.emplace_back("tool", kToolVersion);
    manifest.emplace_back("input", opt.graph);
    manifest.emplace_back("seed", std::to_string(common.seed));
    manifest.emplace_back("user", std::to_string(opt.user));
    manifest.emplace_back("k", std::to_string(opt.k));
    manifest.emplace_back("alpha", io::format_double(opt.ppr.alpha));
    manifest.emplace_back("tolerance", io::format_double(opt.ppr.tolerance));
    manifest.emplace_back("max_iterations", std::to_string(opt.ppr.max_iterations));
    add_checksum(manifest, opt.out_dir, "recommendations.csv");
    if (opt.export_ppr) add_checksum(manifest, opt.out_dir, "ppr.csv");
    io::write_manifest(join_path(opt.out_dir, "manifest.txt"), manifest);

    std::cout << "wrote top-" << rec.entries.size() << " recommendations for user " << opt.user
              << "\n";
}

struct EvaluateOpts {
    std::string input;
    std::string format = "ml-100k";
    std::string dataset_name;  // defaults to the input file stem
    std::vector<std::uint32_t> train_sizes{50};
    std::uint32_t min_test = 10;
    std::uint32_t variants = 5;
    std::vector<std::string> algorithms{"grank", "bgr", "wbgr"};
    std::vector<std::uint32_t> ks{1, 3, 5, 10};
    std::uint32_t subsample_items = 0;
    bool pruned = false;
    PprConfig ppr{};
    baselines::EigenRankConfig eigenrank{};
    std::string out_dir;
};

void run_evaluate(const CommonOpts& common, const EvaluateOpts& opt) {
    const ingest::RatingData data =
        ingest::parse_ratings(opt.input, ingest::format_from_name(opt.format));
    std::vector<RatingRecord> records = data.records;
    if (opt.subsample_items > 0)
        records = eval::subsample_popular_items(records, opt.subsample_items);

    std::vector<eval::Algorithm> algorithms;
    for (const auto& name : opt.algorithms)
        algorithms.push_back(eval::algorithm_from_name(name));

    eval::EvalConfig cfg;
    cfg.ks = opt.ks;
    cfg.ppr = opt.ppr;
    cfg.eigenrank = opt.eigenrank;
    cfg.pruned_tpg = opt.pruned;
    cfg.threads = effective_threads(common.threads);

    const std::string dataset =
        opt.dataset_name.empty() ? fs::path(opt.input).stem().string() : opt.dataset_name;

    std::vector<eval::EvalReport> all_reports;
    std::vector<io::TTestRow> ttest_rows;
    std::vector<std::string> warnings;
    std::uint32_t cold_starts = 0;

    for (std::uint32_t t : opt.train_sizes) {
        const SplitSpec spec{t, opt.min_test, opt.variants, common.seed};
        const std::vector<Dataset> datasets =
            ingest::split(records, spec, data.users.size(), data.items.size());

        std::vector<std::vector<eval::EvalReport>> by_algorithm;
        by_algorithm.reserve(algorithms.size());
        for (eval::Algorithm alg : algorithms) {
            by_algorithm.push_back(eval::run_experiment(datasets, alg, t, cfg));
            for (const auto& report : by_algorithm.back()) {
                cold_starts += report.cold_start_skipped;
                all_reports.push_back(report);
            }
            double mean10 = 0.0;
            std::uint64_t users10 = 0;
            for (const auto& report : by_algorithm.back()) {
                for (const auto& u : report.users) mean10 += u.by_k.back();
                users10 += report.users.size();
            }
            std::cout << "T=" << t << " " << eval::algorithm_name(alg) << ": mean NDCG@"
                      << cfg.ks.back() << " = "
                      << (users10 == 0 ? 0.0 : mean10 / static_cast<double>(users10)) << " over "
                      << users10 << " user evaluations\n";
        }

        for (std::size_t i = 0; i < algorithms.size(); ++i) {
            for (std::size_t j = i + 1; j < algorithms.size(); ++j) {
                for (std::size_t ki = 0; ki < cfg.ks.size(); ++ki) {
                    const eval::PairedSamples samples =
                        eval::paired_ndcg(by_algorithm[i], by_algorithm[j], ki);
                    const std::string label =
                        std::string(eval::algorithm_name(algorithms[i])) + "_vs_" +
                        std::string(eval::algorithm_name(algorithms[j]));
                    if (samples.a.size() < 2) {
                        warnings.push_back("t-test " + label + " at T=" + std::to_string(t) +
                                           " K=" + std::to_string(cfg.ks[ki]) +
                                           " skipped: fewer than 2 paired users");
                        continue;
                    }
                    eval::TTestResult tt = eval::paired_ttest(samples.a, samples.b);
                    ttest_rows.push_back({t, cfg.ks[ki], label, tt.p_value});
                }
            }
        }
    }

    fs::create_directories(opt.out_dir);
    io::write_report(join_path(opt.out_dir, "report.csv"), dataset, all_reports);
    io::write_ttests(join_path(opt.out_dir, "ttests.csv"), ttest_rows);

    Manifest manifest;
    manifest.emplace_back("command", "evaluate");
    manifest.emplace_back("tool", kToolVersion);
    manifest.emplace_back("input", opt.input);
    manifest.emplace_back("format", opt.format);
    manifest.emplace_back("dataset", dataset);
    manifest.emplace_back("seed", std::to_string(common.seed));
    manifest.emplace_back("variants", std::to_string(opt.variants));
    manifest.emplace_back("min_test", std::to_string(opt.min_test));
    manifest.emplace_back("pruned", opt.pruned ? "1" : "0");
    manifest.emplace_back("subsample_items", std::to_string(opt.subsample_items));
    manifest.emplace_back("cold_start_skips", std::to_string(cold_starts));
    add_checksum(manifest, opt.out_dir, "report.csv");
    add_checksum(manifest, opt.out_dir, "ttests.csv");
    io::write_manifest(join_path(opt.out_dir, "manifest.txt"), manifest);
    emit_warnings(warnings);

    std::cout << "wrote " << all_reports.size() << " reports and " << ttest_rows.size()
              << " t-test rows\n";
}

struct BenchOpts {
    std::string input;
    std::string format = "ml-100k";
    std::vector<std::string> factors{"users", "items", "observations"};
    std::vector<double> levels{0.2, 0.4, 0.6, 0.8, 1.0};
    std::uint32_t batch_users = 20;
    std::uint32_t repeats = 5;
    std::uint32_t top_k = 10;
    bool pruned = false;
    PprConfig ppr{};
    std::string out_dir;
};

void run_bench(const CommonOpts& common, const BenchOpts& opt) {
    const ingest::RatingData data =
        ingest::parse_ratings(opt.input, ingest::format_from_name(opt.format));

    eval::ScalabilityConfig cfg;
    cfg.levels = opt.levels;
    cfg.batch_users = opt.batch_users;
    cfg.repeats = opt.repeats;
    cfg.top_k = opt.top_k;
    cfg.ppr = opt.ppr;
    cfg.pruned_tpg = opt.pruned;
    cfg.seed = common.seed;

    std::vector<io::ScalabilityRow> rows;
    std::vector<std::string> warnings;
    for (const auto& name : opt.factors) {
        const eval::ScaleFactor factor = eval::scale_factor_from_name(name);
        const auto points = eval::scalability_run(data.records, data.users.size(),
                                                  data.items.size(), factor, cfg, &warnings);
        for (const auto& p : points) {
            rows.push_back({name, p});
            std::cout << name << " level " << p.level << " (" << p.factor_value << "): "
                      << p.mean_seconds << " s per recommendation\n";
        }
    }

    fs::create_directories(opt.out_dir);
    io::write_scalability(join_path(opt.out_dir, "scalability.csv"), rows);

    Manifest manifest;
    manifest.emplace_back("command", "bench");
    manifest.emplace_back("tool", kToolVersion);
    manifest.emplace_back("input", opt.input);
    manifest.emplace_back("format", opt.format);
    manifest.emplace_back("seed", std::to_string(common.seed));
    manifest.emplace_back("batch_users", std::to_string(opt.batch_users));
    manifest.emplace_back("repeats", std::to_string(opt.repeats));
    manifest.emplace_back("pruned", opt.pruned ? "1" : "0");
    add_checksum(manifest, opt.out_dir, "scalability.csv");
    io::write_manifest(join_path(opt.out_dir, "manifest.txt"), manifest);
    emit_warnings(warnings);

    std::cout << "wrote " << rows.size() << " scalability points\n";
}

struct SynthOpts {
    synth::SynthConfig cfg{};
    std::string out_dir;
};

void run_synth(const CommonOpts& common, const SynthOpts& opt) {
    synth::SynthConfig cfg = opt.cfg;
    cfg.seed = common.seed != 0 ? common.seed : cfg.seed;
    const std::vector<RatingRecord> records = synth::synthesize_ratings(cfg);

    fs::create_directories(opt.out_dir);
    const std::string path = join_path(opt.out_dir, "ratings.tsv");
    {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw io_error("cannot open " + path + " for writing");
        for (const auto& r : records)
            out << (r.user + 1) << '\t' << (r.item + 1) << '\t'
                << static_cast<long long>(std::llround(r.rating)) << '\t' << r.timestamp << '\n';
        out.flush();
        if (!out) throw io_error("write to " + path + " failed");
    }

    Manifest manifest;
    manifest.emplace_back("command", "synth");
    manifest.emplace_back("tool", kToolVersion);
    manifest.emplace_back("seed", std::to_string(cfg.seed));
    manifest.emplace_back("users", std::to_string(cfg.user_count));
    manifest.emplace_back("items", std::to_string(cfg.item_count));
    manifest.emplace_back("ratings", std::to_string(records.size()));
    add_checksum(manifest, opt.out_dir, "ratings.tsv");
    io::write_manifest(join_path(opt.out_dir, "manifest.txt"), manifest);

    std::cout << "synthesized " << records.size() << " ratings for " << cfg.user_count
              << " users x " << cfg.item_count << " items\n";
}

void add_ppr_options(CLI::App* sub, PprConfig& cfg) {
    sub->add_option("--alpha", cfg.alpha, "walk damping factor in (0,1)");
    sub->add_option("--tolerance", cfg.tolerance, "L1 convergence threshold");
    sub->add_option("--max-iterations,--max_iterations", cfg.max_iterations,
                    "iteration cap for the power method");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pairwise-preference graph recommender"};
    app.set_config("--config", "", "key=value config file; CLI flags take precedence");

    CommonOpts common;
    app.add_option("--seed", common.seed, "rng seed for every derived stream");
    app.add_option("--threads", common.threads, "worker cap, 0 = all available cores");

    IngestOpts ingest_opt;
    SplitOpts split_opt;
    BuildGraphOpts build_opt;
    RecommendOpts rec_opt;
    EvaluateOpts eval_opt;
    BenchOpts bench_opt;
    SynthOpts synth_opt;

    CLI::App* cmd_ingest = app.add_subcommand("ingest", "ratings file -> observation + id maps");
    cmd_ingest->add_option("--input", ingest_opt.input, "ratings file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_ingest->add_option("--format", ingest_opt.format, "ml-100k (tab) or ml-1m (::)");
    cmd_ingest->add_option("--out-dir", ingest_opt.out_dir, "output directory")->required();

    CLI::App* cmd_split = app.add_subcommand("split", "per-user train/test protocol split");
    cmd_split->add_option("--input", split_opt.input, "ratings file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_split->add_option("--format", split_opt.format, "ml-100k (tab) or ml-1m (::)");
    cmd_split->add_option("-T,--train-size", split_opt.train_per_user,
                          "training ratings per retained user");
    cmd_split->add_option("--min-test", split_opt.min_test, "minimum test ratings per user");
    cmd_split->add_option("--variants", split_opt.variants, "number of split variants");
    cmd_split->add_option("--out-dir", split_opt.out_dir, "output directory")->required();

    CLI::App* cmd_build = app.add_subcommand("build-graph", "observations -> graph snapshot");
    cmd_build->add_option("--observations", build_opt.observations, "observation file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_build->add_option("--users", build_opt.users, "user universe size")->required();
    cmd_build->add_option("--items", build_opt.items, "item universe size")->required();
    cmd_build->add_flag("--pruned", build_opt.pruned,
                        "materialize only observed preference pairs");
    cmd_build->add_flag("--dump-text", build_opt.dump_text, "also write a text adjacency dump");
    cmd_build->add_option("--out-dir", build_opt.out_dir, "output directory")->required();

    CLI::App* cmd_recommend = app.add_subcommand("recommend", "top-k items for one user");
    cmd_recommend->add_option("--graph", rec_opt.graph, "graph snapshot")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_recommend->add_option("--user", rec_opt.user, "dense user id")->required();
    cmd_recommend->add_option("-k,--top-k", rec_opt.k, "list length");
    cmd_recommend->add_option("--train", rec_opt.train,
                              "ratings file whose items are excluded for the user")
        ->check(CLI::ExistingFile);
    cmd_recommend->add_flag("--export-ppr", rec_opt.export_ppr, "also write the walk vector");
    add_ppr_options(cmd_recommend, rec_opt.ppr);
    cmd_recommend->add_option("--out-dir", rec_opt.out_dir, "output directory")->required();

    CLI::App* cmd_evaluate =
        app.add_subcommand("evaluate", "split, rank test items, report NDCG and t-tests");
    cmd_evaluate->add_option("--input", eval_opt.input, "ratings file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_evaluate->add_option("--format", eval_opt.format, "ml-100k (tab) or ml-1m (::)");
    cmd_evaluate->add_option("--dataset-name", eval_opt.dataset_name,
                             "label in the report (default: input file stem)");
    cmd_evaluate
        ->add_option("-T,--train-size", eval_opt.train_sizes, "training ratings per user")
        ->delimiter(',');
    cmd_evaluate->add_option("--min-test", eval_opt.min_test, "minimum test ratings per user");
    cmd_evaluate->add_option("--variants", eval_opt.variants, "number of split variants");
    cmd_evaluate->add_option("--algorithms", eval_opt.algorithms,
                             "subset of grank,bgr,wbgr,eigenrank")
        ->delimiter(',');
    cmd_evaluate->add_option("--ks", eval_opt.ks, "NDCG cutoffs")->delimiter(',');
    cmd_evaluate->add_option("--subsample-items", eval_opt.subsample_items,
                             "keep only the N most-rated items (0 = all)");
    cmd_evaluate->add_flag("--pruned", eval_opt.pruned,
                           "materialize only observed preference pairs");
    add_ppr_options(cmd_evaluate, eval_opt.ppr);
    cmd_evaluate->add_option("--neighborhood", eval_opt.eigenrank.neighborhood_size,
                             "eigenrank neighborhood size");
    cmd_evaluate->add_option("--out-dir", eval_opt.out_dir, "output directory")->required();

    CLI::App* cmd_bench = app.add_subcommand("bench", "timing sweeps over graph dimensions");
    cmd_bench->add_option("--input", bench_opt.input, "ratings file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_bench->add_option("--format", bench_opt.format, "ml-100k (tab) or ml-1m (::)");
    cmd_bench->add_option("--factors", bench_opt.factors, "subset of users,items,observations")
        ->delimiter(',');
    cmd_bench->add_option("--levels", bench_opt.levels, "fractions of the factor kept")
        ->delimiter(',');
    cmd_bench->add_option("--batch", bench_opt.batch_users, "recommendations per timed batch");
    cmd_bench->add_option("--repeats", bench_opt.repeats, "timed batches per point");
    cmd_bench->add_option("-k,--top-k", bench_opt.top_k, "list length per recommendation");
    cmd_bench->add_flag("--pruned", bench_opt.pruned,
                        "materialize only observed preference pairs");
    add_ppr_options(cmd_bench, bench_opt.ppr);
    cmd_bench->add_option("--out-dir", bench_opt.out_dir, "output directory")->required();

    CLI::App* cmd_synth = app.add_subcommand("synth", "deterministic latent-factor ratings");
    cmd_synth->add_option("--users", synth_opt.cfg.user_count, "number of users");
    cmd_synth->add_option("--items", synth_opt.cfg.item_count, "number of items");
    cmd_synth->add_option("--mean-ratings", synth_opt.cfg.mean_ratings_per_user,
                          "average ratings per user");
    cmd_synth->add_option("--out-dir", synth_opt.out_dir, "output directory")->required();

    for (CLI::App* sub : {cmd_ingest, cmd_split, cmd_build, cmd_recommend, cmd_evaluate,
                          cmd_bench, cmd_synth})
        sub->fallthrough();
    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    // the effective configuration is echoed next to the outputs, so any run
    // can be reproduced with --config <out-dir>/config.ini
    const auto echo_config = [&](const std::string& out_dir) {
        fs::create_directories(out_dir);
        std::ofstream out(join_path(out_dir, "config.ini"), std::ios::binary);
        if (!out) throw io_error("cannot open " + join_path(out_dir, "config.ini"));
        // options that were never given are echoed as empty strings; keep them
        // out of the file or validators reject "" when the config is re-parsed
        std::istringstream lines(app.config_to_str(true, false));
        for (std::string line; std::getline(lines, line);) {
            if (line.size() >= 3 && line.compare(line.size() - 3, 3, "=\"\"") == 0) continue;
            out << line << '\n';
        }
    };

    try {
        if (cmd_ingest->parsed()) run_ingest(common, ingest_opt);
        if (cmd_split->parsed()) run_split(common, split_opt);
        if (cmd_build->parsed()) run_build_graph(common, build_opt);
        if (cmd_recommend->parsed()) run_recommend(common, rec_opt);
        if (cmd_evaluate->parsed()) run_evaluate(common, eval_opt);
        if (cmd_bench->parsed()) run_bench(common, bench_opt);
        if (cmd_synth->parsed()) run_synth(common, synth_opt);

        if (cmd_ingest->parsed()) echo_config(ingest_opt.out_dir);
        if (cmd_split->parsed()) echo_config(split_opt.out_dir);
        if (cmd_build->parsed()) echo_config(build_opt.out_dir);
        if (cmd_recommend->parsed()) echo_config(rec_opt.out_dir);
        if (cmd_evaluate->parsed()) echo_config(eval_opt.out_dir);
        if (cmd_bench->parsed()) echo_config(bench_opt.out_dir);
        if (cmd_synth->parsed()) echo_config(synth_opt.out_dir);
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
