// Command-line front end: synth | ingest | select | eval | sweep | diagnose.
//
// Exit codes: 0 success, 2 bad configuration or flags, 3 unreadable or
// malformed data, 4 internal invariant failure.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hcrep/errors.hpp"
#include "hcrep/harness.hpp"
#include "hcrep/hyperclass.hpp"
#include "hcrep/ingest.hpp"
#include "hcrep/matrix.hpp"
#include "hcrep/relation.hpp"
#include "hcrep/synth.hpp"

namespace {

using namespace hcrep;

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::size_t end = comma == std::string::npos ? text.size() : comma;
        if (end > start) parts.push_back(text.substr(start, end - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return parts;
}

std::size_t parse_size(const std::string& text, const char* what) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ConfigError(fmt::format("{} '{}' is not a non-negative integer", what, text));
    return value;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path));
    out << content;
    if (!out) throw IoError(fmt::format("write to '{}' failed", path));
}

// Options shared by every subcommand that builds neighborhoods.
struct NeighborhoodOpts {
    double delta = 0.0;
    std::string norm = "chebyshev";
    bool no_normalize = false;

    NeighborhoodConfig to_config() const {
        NeighborhoodConfig cfg;
        cfg.delta = delta;
        cfg.norm = norm_from_string(norm);
        cfg.normalize = !no_normalize;
        return cfg;
    }
};

void add_neighborhood_opts(CLI::App* cmd, NeighborhoodOpts& opts) {
    cmd->add_option("--delta", opts.delta, "neighborhood radius (0 = exact-match classes)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--norm", opts.norm, "distance norm: chebyshev or euclidean");
    cmd->add_flag("--no-normalize", opts.no_normalize,
                  "compare raw rating values instead of per-feature min-max scaled ones");
}

struct SimilarityOpts {
    std::string sim = "cosine";
    std::size_t min_overlap = 1;

    SimilarityFn to_config() const {
        SimilarityFn fn;
        fn.kind = sim_kind_from_string(sim);
        fn.min_overlap = min_overlap;
        return fn;
    }
};

void add_similarity_opts(CLI::App* cmd, SimilarityOpts& opts) {
    cmd->add_option("--sim", opts.sim, "similarity: cosine or pearson");
    cmd->add_option("--min-overlap", opts.min_overlap,
                    "co-rated items required before similarity counts");
}

struct IngestOpts {
    std::string format = "movielens";
    std::string path;
    std::string out;
    std::size_t max_users = 0;  // 0 = unlimited
    std::size_t max_items = 0;
    std::string user_col = "user";
    std::string item_col = "item";
    std::string rating_col = "rating";
    double scale_min = 1.0;
    double scale_max = 5.0;
};

int run_ingest(const IngestOpts& opts) {
    IngestLimits limits;
    if (opts.max_users > 0) limits.max_users = opts.max_users;
    if (opts.max_items > 0) limits.max_items = opts.max_items;

    RatingMatrix matrix = [&] {
        if (opts.format == "movielens") return load_movielens(opts.path, limits);
        if (opts.format == "csv") {
            CsvSchema schema;
            schema.user_column = opts.user_col;
            schema.item_column = opts.item_col;
            schema.rating_column = opts.rating_col;
            return load_csv(opts.path, schema, RatingScale{opts.scale_min, opts.scale_max}, limits);
        }
        throw ConfigError(fmt::format("unknown input format '{}'", opts.format));
    }();

    save_matrix_binary(matrix, opts.out);
    std::cout << fmt::format("{}: {} users, {} items, {} ratings ({} duplicate lines collapsed)\n",
                             opts.out, matrix.n_users(), matrix.n_items(), matrix.entry_count(),
                             matrix.duplicate_count());
    return 0;
}

struct SynthOpts {
    std::string out;
    SynthConfig config;
};

int run_synth(const SynthOpts& opts) {
    write_synthetic_movielens(opts.config, opts.out);
    std::cout << fmt::format("{}: {} users x {} items, {} ratings per user, noise {}, seed {}\n",
                             opts.out, opts.config.n_users, opts.config.n_items,
                             opts.config.ratings_per_user, opts.config.noise, opts.config.seed);
    return 0;
}

struct SelectOpts {
    std::string input;
    std::string measure = "ce";
    std::string out;
    NeighborhoodOpts neighborhood;
};

int run_select(const SelectOpts& opts) {
    const RatingMatrix matrix = load_matrix_binary(opts.input);
    const MeasureKind measure = measure_kind_from_string(opts.measure);
    const HyperClass hc = build_hyperclass(matrix, measure, opts.neighborhood.to_config());
    write_text_file(opts.out, hc.to_json());
    std::cout << fmt::format("decision feature {} (item id '{}'), {} score {:.12g}, {} blocks\n",
                             hc.decision_feature, matrix.item_id(hc.decision_feature),
                             to_string(measure), hc.score, hc.blocks.blocks.size());
    return 0;
}

struct EvalOpts {
    std::string input;
    std::string algorithms = "usercf,cf_ce";
    std::size_t k = 10;
    std::size_t folds = 10;
    std::uint64_t seed = 42;
    std::string split = "by_rating";
    double reveal = 0.5;
    std::string dataset;
    std::string out;
    NeighborhoodOpts neighborhood;
    SimilarityOpts similarity;

    EvalConfig to_config() const {
        EvalConfig cfg;
        cfg.algorithms.clear();
        for (const std::string& name : split_list(algorithms))
            cfg.algorithms.push_back(algorithm_from_string(name));
        cfg.k = k;
        cfg.folds = folds;
        cfg.seed = seed;
        cfg.split = split_mode_from_string(split);
        cfg.reveal_fraction = reveal;
        cfg.neighborhood = neighborhood.to_config();
        cfg.similarity = similarity.to_config();
        cfg.dataset = dataset;
        return cfg;
    }
};

void add_eval_opts(CLI::App* cmd, EvalOpts& opts) {
    cmd->add_option("--input", opts.input, "matrix cache from 'ingest'")->required();
    cmd->add_option("--k", opts.k, "neighbors per prediction");
    cmd->add_option("--folds", opts.folds, "cross-validation folds");
    cmd->add_option("--seed", opts.seed, "fold-assignment seed");
    cmd->add_option("--split", opts.split, "fold unit: by_rating or by_user");
    cmd->add_option("--reveal", opts.reveal,
                    "fraction of each test user's ratings kept in training (by_user only)")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--dataset", opts.dataset, "dataset label in reports (default: input stem)");
    add_neighborhood_opts(cmd, opts.neighborhood);
    add_similarity_opts(cmd, opts.similarity);
}

int run_eval(EvalOpts& opts) {
    if (opts.dataset.empty()) opts.dataset = std::filesystem::path(opts.input).stem().string();
    const RatingMatrix matrix = load_matrix_binary(opts.input);
    const EvalReport report = evaluate(matrix, opts.to_config());
    write_text_file(opts.out, report.to_json());

    std::cout << fmt::format("{}: {} users, {} items, {} ratings, {} folds ({})\n",
                             opts.dataset, report.n_users, report.n_items, report.n_entries,
                             opts.folds, opts.split);
    for (const AlgorithmResult& result : report.algorithms) {
        std::cout << fmt::format("  {:<7} rmse {:.4f}  mae {:.4f}  predict {:.3f}s  sim-evals {}\n",
                                 to_string(result.algorithm), result.avg_rmse, result.avg_mae,
                                 result.avg_wall_seconds, result.total_similarity_evaluations);
    }
    std::cout << fmt::format("report written to {}\n", opts.out);
    return 0;
}

struct SweepOpts {
    EvalOpts eval;
    std::string k_list = "5,10,20";
    std::string measures = "ce,kl,js";
};

int run_sweep(SweepOpts& opts) {
    if (opts.eval.dataset.empty())
        opts.eval.dataset = std::filesystem::path(opts.eval.input).stem().string();
    const RatingMatrix matrix = load_matrix_binary(opts.eval.input);

    std::vector<std::size_t> k_values;
    for (const std::string& text : split_list(opts.k_list))
        k_values.push_back(parse_size(text, "--k entry"));
    std::vector<MeasureKind> measures;
    for (const std::string& name : split_list(opts.measures))
        measures.push_back(measure_kind_from_string(name));

    const SweepResult grid = sweep(matrix, opts.eval.to_config(), k_values, measures);
    const std::string csv = grid.to_csv();
    const auto rows = std::count(csv.begin(), csv.end(), '\n') - 1;
    write_text_file(opts.eval.out, csv);
    std::cout << fmt::format("{} cells ({} csv rows) written to {}\n", grid.cells.size(), rows,
                             opts.eval.out);
    return 0;
}

struct DiagnoseOpts {
    std::string input;
    std::size_t feature = 0;
    NeighborhoodOpts neighborhood;
};

int run_diagnose_property3(const DiagnoseOpts& opts) {
    const RatingMatrix matrix = load_matrix_binary(opts.input);
    const double gap = property3_gap(matrix, opts.feature, opts.neighborhood.to_config());
    std::cout << fmt::format("{{\"feature\": {}, \"item\": \"{}\", \"gap\": {:.17g}}}\n",
                             opts.feature, matrix.item_id(opts.feature), gap);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hyper-class construction and collaborative-filtering evaluation"};
    app.require_subcommand(1);

    SynthOpts synth_opts;
    CLI::App* synth_cmd = app.add_subcommand("synth", "generate a synthetic grouped-taste dataset");
    synth_cmd->add_option("--out", synth_opts.out, "output path (tab-separated rating lines)")
        ->required();
    synth_cmd->add_option("--users", synth_opts.config.n_users, "number of users");
    synth_cmd->add_option("--items", synth_opts.config.n_items, "number of items");
    synth_cmd->add_option("--groups", synth_opts.config.groups, "taste groups (2-5)");
    synth_cmd->add_option("--rates", synth_opts.config.ratings_per_user, "ratings per user");
    synth_cmd->add_option("--noise", synth_opts.config.noise, "probability a rating is perturbed");
    synth_cmd->add_option("--seed", synth_opts.config.seed, "generator seed");

    IngestOpts ingest_opts;
    CLI::App* ingest_cmd = app.add_subcommand("ingest", "parse ratings into a binary matrix cache");
    ingest_cmd->add_option("--format", ingest_opts.format, "input format: movielens or csv");
    ingest_cmd->add_option("--path", ingest_opts.path, "input file")->required();
    ingest_cmd->add_option("--out", ingest_opts.out, "output matrix cache")->required();
    ingest_cmd->add_option("--max-users", ingest_opts.max_users,
                           "keep only the first N distinct users (0 = all)");
    ingest_cmd->add_option("--max-items", ingest_opts.max_items,
                           "keep only the first N distinct items (0 = all)");
    ingest_cmd->add_option("--user-col", ingest_opts.user_col, "csv user column name");
    ingest_cmd->add_option("--item-col", ingest_opts.item_col, "csv item column name");
    ingest_cmd->add_option("--rating-col", ingest_opts.rating_col, "csv rating column name");
    ingest_cmd->add_option("--scale-min", ingest_opts.scale_min, "csv rating scale lower bound");
    ingest_cmd->add_option("--scale-max", ingest_opts.scale_max, "csv rating scale upper bound");

    SelectOpts select_opts;
    CLI::App* select_cmd =
        app.add_subcommand("select", "pick the decision feature and write the hyper-class model");
    select_cmd->add_option("--input", select_opts.input, "matrix cache from 'ingest'")->required();
    select_cmd->add_option("--measure", select_opts.measure, "scoring measure: ce, kl, or js");
    select_cmd->add_option("--out", select_opts.out, "output model file (json)")->required();
    add_neighborhood_opts(select_cmd, select_opts.neighborhood);

    EvalOpts eval_opts;
    CLI::App* eval_cmd = app.add_subcommand("eval", "cross-validate recommenders and write a report");
    eval_cmd->add_option("--algorithms", eval_opts.algorithms,
                         "comma list of usercf, itemcf, cf_ce, cf_kl, cf_js");
    eval_cmd->add_option("--out", eval_opts.out, "output report (json)")->required();
    add_eval_opts(eval_cmd, eval_opts);

    SweepOpts sweep_opts;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "evaluate a K x measure grid and write csv");
    sweep_cmd->add_option("--k-list", sweep_opts.k_list, "comma list of neighbor counts");
    sweep_cmd->add_option("--measures", sweep_opts.measures, "comma list of ce, kl, js");
    sweep_cmd->add_option("--algorithms", sweep_opts.eval.algorithms,
                          "baselines to include alongside each measure's recommender");
    sweep_cmd->add_option("--out", sweep_opts.eval.out, "output grid (csv)")->required();
    add_eval_opts(sweep_cmd, sweep_opts.eval);

    DiagnoseOpts diagnose_opts;
    CLI::App* diagnose_cmd = app.add_subcommand("diagnose", "report analytical gap diagnostics");
    CLI::App* property3_cmd = diagnose_cmd->add_subcommand(
        "property3", "gap between the divergence of a feature and its entropy decomposition");
    property3_cmd->add_option("--input", diagnose_opts.input, "matrix cache from 'ingest'")
        ->required();
    property3_cmd->add_option("--feature", diagnose_opts.feature, "feature (item index) to test")
        ->required();
    add_neighborhood_opts(property3_cmd, diagnose_opts.neighborhood);
    diagnose_cmd->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*synth_cmd) return run_synth(synth_opts);
        if (*ingest_cmd) return run_ingest(ingest_opts);
        if (*select_cmd) return run_select(select_opts);
        if (*eval_cmd) return run_eval(eval_opts);
        if (*sweep_cmd) return run_sweep(sweep_opts);
        if (*property3_cmd) return run_diagnose_property3(diagnose_opts);
        throw ContractViolation("no subcommand dispatched");
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 4;
    }
}
