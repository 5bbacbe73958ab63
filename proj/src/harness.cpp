#include "hcrep/harness.hpp"

#include <algorithm>
#include <cfloat>
#include <chrono>
#include <cmath>
#include <fmt/format.h>
#include <numeric>

#include <json.hpp>

#include "hcrep/errors.hpp"
#include "hcrep/measures.hpp"
#include "hcrep/rng.hpp"

namespace hcrep {

std::string to_string(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::usercf: return "usercf";
        case Algorithm::itemcf: return "itemcf";
        case Algorithm::cf_ce: return "cf_ce";
        case Algorithm::cf_kl: return "cf_kl";
        case Algorithm::cf_js: return "cf_js";
    }
    throw ContractViolation("unreachable algorithm");
}

Algorithm algorithm_from_string(const std::string& name) {
    if (name == "usercf") return Algorithm::usercf;
    if (name == "itemcf") return Algorithm::itemcf;
    if (name == "cf_ce") return Algorithm::cf_ce;
    if (name == "cf_kl") return Algorithm::cf_kl;
    if (name == "cf_js") return Algorithm::cf_js;
    throw ConfigError(fmt::format(
        "unknown algorithm '{}' (expected usercf, itemcf, cf_ce, cf_kl or cf_js)", name));
}

std::optional<MeasureKind> measure_of(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::cf_ce: return MeasureKind::ce;
        case Algorithm::cf_kl: return MeasureKind::kl;
        case Algorithm::cf_js: return MeasureKind::js;
        default: return std::nullopt;
    }
}

std::string to_string(SplitMode mode) {
    return mode == SplitMode::by_rating ? "by_rating" : "by_user";
}

SplitMode split_mode_from_string(const std::string& name) {
    if (name == "by_rating") return SplitMode::by_rating;
    if (name == "by_user") return SplitMode::by_user;
    throw ConfigError(fmt::format("unknown split mode '{}' (expected by_rating or by_user)",
                                  name));
}

namespace {

void check_eval_config(const EvalConfig& config) {
    if (config.algorithms.empty()) throw ConfigError("no algorithms configured");
    if (config.folds < 2) throw ConfigError("folds must be >= 2");
    if (config.k < 1) throw ConfigError("K must be >= 1");
    if (config.reveal_fraction < 0.0 || config.reveal_fraction > 1.0)
        throw ConfigError("reveal_fraction must be in [0, 1]");
}

// Deal `total` unit ids (already shuffled) into `folds` near-equal chunks.
std::vector<std::vector<std::size_t>> chunk(const std::vector<std::size_t>& shuffled,
                                            std::size_t folds) {
    std::vector<std::vector<std::size_t>> chunks(folds);
    const std::size_t base = shuffled.size() / folds;
    const std::size_t extra = shuffled.size() % folds;
    std::size_t pos = 0;
    for (std::size_t f = 0; f < folds; ++f) {
        const std::size_t count = base + (f < extra ? 1 : 0);
        chunks[f].assign(shuffled.begin() + pos, shuffled.begin() + pos + count);
        pos += count;
    }
    return chunks;
}

}  // namespace

std::vector<Fold> make_folds(const RatingMatrix& matrix, const EvalConfig& config) {
    check_eval_config(config);
    const std::size_t entries = matrix.entry_count();
    DetRng rng(config.seed);

    std::vector<Fold> folds(config.folds);
    for (Fold& fold : folds) {
        fold.train_mask.assign(entries, true);
        fold.test_mask.assign(entries, false);
    }

    if (config.split == SplitMode::by_rating) {
        if (entries < config.folds)
            throw ContractViolation(fmt::format("{} ratings cannot fill {} folds", entries,
                                                config.folds));
        std::vector<std::size_t> order(entries);
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);
        const auto chunks = chunk(order, config.folds);
        for (std::size_t f = 0; f < config.folds; ++f)
            for (std::size_t pos : chunks[f]) {
                folds[f].train_mask[pos] = false;
                folds[f].test_mask[pos] = true;
            }
        return folds;
    }

    if (matrix.n_users() < config.folds)
        throw ContractViolation(fmt::format("{} users cannot fill {} folds", matrix.n_users(),
                                            config.folds));

    // Canonical entries are (user, item)-sorted, so each user's positions
    // are one contiguous range.
    std::vector<std::size_t> first_pos(matrix.n_users() + 1, 0);
    {
        const auto all = matrix.entries();
        for (std::size_t pos = 0; pos < all.size(); ++pos) ++first_pos[all[pos].user + 1];
        for (std::size_t u = 0; u < matrix.n_users(); ++u) first_pos[u + 1] += first_pos[u];
    }

    std::vector<std::size_t> users(matrix.n_users());
    std::iota(users.begin(), users.end(), 0);
    rng.shuffle(users);
    const auto chunks = chunk(users, config.folds);
    for (std::size_t f = 0; f < config.folds; ++f) {
        for (std::size_t u : chunks[f]) {
            std::vector<std::size_t> positions;
            for (std::size_t pos = first_pos[u]; pos < first_pos[u + 1]; ++pos)
                positions.push_back(pos);
            rng.shuffle(positions);
            const std::size_t reveal = static_cast<std::size_t>(
                std::floor(config.reveal_fraction * static_cast<double>(positions.size())));
            for (std::size_t r = reveal; r < positions.size(); ++r) {
                folds[f].train_mask[positions[r]] = false;
                folds[f].test_mask[positions[r]] = true;
            }
        }
    }
    return folds;
}

double rmse(std::span<const double> actual, std::span<const double> predicted) {
    if (actual.size() != predicted.size())
        throw ContractViolation("rmse: vector lengths differ");
    if (actual.empty()) throw ContractViolation("rmse: empty input");
    long double total = 0.0L;
    for (std::size_t n = 0; n < actual.size(); ++n) {
        const long double diff = actual[n] - predicted[n];
        total += diff * diff;
    }
    return static_cast<double>(std::sqrt(total / static_cast<long double>(actual.size())));
}

double mae(std::span<const double> actual, std::span<const double> predicted) {
    if (actual.size() != predicted.size()) throw ContractViolation("mae: vector lengths differ");
    if (actual.empty()) throw ContractViolation("mae: empty input");
    long double total = 0.0L;
    for (std::size_t n = 0; n < actual.size(); ++n)
        total += std::abs(static_cast<long double>(actual[n]) - predicted[n]);
    return static_cast<double>(total / static_cast<long double>(actual.size()));
}

const AlgorithmResult* EvalReport::result_for(Algorithm algorithm) const {
    for (const AlgorithmResult& result : algorithms)
        if (result.algorithm == algorithm) return &result;
    return nullptr;
}

EvalReport evaluate(const RatingMatrix& matrix, const EvalConfig& config) {
    check_eval_config(config);
    const std::vector<Fold> folds = make_folds(matrix, config);
    const auto all_entries = matrix.entries();

    EvalReport report;
    report.config = config;
    report.n_users = matrix.n_users();
    report.n_items = matrix.n_items();
    report.n_entries = matrix.entry_count();
    report.scale = matrix.scale();

    // Train matrices and test positions are shared by every algorithm so
    // accuracy and timing comparisons run on identical folds.
    std::vector<RatingMatrix> train(folds.size());
    std::vector<std::vector<std::size_t>> test_positions(folds.size());
    for (std::size_t f = 0; f < folds.size(); ++f) {
        train[f] = matrix.filtered(folds[f].train_mask);
        for (std::size_t pos = 0; pos < folds[f].test_mask.size(); ++pos)
            if (folds[f].test_mask[pos]) test_positions[f].push_back(pos);
    }

    for (Algorithm algorithm : config.algorithms) {
        AlgorithmResult result;
        result.algorithm = algorithm;
        const std::optional<MeasureKind> measure = measure_of(algorithm);

        for (std::size_t f = 0; f < folds.size(); ++f) {
            FoldMetrics metrics;
            std::optional<HyperClass> hc;
            if (measure) {
                const auto t0 = std::chrono::steady_clock::now();
                hc = build_hyperclass(train[f], *measure, config.neighborhood);
                const auto t1 = std::chrono::steady_clock::now();
                metrics.build_seconds = std::chrono::duration<double>(t1 - t0).count();
                metrics.decision_feature = hc->decision_feature;
                metrics.score = hc->score;
            }

            std::vector<double> actual, predicted;
            actual.reserve(test_positions[f].size());
            predicted.reserve(test_positions[f].size());
            PredictStats stats;

            const auto t0 = std::chrono::steady_clock::now();
            for (std::size_t pos : test_positions[f]) {
                const Entry& e = all_entries[pos];
                Prediction p;
                switch (algorithm) {
                    case Algorithm::usercf:
                        p = predict_usercf(train[f], e.user, e.item, config.k, config.similarity,
                                           &stats);
                        break;
                    case Algorithm::itemcf:
                        p = predict_itemcf(train[f], e.user, e.item, config.k, config.similarity,
                                           &stats);
                        break;
                    default:
                        p = predict_hyperclass(train[f], *hc, e.user, e.item, config.k,
                                               config.similarity, &stats);
                        break;
                }
                actual.push_back(e.rating);
                predicted.push_back(p.value);
            }
            const auto t1 = std::chrono::steady_clock::now();

            metrics.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
            metrics.predictions = test_positions[f].size();
            metrics.similarity_evaluations = stats.similarity_evaluations;
            if (!actual.empty()) {
                metrics.rmse = rmse(actual, predicted);
                metrics.mae = mae(actual, predicted);
            }
            result.folds.push_back(metrics);
        }

        long double rmse_sum = 0.0L, mae_sum = 0.0L, wall_sum = 0.0L;
        for (const FoldMetrics& m : result.folds) {
            rmse_sum += m.rmse;
            mae_sum += m.mae;
            wall_sum += m.wall_seconds;
            result.total_similarity_evaluations += m.similarity_evaluations;
        }
        const long double n = static_cast<long double>(result.folds.size());
        result.avg_rmse = static_cast<double>(rmse_sum / n);
        result.avg_mae = static_cast<double>(mae_sum / n);
        result.avg_wall_seconds = static_cast<double>(wall_sum / n);
        report.algorithms.push_back(std::move(result));
    }
    return report;
}

namespace {

nlohmann::ordered_json config_json(const EvalConfig& config) {
    nlohmann::ordered_json algorithms = nlohmann::ordered_json::array();
    for (Algorithm a : config.algorithms) algorithms.push_back(to_string(a));
    return {{"algorithms", algorithms},
            {"k", config.k},
            {"folds", config.folds},
            {"seed", config.seed},
            {"split", to_string(config.split)},
            {"reveal_fraction", config.reveal_fraction},
            {"neighborhood",
             {{"delta", config.neighborhood.delta},
              {"norm", to_string(config.neighborhood.norm)},
              {"normalize", config.neighborhood.normalize}}},
            {"similarity",
             {{"kind", to_string(config.similarity.kind)},
              {"min_overlap", config.similarity.min_overlap}}},
            {"protocol_note",
             "split interpretation is configurable because the published protocol leaves it "
             "open; hyper-classes are rebuilt per fold from training entries only"}};
}

}  // namespace

std::string EvalReport::to_json() const {
    nlohmann::ordered_json j;
    j["report_version"] = 1;
    j["dataset"] = {{"name", config.dataset},
                    {"users", n_users},
                    {"items", n_items},
                    {"entries", n_entries},
                    {"scale_min", scale.min},
                    {"scale_max", scale.max}};
    j["config"] = config_json(config);
    j["environment"] = {{"compiler", __VERSION__},
                        {"pointer_bits", sizeof(void*) * 8},
                        {"float_evaluation", FLT_EVAL_METHOD}};

    j["algorithms"] = nlohmann::ordered_json::array();
    for (const AlgorithmResult& result : algorithms) {
        nlohmann::ordered_json fold_rows = nlohmann::ordered_json::array();
        for (std::size_t f = 0; f < result.folds.size(); ++f) {
            const FoldMetrics& m = result.folds[f];
            nlohmann::ordered_json row{{"fold", f},
                                       {"rmse", m.rmse},
                                       {"mae", m.mae},
                                       {"predictions", m.predictions},
                                       {"similarity_evaluations", m.similarity_evaluations},
                                       {"wall_seconds", m.wall_seconds}};
            if (m.decision_feature) {
                row["decision_feature"] = *m.decision_feature;
                row["score"] = *m.score;
                row["build_seconds"] = m.build_seconds;
            }
            fold_rows.push_back(std::move(row));
        }
        j["algorithms"].push_back(
            {{"name", to_string(result.algorithm)},
             {"folds", std::move(fold_rows)},
             {"average",
              {{"rmse", result.avg_rmse},
               {"mae", result.avg_mae},
               {"wall_seconds", result.avg_wall_seconds}}},
             {"total_similarity_evaluations", result.total_similarity_evaluations}});
    }

    nlohmann::ordered_json reference;
    reference["dataset"] = "ml-100k";
    reference["note"] =
        "published benchmark results bundled for directional comparison; the published "
        "prediction protocol is underspecified, so exact values are not an acceptance target";
    for (const auto& [algorithm, values] : published_reference())
        reference["values"][to_string(algorithm)] = {
            {"rmse", values.rmse}, {"mae", values.mae}, {"seconds", values.seconds}};
    for (const auto& [algorithm, ordinal] : published_decision_features())
        reference["decision_feature_ordinal_1based"][to_string(algorithm)] = ordinal;
    j["published_reference"] = std::move(reference);
    return j.dump(2);
}

std::string SweepResult::to_csv() const {
    std::string csv = "dataset,algorithm,K,fold,rmse,mae,seconds\n";
    for (const EvalReport& report : cells)
        for (const AlgorithmResult& result : report.algorithms)
            for (std::size_t f = 0; f < result.folds.size(); ++f) {
                const FoldMetrics& m = result.folds[f];
                csv += fmt::format("{},{},{},{},{},{},{}\n", report.config.dataset,
                                   to_string(result.algorithm), report.config.k, f, m.rmse, m.mae,
                                   m.wall_seconds);
            }
    return csv;
}

SweepResult sweep(const RatingMatrix& matrix, const EvalConfig& config,
                  std::span<const std::size_t> k_values, std::span<const MeasureKind> measures) {
    if (k_values.empty() || measures.empty())
        throw ConfigError("sweep needs at least one K and one measure");

    std::vector<Algorithm> baselines;
    for (Algorithm a : config.algorithms)
        if (!measure_of(a)) baselines.push_back(a);

    SweepResult result;
    for (std::size_t k : k_values)
        for (MeasureKind measure : measures) {
            EvalConfig cell = config;
            cell.k = k;
            cell.algorithms = baselines;
            switch (measure) {
                case MeasureKind::ce: cell.algorithms.push_back(Algorithm::cf_ce); break;
                case MeasureKind::kl: cell.algorithms.push_back(Algorithm::cf_kl); break;
                case MeasureKind::js: cell.algorithms.push_back(Algorithm::cf_js); break;
            }
            result.cells.push_back(evaluate(matrix, cell));
        }
    return result;
}

double property3_gap(const RatingMatrix& matrix, std::size_t k, const NeighborhoodConfig& config) {
    const FeatureView view(matrix, config);
    const SizeProfile a = profile_of(cover_of_feature(view, k));
    const SizeProfile b = profile_of(cover_of_complement(view, k));
    const std::size_t feature[] = {k};
    const double info = info_entropy(per_sample_profile(view, feature));
    const double ce = cross_entropy(a, b);
    const double kl = kl_divergence(a, b);
    return std::abs(kl - std::abs(ce - info));
}

const std::vector<std::pair<Algorithm, ReferenceResult>>& published_reference() {
    static const std::vector<std::pair<Algorithm, ReferenceResult>> table{
        {Algorithm::usercf, {0.9942, 0.9937, 40.00}},
        {Algorithm::itemcf, {0.8791, 1.1261, 1515.24}},
        {Algorithm::cf_ce, {0.1218, 0.1594, 14.74}},
        {Algorithm::cf_kl, {0.1971, 0.2593, 13.60}},
        {Algorithm::cf_js, {0.1824, 0.2312, 9.97}},
    };
    return table;
}

const std::vector<std::pair<Algorithm, std::size_t>>& published_decision_features() {
    static const std::vector<std::pair<Algorithm, std::size_t>> table{
        {Algorithm::cf_ce, 50},
        {Algorithm::cf_kl, 1122},
        {Algorithm::cf_js, 1},
    };
    return table;
}

}  // namespace hcrep
