#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hcrep/hyperclass.hpp"
#include "hcrep/matrix.hpp"
#include "hcrep/recommender.hpp"

namespace hcrep {

enum class Algorithm { usercf, itemcf, cf_ce, cf_kl, cf_js };

std::string to_string(Algorithm algorithm);
Algorithm algorithm_from_string(const std::string& name);  // ConfigError on unknown
/// The divergence behind a hyper-class algorithm; empty for the baselines.
std::optional<MeasureKind> measure_of(Algorithm algorithm);

enum class SplitMode { by_rating, by_user };

std::string to_string(SplitMode mode);
SplitMode split_mode_from_string(const std::string& name);  // ConfigError on unknown

struct EvalConfig {
    std::vector<Algorithm> algorithms{Algorithm::usercf, Algorithm::cf_ce};
    std::size_t k = 10;
    std::size_t folds = 10;
    std::uint64_t seed = 42;
    SplitMode split = SplitMode::by_rating;
    double reveal_fraction = 0.5;  // by_user: share of a test user's ratings kept for the profile
    NeighborhoodConfig neighborhood{};
    SimilarityFn similarity{};
    std::string dataset = "unnamed";
};

/// One train/test split over the canonical entry list; the masks are
/// complementary and indexed by position in matrix.entries().
struct Fold {
    std::vector<bool> train_mask;
    std::vector<bool> test_mask;
};

/// Deterministic for a given seed. by_rating deals entries into `folds`
/// near-equal test chunks; by_user deals users instead, revealing
/// floor(reveal_fraction * |ratings|) of each test user's ratings to the
/// training side and predicting the rest.
std::vector<Fold> make_folds(const RatingMatrix& matrix, const EvalConfig& config);

double rmse(std::span<const double> actual, std::span<const double> predicted);
double mae(std::span<const double> actual, std::span<const double> predicted);

struct FoldMetrics {
    double rmse = 0.0;
    double mae = 0.0;
    std::size_t predictions = 0;
    std::uint64_t similarity_evaluations = 0;
    double wall_seconds = 0.0;   // prediction loop only
    double build_seconds = 0.0;  // hyper-class construction, 0 for baselines
    std::optional<std::size_t> decision_feature;
    std::optional<double> score;
};

struct AlgorithmResult {
    Algorithm algorithm = Algorithm::usercf;
    std::vector<FoldMetrics> folds;
    double avg_rmse = 0.0;
    double avg_mae = 0.0;
    double avg_wall_seconds = 0.0;
    std::uint64_t total_similarity_evaluations = 0;
};

struct EvalReport {
    EvalConfig config;
    std::size_t n_users = 0;
    std::size_t n_items = 0;
    std::size_t n_entries = 0;
    RatingScale scale;
    std::vector<AlgorithmResult> algorithms;

    const AlgorithmResult* result_for(Algorithm algorithm) const;

    /// Versioned report. Identical configs and seeds dump byte-identical
    /// JSON except for the *_seconds fields; keys never depend on locale or
    /// wall-clock time.
    std::string to_json() const;
};

/// Cross-validate every configured algorithm on shared folds. Hyper-classes
/// are rebuilt per fold from that fold's training entries only; the timed
/// span covers the prediction loop.
EvalReport evaluate(const RatingMatrix& matrix, const EvalConfig& config);

struct SweepResult {
    std::vector<EvalReport> cells;  // one per (k, measure), k-major order

    /// Long format, header `dataset,algorithm,K,fold,rmse,mae,seconds`.
    std::string to_csv() const;
};

/// One evaluate() per (k, measure) pair: the cell runs the baselines present
/// in config.algorithms plus the hyper-class algorithm of that measure.
SweepResult sweep(const RatingMatrix& matrix, const EvalConfig& config,
                  std::span<const std::size_t> k_values, std::span<const MeasureKind> measures);

/// | kl(F_k, ~F_k) - |ce(F_k, ~F_k) - info(F_k)| | — the gap in the claimed
/// identity between the three measures. Reported, never asserted zero: the
/// identity does not hold for general divisions.
double property3_gap(const RatingMatrix& matrix, std::size_t k, const NeighborhoodConfig& config);

struct ReferenceResult {
    double rmse = 0.0;
    double mae = 0.0;
    double seconds = 0.0;
};

/// Published ml-100k benchmark results bundled so reports can show the
/// directional targets next to measured values, plus the published 1-based
/// decision-feature ordinals for the three selectors.
const std::vector<std::pair<Algorithm, ReferenceResult>>& published_reference();
const std::vector<std::pair<Algorithm, std::size_t>>& published_decision_features();

}  // namespace hcrep
