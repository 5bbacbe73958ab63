#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hcrep/hyperclass.hpp"
#include "hcrep/matrix.hpp"

namespace hcrep {

enum class SimKind { cosine, pearson };

std::string to_string(SimKind kind);
SimKind sim_kind_from_string(const std::string& name);  // ConfigError on unknown

/// Similarity over co-rated items only; pairs with fewer than min_overlap
/// co-rated items score 0.
struct SimilarityFn {
    SimKind kind = SimKind::cosine;
    std::size_t min_overlap = 1;

    bool operator==(const SimilarityFn&) const = default;
};

enum class FallbackLevel { neighbors, user_mean, global_mean };

std::string to_string(FallbackLevel level);

struct Prediction {
    std::size_t user = 0;
    std::size_t item = 0;
    double value = 0.0;           // clamped to the rating scale
    std::size_t support = 0;      // selected neighbors with positive similarity
    FallbackLevel fallback = FallbackLevel::neighbors;

    bool operator==(const Prediction&) const = default;
};

/// Optional instrumentation: how much similarity work a prediction did. The
/// hyper-class pool restriction shows up here as a strictly smaller count.
struct PredictStats {
    std::uint64_t similarity_evaluations = 0;
};

double user_similarity(const RatingMatrix& matrix, std::size_t u, std::size_t v,
                       const SimilarityFn& sim);
double item_similarity(const RatingMatrix& matrix, std::size_t i, std::size_t j,
                       const SimilarityFn& sim);

/// Weighted mean over the K most similar users who rated the item (ties to
/// the lower index; negative similarities stay in the ranking and weigh the
/// denominator but are excluded from the numerator). No usable neighbor ->
/// the user's mean rating -> the global mean; always clamped to scale.
Prediction predict_usercf(const RatingMatrix& matrix, std::size_t u, std::size_t item,
                          std::size_t K, const SimilarityFn& sim, PredictStats* stats = nullptr);

/// Mirror of predict_usercf with users and items transposed: neighbors are
/// the items the user rated, weighted by item-item similarity.
Prediction predict_itemcf(const RatingMatrix& matrix, std::size_t u, std::size_t item,
                          std::size_t K, const SimilarityFn& sim, PredictStats* stats = nullptr);

/// predict_usercf with the candidate pool restricted to the user's assigned
/// hyper-class block. With a single block covering the universe the output
/// is identical to predict_usercf, bit for bit.
Prediction predict_hyperclass(const RatingMatrix& matrix, const HyperClass& hc, std::size_t u,
                              std::size_t item, std::size_t K, const SimilarityFn& sim,
                              PredictStats* stats = nullptr);

using Predictor = std::function<Prediction(std::size_t user, std::size_t item)>;

/// The N unrated items with the highest predicted value, descending, ties to
/// the lower item index.
std::vector<std::size_t> top_n(const RatingMatrix& matrix, const Predictor& predict,
                               std::size_t u, std::size_t N);

}  // namespace hcrep
