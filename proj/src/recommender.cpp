#include "hcrep/recommender.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "hcrep/errors.hpp"

namespace hcrep {

std::string to_string(SimKind kind) { return kind == SimKind::cosine ? "cosine" : "pearson"; }

SimKind sim_kind_from_string(const std::string& name) {
    if (name == "cosine") return SimKind::cosine;
    if (name == "pearson") return SimKind::pearson;
    throw ConfigError(fmt::format("unknown similarity '{}' (expected cosine or pearson)", name));
}

std::string to_string(FallbackLevel level) {
    switch (level) {
        case FallbackLevel::neighbors: return "neighbors";
        case FallbackLevel::user_mean: return "user_mean";
        case FallbackLevel::global_mean: return "global_mean";
    }
    throw ContractViolation("unreachable fallback level");
}

namespace {

// Similarity from two (key, rating) sequences sorted ascending by key,
// computed over the co-rated keys only.
double overlap_similarity(std::span<const Entry> a, std::span<const Entry> b, bool by_item,
                          const SimilarityFn& sim) {
    auto key = [by_item](const Entry& e) { return by_item ? e.item : e.user; };

    double dot = 0.0, aa = 0.0, bb = 0.0;   // cosine accumulators
    double sa = 0.0, sb = 0.0;              // pearson: sums over the overlap
    std::vector<std::pair<double, double>> shared;  // pearson needs two passes
    std::size_t overlap = 0;

    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (key(a[i]) < key(b[j])) {
            ++i;
        } else if (key(b[j]) < key(a[i])) {
            ++j;
        } else {
            const double ra = a[i].rating;
            const double rb = b[j].rating;
            ++overlap;
            if (sim.kind == SimKind::cosine) {
                dot += ra * rb;
                aa += ra * ra;
                bb += rb * rb;
            } else {
                sa += ra;
                sb += rb;
                shared.emplace_back(ra, rb);
            }
            ++i;
            ++j;
        }
    }
    if (overlap < sim.min_overlap || overlap == 0) return 0.0;

    if (sim.kind == SimKind::cosine) {
        if (aa == 0.0 || bb == 0.0) return 0.0;
        return dot / (std::sqrt(aa) * std::sqrt(bb));
    }

    const double ma = sa / static_cast<double>(overlap);
    const double mb = sb / static_cast<double>(overlap);
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (const auto& [ra, rb] : shared) {
        cov += (ra - ma) * (rb - mb);
        va += (ra - ma) * (ra - ma);
        vb += (rb - mb) * (rb - mb);
    }
    if (va == 0.0 || vb == 0.0) return 0.0;
    return cov / (std::sqrt(va) * std::sqrt(vb));
}

void check_query(const RatingMatrix& matrix, std::size_t u, std::size_t item, std::size_t K) {
    if (u >= matrix.n_users())
        throw ContractViolation(fmt::format("user {} out of range (n={})", u, matrix.n_users()));
    if (item >= matrix.n_items())
        throw ContractViolation(fmt::format("item {} out of range (d={})", item,
                                            matrix.n_items()));
    if (K < 1) throw ContractViolation("neighbor count K must be >= 1");
}

double clamp_to_scale(const RatingMatrix& matrix, double value) {
    return std::clamp(value, matrix.scale().min, matrix.scale().max);
}

Prediction fallback_prediction(const RatingMatrix& matrix, std::size_t u, std::size_t item) {
    Prediction p{u, item, 0.0, 0, FallbackLevel::user_mean};
    if (auto mean = matrix.user_mean(u)) {
        p.value = clamp_to_scale(matrix, *mean);
        return p;
    }
    p.fallback = FallbackLevel::global_mean;
    p.value = clamp_to_scale(matrix, matrix.global_mean());
    return p;
}

// Shared prediction core: rank scored (similarity, neighbor, rating) rows,
// take the top K by (similarity desc, index asc), and combine. Both the
// plain and the pool-restricted user predictors pass through here, which is
// what makes their single-block equivalence structural rather than numeric.
Prediction combine_neighbors(const RatingMatrix& matrix, std::size_t u, std::size_t item,
                             std::size_t K,
                             std::vector<std::tuple<double, std::size_t, double>> scored) {
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
        return std::get<1>(a) < std::get<1>(b);
    });
    if (scored.size() > K) scored.resize(K);

    double numerator = 0.0, denominator = 0.0;
    std::size_t support = 0;
    for (const auto& [similarity, index, rating] : scored) {
        denominator += std::abs(similarity);
        if (similarity > 0.0) {
            numerator += similarity * rating;
            ++support;
        }
    }
    if (support == 0) return fallback_prediction(matrix, u, item);
    return Prediction{u, item, clamp_to_scale(matrix, numerator / denominator), support,
                      FallbackLevel::neighbors};
}

}  // namespace

double user_similarity(const RatingMatrix& matrix, std::size_t u, std::size_t v,
                       const SimilarityFn& sim) {
    if (u >= matrix.n_users() || v >= matrix.n_users())
        throw ContractViolation("user index out of range");
    return overlap_similarity(matrix.row(u), matrix.row(v), /*by_item=*/true, sim);
}

double item_similarity(const RatingMatrix& matrix, std::size_t i, std::size_t j,
                       const SimilarityFn& sim) {
    if (i >= matrix.n_items() || j >= matrix.n_items())
        throw ContractViolation("item index out of range");
    return overlap_similarity(matrix.col(i), matrix.col(j), /*by_item=*/false, sim);
}

Prediction predict_usercf(const RatingMatrix& matrix, std::size_t u, std::size_t item,
                          std::size_t K, const SimilarityFn& sim, PredictStats* stats) {
    check_query(matrix, u, item, K);
    std::vector<std::tuple<double, std::size_t, double>> scored;
    for (const Entry& e : matrix.col(item)) {
        if (e.user == u) continue;
        if (stats) ++stats->similarity_evaluations;
        scored.emplace_back(user_similarity(matrix, u, e.user, sim), e.user, e.rating);
    }
    return combine_neighbors(matrix, u, item, K, std::move(scored));
}

Prediction predict_itemcf(const RatingMatrix& matrix, std::size_t u, std::size_t item,
                          std::size_t K, const SimilarityFn& sim, PredictStats* stats) {
    check_query(matrix, u, item, K);
    std::vector<std::tuple<double, std::size_t, double>> scored;
    for (const Entry& e : matrix.row(u)) {
        if (e.item == item) continue;
        if (stats) ++stats->similarity_evaluations;
        scored.emplace_back(item_similarity(matrix, item, e.item, sim), e.item, e.rating);
    }
    return combine_neighbors(matrix, u, item, K, std::move(scored));
}

Prediction predict_hyperclass(const RatingMatrix& matrix, const HyperClass& hc, std::size_t u,
                              std::size_t item, std::size_t K, const SimilarityFn& sim,
                              PredictStats* stats) {
    check_query(matrix, u, item, K);
    if (hc.decision_feature >= matrix.n_items())
        throw ContractViolation("hyper-class decision feature out of range for this matrix");

    const std::size_t block = assign(hc, matrix.rating(u, hc.decision_feature));
    const auto& members = hc.blocks.blocks[block];

    std::vector<std::tuple<double, std::size_t, double>> scored;
    for (const Entry& e : matrix.col(item)) {
        if (e.user == u) continue;
        if (!std::binary_search(members.begin(), members.end(), e.user)) continue;
        if (stats) ++stats->similarity_evaluations;
        scored.emplace_back(user_similarity(matrix, u, e.user, sim), e.user, e.rating);
    }
    return combine_neighbors(matrix, u, item, K, std::move(scored));
}

std::vector<std::size_t> top_n(const RatingMatrix& matrix, const Predictor& predict,
                               std::size_t u, std::size_t N) {
    if (N < 1) throw ContractViolation("top_n needs N >= 1");
    if (u >= matrix.n_users()) throw ContractViolation("user index out of range");

    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t item = 0; item < matrix.n_items(); ++item) {
        if (matrix.rating(u, item)) continue;
        ranked.emplace_back(predict(u, item).value, item);
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    if (ranked.size() > N) ranked.resize(N);

    std::vector<std::size_t> items;
    items.reserve(ranked.size());
    for (const auto& [value, item] : ranked) items.push_back(item);
    return items;
}

}  // namespace hcrep
