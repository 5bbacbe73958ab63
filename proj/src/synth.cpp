#include "hcrep/synth.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <fstream>
#include <string>
#include <vector>

#include "hcrep/errors.hpp"
#include "hcrep/rng.hpp"

namespace hcrep {

namespace {

struct RawRating {
    std::size_t user;
    std::size_t item;
    double rating;
};

void check_config(const SynthConfig& config) {
    if (config.groups < 2 || config.groups > 5)
        throw ConfigError("groups must be between 2 and 5 (item 0 stores the group id as a rating)");
    if (config.n_users < config.groups)
        throw ConfigError("need at least one user per group");
    if (config.n_items < 2) throw ConfigError("need at least two items");
    if (config.ratings_per_user < 1 || config.ratings_per_user > config.n_items)
        throw ConfigError("ratings_per_user must be in [1, n_items]");
    if (config.noise < 0.0 || config.noise > 1.0) throw ConfigError("noise must be in [0, 1]");
}

std::vector<RawRating> generate(const SynthConfig& config) {
    check_config(config);
    DetRng rng(config.seed);

    // Per-(group, item) mean ratings.
    std::vector<std::vector<double>> mean(config.groups,
                                          std::vector<double>(config.n_items, 0.0));
    for (std::size_t g = 0; g < config.groups; ++g)
        for (std::size_t i = 0; i < config.n_items; ++i)
            mean[g][i] = 1.0 + static_cast<double>(rng.bounded(5));

    std::vector<RawRating> ratings;
    ratings.reserve(config.n_users * config.ratings_per_user);
    std::vector<std::size_t> pool(config.n_items - 1);
    for (std::size_t u = 0; u < config.n_users; ++u) {
        const std::size_t group = u % config.groups;
        ratings.push_back({u, 0, static_cast<double>(group + 1)});

        // Draw ratings_per_user - 1 distinct items from [1, n_items) by a
        // partial shuffle of the candidate pool.
        for (std::size_t i = 0; i + 1 < config.n_items; ++i) pool[i] = i + 1;
        const std::size_t extra = config.ratings_per_user - 1;
        for (std::size_t t = 0; t < extra; ++t) {
            const std::size_t j = t + rng.bounded(pool.size() - t);
            std::swap(pool[t], pool[j]);
        }
        for (std::size_t t = 0; t < extra; ++t) {
            const std::size_t item = pool[t];
            double value = mean[group][item];
            const double p = rng.unit();
            if (p < config.noise / 2.0)
                value -= 1.0;
            else if (p < config.noise)
                value += 1.0;
            ratings.push_back({u, item, std::clamp(value, 1.0, 5.0)});
        }
    }
    return ratings;
}

}  // namespace

RatingMatrix make_synthetic(const SynthConfig& config) {
    RatingMatrixBuilder builder(RatingScale{1.0, 5.0});
    for (const RawRating& r : generate(config))
        builder.add(std::to_string(r.user + 1), std::to_string(r.item + 1), r.rating);
    return std::move(builder).build();
}

void write_synthetic_movielens(const SynthConfig& config, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::out | std::ios::trunc | std::ios::binary);
    if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
    for (const RawRating& r : generate(config))
        out << r.user + 1 << '\t' << r.item + 1 << '\t' << fmt::format("{}", r.rating) << "\t0\n";
    if (!out) throw IoError(fmt::format("write to '{}' failed", path.string()));
}

}  // namespace hcrep
