#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hcrep/matrix.hpp"

namespace hcrep {

/// Deterministic subsetting applied while loading: once max_users distinct
/// user ids have been seen, records from further users are dropped (same for
/// items). First-appearance order makes the kept subset reproducible.
struct IngestLimits {
    std::optional<std::size_t> max_users;
    std::optional<std::size_t> max_items;
};

/// Tab-separated `user \t item \t rating \t timestamp`, no header, scale 1-5.
RatingMatrix load_movielens(const std::filesystem::path& path, const IngestLimits& limits = {});

/// Names of the columns holding the three required fields in a headered CSV.
struct CsvSchema {
    std::string user_column = "user";
    std::string item_column = "item";
    std::string rating_column = "rating";
};

RatingMatrix load_csv(const std::filesystem::path& path, const CsvSchema& schema,
                      RatingScale scale, const IngestLimits& limits = {});

/// Header `user,item,rating`, one row per entry in canonical order. Reloading
/// with load_csv yields an equal matrix provided every user and item has at
/// least one entry (ids with commas/quotes are out of scope for this format).
void save_canonical_csv(const RatingMatrix& matrix, const std::filesystem::path& path);

/// Versioned little-endian binary cache (magic "HCREPMX\0"); exact round-trip
/// including users and items that have no surviving entries.
void save_matrix_binary(const RatingMatrix& matrix, const std::filesystem::path& path);
RatingMatrix load_matrix_binary(const std::filesystem::path& path);

enum class MissingPolicy { zero, skip };

/// One item column as (sample index, value) pairs: `zero` keeps all n_users
/// samples with 0.0 fills, `skip` keeps only users who rated the item.
std::vector<std::pair<std::size_t, double>> densify_feature(const RatingMatrix& matrix,
                                                            std::size_t feature,
                                                            MissingPolicy policy);

}  // namespace hcrep
