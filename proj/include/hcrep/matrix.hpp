#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace hcrep {

struct RatingScale {
    double min = 1.0;
    double max = 5.0;

    bool contains(double r) const { return r >= min && r <= max; }
    double midpoint() const { return 0.5 * (min + max); }
    bool operator==(const RatingScale&) const = default;
};

struct RatingRecord {
    std::string user_id;
    std::string item_id;
    double rating = 0.0;
    std::optional<std::int64_t> timestamp;  // carried through ingestion, never read by algorithms
};

struct Entry {
    std::uint32_t user = 0;
    std::uint32_t item = 0;
    double rating = 0.0;

    bool operator==(const Entry&) const = default;
};

/// Immutable sparse users x items rating matrix. Indices are assigned by
/// first appearance of an identifier during construction, entries are kept
/// in canonical (user, item) order, and an item-major copy is maintained so
/// both user rows and item columns are cheap to scan. Safe to share across
/// concurrent readers once built.
class RatingMatrix {
public:
    RatingMatrix() = default;

    /// Reassemble a matrix from already-indexed parts (the deserialization
    /// path). Validates id uniqueness, index ranges, scale membership and
    /// (user,item) uniqueness; throws ValidationError on any breach.
    static RatingMatrix from_parts(RatingScale scale, std::vector<std::string> user_ids,
                                   std::vector<std::string> item_ids, std::vector<Entry> entries);

    std::size_t n_users() const { return user_ids_.size(); }
    std::size_t n_items() const { return item_ids_.size(); }
    std::size_t entry_count() const { return entries_.size(); }
    const RatingScale& scale() const { return scale_; }

    const std::string& user_id(std::size_t u) const { return user_ids_.at(u); }
    const std::string& item_id(std::size_t i) const { return item_ids_.at(i); }
    std::optional<std::size_t> user_index(const std::string& id) const;
    std::optional<std::size_t> item_index(const std::string& id) const;

    /// Canonical entry list, sorted by (user, item). Fold definitions and
    /// serialization are stated in terms of positions in this list.
    std::span<const Entry> entries() const { return entries_; }

    /// All ratings of one user, ascending item index.
    std::span<const Entry> row(std::size_t user) const;
    /// All ratings of one item, ascending user index.
    std::span<const Entry> col(std::size_t item) const;

    std::optional<double> rating(std::size_t user, std::size_t item) const;

    std::optional<double> user_mean(std::size_t user) const;
    /// Mean over all entries; midpoint of the scale when the matrix is empty.
    double global_mean() const;

    /// (user,item) collisions resolved last-write-wins during construction.
    std::size_t duplicate_count() const { return duplicates_; }

    /// Same identifiers, dimensions and scale; only entries with keep[pos]
    /// set survive. keep.size() must equal entry_count().
    RatingMatrix filtered(const std::vector<bool>& keep) const;

    /// Structural equality: dimensions, scale, identifier maps and entries.
    /// Ingestion metadata (duplicate_count) is not part of matrix identity.
    bool operator==(const RatingMatrix& other) const;

private:
    friend class RatingMatrixBuilder;
    void rebuild_derived();

    RatingScale scale_{};
    std::vector<std::string> user_ids_;
    std::vector<std::string> item_ids_;
    std::unordered_map<std::string, std::uint32_t> user_index_;
    std::unordered_map<std::string, std::uint32_t> item_index_;
    std::vector<Entry> entries_;          // sorted (user, item)
    std::vector<std::size_t> row_offsets_;
    std::vector<Entry> by_item_;          // sorted (item, user)
    std::vector<std::size_t> col_offsets_;
    std::vector<double> user_sums_;
    double global_sum_ = 0.0;
    std::size_t duplicates_ = 0;
};

/// Accumulates rating records and produces a RatingMatrix. Identifier order
/// is first appearance; repeated (user, item) pairs keep the last rating and
/// bump the duplicate counter.
class RatingMatrixBuilder {
public:
    explicit RatingMatrixBuilder(RatingScale scale = {}) { matrix_.scale_ = scale; }

    /// Throws ValidationError if the rating is outside the declared scale.
    void add(const std::string& user_id, const std::string& item_id, double rating);
    void add(const RatingRecord& record) { add(record.user_id, record.item_id, record.rating); }

    std::size_t record_count() const { return records_; }
    std::size_t duplicate_count() const { return matrix_.duplicates_; }

    RatingMatrix build() &&;

private:
    RatingMatrix matrix_;
    std::unordered_map<std::uint64_t, std::size_t> slot_;  // (user,item) -> staged entry position
    std::vector<Entry> staged_;
    std::size_t records_ = 0;
};

}  // namespace hcrep
