#include "hcrep/matrix.hpp"

#include <algorithm>
#include <fmt/format.h>

#include "hcrep/errors.hpp"

namespace hcrep {

RatingMatrix RatingMatrix::from_parts(RatingScale scale, std::vector<std::string> user_ids,
                                      std::vector<std::string> item_ids,
                                      std::vector<Entry> entries) {
    RatingMatrix m;
    m.scale_ = scale;
    m.user_ids_ = std::move(user_ids);
    m.item_ids_ = std::move(item_ids);
    for (std::size_t u = 0; u < m.user_ids_.size(); ++u)
        if (!m.user_index_.emplace(m.user_ids_[u], static_cast<std::uint32_t>(u)).second)
            throw ValidationError(fmt::format("duplicate user id '{}'", m.user_ids_[u]));
    for (std::size_t i = 0; i < m.item_ids_.size(); ++i)
        if (!m.item_index_.emplace(m.item_ids_[i], static_cast<std::uint32_t>(i)).second)
            throw ValidationError(fmt::format("duplicate item id '{}'", m.item_ids_[i]));
    std::unordered_map<std::uint64_t, bool> seen;
    for (const Entry& e : entries) {
        if (e.user >= m.n_users() || e.item >= m.n_items())
            throw ValidationError(fmt::format("entry ({}, {}) out of range", e.user, e.item));
        if (!scale.contains(e.rating))
            throw ValidationError(fmt::format("rating {} outside scale [{}, {}]", e.rating,
                                              scale.min, scale.max));
        const std::uint64_t key = (static_cast<std::uint64_t>(e.user) << 32) | e.item;
        if (!seen.emplace(key, true).second)
            throw ValidationError(fmt::format("duplicate entry for ({}, {})", e.user, e.item));
    }
    m.entries_ = std::move(entries);
    m.rebuild_derived();
    return m;
}

std::optional<std::size_t> RatingMatrix::user_index(const std::string& id) const {
    auto it = user_index_.find(id);
    if (it == user_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> RatingMatrix::item_index(const std::string& id) const {
    auto it = item_index_.find(id);
    if (it == item_index_.end()) return std::nullopt;
    return it->second;
}

std::span<const Entry> RatingMatrix::row(std::size_t user) const {
    if (user >= n_users()) throw ContractViolation(fmt::format("user index {} out of range", user));
    return {entries_.data() + row_offsets_[user], row_offsets_[user + 1] - row_offsets_[user]};
}

std::span<const Entry> RatingMatrix::col(std::size_t item) const {
    if (item >= n_items()) throw ContractViolation(fmt::format("item index {} out of range", item));
    return {by_item_.data() + col_offsets_[item], col_offsets_[item + 1] - col_offsets_[item]};
}

std::optional<double> RatingMatrix::rating(std::size_t user, std::size_t item) const {
    auto r = row(user);
    auto it = std::lower_bound(r.begin(), r.end(), item,
                               [](const Entry& e, std::size_t i) { return e.item < i; });
    if (it == r.end() || it->item != item) return std::nullopt;
    return it->rating;
}

std::optional<double> RatingMatrix::user_mean(std::size_t user) const {
    auto r = row(user);
    if (r.empty()) return std::nullopt;
    return user_sums_[user] / static_cast<double>(r.size());
}

double RatingMatrix::global_mean() const {
    if (entries_.empty()) return scale_.midpoint();
    return global_sum_ / static_cast<double>(entries_.size());
}

RatingMatrix RatingMatrix::filtered(const std::vector<bool>& keep) const {
    if (keep.size() != entries_.size())
        throw ContractViolation("filter mask length does not match entry count");
    RatingMatrix out;
    out.scale_ = scale_;
    out.user_ids_ = user_ids_;
    out.item_ids_ = item_ids_;
    out.user_index_ = user_index_;
    out.item_index_ = item_index_;
    out.entries_.reserve(entries_.size());
    for (std::size_t pos = 0; pos < entries_.size(); ++pos)
        if (keep[pos]) out.entries_.push_back(entries_[pos]);
    out.rebuild_derived();
    return out;
}

bool RatingMatrix::operator==(const RatingMatrix& other) const {
    return scale_ == other.scale_ && user_ids_ == other.user_ids_ &&
           item_ids_ == other.item_ids_ && entries_ == other.entries_;
}

void RatingMatrix::rebuild_derived() {
    std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
        return a.user != b.user ? a.user < b.user : a.item < b.item;
    });
    row_offsets_.assign(n_users() + 1, 0);
    for (const Entry& e : entries_) ++row_offsets_[e.user + 1];
    for (std::size_t u = 0; u < n_users(); ++u) row_offsets_[u + 1] += row_offsets_[u];

    by_item_ = entries_;
    std::sort(by_item_.begin(), by_item_.end(), [](const Entry& a, const Entry& b) {
        return a.item != b.item ? a.item < b.item : a.user < b.user;
    });
    col_offsets_.assign(n_items() + 1, 0);
    for (const Entry& e : by_item_) ++col_offsets_[e.item + 1];
    for (std::size_t i = 0; i < n_items(); ++i) col_offsets_[i + 1] += col_offsets_[i];

    user_sums_.assign(n_users(), 0.0);
    global_sum_ = 0.0;
    for (const Entry& e : entries_) {
        user_sums_[e.user] += e.rating;
        global_sum_ += e.rating;
    }
}

void RatingMatrixBuilder::add(const std::string& user_id, const std::string& item_id,
                              double rating) {
    if (!matrix_.scale_.contains(rating))
        throw ValidationError(fmt::format("rating {} outside scale [{}, {}]", rating,
                                          matrix_.scale_.min, matrix_.scale_.max));
    ++records_;
    auto user_it = matrix_.user_index_.find(user_id);
    if (user_it == matrix_.user_index_.end()) {
        user_it = matrix_.user_index_
                      .emplace(user_id, static_cast<std::uint32_t>(matrix_.user_ids_.size()))
                      .first;
        matrix_.user_ids_.push_back(user_id);
    }
    auto item_it = matrix_.item_index_.find(item_id);
    if (item_it == matrix_.item_index_.end()) {
        item_it = matrix_.item_index_
                      .emplace(item_id, static_cast<std::uint32_t>(matrix_.item_ids_.size()))
                      .first;
        matrix_.item_ids_.push_back(item_id);
    }
    const std::uint32_t u = user_it->second;
    const std::uint32_t i = item_it->second;
    const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | i;
    auto slot_it = slot_.find(key);
    if (slot_it != slot_.end()) {
        staged_[slot_it->second].rating = rating;  // last write wins
        ++matrix_.duplicates_;
        return;
    }
    slot_.emplace(key, staged_.size());
    staged_.push_back(Entry{u, i, rating});
}

RatingMatrix RatingMatrixBuilder::build() && {
    matrix_.entries_ = std::move(staged_);
    matrix_.rebuild_derived();
    return std::move(matrix_);
}

}  // namespace hcrep
