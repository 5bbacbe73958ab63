#include "hcrep/ingest.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fmt/format.h>
#include <fstream>
#include <unordered_set>

#include "hcrep/errors.hpp"

namespace hcrep {

namespace {

std::ifstream open_for_read(const std::filesystem::path& path, std::ios::openmode mode) {
    std::ifstream in(path, mode);
    if (!in) throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
    return in;
}

double parse_rating(std::string_view text, const std::filesystem::path& path,
                    std::size_t line_no) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw ParseError(fmt::format("{}:{}: rating '{}' is not a number", path.string(), line_no,
                                     std::string(text)));
    return value;
}

// Tracks the distinct ids seen so far so loading can stop admitting new ones
// once a cap is reached; records referencing an already-admitted id still load.
class LimitGate {
public:
    explicit LimitGate(std::optional<std::size_t> cap) : cap_(cap) {}

    bool admits(const std::string& id) {
        if (!cap_) return true;
        if (seen_.contains(id)) return true;
        if (seen_.size() >= *cap_) return false;
        seen_.insert(id);
        return true;
    }

private:
    std::optional<std::size_t> cap_;
    std::unordered_set<std::string> seen_;
};

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

}  // namespace

RatingMatrix load_movielens(const std::filesystem::path& path, const IngestLimits& limits) {
    std::ifstream in = open_for_read(path, std::ios::in);
    RatingMatrixBuilder builder(RatingScale{1.0, 5.0});
    LimitGate users(limits.max_users);
    LimitGate items(limits.max_items);

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = strip_cr(line);
        if (text.empty()) continue;
        const auto fields = split(text, '\t');
        if (fields.size() != 4)
            throw ParseError(fmt::format("{}:{}: expected 4 tab-separated fields, got {}",
                                         path.string(), line_no, fields.size()));
        const std::string user(fields[0]);
        const std::string item(fields[1]);
        if (user.empty() || item.empty())
            throw ParseError(fmt::format("{}:{}: empty identifier", path.string(), line_no));
        const double rating = parse_rating(fields[2], path, line_no);
        if (!users.admits(user) || !items.admits(item)) continue;
        builder.add(user, item, rating);
    }
    return std::move(builder).build();
}

RatingMatrix load_csv(const std::filesystem::path& path, const CsvSchema& schema,
                      RatingScale scale, const IngestLimits& limits) {
    std::ifstream in = open_for_read(path, std::ios::in);
    std::string line;
    if (!std::getline(in, line))
        throw SchemaError(fmt::format("{}: missing header row", path.string()));

    const auto header = split(strip_cr(line), ',');
    auto column_of = [&](const std::string& name) -> std::size_t {
        for (std::size_t c = 0; c < header.size(); ++c)
            if (header[c] == name) return c;
        throw SchemaError(fmt::format("{}: no column named '{}'", path.string(), name));
    };
    const std::size_t user_col = column_of(schema.user_column);
    const std::size_t item_col = column_of(schema.item_column);
    const std::size_t rating_col = column_of(schema.rating_column);

    RatingMatrixBuilder builder(scale);
    LimitGate users(limits.max_users);
    LimitGate items(limits.max_items);

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = strip_cr(line);
        if (text.empty()) continue;
        const auto fields = split(text, ',');
        if (fields.size() <= std::max({user_col, item_col, rating_col}))
            throw ParseError(fmt::format("{}:{}: expected at least {} fields, got {}",
                                         path.string(), line_no,
                                         std::max({user_col, item_col, rating_col}) + 1,
                                         fields.size()));
        const std::string user(fields[user_col]);
        const std::string item(fields[item_col]);
        if (user.empty() || item.empty())
            throw ParseError(fmt::format("{}:{}: empty identifier", path.string(), line_no));
        const double rating = parse_rating(fields[rating_col], path, line_no);
        if (!users.admits(user) || !items.admits(item)) continue;
        builder.add(user, item, rating);
    }
    return std::move(builder).build();
}

void save_canonical_csv(const RatingMatrix& matrix, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::out | std::ios::trunc | std::ios::binary);
    if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
    out << "user,item,rating\n";
    for (const Entry& e : matrix.entries())
        out << matrix.user_id(e.user) << ',' << matrix.item_id(e.item) << ','
            << fmt::format("{}", e.rating) << '\n';
    if (!out) throw IoError(fmt::format("write to '{}' failed", path.string()));
}

namespace {

constexpr char kMagic[8] = {'H', 'C', 'R', 'E', 'P', 'M', 'X', '\0'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& buf, std::uint32_t v) {
    for (int shift = 0; shift < 32; shift += 8)
        buf.push_back(static_cast<char>((v >> shift) & 0xff));
}

void put_u64(std::string& buf, std::uint64_t v) {
    for (int shift = 0; shift < 64; shift += 8)
        buf.push_back(static_cast<char>((v >> shift) & 0xff));
}

void put_f64(std::string& buf, double v) { put_u64(buf, std::bit_cast<std::uint64_t>(v)); }

void put_string(std::string& buf, const std::string& s) {
    put_u32(buf, static_cast<std::uint32_t>(s.size()));
    buf.append(s);
}

class ByteReader {
public:
    ByteReader(std::string data, std::filesystem::path path)
        : data_(std::move(data)), path_(std::move(path)) {}

    std::uint32_t u32() { return static_cast<std::uint32_t>(raw(4)); }
    std::uint64_t u64() { return raw(8); }
    double f64() { return std::bit_cast<double>(raw(8)); }

    std::string str() {
        const std::uint32_t len = u32();
        need(len);
        std::string s = data_.substr(pos_, len);
        pos_ += len;
        return s;
    }

    void expect_magic() {
        need(sizeof(kMagic));
        if (std::memcmp(data_.data() + pos_, kMagic, sizeof(kMagic)) != 0)
            throw ParseError(fmt::format("{}: not a matrix cache file", path_.string()));
        pos_ += sizeof(kMagic);
    }

    void expect_end() const {
        if (pos_ != data_.size())
            throw ParseError(fmt::format("{}: {} trailing bytes", path_.string(),
                                         data_.size() - pos_));
    }

private:
    std::uint64_t raw(std::size_t bytes) {
        need(bytes);
        std::uint64_t v = 0;
        for (std::size_t b = 0; b < bytes; ++b)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + b]))
                 << (8 * b);
        pos_ += bytes;
        return v;
    }

    void need(std::size_t bytes) const {
        if (pos_ + bytes > data_.size())
            throw ParseError(fmt::format("{}: truncated matrix cache", path_.string()));
    }

    std::string data_;
    std::filesystem::path path_;
    std::size_t pos_ = 0;
};

}  // namespace

void save_matrix_binary(const RatingMatrix& matrix, const std::filesystem::path& path) {
    std::string buf;
    buf.append(kMagic, sizeof(kMagic));
    put_u32(buf, kVersion);
    put_f64(buf, matrix.scale().min);
    put_f64(buf, matrix.scale().max);
    put_u64(buf, matrix.n_users());
    put_u64(buf, matrix.n_items());
    for (std::size_t u = 0; u < matrix.n_users(); ++u) put_string(buf, matrix.user_id(u));
    for (std::size_t i = 0; i < matrix.n_items(); ++i) put_string(buf, matrix.item_id(i));
    put_u64(buf, matrix.entry_count());
    for (const Entry& e : matrix.entries()) {
        put_u32(buf, e.user);
        put_u32(buf, e.item);
        put_f64(buf, e.rating);
    }

    std::ofstream out(path, std::ios::out | std::ios::trunc | std::ios::binary);
    if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw IoError(fmt::format("write to '{}' failed", path.string()));
}

RatingMatrix load_matrix_binary(const std::filesystem::path& path) {
    std::ifstream in = open_for_read(path, std::ios::in | std::ios::binary);
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    ByteReader reader(std::move(data), path);

    reader.expect_magic();
    const std::uint32_t version = reader.u32();
    if (version != kVersion)
        throw SchemaError(fmt::format("{}: unsupported cache version {}", path.string(), version));

    RatingScale scale{reader.f64(), reader.f64()};
    const std::uint64_t n_users = reader.u64();
    const std::uint64_t n_items = reader.u64();
    std::vector<std::string> user_ids;
    user_ids.reserve(n_users);
    for (std::uint64_t u = 0; u < n_users; ++u) user_ids.push_back(reader.str());
    std::vector<std::string> item_ids;
    item_ids.reserve(n_items);
    for (std::uint64_t i = 0; i < n_items; ++i) item_ids.push_back(reader.str());

    const std::uint64_t entry_count = reader.u64();
    std::vector<Entry> entries;
    entries.reserve(entry_count);
    for (std::uint64_t n = 0; n < entry_count; ++n) {
        Entry e;
        e.user = reader.u32();
        e.item = reader.u32();
        e.rating = reader.f64();
        entries.push_back(e);
    }
    reader.expect_end();
    return RatingMatrix::from_parts(scale, std::move(user_ids), std::move(item_ids),
                                    std::move(entries));
}

std::vector<std::pair<std::size_t, double>> densify_feature(const RatingMatrix& matrix,
                                                            std::size_t feature,
                                                            MissingPolicy policy) {
    if (feature >= matrix.n_items())
        throw ContractViolation(fmt::format("feature {} out of range (d={})", feature,
                                            matrix.n_items()));
    std::vector<std::pair<std::size_t, double>> column;
    if (policy == MissingPolicy::skip) {
        for (const Entry& e : matrix.col(feature)) column.emplace_back(e.user, e.rating);
        return column;
    }
    column.assign(matrix.n_users(), {0, 0.0});
    for (std::size_t s = 0; s < matrix.n_users(); ++s) column[s].first = s;
    for (const Entry& e : matrix.col(feature)) column[e.user].second = e.rating;
    return column;
}

}  // namespace hcrep
