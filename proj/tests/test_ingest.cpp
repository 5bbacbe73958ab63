#include <doctest.h>

#include <string>

#include "hcrep/errors.hpp"
#include "hcrep/ingest.hpp"
#include "hcrep/synth.hpp"
#include "fixtures.hpp"
#include "tempdir.hpp"

using namespace hcrep;
using testutil::TempDir;

TEST_SUITE_BEGIN("ingest");

TEST_CASE("movielens format: ids, duplicates, skipped blanks") {
    TempDir dir;
    const auto path = dir.file("u.data");
    testutil::write_file(path,
                         "196\t242\t3\t881250949\n"
                         "186\t302\t3\t891717742\n"
                         "\n"
                         "196\t242\t5\t881250950\n"  // same (user, item): last one wins
                         "22\t242\t1\t878887116\n");

    const RatingMatrix matrix = load_movielens(path);
    CHECK(matrix.n_users() == 3);
    CHECK(matrix.n_items() == 2);
    CHECK(matrix.entry_count() == 3);
    CHECK(matrix.duplicate_count() == 1);

    // First-appearance indexing.
    CHECK(matrix.user_id(0) == "196");
    CHECK(matrix.user_id(2) == "22");
    CHECK(matrix.item_id(0) == "242");
    CHECK(matrix.rating(0, 0) == 5.0);  // the later line replaced the earlier
    CHECK(matrix.rating(1, 1) == 3.0);
    CHECK(!matrix.rating(1, 0).has_value());
}

TEST_CASE("movielens format: malformed lines carry file and line context") {
    TempDir dir;

    const auto three_fields = dir.file("three.data");
    testutil::write_file(three_fields, "1\t2\t3\n");
    CHECK_THROWS_AS(load_movielens(three_fields), ParseError);

    const auto bad_rating = dir.file("rating.data");
    testutil::write_file(bad_rating, "1\t2\tx\t0\n");
    CHECK_THROWS_WITH_AS(load_movielens(bad_rating),
                         doctest::Contains("rating.data:1"), ParseError);

    const auto out_of_scale = dir.file("scale.data");
    testutil::write_file(out_of_scale, "1\t2\t9\t0\n");
    CHECK_THROWS_AS(load_movielens(out_of_scale), ValidationError);

    const auto empty_id = dir.file("emptyid.data");
    testutil::write_file(empty_id, "\t2\t3\t0\n");
    CHECK_THROWS_AS(load_movielens(empty_id), ParseError);

    CHECK_THROWS_AS(load_movielens(dir.file("missing.data")), IoError);
}

TEST_CASE("csv format: schema mapping and errors") {
    TempDir dir;
    CsvSchema schema;
    schema.user_column = "uid";
    schema.item_column = "movie";
    schema.rating_column = "score";
    const RatingScale scale{1, 10};

    const auto good = dir.file("good.csv");
    testutil::write_file(good,
                         "uid,movie,score,extra\n"
                         "a,m1,7,zzz\n"
                         "b,m1,2,zzz\n"
                         "a,m2,10,zzz\n");
    const RatingMatrix matrix = load_csv(good, schema, scale);
    CHECK(matrix.n_users() == 2);
    CHECK(matrix.n_items() == 2);
    CHECK(matrix.rating(0, 1) == 10.0);
    CHECK(matrix.scale().max == 10.0);

    const auto missing_column = dir.file("col.csv");
    testutil::write_file(missing_column, "uid,movie\na,m1\n");
    CHECK_THROWS_AS(load_csv(missing_column, schema, scale), SchemaError);

    const auto empty = dir.file("empty.csv");
    testutil::write_file(empty, "");
    CHECK_THROWS_AS(load_csv(empty, schema, scale), SchemaError);

    const auto ragged = dir.file("ragged.csv");
    testutil::write_file(ragged, "uid,movie,score\na,m1\n");
    CHECK_THROWS_AS(load_csv(ragged, schema, scale), ParseError);
}

TEST_CASE("canonical csv round trip") {
    TempDir dir;
    const RatingMatrix original = fixtures::cf3();
    const auto path = dir.file("canon.csv");
    save_canonical_csv(original, path);

    const std::string text = testutil::read_file(path);
    CHECK(text.substr(0, text.find('\n')) == "user,item,rating");

    const RatingMatrix reloaded = load_csv(path, CsvSchema{}, original.scale());
    CHECK(reloaded == original);
}

TEST_CASE("binary cache: exact round trip, including entry-less users") {
    TempDir dir;

    // Built through from_parts so one user and one item have no entries at
    // all — the cache must preserve them, unlike the text formats.
    const RatingMatrix original = RatingMatrix::from_parts(
        RatingScale{1, 5}, {"a", "b", "c"}, {"x", "y"},
        {{0, 0, 4.0}, {2, 0, 2.5}});

    const auto path = dir.file("m.bin");
    save_matrix_binary(original, path);
    const RatingMatrix reloaded = load_matrix_binary(path);
    CHECK(reloaded == original);
    CHECK(reloaded.n_users() == 3);
    CHECK(reloaded.user_id(1) == "b");
    CHECK(reloaded.row(1).empty());
    CHECK(reloaded.n_items() == 2);
    CHECK(reloaded.col(1).empty());
}

TEST_CASE("binary cache: corruption is diagnosed, not crashed on") {
    TempDir dir;
    const auto path = dir.file("m.bin");
    save_matrix_binary(fixtures::cf3(), path);
    const std::string bytes = testutil::read_file(path);

    const auto truncated = dir.file("trunc.bin");
    testutil::write_file(truncated, bytes.substr(0, bytes.size() - 5));
    CHECK_THROWS_WITH_AS(load_matrix_binary(truncated), doctest::Contains("truncated"),
                         ParseError);

    const auto bad_magic = dir.file("magic.bin");
    testutil::write_file(bad_magic, "XXXXXXXX" + bytes.substr(8));
    CHECK_THROWS_AS(load_matrix_binary(bad_magic), ParseError);

    std::string versioned = bytes;
    versioned[8] = 99;  // the version u32 sits right after the 8-byte magic
    const auto bad_version = dir.file("version.bin");
    testutil::write_file(bad_version, versioned);
    CHECK_THROWS_AS(load_matrix_binary(bad_version), SchemaError);

    const auto trailing = dir.file("trailing.bin");
    testutil::write_file(trailing, bytes + "junk");
    CHECK_THROWS_AS(load_matrix_binary(trailing), ParseError);
}

TEST_CASE("ingest limits keep the first distinct ids") {
    TempDir dir;
    const auto path = dir.file("u.data");
    testutil::write_file(path,
                         "A\ti1\t3\t0\n"
                         "B\ti2\t4\t0\n"
                         "C\ti1\t5\t0\n"  // third user: dropped under max_users = 2
                         "A\ti3\t2\t0\n"  // third item: dropped under max_items = 2
                         "B\ti1\t1\t0\n");

    IngestLimits limits;
    limits.max_users = 2;
    limits.max_items = 2;
    const RatingMatrix matrix = load_movielens(path, limits);
    CHECK(matrix.n_users() == 2);
    CHECK(matrix.n_items() == 2);
    CHECK(matrix.entry_count() == 3);  // A/i1, B/i2, B/i1 survive
    CHECK(matrix.user_id(0) == "A");
    CHECK(matrix.user_id(1) == "B");
    CHECK(matrix.item_id(0) == "i1");
    CHECK(matrix.item_id(1) == "i2");
}

TEST_CASE("densify_feature: zero fill vs skip") {
    const RatingMatrix matrix = fixtures::cf3();  // u0 did not rate i2

    const auto zero = densify_feature(matrix, 2, MissingPolicy::zero);
    REQUIRE(zero.size() == 3);
    CHECK(zero[0] == std::pair<std::size_t, double>{0, 0.0});
    CHECK(zero[1] == std::pair<std::size_t, double>{1, 5.0});

    const auto skip = densify_feature(matrix, 2, MissingPolicy::skip);
    REQUIRE(skip.size() == 2);
    CHECK(skip[0] == std::pair<std::size_t, double>{1, 5.0});
    CHECK(skip[1] == std::pair<std::size_t, double>{2, 1.0});
}

TEST_CASE("synthetic data round trips through the movielens format") {
    TempDir dir;
    SynthConfig config;
    config.n_users = 40;
    config.n_items = 15;
    config.groups = 3;
    config.ratings_per_user = 6;
    config.seed = 11;

    const auto path = dir.file("synth.data");
    write_synthetic_movielens(config, path);
    CHECK(load_movielens(path) == make_synthetic(config));
}

TEST_SUITE_END();
