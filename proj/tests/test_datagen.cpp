// Seeded generators: determinism, multiplicity caps, capacity clamping,
// query validity, and the shaped census-style benchmark dataset.

#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "hdc/datagen.hpp"
#include "test_support.hpp"

using namespace hdc;

TEST_CASE("bounded draws stay in range and hit every value") {
    Rng rng(5);
    CHECK(rng.below(1) == 0);
    std::set<Value> seen;
    for (int i = 0; i < 300; ++i) {
        const Value v = rng.range(-3, 3);
        CHECK(v >= -3);
        CHECK(v <= 3);
        seen.insert(v);
    }
    CHECK(seen.size() == 7);
    CHECK(rng.range(-5, -5) == -5);

    Rng a(42), b(42);
    for (int i = 0; i < 50; ++i) REQUIRE(a.next() == b.next());
}

TEST_CASE("dataset generators are deterministic in the seed") {
    const Dataset a = random_numeric_dataset(11, 3, 400, 4);
    const Dataset b = random_numeric_dataset(11, 3, 400, 4);
    REQUIRE(support::dataset_rows(a) == support::dataset_rows(b));
    REQUIRE(a.schema.attributes.size() == b.schema.attributes.size());
    for (std::size_t i = 0; i < a.schema.arity(); ++i) {
        CHECK(a.schema.attributes[i].lo == b.schema.attributes[i].lo);
        CHECK(a.schema.attributes[i].hi == b.schema.attributes[i].hi);
    }
    const Dataset c = random_numeric_dataset(12, 3, 400, 4);
    CHECK(support::dataset_rows(a) != support::dataset_rows(c));

    const Dataset m1 = random_mixed_dataset(9, {3, 5}, 2, 300, 4);
    const Dataset m2 = random_mixed_dataset(9, {3, 5}, 2, 300, 4);
    REQUIRE(support::dataset_rows(m1) == support::dataset_rows(m2));
}

TEST_CASE("generators respect the multiplicity cap") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const std::int64_t cap = 1 + static_cast<std::int64_t>(seed) % 3;
        const Dataset num = random_numeric_dataset(seed, 2, 300, cap);
        CHECK_FALSE(validate_instance(num, cap).has_value());
        const Dataset cat = random_categorical_dataset(seed, {3, 4, 3}, 300, cap);
        CHECK_FALSE(validate_instance(cat, cap).has_value());
        const Dataset mix = random_mixed_dataset(seed, {4}, 1, 300, cap);
        CHECK_FALSE(validate_instance(mix, cap).has_value());
    }
}

TEST_CASE("tiny domains clamp the row count instead of looping forever") {
    const Dataset a = random_categorical_dataset(3, {2, 2}, 100, 1);
    CHECK(a.size() == 3);  // 80% of the 4-point capacity
    const Dataset b = random_categorical_dataset(3, {2, 2}, 100, 2);
    CHECK(b.size() == 6);
    const Dataset c = random_categorical_dataset(3, {2, 2}, 5, 2);
    CHECK(c.size() == 5);
    CHECK_FALSE(validate_instance(a, 1).has_value());
}

TEST_CASE("random queries are valid for their schema") {
    const Dataset mixed = random_mixed_dataset(21, {3, 4}, 2, 100, 4);
    Rng rng(7);
    for (int i = 0; i < 500; ++i)
        CHECK_NOTHROW(validate_query(mixed.schema, random_query(mixed.schema, rng)));

    const Query all_wild = random_query(mixed.schema, rng, 1.0);
    for (const auto& p : all_wild.predicates) CHECK(p.kind == Predicate::Kind::Wildcard);
    const Query none_wild = random_query(mixed.schema, rng, 0.0);
    for (const auto& p : none_wild.predicates) CHECK(p.kind != Predicate::Kind::Wildcard);
}

TEST_CASE("the census-style dataset has the declared shape") {
    const Dataset ds = adult_like_dataset(7);
    CHECK(ds.size() == 45222);
    CHECK(ds.schema.arity() == 14);
    CHECK(ds.schema.categorical_count() == 8);
    CHECK(ds.schema.name_of(0) == "sex");
    CHECK(ds.schema.name_of(6) == "occupation");
    CHECK(ds.schema.name_of(7) == "native_country");
    CHECK(ds.schema.name_of(13) == "fnlwgt");
    const std::vector<Value> domains = {2, 5, 6, 6, 7, 8, 14, 41};
    for (std::size_t i = 0; i < domains.size(); ++i)
        CHECK(ds.schema.attributes[i].domain == domains[i]);
    CHECK(ds.schema.attributes[8].lo == 1);
    CHECK(ds.schema.attributes[8].hi == 16);
    CHECK(ds.schema.attributes[13].lo == 10000);
    CHECK_NOTHROW(validate_dataset(ds));

    const Dataset again = adult_like_dataset(7);
    REQUIRE(support::dataset_rows(ds) == support::dataset_rows(again));
    CHECK(support::dataset_rows(adult_like_dataset(8)) != support::dataset_rows(ds));

    const Dataset small = adult_like_dataset(7, 4522);
    CHECK(small.size() == 4522);
}

TEST_CASE("the census-style dataset concentrates mass on few deep prefixes") {
    const Dataset ds = adult_like_dataset(7);

    std::map<Tuple, std::size_t> prefix_counts;
    for (const auto& rec : ds.records)
        ++prefix_counts[Tuple(rec.values.begin(), rec.values.begin() + 6)];
    std::size_t heavy = 0;
    for (const auto& [prefix, count] : prefix_counts)
        if (count >= 1000) ++heavy;
    CHECK(heavy == 16);

    // The first 1000 rows carry the first planted prefix.
    const Tuple first(ds.records[0].values.begin(), ds.records[0].values.begin() + 6);
    CHECK(first == Tuple{1, 2, 3, 4, 2, 1});
    CHECK(prefix_counts[first] >= 1000);
    CHECK(prefix_counts[first] <= 1030);
}

TEST_CASE("the census-style occupation attribute mixes heavy and rare values") {
    const Dataset ds = adult_like_dataset(7);
    std::vector<std::size_t> occ(15, 0);
    for (const auto& rec : ds.records) ++occ[static_cast<std::size_t>(rec.values[6])];
    for (Value v = 1; v <= 10; ++v) CHECK(occ[static_cast<std::size_t>(v)] > 2000);
    for (Value v = 11; v <= 14; ++v) {
        CHECK(occ[static_cast<std::size_t>(v)] > 50);
        CHECK(occ[static_cast<std::size_t>(v)] < 230);
    }
}

TEST_CASE("the census-style numeric attributes keep a strict distinct-count order") {
    const Dataset ds = adult_like_dataset(7);
    auto distinct = [&](std::size_t attr) {
        std::set<Value> s;
        for (const auto& rec : ds.records) s.insert(rec.values[attr]);
        return s.size();
    };
    const std::size_t edu = distinct(8), age = distinct(9), hours = distinct(10),
                      cap_loss = distinct(11), cap_gain = distinct(12), fnlwgt = distinct(13);
    CHECK(edu < age);
    CHECK(age < hours);
    CHECK(hours < cap_loss);
    CHECK(cap_loss < cap_gain);
    CHECK(cap_gain < fnlwgt);
    CHECK(edu == 16);
}
