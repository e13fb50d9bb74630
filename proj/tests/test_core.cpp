// Data model: attribute specs, schemas, predicates, priorities, validation.

#include <catch2/catch_amalgamated.hpp>

#include "hdc/core.hpp"
#include "test_support.hpp"

using namespace hdc;

TEST_CASE("attribute factories validate their arguments") {
    CHECK_THROWS_AS(AttributeSpec::numeric(5, 4), std::invalid_argument);
    CHECK_THROWS_AS(AttributeSpec::numeric(0, (Value{1} << 62) + 1), std::invalid_argument);
    CHECK_THROWS_AS(AttributeSpec::categorical(0), std::invalid_argument);

    const auto num = AttributeSpec::numeric(-3, 9);
    CHECK(num.is_numeric());
    CHECK(num.min_value() == -3);
    CHECK(num.max_value() == 9);
    CHECK(num.contains(-3));
    CHECK(num.contains(9));
    CHECK_FALSE(num.contains(10));

    const auto cat = AttributeSpec::categorical(4);
    CHECK(cat.is_categorical());
    CHECK(cat.min_value() == 1);
    CHECK(cat.max_value() == 4);
    CHECK_FALSE(cat.contains(0));
    CHECK_FALSE(cat.contains(5));
}

TEST_CASE("schemas require the categorical prefix to come first") {
    CHECK_THROWS_AS(make_schema({}), std::invalid_argument);
    CHECK_THROWS_AS(
        make_schema({AttributeSpec::numeric(0, 1), AttributeSpec::categorical(2)}),
        std::invalid_argument);
    CHECK_THROWS_AS(make_schema({AttributeSpec::categorical(2)}, {"a", "b"}),
                    std::invalid_argument);

    const Schema s = make_schema(
        {AttributeSpec::categorical(3), AttributeSpec::categorical(2), AttributeSpec::numeric(0, 5)},
        {"color", "flag", "size"});
    CHECK(s.arity() == 3);
    CHECK(s.categorical_count() == 2);
    CHECK_FALSE(s.all_numeric());
    CHECK_FALSE(s.all_categorical());
    CHECK(s.name_of(2) == "size");
}

TEST_CASE("predicates admit exactly their declared values") {
    CHECK(Predicate::wildcard().admits(-77));
    CHECK(Predicate::constant(3).admits(3));
    CHECK_FALSE(Predicate::constant(3).admits(4));
    const auto r = Predicate::range(2, 5);
    CHECK(r.admits(2));
    CHECK(r.admits(5));
    CHECK_FALSE(r.admits(1));
    CHECK_FALSE(r.admits(6));
    CHECK_THROWS_AS(Predicate::range(5, 2), std::invalid_argument);
}

TEST_CASE("query validation enforces kinds and arity") {
    const Schema s =
        make_schema({AttributeSpec::categorical(3), AttributeSpec::numeric(0, 10)});

    Query ok;
    ok.predicates = {Predicate::constant(2), Predicate::range(3, 7)};
    CHECK_NOTHROW(validate_query(s, ok));

    Query wild = full_space_query(s);
    CHECK(wild.predicates.size() == 2);
    CHECK_NOTHROW(validate_query(s, wild));

    Query short_query;
    short_query.predicates = {Predicate::wildcard()};
    CHECK_THROWS_AS(validate_query(s, short_query), std::invalid_argument);

    Query range_on_cat;
    range_on_cat.predicates = {Predicate::range(1, 2), Predicate::wildcard()};
    CHECK_THROWS_AS(validate_query(s, range_on_cat), std::invalid_argument);

    Query const_on_num;
    const_on_num.predicates = {Predicate::wildcard(), Predicate::constant(4)};
    CHECK_THROWS_AS(validate_query(s, const_on_num), std::invalid_argument);
}

TEST_CASE("matches checks every attribute") {
    Query q;
    q.predicates = {Predicate::constant(1), Predicate::range(10, 20)};
    CHECK(matches(q, {1, 15}));
    CHECK_FALSE(matches(q, {2, 15}));
    CHECK_FALSE(matches(q, {1, 21}));
    CHECK_THROWS_AS(matches(q, {1}), std::invalid_argument);
}

TEST_CASE("priority assignment is a seeded permutation") {
    auto ds = make_dataset(make_schema({AttributeSpec::numeric(0, 1000)}),
                           std::vector<Tuple>(100, Tuple{1}));
    CHECK_FALSE(ds.priorities_assigned);
    assign_priorities(ds, 42);
    CHECK(ds.priorities_assigned);

    std::vector<std::int64_t> prios;
    for (const auto& r : ds.records) prios.push_back(r.priority);
    auto sorted = prios;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        CHECK(sorted[i] == static_cast<std::int64_t>(i));

    auto ds2 = make_dataset(make_schema({AttributeSpec::numeric(0, 1000)}),
                            std::vector<Tuple>(100, Tuple{1}));
    assign_priorities(ds2, 42);
    for (std::size_t i = 0; i < 100; ++i) CHECK(ds2.records[i].priority == prios[i]);

    auto ds3 = make_dataset(make_schema({AttributeSpec::numeric(0, 1000)}),
                            std::vector<Tuple>(100, Tuple{1}));
    assign_priorities(ds3, 43);
    bool same = true;
    for (std::size_t i = 0; i < 100; ++i)
        if (ds3.records[i].priority != prios[i]) same = false;
    CHECK_FALSE(same);
}

TEST_CASE("dataset validation rejects malformed contents") {
    const Schema s = make_schema({AttributeSpec::categorical(3)});
    auto ds = make_dataset(s, {{1}, {2}, {3}});
    CHECK(ds.records[0].id == 0);
    CHECK(ds.records[2].id == 2);
    CHECK_NOTHROW(validate_dataset(ds));

    auto bad_value = make_dataset(s, {{1}, {4}});
    CHECK_THROWS_AS(validate_dataset(bad_value), std::invalid_argument);

    auto dup_id = make_dataset(s, {{1}, {2}});
    dup_id.records[1].id = 0;
    CHECK_THROWS_AS(validate_dataset(dup_id), std::invalid_argument);

    auto dup_prio = make_dataset(s, {{1}, {2}});
    dup_prio.records[0].priority = 5;
    dup_prio.records[1].priority = 5;
    dup_prio.priorities_assigned = true;
    CHECK_THROWS_AS(validate_dataset(dup_prio), std::invalid_argument);
}

TEST_CASE("multiset comparison respects multiplicities") {
    CHECK(multiset_equal({{1, 2}, {1, 2}, {3, 4}}, {{3, 4}, {1, 2}, {1, 2}}));
    CHECK_FALSE(multiset_equal({{1, 2}, {1, 2}}, {{1, 2}}));
    CHECK_FALSE(multiset_equal({{1, 2}, {1, 2}, {3, 4}}, {{1, 2}, {3, 4}, {3, 4}}));
    CHECK(multiset_equal({}, {}));
}

TEST_CASE("unsolvable instance error carries the offending point") {
    const UnsolvableInstance e({7, 8}, 5);
    CHECK(e.point() == Tuple{7, 8});
    CHECK(e.count() == 5);
    CHECK(std::string(e.what()).find("(7, 8)") != std::string::npos);
}

TEST_CASE("bounded draws stay in range and cover the range") {
    std::mt19937_64 g(1);
    std::vector<bool> seen(5, false);
    for (int i = 0; i < 200; ++i) {
        const auto x = hdc::detail::bounded(g, 5);
        REQUIRE(x < 5);
        seen[x] = true;
    }
    for (bool b : seen) CHECK(b);
    CHECK(hdc::detail::bounded(g, 1) == 0);
}
