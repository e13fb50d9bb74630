// Two-phase crawl over mixed schemas: slice-table phase over the categorical
// prefix, median-split runs on the numeric remainder of overflowing leaves.

#include <catch2/catch_amalgamated.hpp>

#include "hdc/crawler_hybrid.hpp"
#include "hdc/datagen.hpp"
#include "test_support.hpp"

using namespace hdc;
using support::ceil_div;

namespace {

Dataset one_heavy_leaf() {
    std::vector<AttributeSpec> attrs = {AttributeSpec::categorical(2),
                                        AttributeSpec::numeric(0, 100)};
    std::vector<Tuple> rows = {{1, 10}, {1, 20}, {1, 30}, {1, 40}, {1, 50}, {2, 7}, {2, 9}};
    Dataset ds = make_dataset(make_schema(std::move(attrs)), std::move(rows));
    const std::vector<Value> pri = {7, 6, 5, 4, 3, 2, 1};
    for (std::size_t i = 0; i < pri.size(); ++i) ds.records[i].priority = pri[i];
    ds.priorities_assigned = true;
    return ds;
}

}  // namespace

TEST_CASE("an overflowing leaf spawns one pinned numeric run") {
    ServerSession s(one_heavy_leaf(), {4, 1});
    const auto crawl = hybrid(s);
    CHECK(crawl.slice_queries == 2);
    CHECK(crawl.node_queries == 0);
    REQUIRE(crawl.leaves.size() == 1);
    CHECK(crawl.leaves[0].constants == std::vector<Value>{1});
    CHECK(crawl.leaves[0].queries == 3);
    CHECK(crawl.leaves[0].tuples == 5);
    CHECK(crawl.cost() == 5);
    CHECK(s.cost() == 5);
    REQUIRE(verify_reconstruction(crawl.tuples, s.dataset()));

    // Numeric attributes stay explicit ranges in every phase.
    for (const auto& e : s.log()) {
        CHECK(e.query.predicates[1].kind == Predicate::Kind::Range);
        CHECK(e.query.predicates[1].lo >= 0);
        CHECK(e.query.predicates[1].hi <= 100);
    }
}

TEST_CASE("a table-answered prefix spawns no numeric runs") {
    std::vector<AttributeSpec> attrs = {AttributeSpec::categorical(3),
                                        AttributeSpec::numeric(1, 1000)};
    std::vector<Tuple> rows = {{1, 5}, {2, 17}, {2, 901}, {3, 44}};
    Dataset ds = make_dataset(make_schema(std::move(attrs)), std::move(rows));
    ServerSession s(std::move(ds), {4, 1});
    const auto crawl = hybrid(s);
    CHECK(crawl.leaves.empty());
    CHECK(crawl.node_queries == 0);
    CHECK(s.cost() == 3);  // one slice per first-attribute value
    REQUIRE(verify_reconstruction(crawl.tuples, s.dataset()));
}

TEST_CASE("a purely numeric schema reduces to the median crawl") {
    Dataset ds = random_numeric_dataset(61, 2, 250, 4);
    ServerSession sh(ds, {4, 9});
    const auto h = hybrid(sh);
    ServerSession sr(ds, {4, 9});
    const auto r = rank_shrink(sr, full_box(ds.schema));
    CHECK(sh.cost() == sr.cost());
    REQUIRE(multiset_equal(h.tuples, r.tuples));
    REQUIRE(h.leaves.size() == 1);
    CHECK(h.leaves[0].constants.empty());
    CHECK(h.leaves[0].queries == sr.cost());
    CHECK(h.categorical_cost() == 0);
}

TEST_CASE("a purely categorical schema reduces to the lazy slice crawl") {
    Dataset ds = random_categorical_dataset(62, {4, 3, 3}, 250, 3);
    ServerSession sh(ds, {3, 9});
    const auto h = hybrid(sh);
    ServerSession sl(ds, {3, 9});
    const auto l = lazy_slice_cover(sl);
    CHECK(sh.cost() == sl.cost());
    CHECK(h.slice_queries == l.slice_queries);
    CHECK(h.node_queries == l.node_queries);
    CHECK(h.leaves.empty());
    REQUIRE(multiset_equal(h.tuples, l.tuples));
}

TEST_CASE("leaves pin distinct full categorical prefixes") {
    for (std::uint64_t rep = 0; rep < 6; ++rep) {
        Dataset ds = random_mixed_dataset(800 + rep, {3, 4}, 1 + rep % 2, 300 + 50 * rep, 4);
        const std::size_t cat = ds.schema.categorical_count();
        const std::size_t d = ds.schema.arity();
        ServerSession s(std::move(ds), {4, rep + 1});
        const auto crawl = hybrid(s);
        REQUIRE(verify_reconstruction(crawl.tuples, s.dataset()));
        CHECK(s.cost() == crawl.cost());

        std::vector<std::vector<Value>> seen;
        for (const auto& leaf : crawl.leaves) {
            REQUIRE(leaf.constants.size() == cat);
            CHECK(std::find(seen.begin(), seen.end(), leaf.constants) == seen.end());
            seen.push_back(leaf.constants);
            CHECK(leaf.queries <=
                  20 * (d - cat) * ceil_div(leaf.tuples, static_cast<std::size_t>(4)) + 1);
        }
    }
}

TEST_CASE("mixed crawls require k of at least four") {
    Dataset ds = random_mixed_dataset(63, {3}, 1, 100, 3);
    ServerSession s(std::move(ds), {3, 1});
    CHECK_THROWS_AS(hybrid(s), std::invalid_argument);
}

TEST_CASE("duplicate-saturated points abort the numeric phase") {
    std::vector<AttributeSpec> attrs = {AttributeSpec::categorical(2),
                                        AttributeSpec::numeric(0, 50)};
    std::vector<Tuple> rows = {{1, 9}, {1, 9}, {1, 9}, {1, 9}, {1, 9}, {2, 1}};
    Dataset ds = make_dataset(make_schema(std::move(attrs)), std::move(rows));
    ServerSession s(std::move(ds), {4, 1});
    try {
        hybrid(s);
        FAIL("hybrid should have aborted");
    } catch (const UnsolvableInstance& e) {
        CHECK(e.point() == Tuple{1, 9});
    }
}
