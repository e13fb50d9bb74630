#pragma once

// Crawler for mixed schemas: a lazy slice-cover over the categorical prefix
// whose overflowing leaves each spawn a rank-shrink run on the numeric
// subspace with the leaf's constants pinned. Degenerate schemas fall back to
// the single-phase crawler they reduce to.

#include <cstddef>
#include <utility>
#include <vector>

#include "hdc/core.hpp"
#include "hdc/crawler_categorical.hpp"
#include "hdc/crawler_numeric.hpp"
#include "hdc/server.hpp"

namespace hdc {

struct LeafRun {
    std::vector<Value> constants;
    std::size_t queries = 0;
    std::size_t tuples = 0;
};

struct HybridCrawl {
    std::vector<Tuple> tuples;
    std::size_t slice_queries = 0;
    std::size_t node_queries = 0;  // categorical-phase tree queries
    std::vector<LeafRun> leaves;   // overflow leaves that spawned numeric runs
    SliceTable table;

    std::size_t categorical_cost() const { return slice_queries + node_queries; }
    std::size_t numeric_cost() const {
        std::size_t c = 0;
        for (const auto& l : leaves) c += l.queries;
        return c;
    }
    std::size_t cost() const { return categorical_cost() + numeric_cost(); }
};

inline HybridCrawl hybrid(ServerSession& session, const CrawlOptions& opts = {}) {
    const Schema& schema = session.dataset().schema;
    const std::size_t cat = schema.categorical_count();
    const std::size_t d = schema.arity();
    HybridCrawl out;

    if (cat == 0) {
        const std::size_t before = session.cost();
        NumericCrawl r = rank_shrink(session, full_box(schema), opts);
        out.tuples = std::move(r.tuples);
        out.leaves.push_back({{}, session.cost() - before, out.tuples.size()});
        return out;
    }
    if (cat == d) {
        CategoricalCrawl c = lazy_slice_cover(session, opts);
        out.tuples = std::move(c.tuples);
        out.slice_queries = c.slice_queries;
        out.node_queries = c.node_queries;
        out.table = std::move(c.table);
        return out;
    }
    if (session.k() < 4) throw std::invalid_argument("hybrid: numeric phase requires k >= 4");

    detail::SliceEngine engine(session, /*lazy=*/true, opts,
                               [&](const std::vector<Value>& constants) {
                                   const std::size_t before = session.cost();
                                   NumericCrawl r =
                                       rank_shrink(session, leaf_box(schema, constants), opts);
                                   out.leaves.push_back(
                                       {constants, session.cost() - before, r.tuples.size()});
                                   return std::move(r.tuples);
                               });
    out.tuples = engine.run();
    out.slice_queries = engine.slice_queries();
    out.node_queries = engine.node_queries();
    out.table = engine.take_table();
    return out;
}

}  // namespace hdc
