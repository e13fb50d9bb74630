#pragma once

// Crawlers over categorical attribute trees. Nodes fix a prefix of constants;
// children extend it with every value of the next attribute. dfs queries each
// visited node. The slice-cover variants first learn all single-attribute
// slices (eagerly up front, or lazily on first use) and then answer as many
// nodes as possible from that table: a child whose slice resolved is filtered
// locally for free, a level-1 node reuses its slice verbatim, and the root is
// the disjoint union of the first attribute's slices when none overflowed.

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "hdc/core.hpp"
#include "hdc/server.hpp"

namespace hdc {

struct SliceState {
    enum class State { Unknown, Resolved, Overflow };
    State state = State::Unknown;
    std::vector<Tuple> bag;  // exact result when resolved
};

// One entry per (categorical attribute, value).
struct SliceTable {
    std::vector<std::vector<SliceState>> entries;

    void init(const Schema& s) {
        entries.clear();
        for (std::size_t i = 0; i < s.categorical_count(); ++i)
            entries.emplace_back(static_cast<std::size_t>(s.attributes[i].domain));
    }

    SliceState& at(std::size_t attr, Value c) {
        return entries[attr][static_cast<std::size_t>(c - 1)];
    }
    const SliceState& at(std::size_t attr, Value c) const {
        return entries[attr][static_cast<std::size_t>(c - 1)];
    }
};

struct CategoricalCrawl {
    std::vector<Tuple> tuples;
    std::size_t slice_queries = 0;  // single-attribute table fills
    std::size_t node_queries = 0;   // tree-node queries
    SliceTable table;

    std::size_t cost() const { return slice_queries + node_queries; }
};

namespace detail {

// Wildcards everywhere except pinned categorical constants; numeric
// attributes (hybrid crawls) are pinned to their full declared range so the
// predicate shape is explicit in the log.
inline Query prefix_query(const Schema& s, const std::vector<Value>& constants) {
    Query q;
    q.predicates.reserve(s.arity());
    for (std::size_t i = 0; i < s.arity(); ++i) {
        if (i < constants.size())
            q.predicates.push_back(Predicate::constant(constants[i]));
        else if (s.attributes[i].is_numeric())
            q.predicates.push_back(Predicate::range(s.attributes[i].lo, s.attributes[i].hi));
        else
            q.predicates.push_back(Predicate::wildcard());
    }
    return q;
}

inline Query slice_query(const Schema& s, std::size_t attr, Value c) {
    Query q;
    q.predicates.reserve(s.arity());
    for (std::size_t i = 0; i < s.arity(); ++i) {
        if (i == attr)
            q.predicates.push_back(Predicate::constant(c));
        else if (s.attributes[i].is_numeric())
            q.predicates.push_back(Predicate::range(s.attributes[i].lo, s.attributes[i].hi));
        else
            q.predicates.push_back(Predicate::wildcard());
    }
    return q;
}

inline void append_matching(std::vector<Tuple>& out, const std::vector<Tuple>& bag,
                            const Query& q) {
    for (const Tuple& t : bag)
        if (matches(q, t)) out.push_back(t);
}

// Shared traversal for eager and lazy slice crawls and for the categorical
// phase of hybrid. Depth equals the categorical prefix length; what happens
// at an overflowing depth-cat node is the caller's leaf handler.
class SliceEngine {
  public:
    SliceEngine(ServerSession& session, bool lazy, const CrawlOptions& opts,
                std::function<std::vector<Tuple>(const std::vector<Value>&)> overflow_leaf)
        : session_(session),
          schema_(session.dataset().schema),
          cat_(schema_.categorical_count()),
          lazy_(lazy),
          opts_(opts),
          overflow_leaf_(std::move(overflow_leaf)) {
        if (cat_ == 0) throw std::invalid_argument("slice crawl: no categorical attributes");
        table_.init(schema_);
    }

    void prefill() {
        for (std::size_t i = 0; i < cat_; ++i)
            for (Value c = 1; c <= schema_.attributes[i].domain; ++c) fill(i, c);
    }

    std::vector<Tuple> run() {
        std::vector<Value> constants;
        return visit(constants);
    }

    std::size_t slice_queries() const { return slice_queries_; }
    std::size_t node_queries() const { return node_queries_; }
    SliceTable take_table() { return std::move(table_); }

  private:
    const SliceState& fill(std::size_t attr, Value c) {
        SliceState& e = table_.at(attr, c);
        if (e.state != SliceState::State::Unknown) return e;
        const Query q = slice_query(schema_, attr, c);
        if (!opts_.admits(q)) {
            e.state = SliceState::State::Resolved;
            return e;
        }
        ++slice_queries_;
        QueryResponse resp = session_.answer(q);
        if (resp.overflowed) {
            e.state = SliceState::State::Overflow;
        } else {
            e.state = SliceState::State::Resolved;
            e.bag = std::move(resp.returned);
        }
        return e;
    }

    const SliceState& consult(std::size_t attr, Value c) {
        const SliceState& e = table_.at(attr, c);
        if (e.state == SliceState::State::Unknown) {
            if (!lazy_) throw std::logic_error("slice crawl: table miss after prefill");
            return fill(attr, c);
        }
        return e;
    }

    std::vector<Tuple> visit(std::vector<Value>& constants) {
        const std::size_t level = constants.size();
        if (level == 0) {
            // The root is answerable from the first attribute's slices alone
            // when none of them overflowed.
            bool all_resolved = true;
            for (Value c = 1; c <= schema_.attributes[0].domain; ++c)
                if (consult(0, c).state != SliceState::State::Resolved) all_resolved = false;
            if (all_resolved) {
                std::vector<Tuple> out;
                for (Value c = 1; c <= schema_.attributes[0].domain; ++c) {
                    const auto& bag = table_.at(0, c).bag;
                    out.insert(out.end(), bag.begin(), bag.end());
                }
                return out;
            }
        } else if (level == cat_) {
            // Only reached when the covering slice overflowed; a slice-
            // resolved child is answered locally by the parent loop.
            return overflow_leaf_(constants);
        } else if (level >= 2) {
            // A level-1 node's query is its covering slice, already known to
            // overflow; deeper nodes must ask.
            const Query q = prefix_query(schema_, constants);
            if (!opts_.admits(q)) return {};
            ++node_queries_;
            QueryResponse resp = session_.answer(q);
            if (!resp.overflowed) return resp.returned;
        }

        std::vector<Tuple> out;
        for (Value c = 1; c <= schema_.attributes[level].domain; ++c) {
            const SliceState& e = consult(level, c);
            constants.push_back(c);
            if (e.state == SliceState::State::Resolved)
                append_matching(out, e.bag, prefix_query(schema_, constants));
            else {
                auto sub = visit(constants);
                out.insert(out.end(), sub.begin(), sub.end());
            }
            constants.pop_back();
        }
        return out;
    }

    ServerSession& session_;
    const Schema& schema_;
    std::size_t cat_;
    bool lazy_;
    const CrawlOptions& opts_;
    std::function<std::vector<Tuple>(const std::vector<Value>&)> overflow_leaf_;
    SliceTable table_;
    std::size_t slice_queries_ = 0;
    std::size_t node_queries_ = 0;
};

// Point handler for purely categorical schemas: the node's query is a single
// point, so an overflow there means more than k duplicates.
inline std::function<std::vector<Tuple>(const std::vector<Value>&)> point_leaf(
    ServerSession& session, const CrawlOptions& opts, std::size_t& node_queries) {
    return [&session, &opts, &node_queries](const std::vector<Value>& constants) {
        const Schema& schema = session.dataset().schema;
        // With one attribute the point is the covering slice itself, which
        // already overflowed.
        if (schema.arity() == 1) throw UnsolvableInstance(constants, 0);
        const Query q = prefix_query(schema, constants);
        if (!opts.admits(q)) return std::vector<Tuple>{};
        ++node_queries;
        QueryResponse resp = session.answer(q);
        if (resp.overflowed) throw UnsolvableInstance(constants, 0);
        return std::move(resp.returned);
    };
}

inline void require_all_categorical(const Schema& s, const char* who) {
    if (!s.all_categorical() || s.arity() == 0)
        throw std::invalid_argument(std::string(who) + ": requires a categorical schema");
}

}  // namespace detail

// Depth-first crawl that queries every node it visits and descends only
// under overflow. Cost equals the number of visited nodes.
inline CategoricalCrawl dfs(ServerSession& session, const CrawlOptions& opts = {}) {
    const Schema& schema = session.dataset().schema;
    detail::require_all_categorical(schema, "dfs");
    const std::size_t d = schema.arity();

    CategoricalCrawl out;
    std::vector<Value> constants;
    auto visit = [&](auto&& self, std::vector<Value>& cs) -> void {
        const Query q = detail::prefix_query(schema, cs);
        if (!opts.admits(q)) return;
        ++out.node_queries;
        QueryResponse resp = session.answer(q);
        if (!resp.overflowed) {
            out.tuples.insert(out.tuples.end(), resp.returned.begin(), resp.returned.end());
            return;
        }
        if (cs.size() == d) throw UnsolvableInstance(cs, 0);
        for (Value c = 1; c <= schema.attributes[cs.size()].domain; ++c) {
            cs.push_back(c);
            self(self, cs);
            cs.pop_back();
        }
    };
    visit(visit, constants);
    return out;
}

// Issues every slice query up front, then runs the table-assisted traversal.
inline CategoricalCrawl slice_cover(ServerSession& session, const CrawlOptions& opts = {}) {
    detail::require_all_categorical(session.dataset().schema, "slice_cover");
    CategoricalCrawl out;
    detail::SliceEngine engine(session, /*lazy=*/false, opts,
                               detail::point_leaf(session, opts, out.node_queries));
    engine.prefill();
    out.tuples = engine.run();
    out.slice_queries = engine.slice_queries();
    out.node_queries += engine.node_queries();
    out.table = engine.take_table();
    return out;
}

// Same traversal, but a slice is queried only the first time it is needed.
// Never costs more than the eager variant.
inline CategoricalCrawl lazy_slice_cover(ServerSession& session, const CrawlOptions& opts = {}) {
    detail::require_all_categorical(session.dataset().schema, "lazy_slice_cover");
    CategoricalCrawl out;
    detail::SliceEngine engine(session, /*lazy=*/true, opts,
                               detail::point_leaf(session, opts, out.node_queries));
    out.tuples = engine.run();
    out.slice_queries = engine.slice_queries();
    out.node_queries += engine.node_queries();
    out.table = engine.take_table();
    return out;
}

}  // namespace hdc
