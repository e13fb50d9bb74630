#pragma once

// Crawlers for numeric subspaces. Both walk a tree of axis-aligned boxes,
// shrinking the first attribute that still has room before moving to the
// next one. binary_shrink always bisects at the midpoint; rank_shrink picks
// the median value of the k returned tuples so every split either discards a
// constant fraction of them or pins the attribute to a single value.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "hdc/core.hpp"
#include "hdc/server.hpp"

namespace hdc {

// Axis-aligned box; categorical positions are pinned (lo == hi).
struct Box {
    std::vector<Value> lo, hi;

    bool operator==(const Box&) const = default;
};

// Full extent of a purely numeric schema.
inline Box full_box(const Schema& s) {
    if (!s.all_numeric()) throw std::invalid_argument("full_box: schema has categorical attributes");
    Box b;
    b.lo.reserve(s.arity());
    b.hi.reserve(s.arity());
    for (const auto& a : s.attributes) {
        b.lo.push_back(a.lo);
        b.hi.push_back(a.hi);
    }
    return b;
}

// Numeric extents with the categorical prefix pinned to the given constants.
inline Box leaf_box(const Schema& s, const std::vector<Value>& constants) {
    if (constants.size() != s.categorical_count())
        throw std::invalid_argument("leaf_box: constants do not cover the categorical prefix");
    Box b;
    b.lo.reserve(s.arity());
    b.hi.reserve(s.arity());
    for (std::size_t i = 0; i < s.arity(); ++i) {
        const auto& a = s.attributes[i];
        if (a.is_categorical()) {
            b.lo.push_back(constants[i]);
            b.hi.push_back(constants[i]);
        } else {
            b.lo.push_back(a.lo);
            b.hi.push_back(a.hi);
        }
    }
    return b;
}

inline Query box_query(const Schema& s, const Box& b) {
    Query q;
    q.predicates.reserve(s.arity());
    for (std::size_t i = 0; i < s.arity(); ++i) {
        if (s.attributes[i].is_categorical())
            q.predicates.push_back(Predicate::constant(b.lo[i]));
        else
            q.predicates.push_back(Predicate::range(b.lo[i], b.hi[i]));
    }
    return q;
}

struct SplitOutcome {
    bool three_way = false;
    std::optional<Box> left, mid, right;
};

// [x1,x2] -> [x1,x-1], [x,x2]. Requires x1 < x <= x2.
inline SplitOutcome split2(const Box& b, std::size_t attr, Value x) {
    if (attr >= b.lo.size()) throw std::invalid_argument("split2: attribute out of range");
    if (b.lo[attr] >= b.hi[attr]) throw std::invalid_argument("split2: attribute exhausted");
    if (x <= b.lo[attr] || x > b.hi[attr]) throw std::invalid_argument("split2: pivot outside (lo, hi]");
    SplitOutcome s;
    s.left = b;
    s.left->hi[attr] = x - 1;
    s.right = b;
    s.right->lo[attr] = x;
    return s;
}

// [x1,x2] -> [x1,x-1], [x,x], [x+1,x2], dropping an empty flank. The middle
// child exhausts the attribute. Requires x1 <= x <= x2 and x1 < x2.
inline SplitOutcome split3(const Box& b, std::size_t attr, Value x) {
    if (attr >= b.lo.size()) throw std::invalid_argument("split3: attribute out of range");
    if (b.lo[attr] >= b.hi[attr]) throw std::invalid_argument("split3: attribute exhausted");
    if (x < b.lo[attr] || x > b.hi[attr]) throw std::invalid_argument("split3: pivot outside [lo, hi]");
    SplitOutcome s;
    s.three_way = true;
    if (x > b.lo[attr]) {
        s.left = b;
        s.left->hi[attr] = x - 1;
    }
    s.mid = b;
    s.mid->lo[attr] = x;
    s.mid->hi[attr] = x;
    if (x < b.hi[attr]) {
        s.right = b;
        s.right->lo[attr] = x + 1;
    }
    return s;
}

struct SplitEvent {
    std::size_t attr = 0;
    Value pivot = 0;
    bool three_way = false;
    // Of the k returned tuples: how many fell below, at, and above the pivot.
    std::size_t below = 0, at = 0, above = 0;
};

struct NumericCrawl {
    std::vector<Tuple> tuples;
    std::vector<SplitEvent> splits;
};

namespace detail {

inline std::optional<std::size_t> first_open_attribute(const Schema& s, const Box& b) {
    for (std::size_t i = 0; i < s.arity(); ++i)
        if (s.attributes[i].is_numeric() && b.lo[i] < b.hi[i]) return i;
    return std::nullopt;
}

// ceil((lo + hi) / 2) without overflow; requires lo < hi.
// Unsigned arithmetic: hi - lo can reach 2^63 at the extreme legal bounds.
inline Value midpoint(Value lo, Value hi) {
    const auto ulo = static_cast<std::uint64_t>(lo);
    const auto uhi = static_cast<std::uint64_t>(hi);
    return static_cast<Value>(ulo + (uhi - ulo + 1) / 2);
}

template <typename PickSplit>
NumericCrawl shrink_crawl(ServerSession& session, const Box& root, const CrawlOptions& opts,
                          PickSplit pick) {
    const Schema& schema = session.dataset().schema;
    if (root.lo.size() != schema.arity() || root.hi.size() != schema.arity())
        throw std::invalid_argument("crawl: box arity does not match schema");

    NumericCrawl out;
    std::vector<Box> stack{root};
    while (!stack.empty()) {
        Box b = std::move(stack.back());
        stack.pop_back();
        const Query q = box_query(schema, b);
        if (!opts.admits(q)) continue;
        const QueryResponse resp = session.answer(q);
        if (!resp.overflowed) {
            out.tuples.insert(out.tuples.end(), resp.returned.begin(), resp.returned.end());
            continue;
        }
        const auto attr = first_open_attribute(schema, b);
        if (!attr) throw UnsolvableInstance(b.lo, 0);

        SplitEvent ev;
        ev.attr = *attr;
        const SplitOutcome s = pick(b, *attr, resp.returned, ev);
        ev.three_way = s.three_way;
        for (const Tuple& t : resp.returned) {
            if (t[*attr] < ev.pivot)
                ++ev.below;
            else if (t[*attr] == ev.pivot)
                ++ev.at;
            else
                ++ev.above;
        }
        out.splits.push_back(ev);
        if (s.right) stack.push_back(*s.right);
        if (s.mid) stack.push_back(*s.mid);
        if (s.left) stack.push_back(*s.left);
    }
    return out;
}

}  // namespace detail

// Bisects the first open attribute at its midpoint until every box resolves.
// Cost grows with the log of the domain extent.
inline NumericCrawl binary_shrink(ServerSession& session, const Box& root,
                                  const CrawlOptions& opts = {}) {
    return detail::shrink_crawl(
        session, root, opts,
        [](const Box& b, std::size_t attr, const std::vector<Tuple>&, SplitEvent& ev) {
            ev.pivot = detail::midpoint(b.lo[attr], b.hi[attr]);
            return split2(b, attr, ev.pivot);
        });
}

// Splits at the median value x of the k returned tuples (position ceil(k/2)
// after sorting ascending, ties kept in response order). When x repeats more
// than floor(k/4) times a three-way split isolates it; otherwise both halves
// of the two-way split keep at least ceil(k/4) returned tuples. Requires
// k >= 4.
inline NumericCrawl rank_shrink(ServerSession& session, const Box& root,
                                const CrawlOptions& opts = {}) {
    const std::int64_t k = session.k();
    if (k < 4) throw std::invalid_argument("rank_shrink: requires k >= 4");
    return detail::shrink_crawl(
        session, root, opts,
        [k](const Box& b, std::size_t attr, const std::vector<Tuple>& returned, SplitEvent& ev) {
            std::vector<Value> vals;
            vals.reserve(returned.size());
            for (const Tuple& t : returned) vals.push_back(t[attr]);
            std::stable_sort(vals.begin(), vals.end());
            const Value x = vals[static_cast<std::size_t>((k + 1) / 2 - 1)];
            const std::size_t c = static_cast<std::size_t>(
                std::count(vals.begin(), vals.end(), x));
            ev.pivot = x;
            if (c <= static_cast<std::size_t>(k / 4)) return split2(b, attr, x);
            return split3(b, attr, x);
        });
}

}  // namespace hdc
