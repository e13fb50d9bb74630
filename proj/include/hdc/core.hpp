#pragma once

// Core data model for crawling a top-k query interface: schemas over numeric
// and categorical attributes, tuple bags with retrieval priorities, and
// conjunctive per-attribute queries.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hdc {

using Value = std::int64_t;
using Tuple = std::vector<Value>;

// Numeric bounds are kept well inside the int64 range so midpoint and
// interval-endpoint arithmetic can never overflow.
inline constexpr Value kMaxAbsBound = Value{1} << 62;

struct AttributeSpec {
    enum class Kind { Numeric, Categorical };

    Kind kind = Kind::Numeric;
    Value lo = 0;      // numeric: inclusive lower bound
    Value hi = 0;      // numeric: inclusive upper bound
    Value domain = 0;  // categorical: values are 1..domain

    static AttributeSpec numeric(Value lo, Value hi) {
        if (lo > hi) throw std::invalid_argument("numeric attribute: lo > hi");
        if (lo < -kMaxAbsBound || hi > kMaxAbsBound)
            throw std::invalid_argument("numeric attribute: bounds exceed +-2^62");
        AttributeSpec a;
        a.kind = Kind::Numeric;
        a.lo = lo;
        a.hi = hi;
        return a;
    }

    static AttributeSpec categorical(Value domain) {
        if (domain < 1) throw std::invalid_argument("categorical attribute: empty domain");
        AttributeSpec a;
        a.kind = Kind::Categorical;
        a.domain = domain;
        return a;
    }

    bool is_numeric() const { return kind == Kind::Numeric; }
    bool is_categorical() const { return kind == Kind::Categorical; }

    Value min_value() const { return is_numeric() ? lo : 1; }
    Value max_value() const { return is_numeric() ? hi : domain; }

    bool contains(Value v) const { return v >= min_value() && v <= max_value(); }
};

// Attribute order is significant: it is the order crawlers split and branch
// in. Categorical attributes must form a prefix.
struct Schema {
    std::vector<AttributeSpec> attributes;
    std::vector<std::string> names;  // empty, or one name per attribute

    std::size_t arity() const { return attributes.size(); }

    // Length of the categorical prefix.
    std::size_t categorical_count() const {
        std::size_t c = 0;
        while (c < attributes.size() && attributes[c].is_categorical()) ++c;
        return c;
    }

    bool all_numeric() const { return categorical_count() == 0; }
    bool all_categorical() const { return categorical_count() == arity(); }

    const std::string& name_of(std::size_t i) const {
        static const std::string empty;
        return i < names.size() ? names[i] : empty;
    }
};

inline void validate_schema(const Schema& s) {
    if (s.attributes.empty()) throw std::invalid_argument("schema: no attributes");
    if (!s.names.empty() && s.names.size() != s.attributes.size())
        throw std::invalid_argument("schema: name count does not match attribute count");
    for (std::size_t i = s.categorical_count(); i < s.attributes.size(); ++i)
        if (s.attributes[i].is_categorical())
            throw std::invalid_argument("schema: categorical attribute after a numeric one");
}

inline Schema make_schema(std::vector<AttributeSpec> attrs, std::vector<std::string> names = {}) {
    Schema s;
    s.attributes = std::move(attrs);
    s.names = std::move(names);
    validate_schema(s);
    return s;
}

struct Record {
    Tuple values;
    std::int64_t id = 0;
    std::int64_t priority = 0;  // higher = preferred by the server
};

// A bag of records. Priorities may be left unassigned at construction; the
// server assigns a seeded random permutation before answering queries.
struct Dataset {
    Schema schema;
    std::vector<Record> records;
    bool priorities_assigned = false;

    std::size_t size() const { return records.size(); }
};

namespace detail {

// Uniform draw from [0, n) by rejection; avoids the implementation-defined
// behavior of std::uniform_int_distribution so seeded runs are portable.
inline std::uint64_t bounded(std::mt19937_64& g, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("bounded: n == 0");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = g();
    } while (x >= limit);
    return x % n;
}

}  // namespace detail

// Seeded Fisher-Yates permutation of 0..n-1 used as descending retrieval
// rank. Distinct by construction.
inline void assign_priorities(Dataset& ds, std::uint64_t seed) {
    const std::size_t n = ds.records.size();
    std::vector<std::int64_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<std::int64_t>(i);
    std::mt19937_64 g(seed);
    for (std::size_t i = n; i > 1; --i)
        std::swap(perm[i - 1], perm[detail::bounded(g, i)]);
    for (std::size_t i = 0; i < n; ++i) ds.records[i].priority = perm[i];
    ds.priorities_assigned = true;
}

inline Dataset make_dataset(Schema schema, std::vector<Tuple> rows) {
    validate_schema(schema);
    Dataset ds;
    ds.schema = std::move(schema);
    ds.records.reserve(rows.size());
    std::int64_t id = 0;
    for (auto& r : rows) ds.records.push_back({std::move(r), id++, 0});
    return ds;
}

inline void validate_dataset(const Dataset& ds) {
    validate_schema(ds.schema);
    const std::size_t d = ds.schema.arity();
    std::vector<std::int64_t> ids, prios;
    ids.reserve(ds.size());
    prios.reserve(ds.size());
    for (const auto& rec : ds.records) {
        if (rec.values.size() != d)
            throw std::invalid_argument("dataset: tuple arity does not match schema");
        for (std::size_t i = 0; i < d; ++i)
            if (!ds.schema.attributes[i].contains(rec.values[i]))
                throw std::invalid_argument("dataset: value outside declared domain");
        ids.push_back(rec.id);
        prios.push_back(rec.priority);
    }
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
        throw std::invalid_argument("dataset: duplicate record id");
    if (ds.priorities_assigned) {
        std::sort(prios.begin(), prios.end());
        if (std::adjacent_find(prios.begin(), prios.end()) != prios.end())
            throw std::invalid_argument("dataset: duplicate priority");
    }
}

struct Predicate {
    enum class Kind { Wildcard, Constant, Range };

    Kind kind = Kind::Wildcard;
    Value lo = 0;     // Range
    Value hi = 0;     // Range
    Value value = 0;  // Constant

    static Predicate wildcard() { return {}; }

    static Predicate constant(Value v) {
        Predicate p;
        p.kind = Kind::Constant;
        p.value = v;
        return p;
    }

    static Predicate range(Value lo, Value hi) {
        if (lo > hi) throw std::invalid_argument("range predicate: empty interval");
        Predicate p;
        p.kind = Kind::Range;
        p.lo = lo;
        p.hi = hi;
        return p;
    }

    bool admits(Value v) const {
        switch (kind) {
            case Kind::Wildcard: return true;
            case Kind::Constant: return v == value;
            case Kind::Range: return v >= lo && v <= hi;
        }
        return false;
    }

    bool operator==(const Predicate&) const = default;
};

struct Query {
    std::vector<Predicate> predicates;

    bool operator==(const Query&) const = default;
};

// Numeric attributes take range or wildcard predicates, categorical ones
// constant or wildcard. Values may lie outside the declared domain (they
// simply match nothing), but an empty interval is malformed.
inline void validate_query(const Schema& s, const Query& q) {
    if (q.predicates.size() != s.arity())
        throw std::invalid_argument("query: predicate count does not match schema arity");
    for (std::size_t i = 0; i < s.arity(); ++i) {
        const Predicate& p = q.predicates[i];
        if (p.kind == Predicate::Kind::Range) {
            if (s.attributes[i].is_categorical())
                throw std::invalid_argument("query: range predicate on a categorical attribute");
            if (p.lo > p.hi) throw std::invalid_argument("query: empty interval");
        } else if (p.kind == Predicate::Kind::Constant && s.attributes[i].is_numeric()) {
            throw std::invalid_argument("query: constant predicate on a numeric attribute");
        }
    }
}

inline bool matches(const Query& q, const Tuple& t) {
    if (q.predicates.size() != t.size())
        throw std::invalid_argument("matches: arity mismatch");
    for (std::size_t i = 0; i < t.size(); ++i)
        if (!q.predicates[i].admits(t[i])) return false;
    return true;
}

inline Query full_space_query(const Schema& s) {
    Query q;
    q.predicates.assign(s.arity(), Predicate::wildcard());
    return q;
}

struct QueryResponse {
    std::vector<Tuple> returned;  // priority-descending
    bool overflowed = false;
};

// Hook consulted before any query is issued: return false to certify the
// region holds no tuple, letting the crawler skip it as resolved-empty.
// Soundness is the caller's contract.
struct CrawlOptions {
    std::function<bool(const Query&)> validity;

    bool admits(const Query& q) const { return !validity || validity(q); }
};

inline std::string format_point(const Tuple& t) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) os << ", ";
        os << t[i];
    }
    os << ')';
    return os.str();
}

// Thrown when more than k tuples share one point, which no sequence of
// queries can ever separate.
class UnsolvableInstance : public std::runtime_error {
  public:
    UnsolvableInstance(Tuple point, std::size_t count)
        : std::runtime_error("unsolvable instance: more than k tuples share point " +
                             format_point(point)),
          point_(std::move(point)),
          count_(count) {}

    const Tuple& point() const { return point_; }
    // Multiplicity when known, 0 when only "more than k" was observed.
    std::size_t count() const { return count_; }

  private:
    Tuple point_;
    std::size_t count_;
};

inline bool multiset_equal(std::vector<Tuple> a, std::vector<Tuple> b) {
    if (a.size() != b.size()) return false;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

}  // namespace hdc
