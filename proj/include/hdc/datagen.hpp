#pragma once

// Seeded synthetic dataset and query generators. All randomness goes through
// one mt19937_64 wrapper with rejection-sampled bounded draws, so a seed
// reproduces bit-identical data on any platform. Generators cap per-point
// multiplicity so the produced instances stay solvable for the intended k.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hdc/core.hpp"

namespace hdc {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : g_(seed) {}

    std::uint64_t next() { return g_(); }
    std::uint64_t below(std::uint64_t n) { return detail::bounded(g_, n); }

    Value range(Value lo, Value hi) {
        const std::uint64_t span =
            static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
        return static_cast<Value>(static_cast<std::uint64_t>(lo) + below(span));
    }

    double real() { return std::ldexp(static_cast<double>(g_() >> 11), -53); }
    bool chance(double p) { return real() < p; }

  private:
    std::mt19937_64 g_;
};

namespace detail {

// Advances to the lexicographically next point of the domain, wrapping.
inline void next_point(const Schema& s, Tuple& t) {
    std::size_t j = t.size();
    while (j > 0) {
        --j;
        if (t[j] < s.attributes[j].max_value()) {
            ++t[j];
            return;
        }
        t[j] = s.attributes[j].min_value();
    }
}

// Draws n rows from `sample`, allowing at most max_dup copies of any point.
// After a few rejected draws the row is nudged to the next free point, which
// exists as long as the caller respects the domain capacity.
template <typename Sampler>
std::vector<Tuple> capped_rows(const Schema& s, std::size_t n, std::int64_t max_dup,
                               Sampler sample) {
    std::map<Tuple, std::int64_t> counts;
    std::vector<Tuple> rows;
    rows.reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
        Tuple t = sample();
        for (int tries = 0; tries < 32 && counts[t] >= max_dup; ++tries) t = sample();
        while (counts[t] >= max_dup) next_point(s, t);
        ++counts[t];
        rows.push_back(std::move(t));
    }
    return rows;
}

// Caps n so the capped sampler cannot run out of room.
inline std::size_t fit_capacity(const Schema& s, std::size_t n, std::int64_t max_dup) {
    long double capacity = static_cast<long double>(max_dup);
    for (const auto& a : s.attributes) {
        capacity *= static_cast<long double>(a.max_value() - a.min_value() + 1);
        if (capacity > 1e12L) return n;
    }
    const long double fit = capacity * 0.8L;
    return fit < static_cast<long double>(n) ? static_cast<std::size_t>(fit) : n;
}

// Per-attribute value source mixing uniform, clustered, and point-mass
// shapes so crawls see both smooth spread and heavy duplication.
struct ValueShape {
    Value lo = 0, hi = 0;
    int mode = 0;          // 0 uniform, 1 clustered, 2 point-mass
    std::vector<Value> popular;

    static ValueShape make(Rng& rng, Value lo, Value hi) {
        ValueShape v;
        v.lo = lo;
        v.hi = hi;
        v.mode = static_cast<int>(rng.below(3));
        if (v.mode == 2) {
            const std::size_t count = 1 + rng.below(4);
            for (std::size_t i = 0; i < count; ++i) v.popular.push_back(rng.range(lo, hi));
        }
        return v;
    }

    Value draw(Rng& rng) const {
        switch (mode) {
            case 1: {
                const Value a = rng.range(lo, hi), b = rng.range(lo, hi);
                return a / 2 + b / 2 + (a % 2 + b % 2) / 2;
            }
            case 2:
                if (rng.chance(0.7)) return popular[rng.below(popular.size())];
                return rng.range(lo, hi);
            default:
                return rng.range(lo, hi);
        }
    }
};

inline std::vector<std::string> default_names(const Schema& s) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < s.arity(); ++i) names.push_back("a" + std::to_string(i + 1));
    return names;
}

inline Dataset shaped_dataset(std::uint64_t seed, const std::vector<AttributeSpec>& attrs,
                              std::size_t n, std::int64_t max_dup) {
    Rng rng(seed);
    Schema schema;
    schema.attributes = attrs;
    schema.names = default_names(schema);
    validate_schema(schema);
    std::vector<ValueShape> shapes;
    for (const auto& a : schema.attributes)
        shapes.push_back(ValueShape::make(rng, a.min_value(), a.max_value()));
    const std::size_t n_fit = fit_capacity(schema, n, max_dup);
    auto rows = capped_rows(schema, n_fit, max_dup, [&] {
        Tuple t;
        t.reserve(schema.arity());
        for (const auto& sh : shapes) t.push_back(sh.draw(rng));
        return t;
    });
    return make_dataset(std::move(schema), std::move(rows));
}

}  // namespace detail

// d numeric attributes with bounds drawn from mixed-width profiles.
inline Dataset random_numeric_dataset(std::uint64_t seed, std::size_t d, std::size_t n,
                                      std::int64_t max_dup) {
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<AttributeSpec> attrs;
    for (std::size_t i = 0; i < d; ++i) {
        switch (rng.below(4)) {
            case 0: attrs.push_back(AttributeSpec::numeric(1, 8)); break;
            case 1: attrs.push_back(AttributeSpec::numeric(1, 50)); break;
            case 2: attrs.push_back(AttributeSpec::numeric(0, 10000)); break;
            default: attrs.push_back(AttributeSpec::numeric(-1000000, 1000000)); break;
        }
    }
    return detail::shaped_dataset(seed, attrs, n, max_dup);
}

inline Dataset random_categorical_dataset(std::uint64_t seed, const std::vector<Value>& domains,
                                          std::size_t n, std::int64_t max_dup) {
    std::vector<AttributeSpec> attrs;
    for (Value u : domains) attrs.push_back(AttributeSpec::categorical(u));
    return detail::shaped_dataset(seed, attrs, n, max_dup);
}

inline Dataset random_mixed_dataset(std::uint64_t seed, const std::vector<Value>& domains,
                                    std::size_t numeric_d, std::size_t n, std::int64_t max_dup) {
    Rng rng(seed ^ 0xd1b54a32d192ed03ULL);
    std::vector<AttributeSpec> attrs;
    for (Value u : domains) attrs.push_back(AttributeSpec::categorical(u));
    for (std::size_t i = 0; i < numeric_d; ++i) {
        switch (rng.below(3)) {
            case 0: attrs.push_back(AttributeSpec::numeric(1, 40)); break;
            case 1: attrs.push_back(AttributeSpec::numeric(0, 5000)); break;
            default: attrs.push_back(AttributeSpec::numeric(-100000, 100000)); break;
        }
    }
    return detail::shaped_dataset(seed, attrs, n, max_dup);
}

// Random conjunctive query: each attribute independently stays a wildcard
// with probability wildcard_prob, otherwise a uniform constant (categorical)
// or a uniform subrange (numeric).
inline Query random_query(const Schema& s, Rng& rng, double wildcard_prob = 0.5) {
    Query q;
    q.predicates.reserve(s.arity());
    for (const auto& a : s.attributes) {
        if (rng.chance(wildcard_prob)) {
            q.predicates.push_back(Predicate::wildcard());
        } else if (a.is_categorical()) {
            q.predicates.push_back(Predicate::constant(rng.range(1, a.domain)));
        } else {
            Value x = rng.range(a.lo, a.hi), y = rng.range(a.lo, a.hi);
            if (x > y) std::swap(x, y);
            q.predicates.push_back(Predicate::range(x, y));
        }
    }
    return q;
}

// Census-like benchmark surrogate: 8 categorical attributes with domain
// sizes 2,5,6,6,7,8,14,41 followed by 6 numeric ones, 45222 rows by default.
//
// The categorical joint is shaped, not realistic: 16 heavy 6-attribute
// prefixes (about n/45 rows each) sit on a near-uniform background, and the
// occupation attribute splits into 10 heavy values plus 4 rare ones that
// stay under ~160 rows in total each. At k = 256 this pins down which slices
// and which tree nodes overflow, which is what gives the three categorical
// crawlers strictly separated costs on this data. The numeric marginals mix
// smooth wide domains with zero-inflated ones and keep a strict distinct-
// count ordering: fnlwgt > capital_gain > capital_loss > hours > age >
// education_num.
inline Dataset adult_like_dataset(std::uint64_t seed, std::size_t n = 45222) {
    std::vector<AttributeSpec> attrs = {
        AttributeSpec::categorical(2),  AttributeSpec::categorical(5),
        AttributeSpec::categorical(6),  AttributeSpec::categorical(6),
        AttributeSpec::categorical(7),  AttributeSpec::categorical(8),
        AttributeSpec::categorical(14), AttributeSpec::categorical(41),
        AttributeSpec::numeric(1, 16),  AttributeSpec::numeric(17, 90),
        AttributeSpec::numeric(1, 99),  AttributeSpec::numeric(0, 4356),
        AttributeSpec::numeric(0, 99999), AttributeSpec::numeric(10000, 1500000)};
    std::vector<std::string> names = {"sex",           "race",
                                      "relationship",  "education",
                                      "marital_status", "workclass",
                                      "occupation",    "native_country",
                                      "education_num", "age",
                                      "hours_per_week", "capital_loss",
                                      "capital_gain",  "fnlwgt"};

    Rng rng(seed);
    std::vector<double> country_cdf(41);
    double h = 0;
    for (std::size_t j = 0; j < 41; ++j) {
        h += 1.0 / static_cast<double>(j + 1);
        country_cdf[j] = h;
    }
    auto draw_country = [&]() -> Value {
        const double u = rng.real() * h;
        for (std::size_t j = 0; j < 41; ++j)
            if (u < country_cdf[j]) return static_cast<Value>(j + 1);
        return 41;
    };
    auto push_numeric = [&](Tuple& t) {
        t.push_back(1 + static_cast<Value>((rng.below(16) + rng.below(16)) / 2));
        t.push_back(17 + static_cast<Value>(rng.below(37) + rng.below(37)));
        t.push_back(rng.chance(0.45) ? 40 : 1 + static_cast<Value>(rng.below(99)));
        t.push_back(rng.chance(0.95) ? 0 : 100 + static_cast<Value>(rng.below(4257)));
        t.push_back(rng.chance(0.92) ? 0 : 100 + static_cast<Value>(rng.below(99900)));
        t.push_back(10000 + static_cast<Value>(rng.below(1490001)));
    };

    const std::size_t heavy_per_prefix = n * 1000 / 45222;
    std::vector<Tuple> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < 16; ++i) {
        const Value prefix[6] = {static_cast<Value>(i % 2 + 1),
                                 static_cast<Value>((2 * i + 1) % 5 + 1),
                                 static_cast<Value>((3 * i + 2) % 6 + 1),
                                 static_cast<Value>((i + 3) % 6 + 1),
                                 static_cast<Value>((5 * i + 1) % 7 + 1),
                                 static_cast<Value>((3 * i) % 8 + 1)};
        for (std::size_t r = 0; r < heavy_per_prefix; ++r) {
            Tuple t(prefix, prefix + 6);
            t.push_back(1 + static_cast<Value>(rng.below(10)));  // heavy occupations
            t.push_back(draw_country());
            push_numeric(t);
            rows.push_back(std::move(t));
        }
    }
    while (rows.size() < n) {
        Tuple t;
        t.reserve(14);
        t.push_back(1 + static_cast<Value>(rng.below(2)));
        t.push_back(1 + static_cast<Value>(rng.below(5)));
        t.push_back(1 + static_cast<Value>(rng.below(6)));
        t.push_back(1 + static_cast<Value>(rng.below(6)));
        t.push_back(1 + static_cast<Value>(rng.below(7)));
        t.push_back(1 + static_cast<Value>(rng.below(8)));
        t.push_back(rng.chance(0.0164) ? 11 + static_cast<Value>(rng.below(4))
                                       : 1 + static_cast<Value>(rng.below(10)));
        t.push_back(draw_country());
        push_numeric(t);
        rows.push_back(std::move(t));
    }
    return make_dataset(make_schema(std::move(attrs), std::move(names)), std::move(rows));
}

}  // namespace hdc
