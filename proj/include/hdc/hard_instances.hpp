#pragma once

// Adversarial instance families with provable cost floors, plus the audits
// that certify why they are expensive: on the numeric family every
// off-diagonal point needs its own resolved query; on the categorical family
// queries fixing two or more constants are almost useless, so any correct
// crawl must in effect cover the whole data space with resolved queries.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hdc/core.hpp"
#include "hdc/server.hpp"

namespace hdc {

struct NumericHardParams {
    std::int64_t k = 4;
    std::size_t d = 2;
    std::int64_t m = 1;  // number of groups
};

// m groups over d numeric attributes bounded [1, m+1]. Group i stacks k
// tuples on the diagonal point (i,...,i) and adds d satellites, each raising
// one coordinate to i+1. Any crawler needs at least d*m queries. n = m*(k+d).
inline Dataset gen_numeric_hard(const NumericHardParams& p) {
    if (p.k < 1 || p.m < 1 || p.d < 1) throw std::invalid_argument("gen_numeric_hard: k, d, m >= 1");
    if (static_cast<std::int64_t>(p.d) > p.k)
        throw std::invalid_argument("gen_numeric_hard: requires d <= k");
    std::vector<AttributeSpec> attrs(p.d, AttributeSpec::numeric(1, p.m + 1));
    std::vector<std::string> names;
    for (std::size_t j = 0; j < p.d; ++j) names.push_back("a" + std::to_string(j + 1));

    std::vector<Tuple> rows;
    rows.reserve(static_cast<std::size_t>(p.m) * (static_cast<std::size_t>(p.k) + p.d));
    for (std::int64_t i = 1; i <= p.m; ++i) {
        for (std::int64_t c = 0; c < p.k; ++c) rows.emplace_back(p.d, i);
        for (std::size_t j = 0; j < p.d; ++j) {
            Tuple t(p.d, i);
            t[j] = i + 1;
            rows.push_back(std::move(t));
        }
    }
    return make_dataset(make_schema(std::move(attrs), std::move(names)), std::move(rows));
}

struct CategoricalHardParams {
    std::int64_t k = 3;
    std::int64_t u = 3;  // domain size
};

// d = 2k categorical attributes with domain size u. Group i (one per domain
// value) contributes d tuples, the j-th holding the successor value on
// attribute j and i everywhere else. Values are stored 1-based. n = d*u.
inline Dataset gen_categorical_hard(const CategoricalHardParams& p) {
    if (p.k < 3) throw std::invalid_argument("gen_categorical_hard: requires k >= 3");
    if (p.u < 3) throw std::invalid_argument("gen_categorical_hard: requires u >= 3");
    const std::size_t d = static_cast<std::size_t>(2 * p.k);
    std::vector<AttributeSpec> attrs(d, AttributeSpec::categorical(p.u));
    std::vector<std::string> names;
    for (std::size_t j = 0; j < d; ++j) names.push_back("a" + std::to_string(j + 1));

    std::vector<Tuple> rows;
    rows.reserve(d * static_cast<std::size_t>(p.u));
    for (std::int64_t i = 0; i < p.u; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            Tuple t(d, i + 1);
            t[j] = (i + 1) % p.u + 1;
            rows.push_back(std::move(t));
        }
    }
    return make_dataset(make_schema(std::move(attrs), std::move(names)), std::move(rows));
}

// The 2^(d/4) >= d*u^2 size condition behind the exponential floor. Reported
// by the generator CLI, deliberately not enforced.
inline bool categorical_hard_premise_holds(const CategoricalHardParams& p) {
    const long double lhs = std::pow(2.0L, static_cast<long double>(2 * p.k) / 4.0L);
    const long double rhs =
        static_cast<long double>(2 * p.k) * static_cast<long double>(p.u) * static_cast<long double>(p.u);
    return lhs >= rhs;
}

namespace detail {

inline void require_categorical_predicates(const Query& q, const char* who) {
    for (const auto& p : q.predicates)
        if (p.kind == Predicate::Kind::Range)
            throw std::invalid_argument(std::string(who) + ": expects a categorical query");
}

}  // namespace detail

// At least two constants naming at least two distinct values.
inline bool is_diverse(const Query& q) {
    detail::require_categorical_predicates(q, "is_diverse");
    std::size_t constants = 0;
    bool two_values = false;
    Value first = 0;
    for (const auto& p : q.predicates) {
        if (p.kind != Predicate::Kind::Constant) continue;
        if (constants == 0) first = p.value;
        else if (p.value != first) two_values = true;
        ++constants;
    }
    return constants >= 2 && two_values;
}

// At least two constants, all naming the same value.
inline bool is_monotonic(const Query& q) {
    detail::require_categorical_predicates(q, "is_monotonic");
    std::size_t constants = 0;
    bool two_values = false;
    Value first = 0;
    for (const auto& p : q.predicates) {
        if (p.kind != Predicate::Kind::Constant) continue;
        if (constants == 0) first = p.value;
        else if (p.value != first) two_values = true;
        ++constants;
    }
    return constants >= 2 && !two_values;
}

// All d-dimensional {x,y}-vectors except the two constant ones; the family
// whose size defeats any small set of resolved queries. Refuses to enumerate
// more than max_points tuples.
inline std::vector<Tuple> bichromatic_set(Value x, Value y, std::size_t d,
                                          std::size_t max_points = std::size_t{1} << 20) {
    if (x == y) throw std::invalid_argument("bichromatic_set: x == y");
    if (d < 2 || d >= 63) throw std::invalid_argument("bichromatic_set: d out of range");
    const std::uint64_t total = (std::uint64_t{1} << d) - 2;
    if (total > max_points)
        throw std::invalid_argument("bichromatic_set: 2^d - 2 exceeds the enumeration cap");
    std::vector<Tuple> out;
    out.reserve(total);
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << d) - 1; ++mask) {
        Tuple t(d, x);
        for (std::size_t j = 0; j < d; ++j)
            if ((mask >> j) & 1) t[j] = y;
        out.push_back(std::move(t));
    }
    return out;
}

struct CoverageReport {
    bool ok = true;
    std::size_t checked = 0;
    std::vector<std::string> problems;  // truncated to a handful

    void problem(std::string msg) {
        ok = false;
        if (problems.size() < 8) problems.push_back(std::move(msg));
    }
};

// Certifies the d*m floor witness on a numeric hard instance: every
// off-diagonal point must be covered by some resolved query, and no resolved
// query may cover two of them.
inline CoverageReport audit_numeric_hard_coverage(const Dataset& ds,
                                                  const std::vector<LoggedQuery>& log) {
    std::vector<Tuple> satellites;
    for (const auto& rec : ds.records) {
        bool diagonal = true;
        for (Value v : rec.values)
            if (v != rec.values[0]) diagonal = false;
        if (!diagonal) satellites.push_back(rec.values);
    }
    std::sort(satellites.begin(), satellites.end());
    satellites.erase(std::unique(satellites.begin(), satellites.end()), satellites.end());

    CoverageReport report;
    report.checked = satellites.size();
    std::vector<char> covered(satellites.size(), 0);
    for (const auto& entry : log) {
        if (entry.overflowed) continue;
        std::size_t hit = 0;
        for (std::size_t i = 0; i < satellites.size(); ++i)
            if (matches(entry.query, satellites[i])) {
                covered[i] = 1;
                ++hit;
            }
        if (hit > 1)
            report.problem("resolved query covers " + std::to_string(hit) +
                           " off-diagonal points");
    }
    for (std::size_t i = 0; i < satellites.size(); ++i)
        if (!covered[i]) report.problem("uncovered off-diagonal point " + format_point(satellites[i]));
    return report;
}

// Certifies that the resolved queries of a finished categorical crawl cover
// the entire data space (every point, occupied or not).
inline CoverageReport audit_space_coverage(const Schema& schema,
                                           const std::vector<LoggedQuery>& log,
                                           std::size_t max_points = std::size_t{1} << 22) {
    if (!schema.all_categorical())
        throw std::invalid_argument("audit_space_coverage: requires a categorical schema");
    std::uint64_t total = 1;
    for (const auto& a : schema.attributes) {
        total *= static_cast<std::uint64_t>(a.domain);
        if (total > max_points)
            throw std::invalid_argument("audit_space_coverage: space exceeds the enumeration cap");
    }

    CoverageReport report;
    report.checked = total;
    Tuple point(schema.arity(), 1);
    for (;;) {
        bool covered = false;
        for (const auto& entry : log)
            if (!entry.overflowed && matches(entry.query, point)) {
                covered = true;
                break;
            }
        if (!covered) report.problem("uncovered point " + format_point(point));
        std::size_t j = 0;
        while (j < point.size() && point[j] == schema.attributes[j].domain) point[j++] = 1;
        if (j == point.size()) break;
        ++point[j];
    }
    return report;
}

}  // namespace hdc
