#pragma once

// Simulated top-k query interface. The session owns a private copy of the
// dataset, answers conjunctive queries by priority, and keeps an append-only
// log plus progressiveness accounting. Every query costs one unit.

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>

#include "hdc/core.hpp"

namespace hdc {

struct ServerConfig {
    std::int64_t k = 4;
    std::uint64_t seed = 1;  // priority assignment, when the dataset has none
};

struct LoggedQuery {
    Query query;
    bool overflowed = false;
    std::size_t returned = 0;
};

struct InstanceViolation {
    Tuple point;
    std::size_t count = 0;  // multiplicity, > k
};

// A point shared by more than k tuples can never be separated by any query,
// so the crawl problem has no solution on such a dataset.
inline std::optional<InstanceViolation> validate_instance(const Dataset& ds, std::int64_t k) {
    if (k < 1) throw std::invalid_argument("validate_instance: k < 1");
    std::vector<std::size_t> idx(ds.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return ds.records[a].values < ds.records[b].values;
    });
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j < idx.size() && ds.records[idx[j]].values == ds.records[idx[i]].values) ++j;
        if (j - i > static_cast<std::size_t>(k))
            return InstanceViolation{ds.records[idx[i]].values, j - i};
        i = j;
    }
    return std::nullopt;
}

class ServerSession {
  public:
    ServerSession(Dataset dataset, ServerConfig config)
        : data_(std::move(dataset)), config_(config) {
        if (config_.k < 1) throw std::invalid_argument("server: k < 1");
        if (!data_.priorities_assigned) assign_priorities(data_, config_.seed);
        validate_dataset(data_);

        const std::size_t n = data_.size();
        const std::size_t d = data_.schema.arity();
        order_.resize(n);
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
            return data_.records[a].priority > data_.records[b].priority;
        });
        flat_.reserve(n * d);
        for (std::size_t r : order_)
            flat_.insert(flat_.end(), data_.records[r].values.begin(),
                         data_.records[r].values.end());
        seen_.assign(n, 0);
    }

    std::int64_t k() const { return config_.k; }
    const Dataset& dataset() const { return data_; }
    std::size_t cost() const { return log_.size(); }
    const std::vector<LoggedQuery>& log() const { return log_; }

    // Distinct ids returned so far in resolved responses.
    std::size_t retrieved_count() const { return seen_count_; }
    // retrieved_count after the 1st, 2nd, ... query.
    const std::vector<std::size_t>& progress() const { return progress_; }

    QueryResponse answer(const Query& q) {
        validate_query(data_.schema, q);
        const std::size_t d = data_.schema.arity();
        const std::size_t n = data_.size();
        const std::size_t cap = static_cast<std::size_t>(config_.k);

        std::vector<Value> lo(d), hi(d);
        for (std::size_t i = 0; i < d; ++i) {
            const Predicate& p = q.predicates[i];
            switch (p.kind) {
                case Predicate::Kind::Wildcard:
                    lo[i] = data_.schema.attributes[i].min_value();
                    hi[i] = data_.schema.attributes[i].max_value();
                    break;
                case Predicate::Kind::Constant:
                    lo[i] = hi[i] = p.value;
                    break;
                case Predicate::Kind::Range:
                    lo[i] = p.lo;
                    hi[i] = p.hi;
                    break;
            }
        }

        QueryResponse resp;
        std::vector<std::size_t> hits;  // positions in priority order
        for (std::size_t r = 0; r < n; ++r) {
            const Value* row = flat_.data() + r * d;
            bool ok = true;
            for (std::size_t i = 0; i < d; ++i) {
                const Value v = row[i];
                if (v < lo[i] || v > hi[i]) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            if (hits.size() == cap) {
                resp.overflowed = true;
                break;
            }
            hits.push_back(r);
        }

        resp.returned.reserve(hits.size());
        for (std::size_t r : hits) {
            const Value* row = flat_.data() + r * d;
            resp.returned.emplace_back(row, row + d);
        }
        if (!resp.overflowed)
            for (std::size_t r : hits) {
                if (!seen_[order_[r]]) {
                    seen_[order_[r]] = 1;
                    ++seen_count_;
                }
            }
        log_.push_back({q, resp.overflowed, resp.returned.size()});
        progress_.push_back(seen_count_);
        return resp;
    }

  private:
    Dataset data_;
    ServerConfig config_;
    std::vector<std::size_t> order_;  // record index by priority, descending
    std::vector<Value> flat_;         // row-major values in priority order
    std::vector<LoggedQuery> log_;
    std::vector<char> seen_;          // by record index
    std::size_t seen_count_ = 0;
    std::vector<std::size_t> progress_;
};

// True when the crawl result is exactly the dataset's bag of tuples.
inline bool verify_reconstruction(const std::vector<Tuple>& crawled, const Dataset& ds) {
    std::vector<Tuple> truth;
    truth.reserve(ds.size());
    for (const auto& rec : ds.records) truth.push_back(rec.values);
    return multiset_equal(crawled, std::move(truth));
}

}  // namespace hdc
