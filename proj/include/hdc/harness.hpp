#pragma once

// Experiment harness: dataset loading or generation, projection and seeded
// row sampling, one-crawl runs with verification, and config-driven sweeps
// emitting CSV. A run counts as successful only when the crawled bag equals
// the dataset exactly.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hdc/core.hpp"
#include "hdc/crawler_categorical.hpp"
#include "hdc/crawler_hybrid.hpp"
#include "hdc/crawler_numeric.hpp"
#include "hdc/datagen.hpp"
#include "hdc/hard_instances.hpp"
#include "hdc/io.hpp"
#include "hdc/server.hpp"

namespace hdc {

enum class Algorithm { BinaryShrink, RankShrink, Dfs, SliceCover, LazySliceCover, Hybrid };

inline const char* to_string(Algorithm a) {
    switch (a) {
        case Algorithm::BinaryShrink: return "binary-shrink";
        case Algorithm::RankShrink: return "rank-shrink";
        case Algorithm::Dfs: return "dfs";
        case Algorithm::SliceCover: return "slice-cover";
        case Algorithm::LazySliceCover: return "lazy-slice-cover";
        case Algorithm::Hybrid: return "hybrid";
    }
    return "?";
}

inline Algorithm parse_algorithm(const std::string& s) {
    if (s == "binary-shrink") return Algorithm::BinaryShrink;
    if (s == "rank-shrink") return Algorithm::RankShrink;
    if (s == "dfs") return Algorithm::Dfs;
    if (s == "slice-cover") return Algorithm::SliceCover;
    if (s == "lazy-slice-cover") return Algorithm::LazySliceCover;
    if (s == "hybrid") return Algorithm::Hybrid;
    throw std::invalid_argument("unknown algorithm '" + s + "'");
}

struct RunConfig {
    std::string data, schema;  // CSV + sidecar, or:
    std::string gen;           // generator spec "type:key=val,..."
    Algorithm algorithm = Algorithm::Hybrid;
    std::int64_t k = 4;
    std::uint64_t seed = 1;
    std::vector<std::string> project;  // attribute names; empty = all
    std::optional<double> sample;      // Bernoulli keep-probability
    bool force = false;                // crawl even if validation fails
    std::string out, log_out, progress_out, slice_table_out;
};

struct CrawlReport {
    std::string algorithm;
    std::int64_t k = 0;
    std::uint64_t seed = 0;
    std::size_t n = 0, d = 0, cat = 0;
    double n_fraction = 1.0;
    std::size_t cost = 0, resolved = 0, overflowed = 0;
    std::size_t slice_queries = 0, node_queries = 0, leaf_queries = 0, leaf_count = 0;
    bool ran = false;       // a crawl was attempted
    bool verified = false;  // crawled bag equals the dataset
    std::optional<InstanceViolation> violation;  // failed pre-validation
    std::optional<Tuple> unsolvable_point;       // crawl aborted mid-flight
    double wall_ms = 0;
    std::vector<std::size_t> progress;
};

struct RunOutcome {
    CrawlReport report;
    ServerSession session;
    std::vector<Tuple> tuples;
    SliceTable table;
    std::vector<SplitEvent> splits;
    std::vector<LeafRun> leaves;
};

inline Dataset project_dataset(const Dataset& ds, const std::vector<std::size_t>& keep) {
    Schema schema;
    for (std::size_t i : keep) {
        if (i >= ds.schema.arity()) throw std::invalid_argument("project: attribute out of range");
        schema.attributes.push_back(ds.schema.attributes[i]);
        if (!ds.schema.names.empty()) schema.names.push_back(ds.schema.names[i]);
    }
    validate_schema(schema);
    Dataset out;
    out.schema = std::move(schema);
    out.records.reserve(ds.size());
    for (const auto& rec : ds.records) {
        Tuple t;
        t.reserve(keep.size());
        for (std::size_t i : keep) t.push_back(rec.values[i]);
        out.records.push_back({std::move(t), rec.id, rec.priority});
    }
    out.priorities_assigned = ds.priorities_assigned;
    return out;
}

inline Dataset project_dataset(const Dataset& ds, const std::vector<std::string>& names) {
    std::vector<std::size_t> keep;
    for (const auto& name : names) {
        std::size_t found = ds.schema.arity();
        for (std::size_t i = 0; i < ds.schema.arity(); ++i)
            if (ds.schema.name_of(i) == name) found = i;
        if (found == ds.schema.arity())
            throw std::invalid_argument("project: no attribute named '" + name + "'");
        keep.push_back(found);
    }
    return project_dataset(ds, keep);
}

// Keeps each record independently with the given probability.
inline Dataset sample_dataset(const Dataset& ds, double keep_prob, std::uint64_t seed) {
    if (keep_prob < 0 || keep_prob > 1) throw std::invalid_argument("sample: probability outside [0,1]");
    Rng rng(seed);
    Dataset out;
    out.schema = ds.schema;
    out.priorities_assigned = ds.priorities_assigned;
    for (const auto& rec : ds.records)
        if (rng.chance(keep_prob)) out.records.push_back(rec);
    return out;
}

namespace detail {

inline void check_algorithm_schema(Algorithm alg, const Schema& schema) {
    switch (alg) {
        case Algorithm::BinaryShrink:
        case Algorithm::RankShrink:
            if (!schema.all_numeric())
                throw std::invalid_argument(std::string(to_string(alg)) +
                                            ": requires a purely numeric schema");
            break;
        case Algorithm::Dfs:
        case Algorithm::SliceCover:
        case Algorithm::LazySliceCover:
            if (!schema.all_categorical())
                throw std::invalid_argument(std::string(to_string(alg)) +
                                            ": requires a purely categorical schema");
            break;
        case Algorithm::Hybrid: break;
    }
}

}  // namespace detail

inline RunOutcome run_on_dataset(Dataset ds, Algorithm alg, std::int64_t k, std::uint64_t seed,
                                 bool force = false, const CrawlOptions& opts = {}) {
    detail::check_algorithm_schema(alg, ds.schema);
    CrawlReport report;
    report.algorithm = to_string(alg);
    report.k = k;
    report.seed = seed;
    report.n = ds.size();
    report.d = ds.schema.arity();
    report.cat = ds.schema.categorical_count();
    report.violation = validate_instance(ds, k);

    ServerSession session(std::move(ds), ServerConfig{k, seed});
    std::vector<Tuple> tuples;
    SliceTable table;
    std::vector<SplitEvent> splits;
    std::vector<LeafRun> leaves;

    if (!report.violation || force) {
        report.ran = true;
        const auto start = std::chrono::steady_clock::now();
        try {
            switch (alg) {
                case Algorithm::BinaryShrink: {
                    auto r = binary_shrink(session, full_box(session.dataset().schema), opts);
                    tuples = std::move(r.tuples);
                    splits = std::move(r.splits);
                    break;
                }
                case Algorithm::RankShrink: {
                    auto r = rank_shrink(session, full_box(session.dataset().schema), opts);
                    tuples = std::move(r.tuples);
                    splits = std::move(r.splits);
                    break;
                }
                case Algorithm::Dfs: {
                    auto r = dfs(session, opts);
                    tuples = std::move(r.tuples);
                    report.node_queries = r.node_queries;
                    break;
                }
                case Algorithm::SliceCover:
                case Algorithm::LazySliceCover: {
                    auto r = alg == Algorithm::SliceCover ? slice_cover(session, opts)
                                                          : lazy_slice_cover(session, opts);
                    tuples = std::move(r.tuples);
                    table = std::move(r.table);
                    report.slice_queries = r.slice_queries;
                    report.node_queries = r.node_queries;
                    break;
                }
                case Algorithm::Hybrid: {
                    auto r = hybrid(session, opts);
                    tuples = std::move(r.tuples);
                    table = std::move(r.table);
                    leaves = std::move(r.leaves);
                    report.slice_queries = r.slice_queries;
                    report.node_queries = r.node_queries;
                    report.leaf_count = leaves.size();
                    for (const auto& l : leaves) report.leaf_queries += l.queries;
                    break;
                }
            }
            report.verified = verify_reconstruction(tuples, session.dataset());
        } catch (const UnsolvableInstance& e) {
            report.unsolvable_point = e.point();
        }
        report.wall_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    }
    report.cost = session.cost();
    for (const auto& entry : session.log())
        entry.overflowed ? ++report.overflowed : ++report.resolved;
    report.progress = session.progress();
    return RunOutcome{std::move(report), std::move(session), std::move(tuples),
                      std::move(table),  std::move(splits),  std::move(leaves)};
}

namespace detail {

inline std::vector<std::pair<std::string, std::string>> parse_kv(const std::string& s) {
    std::vector<std::pair<std::string, std::string>> kv;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t end = s.find(',', pos);
        if (end == std::string::npos) end = s.size();
        const std::string item = s.substr(pos, end - pos);
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("generator spec: expected key=value, got '" + item + "'");
        kv.emplace_back(item.substr(0, eq), item.substr(eq + 1));
        pos = end + 1;
    }
    return kv;
}

}  // namespace detail

// "numeric-hard:k=4,d=2,m=5", "categorical-hard:k=3,u=4",
// "adult-synth:n=45222,seed=7", "random-numeric:d=3,n=500,seed=9,cap=4",
// "random-categorical:d=3,u=5,n=500,seed=9,cap=4",
// "random-mixed:cat=2,u=4,num=2,n=500,seed=9,cap=4".
inline Dataset generate_dataset(const std::string& spec) {
    const std::size_t colon = spec.find(':');
    const std::string type = spec.substr(0, colon);
    std::int64_t k = 4, m = 1, u = 3, cap = 4;
    std::size_t d = 2, cat = 2, num = 2;
    std::optional<std::size_t> n;
    std::uint64_t seed = 1;
    if (colon != std::string::npos)
        for (const auto& [key, val] : detail::parse_kv(spec.substr(colon + 1))) {
            if (key == "k") k = std::stoll(val);
            else if (key == "d") d = static_cast<std::size_t>(std::stoull(val));
            else if (key == "m") m = std::stoll(val);
            else if (key == "u") u = std::stoll(val);
            else if (key == "n") n = static_cast<std::size_t>(std::stoull(val));
            else if (key == "cat") cat = static_cast<std::size_t>(std::stoull(val));
            else if (key == "num") num = static_cast<std::size_t>(std::stoull(val));
            else if (key == "seed") seed = std::stoull(val);
            else if (key == "cap") cap = std::stoll(val);
            else throw std::invalid_argument("generator spec: unknown key '" + key + "'");
        }
    if (type == "numeric-hard") return gen_numeric_hard({k, d, m});
    if (type == "categorical-hard") return gen_categorical_hard({k, u});
    if (type == "adult-synth") return adult_like_dataset(seed, n.value_or(45222));
    if (type == "random-numeric") return random_numeric_dataset(seed, d, n.value_or(1000), cap);
    if (type == "random-categorical")
        return random_categorical_dataset(seed, std::vector<Value>(d, u), n.value_or(1000), cap);
    if (type == "random-mixed")
        return random_mixed_dataset(seed, std::vector<Value>(cat, u), num, n.value_or(1000), cap);
    throw std::invalid_argument("generator spec: unknown type '" + type + "'");
}

inline nlohmann::json report_to_json(const CrawlReport& r) {
    nlohmann::json j;
    j["algorithm"] = r.algorithm;
    j["k"] = r.k;
    j["seed"] = r.seed;
    j["n"] = r.n;
    j["d"] = r.d;
    j["categorical_attributes"] = r.cat;
    j["n_fraction"] = r.n_fraction;
    j["cost"] = r.cost;
    j["resolved"] = r.resolved;
    j["overflowed"] = r.overflowed;
    j["ran"] = r.ran;
    j["verified"] = r.verified;
    j["wall_ms"] = r.wall_ms;
    if (r.slice_queries || r.node_queries) {
        j["slice_queries"] = r.slice_queries;
        j["node_queries"] = r.node_queries;
    }
    if (r.leaf_count) {
        j["leaf_count"] = r.leaf_count;
        j["leaf_queries"] = r.leaf_queries;
    }
    if (r.violation) {
        j["violation"]["point"] = r.violation->point;
        j["violation"]["count"] = r.violation->count;
    }
    if (r.unsolvable_point) j["unsolvable_point"] = *r.unsolvable_point;
    return j;
}

// Loads or generates the dataset, applies projection and sampling, runs the
// crawl, and writes any requested artifacts.
inline RunOutcome run(const RunConfig& cfg) {
    Dataset ds;
    if (!cfg.gen.empty()) {
        ds = generate_dataset(cfg.gen);
    } else if (!cfg.data.empty() && !cfg.schema.empty()) {
        ds = load_dataset(cfg.data, cfg.schema).dataset;
    } else {
        throw std::invalid_argument("run: need either gen or data+schema");
    }
    if (!cfg.project.empty()) ds = project_dataset(ds, cfg.project);
    double fraction = 1.0;
    if (cfg.sample) {
        fraction = *cfg.sample;
        ds = sample_dataset(ds, fraction, cfg.seed * 0x9e3779b97f4a7c15ULL + 1);
    }
    RunOutcome outcome = run_on_dataset(std::move(ds), cfg.algorithm, cfg.k, cfg.seed, cfg.force);
    outcome.report.n_fraction = fraction;
    if (!cfg.out.empty()) detail::open_out(cfg.out) << report_to_json(outcome.report).dump(2) << '\n';
    if (!cfg.log_out.empty()) write_query_log(cfg.log_out, outcome.session.log());
    if (!cfg.progress_out.empty())
        write_progress_csv(cfg.progress_out, outcome.session.progress(), outcome.report.n);
    if (!cfg.slice_table_out.empty()) write_slice_table_json(cfg.slice_table_out, outcome.table);
    return outcome;
}

inline RunConfig run_config_from_json(const nlohmann::json& j) {
    RunConfig cfg;
    cfg.data = j.value("data", "");
    cfg.schema = j.value("schema", "");
    cfg.gen = j.value("gen", "");
    cfg.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
    cfg.k = j.at("k").get<std::int64_t>();
    cfg.seed = j.value("seed", std::uint64_t{1});
    if (j.contains("project")) cfg.project = j["project"].get<std::vector<std::string>>();
    if (j.contains("sample")) cfg.sample = j["sample"].get<double>();
    cfg.force = j.value("force", false);
    return cfg;
}

inline void write_sweep_csv(const std::string& path, const std::vector<CrawlReport>& reports) {
    auto out = detail::open_out(path);
    out << "algorithm,k,d,n,n_fraction,cost,verified,wall_ms\n";
    for (const auto& r : reports)
        out << r.algorithm << ',' << r.k << ',' << r.d << ',' << r.n << ',' << r.n_fraction << ','
            << r.cost << ',' << (r.verified ? 1 : 0) << ',' << r.wall_ms << '\n';
}

// Sweep config: {"csv": "out.csv", "runs": [ { run fields... }, ... ]}.
inline std::vector<CrawlReport> sweep(const std::string& config_path) {
    auto in = detail::open_in(config_path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(config_path + ": " + e.what());
    }
    std::vector<CrawlReport> reports;
    for (const auto& rj : j.at("runs")) reports.push_back(run(run_config_from_json(rj)).report);
    if (j.contains("csv")) write_sweep_csv(j["csv"].get<std::string>(), reports);
    return reports;
}

}  // namespace hdc
