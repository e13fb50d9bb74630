// Command line front end.
//
//   hdcrawl crawl --gen "numeric-hard:k=8,d=2,m=5" --algorithm rank-shrink --k 8
//   hdcrawl sweep --config sweep.json --out results.csv
//   hdcrawl gen   --type adult-synth --seed 7 --out data.csv --schema-out data.schema.json
//   hdcrawl audit --check space-coverage --schema data.schema.json --log crawl.jsonl
//
// crawl exits 0 only when the reconstructed bag matched the dataset exactly.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hdc/hdc.hpp"

namespace {

int cmd_crawl(const hdc::RunConfig& cfg) {
    hdc::RunOutcome outcome = hdc::run(cfg);
    const hdc::CrawlReport& r = outcome.report;
    std::cout << hdc::report_to_json(r).dump(2) << '\n';
    if (r.violation && !r.ran) {
        std::cerr << "instance invalid: " << r.violation->count << " tuples share point "
                  << hdc::format_point(r.violation->point) << " with k = " << r.k << '\n';
        return 2;
    }
    if (r.unsolvable_point) {
        std::cerr << "crawl aborted: more than k tuples at "
                  << hdc::format_point(*r.unsolvable_point) << '\n';
        return 2;
    }
    if (!r.verified) {
        std::cerr << "reconstruction mismatch\n";
        return 2;
    }
    return 0;
}

int cmd_gen(const std::string& type, std::int64_t k, std::size_t d, std::int64_t m,
            std::int64_t u, std::size_t n, std::uint64_t seed, std::int64_t cap,
            const std::string& out, const std::string& schema_out) {
    std::string spec = type + ":seed=" + std::to_string(seed);
    if (type == "numeric-hard")
        spec += ",k=" + std::to_string(k) + ",d=" + std::to_string(d) + ",m=" + std::to_string(m);
    else if (type == "categorical-hard")
        spec += ",k=" + std::to_string(k) + ",u=" + std::to_string(u);
    else
        spec += ",d=" + std::to_string(d) + ",u=" + std::to_string(u) +
                ",cap=" + std::to_string(cap) + (n ? ",n=" + std::to_string(n) : "");
    hdc::Dataset ds = hdc::generate_dataset(spec);
    if (type == "categorical-hard" && !hdc::categorical_hard_premise_holds({k, u}))
        std::cerr << "note: 2^(d/4) >= d*u^2 does not hold for k=" << k << ", u=" << u
                  << "; the exponential floor argument needs larger k\n";
    hdc::write_dataset_csv(out, ds);
    if (!schema_out.empty()) hdc::write_schema_decl(schema_out, hdc::schema_decl_of(ds));
    std::cout << "wrote " << ds.size() << " rows, " << ds.schema.arity() << " attributes to "
              << out << '\n';
    return 0;
}

int cmd_audit(const std::string& check, const std::string& data, const std::string& schema,
              const std::string& log_path) {
    const auto log = hdc::read_query_log(log_path);
    hdc::CoverageReport report;
    if (check == "numeric-hard-coverage") {
        if (data.empty() || schema.empty())
            throw std::invalid_argument("numeric-hard-coverage needs --data and --schema");
        report = hdc::audit_numeric_hard_coverage(hdc::load_dataset(data, schema).dataset, log);
    } else if (check == "space-coverage") {
        if (schema.empty()) throw std::invalid_argument("space-coverage needs --schema");
        hdc::Schema s;
        if (!data.empty()) {
            s = hdc::load_dataset(data, schema).dataset.schema;
        } else {
            const auto decl = hdc::read_schema_decl(schema);
            for (const auto& a : decl.attributes) {
                if (!a.categorical || !a.values)
                    throw std::invalid_argument(
                        "space-coverage without --data needs categorical attributes with "
                        "explicit value lists");
                s.attributes.push_back(
                    hdc::AttributeSpec::categorical(static_cast<hdc::Value>(a.values->size())));
                s.names.push_back(a.name);
            }
        }
        report = hdc::audit_space_coverage(s, log);
    } else {
        throw std::invalid_argument("unknown check '" + check + "'");
    }
    std::cout << check << ": checked " << report.checked << (report.ok ? ", ok" : ", FAILED")
              << '\n';
    for (const auto& p : report.problems) std::cout << "  " << p << '\n';
    return report.ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"crawler for top-k limited query interfaces"};
    app.require_subcommand(1);

    hdc::RunConfig cfg;
    std::string algorithm = "hybrid";
    double sample = -1;
    auto* crawl = app.add_subcommand("crawl", "crawl one dataset and verify the result");
    crawl->add_option("--data", cfg.data, "dataset CSV");
    crawl->add_option("--schema", cfg.schema, "sidecar schema JSON");
    crawl->add_option("--gen", cfg.gen, "generator spec, e.g. adult-synth:seed=7");
    crawl->add_option("--algorithm", algorithm,
                      "binary-shrink|rank-shrink|dfs|slice-cover|lazy-slice-cover|hybrid");
    crawl->add_option("--k", cfg.k, "server result limit")->required();
    crawl->add_option("--seed", cfg.seed, "priority seed");
    crawl->add_option("--project", cfg.project, "attribute names to keep")->delimiter(',');
    crawl->add_option("--sample", sample, "Bernoulli row-sampling probability");
    crawl->add_flag("--force", cfg.force, "crawl even if instance validation fails");
    crawl->add_option("--out", cfg.out, "report JSON path");
    crawl->add_option("--log-out", cfg.log_out, "query log JSONL path");
    crawl->add_option("--progress-out", cfg.progress_out, "progressiveness CSV path");
    crawl->add_option("--slice-table-out", cfg.slice_table_out, "slice table JSON path");

    std::string sweep_config, sweep_out;
    auto* sw = app.add_subcommand("sweep", "run a list of configured crawls");
    sw->add_option("--config", sweep_config, "sweep config JSON")->required();
    sw->add_option("--out", sweep_out, "results CSV path (overrides config)");

    std::string gen_type = "adult-synth", gen_out, gen_schema_out;
    std::int64_t gen_k = 4, gen_m = 1, gen_u = 3, gen_cap = 4;
    std::size_t gen_d = 2, gen_n = 0;
    std::uint64_t gen_seed = 1;
    auto* gen = app.add_subcommand("gen", "write a synthetic dataset");
    gen->add_option("--type", gen_type,
                    "adult-synth|numeric-hard|categorical-hard|random-numeric|"
                    "random-categorical|random-mixed");
    gen->add_option("--k", gen_k, "hard-instance k");
    gen->add_option("--d", gen_d, "attribute count");
    gen->add_option("--m", gen_m, "numeric-hard group count");
    gen->add_option("--u", gen_u, "categorical domain size");
    gen->add_option("--n", gen_n, "row count (0 = type default)");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--cap", gen_cap, "max duplicates per point (random types)");
    gen->add_option("--out", gen_out, "dataset CSV path")->required();
    gen->add_option("--schema-out", gen_schema_out, "sidecar schema JSON path");

    std::string audit_check, audit_data, audit_schema, audit_log;
    auto* audit = app.add_subcommand("audit", "check a query log against a dataset");
    audit->add_option("--check", audit_check, "numeric-hard-coverage|space-coverage")->required();
    audit->add_option("--data", audit_data, "dataset CSV");
    audit->add_option("--schema", audit_schema, "sidecar schema JSON");
    audit->add_option("--log", audit_log, "query log JSONL")->required();

    CLI11_PARSE(app, argc, argv);
    try {
        if (crawl->parsed()) {
            cfg.algorithm = hdc::parse_algorithm(algorithm);
            if (sample >= 0) cfg.sample = sample;
            return cmd_crawl(cfg);
        }
        if (sw->parsed()) {
            auto reports = hdc::sweep(sweep_config);
            if (!sweep_out.empty()) hdc::write_sweep_csv(sweep_out, reports);
            std::size_t ok = 0;
            for (const auto& r : reports)
                if (r.verified) ++ok;
            std::cout << ok << "/" << reports.size() << " runs verified\n";
            return ok == reports.size() ? 0 : 2;
        }
        if (gen->parsed())
            return cmd_gen(gen_type, gen_k, gen_d, gen_m, gen_u, gen_n, gen_seed, gen_cap,
                           gen_out, gen_schema_out);
        if (audit->parsed()) return cmd_audit(audit_check, audit_data, audit_schema, audit_log);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
