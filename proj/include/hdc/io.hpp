#pragma once

// File formats: CSV datasets with a JSON sidecar schema (kind, bounds or
// dictionary, and crawl order per attribute), JSONL query logs, and JSON
// dumps of slice tables. Categorical labels are canonicalized to 1..U by
// dictionary position; mixed declarations are stably reordered so the
// categorical attributes form a prefix, and the mapping back to source
// columns is kept.

#include <charconv>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hdc/core.hpp"
#include "hdc/crawler_categorical.hpp"
#include "hdc/server.hpp"

namespace hdc {

struct AttributeDecl {
    std::string name;
    bool categorical = false;
    std::optional<Value> lo, hi;                        // numeric; observed when absent
    std::optional<std::vector<std::string>> values;     // categorical; inferred when absent
};

struct SchemaDecl {
    std::vector<AttributeDecl> attributes;  // crawl order before normalization
};

struct IngestResult {
    Dataset dataset;
    std::vector<std::vector<std::string>> labels;  // per attribute; empty for numeric
    std::vector<std::size_t> source_column;        // attribute i came from this CSV column
};

namespace detail {

inline std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open for reading");
    return in;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    return out;
}

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
    while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
    return s.substr(a, b - a);
}

// One CSV record; handles double-quoted fields with "" escapes.
inline std::vector<std::string> split_csv_line(const std::string& line, const std::string& where) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += ch;
            }
        } else if (ch == '"' && cur.empty()) {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (quoted) throw std::runtime_error(where + ": unterminated quote");
    fields.push_back(trim(cur));
    return fields;
}

inline Value parse_value(const std::string& field, const std::string& where) {
    Value v = 0;
    const char* b = field.data();
    const char* e = b + field.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc{} || p != e)
        throw std::runtime_error(where + ": not an integer: '" + field + "'");
    return v;
}

}  // namespace detail

inline SchemaDecl read_schema_decl(const std::string& path) {
    auto in = detail::open_in(path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    if (!j.contains("attributes") || !j["attributes"].is_array())
        throw std::runtime_error(path + ": expected an 'attributes' array");
    SchemaDecl decl;
    for (const auto& a : j["attributes"]) {
        AttributeDecl d;
        d.name = a.at("name").get<std::string>();
        const std::string kind = a.at("kind").get<std::string>();
        if (kind == "categorical") {
            d.categorical = true;
            if (a.contains("values")) d.values = a["values"].get<std::vector<std::string>>();
        } else if (kind == "numeric") {
            if (a.contains("lo")) d.lo = a["lo"].get<Value>();
            if (a.contains("hi")) d.hi = a["hi"].get<Value>();
        } else {
            throw std::runtime_error(path + ": unknown attribute kind '" + kind + "'");
        }
        decl.attributes.push_back(std::move(d));
    }
    if (decl.attributes.empty()) throw std::runtime_error(path + ": no attributes declared");
    return decl;
}

inline void write_schema_decl(const std::string& path, const SchemaDecl& decl) {
    nlohmann::json j;
    j["attributes"] = nlohmann::json::array();
    for (const auto& d : decl.attributes) {
        nlohmann::json a;
        a["name"] = d.name;
        a["kind"] = d.categorical ? "categorical" : "numeric";
        if (d.categorical) {
            if (d.values) a["values"] = *d.values;
        } else {
            if (d.lo) a["lo"] = *d.lo;
            if (d.hi) a["hi"] = *d.hi;
        }
        j["attributes"].push_back(std::move(a));
    }
    detail::open_out(path) << j.dump(2) << '\n';
}

inline IngestResult ingest_csv(const std::string& csv_path, const SchemaDecl& decl) {
    auto in = detail::open_in(csv_path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(csv_path + ": empty file");
    const auto header = detail::split_csv_line(line, csv_path + ":1");

    // Stable categorical-first normalization of the declared order.
    std::vector<std::size_t> decl_order;
    for (std::size_t i = 0; i < decl.attributes.size(); ++i)
        if (decl.attributes[i].categorical) decl_order.push_back(i);
    for (std::size_t i = 0; i < decl.attributes.size(); ++i)
        if (!decl.attributes[i].categorical) decl_order.push_back(i);

    IngestResult out;
    for (std::size_t di : decl_order) {
        const auto& d = decl.attributes[di];
        std::size_t col = header.size();
        for (std::size_t c = 0; c < header.size(); ++c)
            if (header[c] == d.name) col = c;
        if (col == header.size())
            throw std::runtime_error(csv_path + ": no column named '" + d.name + "'");
        out.source_column.push_back(col);
    }

    std::vector<std::vector<std::string>> cells;  // per attribute, in crawl order
    cells.resize(decl_order.size());
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const std::string where = csv_path + ":" + std::to_string(line_no);
        const auto fields = detail::split_csv_line(line, where);
        if (fields.size() != header.size())
            throw std::runtime_error(where + ": expected " + std::to_string(header.size()) +
                                     " fields, got " + std::to_string(fields.size()));
        for (std::size_t a = 0; a < decl_order.size(); ++a)
            cells[a].push_back(fields[out.source_column[a]]);
    }
    const std::size_t n = cells.empty() ? 0 : cells[0].size();

    std::vector<AttributeSpec> attrs;
    std::vector<std::string> names;
    out.labels.resize(decl_order.size());
    std::vector<std::vector<Value>> columns(decl_order.size());
    for (std::size_t a = 0; a < decl_order.size(); ++a) {
        const auto& d = decl.attributes[decl_order[a]];
        names.push_back(d.name);
        if (d.categorical) {
            std::vector<std::string> dict;
            if (d.values) {
                dict = *d.values;
            } else {
                dict = cells[a];
                std::sort(dict.begin(), dict.end());
                dict.erase(std::unique(dict.begin(), dict.end()), dict.end());
            }
            if (dict.empty()) dict.push_back("");
            attrs.push_back(AttributeSpec::categorical(static_cast<Value>(dict.size())));
            columns[a].reserve(n);
            for (std::size_t r = 0; r < n; ++r) {
                const auto it = std::find(dict.begin(), dict.end(), cells[a][r]);
                if (it == dict.end())
                    throw std::runtime_error(csv_path + ":" + std::to_string(r + 2) +
                                             ": label '" + cells[a][r] +
                                             "' not in the declared dictionary for " + d.name);
                columns[a].push_back(static_cast<Value>(it - dict.begin()) + 1);
            }
            out.labels[a] = std::move(dict);
        } else {
            columns[a].reserve(n);
            for (std::size_t r = 0; r < n; ++r)
                columns[a].push_back(detail::parse_value(
                    cells[a][r], csv_path + ":" + std::to_string(r + 2) + " (" + d.name + ")"));
            Value lo, hi;
            if (d.lo && d.hi) {
                lo = *d.lo;
                hi = *d.hi;
                for (std::size_t r = 0; r < n; ++r)
                    if (columns[a][r] < lo || columns[a][r] > hi)
                        throw std::runtime_error(csv_path + ":" + std::to_string(r + 2) +
                                                 ": value outside declared bounds for " + d.name);
            } else if (n > 0) {
                lo = hi = columns[a][0];
                for (Value v : columns[a]) {
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
                if (d.lo) lo = std::min(lo, *d.lo);
                if (d.hi) hi = std::max(hi, *d.hi);
            } else {
                lo = d.lo.value_or(0);
                hi = d.hi.value_or(lo);
            }
            attrs.push_back(AttributeSpec::numeric(lo, hi));
        }
    }

    std::vector<Tuple> rows(n, Tuple(decl_order.size()));
    for (std::size_t a = 0; a < decl_order.size(); ++a)
        for (std::size_t r = 0; r < n; ++r) rows[r][a] = columns[a][r];
    out.dataset = make_dataset(make_schema(std::move(attrs), std::move(names)), std::move(rows));
    return out;
}

inline IngestResult load_dataset(const std::string& csv_path, const std::string& schema_path) {
    return ingest_csv(csv_path, read_schema_decl(schema_path));
}

// Companion declaration for a generated dataset; categorical dictionaries
// default to the canonical "1".."U".
inline SchemaDecl schema_decl_of(const Dataset& ds,
                                 const std::vector<std::vector<std::string>>* labels = nullptr) {
    SchemaDecl decl;
    for (std::size_t i = 0; i < ds.schema.arity(); ++i) {
        const auto& a = ds.schema.attributes[i];
        AttributeDecl d;
        d.name = ds.schema.name_of(i).empty() ? "a" + std::to_string(i + 1) : ds.schema.name_of(i);
        if (a.is_categorical()) {
            d.categorical = true;
            std::vector<std::string> dict;
            if (labels && i < labels->size() && !(*labels)[i].empty()) {
                dict = (*labels)[i];
            } else {
                for (Value v = 1; v <= a.domain; ++v) dict.push_back(std::to_string(v));
            }
            d.values = std::move(dict);
        } else {
            d.lo = a.lo;
            d.hi = a.hi;
        }
        decl.attributes.push_back(std::move(d));
    }
    return decl;
}

inline void write_dataset_csv(const std::string& path, const Dataset& ds,
                              const std::vector<std::vector<std::string>>* labels = nullptr) {
    auto out = detail::open_out(path);
    for (std::size_t i = 0; i < ds.schema.arity(); ++i) {
        if (i) out << ',';
        out << (ds.schema.name_of(i).empty() ? "a" + std::to_string(i + 1) : ds.schema.name_of(i));
    }
    out << '\n';
    for (const auto& rec : ds.records) {
        for (std::size_t i = 0; i < rec.values.size(); ++i) {
            if (i) out << ',';
            if (ds.schema.attributes[i].is_categorical() && labels && i < labels->size() &&
                !(*labels)[i].empty())
                out << (*labels)[i][static_cast<std::size_t>(rec.values[i]) - 1];
            else
                out << rec.values[i];
        }
        out << '\n';
    }
}

inline nlohmann::json predicate_to_json(const Predicate& p) {
    nlohmann::json j;
    switch (p.kind) {
        case Predicate::Kind::Wildcard: j["kind"] = "wildcard"; break;
        case Predicate::Kind::Constant:
            j["kind"] = "const";
            j["value"] = p.value;
            break;
        case Predicate::Kind::Range:
            j["kind"] = "range";
            j["lo"] = p.lo;
            j["hi"] = p.hi;
            break;
    }
    return j;
}

inline Predicate predicate_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "wildcard") return Predicate::wildcard();
    if (kind == "const") return Predicate::constant(j.at("value").get<Value>());
    if (kind == "range") return Predicate::range(j.at("lo").get<Value>(), j.at("hi").get<Value>());
    throw std::runtime_error("query log: unknown predicate kind '" + kind + "'");
}

// One JSON object per line: {"index", "predicates", "overflowed", "returned"}.
inline void write_query_log(const std::string& path, const std::vector<LoggedQuery>& log) {
    auto out = detail::open_out(path);
    for (std::size_t i = 0; i < log.size(); ++i) {
        nlohmann::json j;
        j["index"] = i + 1;
        j["predicates"] = nlohmann::json::array();
        for (const auto& p : log[i].query.predicates)
            j["predicates"].push_back(predicate_to_json(p));
        j["overflowed"] = log[i].overflowed;
        j["returned"] = log[i].returned;
        out << j.dump() << '\n';
    }
}

inline std::vector<LoggedQuery> read_query_log(const std::string& path) {
    auto in = detail::open_in(path);
    std::vector<LoggedQuery> log;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        LoggedQuery entry;
        for (const auto& pj : j.at("predicates")) entry.query.predicates.push_back(predicate_from_json(pj));
        entry.overflowed = j.at("overflowed").get<bool>();
        entry.returned = j.value("returned", std::size_t{0});
        log.push_back(std::move(entry));
    }
    return log;
}

inline void write_slice_table_json(const std::string& path, const SliceTable& table) {
    nlohmann::json j = nlohmann::json::array();
    for (std::size_t attr = 0; attr < table.entries.size(); ++attr) {
        for (std::size_t c = 0; c < table.entries[attr].size(); ++c) {
            const auto& e = table.entries[attr][c];
            nlohmann::json item;
            item["attr"] = attr;
            item["value"] = c + 1;
            item["state"] = e.state == SliceState::State::Overflow   ? "overflow"
                            : e.state == SliceState::State::Resolved ? "resolved"
                                                                     : "unknown";
            if (e.state == SliceState::State::Resolved) item["count"] = e.bag.size();
            j.push_back(std::move(item));
        }
    }
    detail::open_out(path) << j.dump(2) << '\n';
}

// query_index,retrieved,fraction rows tracking distinct tuples recovered by
// resolved responses as the crawl progresses.
inline void write_progress_csv(const std::string& path, const std::vector<std::size_t>& progress,
                               std::size_t n) {
    auto out = detail::open_out(path);
    out << "query_index,retrieved,fraction\n";
    for (std::size_t i = 0; i < progress.size(); ++i) {
        const double frac = n == 0 ? 1.0 : static_cast<double>(progress[i]) / static_cast<double>(n);
        out << (i + 1) << ',' << progress[i] << ',' << frac << '\n';
    }
}

}  // namespace hdc
