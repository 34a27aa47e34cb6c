// Copyright 2026 The entpart Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Experiment configuration, dataset files, pipeline artifacts, and result CSVs.
//
// Dataset file layout:
//   line 1: '#' followed by a one-line JSON header (schema, config hash, feature layout)
//   line 2: CSV column names: state_id,partition,lambda,purity,<feature columns>
//   rows:   one state per line; partition labels are quoted 1-based partition strings
// Floating-point values are written with 17 significant digits.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

#include <json.hpp>

#include "entpart/classifier.hpp"
#include "entpart/correlators.hpp"
#include "entpart/embedding.hpp"
#include "entpart/errors.hpp"
#include "entpart/partitions.hpp"

namespace entpart {

using json = nlohmann::json;

inline constexpr std::string_view kConfigSchema = "entpart.config/1";
inline constexpr std::string_view kDatasetSchema = "entpart.dataset/1";
inline constexpr std::string_view kPipelineSchema = "entpart.pipeline/1";

// ---------------------------------------------------------------------------
// numbers

inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline bool parse_double(std::string_view s, double& out) {
    if (s.empty()) return false;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

/// 64-bit FNV-1a, as 16 hex digits.
inline std::string fnv1a_hex(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------
// configuration

enum class ExperimentKind { moments_compare, orders_compare, all_partitions, transition };

inline std::string to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::moments_compare: return "moments-compare";
        case ExperimentKind::orders_compare: return "orders-compare";
        case ExperimentKind::all_partitions: return "all-partitions";
        case ExperimentKind::transition: return "transition";
    }
    return "?";
}

struct TransitionSettings {
    std::string partition;       ///< partition string, e.g. "[[1,2,3,4]]"
    int n_lambda = 1000;
    int reference_n_neighbours = 700;  ///< neighbours at the reference grid size
    int reference_points = 1000;
    double d_min = 0.8;

    /// n_neighbours scaled so that n_neighbours / n_lambda matches the reference ratio.
    int scaled_n_neighbours() const {
        const double r = static_cast<double>(reference_n_neighbours) / reference_points;
        const int k = static_cast<int>(std::lround(r * n_lambda));
        return std::clamp(k, 2, std::max(2, n_lambda - 1));
    }
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::all_partitions;
    int n_qubits = 3;
    /// "all", "ordered", or an explicit list of partition strings
    std::variant<std::string, std::vector<std::string>> partition_scope = std::string("ordered");
    int states_per_partition = 200;
    int test_states_per_partition = 20;
    int n_mixed = 10;
    MomentSpec moments{{2}, {1}, 500};
    EmbeddingConfig embedding;
    TreeConfig tree;
    std::uint64_t seed = 1;
    TransitionSettings transition;

    /// Partitions named by the scope, in canonical order.
    std::vector<SetPartition> partitions() const {
        if (const auto* s = std::get_if<std::string>(&partition_scope)) {
            return *s == "all" ? all_partitions(n_qubits) : ordered_partitions(n_qubits);
        }
        std::vector<SetPartition> out;
        for (const auto& text : std::get<std::vector<std::string>>(partition_scope)) out.push_back(SetPartition::parse(text));
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Embedding settings with the seed taken from the master seed.
    EmbeddingConfig embedding_config() const {
        EmbeddingConfig e = embedding;
        e.seed = seed;
        return e;
    }
};

inline json to_json(const ExperimentConfig& c) {
    json j;
    j["schema"] = kConfigSchema;
    j["kind"] = to_string(c.kind);
    j["n_qubits"] = c.n_qubits;
    if (const auto* s = std::get_if<std::string>(&c.partition_scope))
        j["partitions"] = *s;
    else
        j["partitions"] = std::get<std::vector<std::string>>(c.partition_scope);
    j["states_per_partition"] = c.states_per_partition;
    j["test_states_per_partition"] = c.test_states_per_partition;
    j["n_mixed"] = c.n_mixed;
    j["moments"] = {{"t", c.moments.t}, {"k", c.moments.k}, {"n_unit", c.moments.n_unit}};
    j["embedding"] = {{"n_neighbours", c.embedding.n_neighbours},
                      {"d_min", c.embedding.d_min},
                      {"n_epochs", c.embedding.n_epochs},
                      {"learning_rate", c.embedding.learning_rate},
                      {"negative_sample_rate", c.embedding.negative_sample_rate}};
    j["tree"] = {{"max_depth", c.tree.max_depth}, {"min_samples_split", c.tree.min_samples_split}};
    j["seed"] = c.seed;
    if (c.kind == ExperimentKind::transition) {
        j["transition"] = {{"partition", c.transition.partition},
                           {"n_lambda", c.transition.n_lambda},
                           {"n_neighbours", c.transition.reference_n_neighbours},
                           {"reference_points", c.transition.reference_points},
                           {"d_min", c.transition.d_min}};
    }
    return j;
}

/// Checks internal consistency; returns one message per offending field.
inline std::vector<std::string> validation_errors(const ExperimentConfig& c) {
    std::vector<std::string> errs;
    if (c.n_qubits < 1 || c.n_qubits > 8) errs.push_back("n_qubits: must lie in [1, 8]");
    if (c.states_per_partition < 1) errs.push_back("states_per_partition: must be positive");
    if (c.test_states_per_partition < 0) errs.push_back("test_states_per_partition: must be non-negative");
    if (c.n_mixed < 1) errs.push_back("n_mixed: must be positive");
    if (c.n_qubits >= 1 && c.n_qubits <= 8) {
        try {
            c.moments.validate(c.n_qubits);
        } catch (const std::exception& e) {
            errs.push_back(std::string("moments: ") + e.what());
        }
        try {
            if (const auto* s = std::get_if<std::string>(&c.partition_scope)) {
                if (*s != "all" && *s != "ordered") errs.push_back("partitions: expected \"all\", \"ordered\" or a list");
            } else {
                const auto ps = c.partitions();
                if (ps.empty()) errs.push_back("partitions: list is empty");
                for (const auto& p : ps)
                    if (!p.covers_register(c.n_qubits))
                        errs.push_back("partitions: " + p.to_string() + " does not cover " +
                                       std::to_string(c.n_qubits) + " qubits");
            }
        } catch (const std::exception& e) {
            errs.push_back(std::string("partitions: ") + e.what());
        }
    }
    if (c.embedding.n_neighbours < 2) errs.push_back("embedding.n_neighbours: must be at least 2");
    if (!(c.embedding.d_min > 0.0)) errs.push_back("embedding.d_min: must be positive");
    if (c.embedding.n_epochs < 1) errs.push_back("embedding.n_epochs: must be positive");
    if (!(c.embedding.learning_rate > 0.0)) errs.push_back("embedding.learning_rate: must be positive");
    if (c.embedding.negative_sample_rate < 1) errs.push_back("embedding.negative_sample_rate: must be positive");
    if (c.tree.max_depth < 0) errs.push_back("tree.max_depth: must be non-negative (0 = unlimited)");
    if (c.tree.min_samples_split < 2) errs.push_back("tree.min_samples_split: must be at least 2");
    if (c.kind == ExperimentKind::transition) {
        try {
            const auto p = SetPartition::parse(c.transition.partition);
            if (!p.covers_register(c.n_qubits)) errs.push_back("transition.partition: does not cover the register");
        } catch (const std::exception& e) {
            errs.push_back(std::string("transition.partition: ") + e.what());
        }
        if (c.transition.n_lambda < 3) errs.push_back("transition.n_lambda: must be at least 3");
        if (c.transition.reference_n_neighbours < 2 || c.transition.reference_points < 3)
            errs.push_back("transition.n_neighbours/reference_points: invalid");
        if (!(c.transition.d_min > 0.0)) errs.push_back("transition.d_min: must be positive");
    }
    return errs;
}

inline void validate(const ExperimentConfig& c) {
    const auto errs = validation_errors(c);
    if (errs.empty()) return;
    std::string msg = "invalid configuration:";
    for (const auto& e : errs) msg += "\n  " + e;
    throw ConfigError(msg);
}

/// Parses and validates a configuration; every problem found is listed in the ConfigError.
inline ExperimentConfig config_from_json(const json& j) {
    std::vector<std::string> errs;
    ExperimentConfig c;
    auto field = [&](const json& obj, const char* key, auto& out, const std::string& path) {
        if (!obj.contains(key)) return;
        try {
            obj.at(key).get_to(out);
        } catch (const std::exception&) {
            errs.push_back(path + key + ": wrong type");
        }
    };
    if (!j.is_object()) throw ConfigError("invalid configuration: expected a JSON object");
    if (j.contains("schema") && j["schema"] != kConfigSchema)
        errs.push_back("schema: unsupported (expected " + std::string(kConfigSchema) + ")");
    if (j.contains("kind")) {
        const std::string k = j["kind"].is_string() ? j["kind"].get<std::string>() : "";
        if (k == "moments-compare") c.kind = ExperimentKind::moments_compare;
        else if (k == "orders-compare") c.kind = ExperimentKind::orders_compare;
        else if (k == "all-partitions") c.kind = ExperimentKind::all_partitions;
        else if (k == "transition") c.kind = ExperimentKind::transition;
        else errs.push_back("kind: unknown experiment kind");
    } else {
        errs.push_back("kind: missing");
    }
    if (!j.contains("n_qubits")) errs.push_back("n_qubits: missing");
    field(j, "n_qubits", c.n_qubits, "");
    if (j.contains("partitions")) {
        if (j["partitions"].is_string())
            c.partition_scope = j["partitions"].get<std::string>();
        else if (j["partitions"].is_array()) {
            std::vector<std::string> list;
            field(j, "partitions", list, "");
            c.partition_scope = list;
        } else
            errs.push_back("partitions: wrong type");
    }
    field(j, "states_per_partition", c.states_per_partition, "");
    field(j, "test_states_per_partition", c.test_states_per_partition, "");
    field(j, "n_mixed", c.n_mixed, "");
    field(j, "seed", c.seed, "");
    if (j.contains("moments")) {
        const auto& m = j["moments"];
        field(m, "t", c.moments.t, "moments.");
        field(m, "k", c.moments.k, "moments.");
        field(m, "n_unit", c.moments.n_unit, "moments.");
    }
    if (!j.contains("moments") || !j["moments"].contains("k")) {
        c.moments.k.clear();
        for (int k = 1; k <= c.n_qubits && k <= 8; ++k) c.moments.k.push_back(k);
    }
    if (j.contains("embedding")) {
        const auto& e = j["embedding"];
        field(e, "n_neighbours", c.embedding.n_neighbours, "embedding.");
        field(e, "d_min", c.embedding.d_min, "embedding.");
        field(e, "n_epochs", c.embedding.n_epochs, "embedding.");
        field(e, "learning_rate", c.embedding.learning_rate, "embedding.");
        field(e, "negative_sample_rate", c.embedding.negative_sample_rate, "embedding.");
    }
    if (j.contains("tree")) {
        field(j["tree"], "max_depth", c.tree.max_depth, "tree.");
        field(j["tree"], "min_samples_split", c.tree.min_samples_split, "tree.");
    }
    if (j.contains("transition")) {
        const auto& t = j["transition"];
        field(t, "partition", c.transition.partition, "transition.");
        field(t, "n_lambda", c.transition.n_lambda, "transition.");
        field(t, "n_neighbours", c.transition.reference_n_neighbours, "transition.");
        field(t, "reference_points", c.transition.reference_points, "transition.");
        field(t, "d_min", c.transition.d_min, "transition.");
    } else if (c.kind == ExperimentKind::transition) {
        errs.push_back("transition: missing");
    }
    for (const auto& e : validation_errors(c)) {
        const auto field = e.substr(0, e.find(':'));
        const bool seen = std::any_of(errs.begin(), errs.end(),
                                      [&](const std::string& x) { return x.substr(0, x.find(':')) == field; });
        if (!seen) errs.push_back(e);
    }
    if (!errs.empty()) {
        std::string msg = "invalid configuration:";
        for (const auto& e : errs) msg += "\n  " + e;
        throw ConfigError(msg);
    }
    return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open configuration file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("configuration " + path.string() + " is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

/// Hash of the canonical JSON form: insensitive to formatting and key order of the source file.
inline std::string config_hash(const ExperimentConfig& c) { return fnv1a_hex(to_json(c).dump()); }

enum class Scale { as_configured, desk, paper };

/// Desk scale halves the state counts, keeps 2/5 of the unitary draws and 3/10 of the lambda grid.
inline ExperimentConfig apply_scale(ExperimentConfig c, Scale s) {
    if (s != Scale::desk) return c;
    auto shrink = [](int v, int num, int den, int floor) { return std::max(floor, (v * num + den - 1) / den); };
    c.states_per_partition = shrink(c.states_per_partition, 1, 2, 2);
    c.test_states_per_partition = shrink(c.test_states_per_partition, 1, 2, 1);
    c.moments.n_unit = shrink(c.moments.n_unit, 2, 5, 1);
    c.transition.n_lambda = shrink(c.transition.n_lambda, 3, 10, 3);
    return c;
}

// ---------------------------------------------------------------------------
// datasets

struct DatasetRow {
    std::uint64_t state_id = 0;
    SetPartition partition;
    double lambda = 0.0;
    double purity = 0.0;
    std::vector<double> features;
    friend bool operator==(const DatasetRow&, const DatasetRow&) = default;
};

struct Dataset {
    std::string config_hash;
    FeatureLayout layout;
    std::vector<DatasetRow> rows;

    FeatureMatrix features() const {
        FeatureMatrix m(rows.size(), layout.size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            std::copy(rows[i].features.begin(), rows[i].features.end(), m.row(i).begin());
        return m;
    }

    std::vector<SetPartition> labels() const {
        std::vector<SetPartition> out;
        for (const auto& r : rows) out.push_back(r.partition);
        return out;
    }

    /// The same rows restricted to the columns of `sub`.
    Dataset select(const FeatureLayout& sub) const {
        const auto idx = layout.select(sub);
        Dataset d{config_hash, sub, {}};
        d.rows.reserve(rows.size());
        for (const auto& r : rows) {
            DatasetRow nr = r;
            nr.features.clear();
            for (auto i : idx) nr.features.push_back(r.features[i]);
            d.rows.push_back(std::move(nr));
        }
        return d;
    }

    friend bool operator==(const Dataset& a, const Dataset& b) {
        return a.config_hash == b.config_hash && a.layout == b.layout && a.rows == b.rows;
    }
};

inline json layout_to_json(const FeatureLayout& l) {
    return {{"n_qubits", l.n_qubits()}, {"t", l.t()}, {"k", l.k()}};
}

inline FeatureLayout layout_from_json(const json& j) {
    return FeatureLayout(j.at("n_qubits").get<int>(), j.at("t").get<std::vector<int>>(), j.at("k").get<std::vector<int>>());
}

/// Writes `content` to a temporary sibling and renames it into place.
inline void write_file_atomically(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write " + tmp.string());
        out << content;
        if (!out) throw DataError("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::string csv_quote(const std::string& s) { return "\"" + s + "\""; }

inline std::string dataset_to_string(const Dataset& d) {
    std::string out;
    json header{{"schema", kDatasetSchema},
                {"config_hash", d.config_hash},
                {"layout", layout_to_json(d.layout)},
                {"n_features", d.layout.size()},
                {"n_rows", d.rows.size()}};
    out += "#" + header.dump() + "\n";
    out += "state_id,partition,lambda,purity";
    for (const auto& name : d.layout.column_names()) out += "," + name;
    out += "\n";
    for (const auto& r : d.rows) {
        if (r.features.size() != d.layout.size()) throw DataError("dataset row feature count does not match layout");
        out += std::to_string(r.state_id) + "," + csv_quote(r.partition.to_string()) + "," + format_double(r.lambda) +
               "," + format_double(r.purity);
        for (double v : r.features) out += "," + format_double(v);
        out += "\n";
    }
    return out;
}

inline void write_dataset(const std::filesystem::path& path, const Dataset& d) {
    write_file_atomically(path, dataset_to_string(d));
}

/// Splits a CSV line; fields may be wrapped in double quotes (no embedded quotes).
inline std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') {
            quoted = !quoted;
        } else if (c == ',' && !quoted) {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) throw DataError("unterminated quoted field");
    fields.push_back(std::move(cur));
    return fields;
}

inline Dataset dataset_from_string(const std::string& text, const std::string& source = "dataset") {
    std::istringstream in(text);
    std::string line;
    auto fail = [&](std::size_t line_no, const std::string& why) -> Dataset {
        throw DataError(source + ": line " + std::to_string(line_no) + ": " + why);
    };
    if (!std::getline(in, line) || line.empty() || line[0] != '#') return fail(1, "missing JSON header line");
    json header;
    try {
        header = json::parse(line.substr(1));
    } catch (const json::exception& e) {
        return fail(1, std::string("malformed header: ") + e.what());
    }
    if (!header.contains("schema") || header["schema"] != kDatasetSchema)
        return fail(1, "unknown dataset schema/version");
    Dataset d;
    try {
        d.config_hash = header.at("config_hash").get<std::string>();
        d.layout = layout_from_json(header.at("layout"));
    } catch (const std::exception& e) {
        return fail(1, std::string("malformed header: ") + e.what());
    }
    if (header.contains("n_features") && header["n_features"].get<std::size_t>() != d.layout.size())
        return fail(1, "n_features does not match the layout");

    if (!std::getline(in, line)) return fail(2, "missing column header");
    std::vector<std::string> expected{"state_id", "partition", "lambda", "purity"};
    for (const auto& n : d.layout.column_names()) expected.push_back(n);
    if (split_csv_line(line) != expected) return fail(2, "column names do not match the layout");

    std::size_t line_no = 2;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> f;
        try {
            f = split_csv_line(line);
        } catch (const DataError& e) {
            return fail(line_no, e.what());
        }
        if (f.size() != expected.size())
            return fail(line_no, "expected " + std::to_string(expected.size()) + " fields, found " +
                                     std::to_string(f.size()));
        DatasetRow r;
        try {
            r.state_id = std::stoull(f[0]);
            r.partition = SetPartition::parse(f[1]);
        } catch (const std::exception& e) {
            return fail(line_no, e.what());
        }
        if (!r.partition.covers_register(d.layout.n_qubits())) return fail(line_no, "partition does not match register");
        if (!parse_double(f[2], r.lambda) || !parse_double(f[3], r.purity)) return fail(line_no, "bad number");
        r.features.resize(d.layout.size());
        for (std::size_t i = 0; i < d.layout.size(); ++i)
            if (!parse_double(f[4 + i], r.features[i])) return fail(line_no, "bad number in column " + expected[4 + i]);
        d.rows.push_back(std::move(r));
    }
    if (header.contains("n_rows") && header["n_rows"].get<std::size_t>() != d.rows.size())
        return fail(line_no, "file is truncated: header announces " + std::to_string(header["n_rows"].get<std::size_t>()) +
                                 " rows, found " + std::to_string(d.rows.size()));
    return d;
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Dataset read_dataset(const std::filesystem::path& path) {
    return dataset_from_string(read_text_file(path), path.string());
}

// ---------------------------------------------------------------------------
// pipeline artifacts

inline json to_json(const TrainedPipeline& p) {
    const auto& m = p.embedding;
    json emb{{"config",
              {{"n_neighbours", m.config.n_neighbours},
               {"d_min", m.config.d_min},
               {"embedding_dim", m.config.embedding_dim},
               {"n_epochs", m.config.n_epochs},
               {"learning_rate", m.config.learning_rate},
               {"negative_sample_rate", m.config.negative_sample_rate},
               {"seed", m.config.seed}}},
             {"a", m.a},
             {"b", m.b},
             {"n_rows", m.train_inputs.n_rows},
             {"n_cols", m.train_inputs.n_cols},
             {"train_inputs", m.train_inputs.values},
             {"rho", m.rho},
             {"sigma", m.sigma},
             {"input_order", m.input_order}};
    json coords = json::array();
    for (const auto& c : m.train_coords) coords.push_back({c[0], c[1]});
    emb["train_coords"] = coords;

    json nodes = json::array();
    for (const auto& n : p.tree.nodes())
        nodes.push_back({{"feature", n.feature},
                         {"threshold", n.threshold},
                         {"left", n.left},
                         {"right", n.right},
                         {"counts", n.counts},
                         {"prediction", n.prediction}});
    json labels = json::array();
    for (const auto& l : p.labels) labels.push_back(l.to_string());
    json tree_labels = json::array();
    for (const auto& l : p.tree.labels()) tree_labels.push_back(l.to_string());
    std::vector<int> constant;
    for (bool b : p.standardizer.constant) constant.push_back(b ? 1 : 0);
    return {{"schema", kPipelineSchema},
            {"config_hash", p.config_hash},
            {"layout", layout_to_json(p.layout)},
            {"standardizer", {{"mean", p.standardizer.mean}, {"stddev", p.standardizer.stddev}, {"constant", constant}}},
            {"embedding", emb},
            {"tree", {{"labels", tree_labels}, {"nodes", nodes}}},
            {"labels", labels}};
}

inline TrainedPipeline pipeline_from_json(const json& j) {
    if (!j.contains("schema") || j["schema"] != kPipelineSchema) throw DataError("pipeline artifact: unknown schema/version");
    try {
        TrainedPipeline p;
        p.config_hash = j.at("config_hash").get<std::string>();
        p.layout = layout_from_json(j.at("layout"));
        const auto& s = j.at("standardizer");
        p.standardizer.mean = s.at("mean").get<std::vector<double>>();
        p.standardizer.stddev = s.at("stddev").get<std::vector<double>>();
        for (int b : s.at("constant").get<std::vector<int>>()) p.standardizer.constant.push_back(b != 0);
        const auto& e = j.at("embedding");
        auto& m = p.embedding;
        const auto& ec = e.at("config");
        m.config.n_neighbours = ec.at("n_neighbours").get<int>();
        m.config.d_min = ec.at("d_min").get<double>();
        m.config.embedding_dim = ec.at("embedding_dim").get<int>();
        m.config.n_epochs = ec.at("n_epochs").get<int>();
        m.config.learning_rate = ec.at("learning_rate").get<double>();
        m.config.negative_sample_rate = ec.at("negative_sample_rate").get<int>();
        m.config.seed = ec.at("seed").get<std::uint64_t>();
        m.a = e.at("a").get<double>();
        m.b = e.at("b").get<double>();
        m.train_inputs.n_rows = e.at("n_rows").get<std::size_t>();
        m.train_inputs.n_cols = e.at("n_cols").get<std::size_t>();
        m.train_inputs.values = e.at("train_inputs").get<std::vector<double>>();
        m.rho = e.at("rho").get<std::vector<double>>();
        m.sigma = e.at("sigma").get<std::vector<double>>();
        m.input_order = e.at("input_order").get<std::vector<std::size_t>>();
        for (const auto& c : e.at("train_coords")) m.train_coords.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
        std::vector<SetPartition> tree_labels;
        for (const auto& l : j.at("tree").at("labels")) tree_labels.push_back(SetPartition::parse(l.get<std::string>()));
        std::vector<DecisionTree::Node> nodes;
        for (const auto& n : j.at("tree").at("nodes")) {
            DecisionTree::Node nd;
            nd.feature = n.at("feature").get<int>();
            nd.threshold = n.at("threshold").get<double>();
            nd.left = n.at("left").get<int>();
            nd.right = n.at("right").get<int>();
            nd.counts = n.at("counts").get<std::vector<int>>();
            nd.prediction = n.at("prediction").get<int>();
            nodes.push_back(std::move(nd));
        }
        p.tree = DecisionTree(std::move(tree_labels), std::move(nodes));
        for (const auto& l : j.at("labels")) p.labels.push_back(SetPartition::parse(l.get<std::string>()));

        const std::size_t n = m.train_inputs.n_rows;
        if (m.train_inputs.values.size() != n * m.train_inputs.n_cols || m.train_coords.size() != n ||
            m.rho.size() != n || m.sigma.size() != n || m.input_order.size() != n ||
            p.standardizer.mean.size() != p.layout.size() || m.train_inputs.n_cols != p.layout.size())
            throw DataError("pipeline artifact: inconsistent array sizes");
        const auto n_nodes = static_cast<int>(p.tree.nodes().size());
        if (n_nodes == 0) throw DataError("pipeline artifact: empty tree");
        for (const auto& nd : p.tree.nodes()) {
            if (!nd.is_leaf() && (nd.left <= 0 || nd.left >= n_nodes || nd.right <= 0 || nd.right >= n_nodes))
                throw DataError("pipeline artifact: tree child index out of range");
            if (nd.prediction < 0 || nd.prediction >= static_cast<int>(p.tree.labels().size()))
                throw DataError("pipeline artifact: tree label index out of range");
        }
        return p;
    } catch (const DataError&) {
        throw;
    } catch (const std::exception& e) {
        throw DataError(std::string("pipeline artifact: ") + e.what());
    }
}

inline void write_pipeline(const std::filesystem::path& path, const TrainedPipeline& p) {
    write_file_atomically(path, to_json(p).dump() + "\n");
}

inline TrainedPipeline read_pipeline(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw DataError(path.string() + ": not valid JSON: " + e.what());
    }
    return pipeline_from_json(j);
}

// ---------------------------------------------------------------------------
// result CSVs

/// Simple CSV builder; every value is formatted deterministically.
class CsvWriter {
   public:
    explicit CsvWriter(std::vector<std::string> columns) : n_cols_(columns.size()) { add_line(columns); }

    CsvWriter& row(const std::vector<std::string>& cells) {
        if (cells.size() != n_cols_) throw InvalidArgument("CsvWriter: wrong number of cells");
        add_line(cells);
        return *this;
    }

    const std::string& str() const { return text_; }
    void write(const std::filesystem::path& path) const { write_file_atomically(path, text_); }

   private:
    void add_line(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) text_ += (i ? "," : "") + cells[i];
        text_ += "\n";
    }

    std::size_t n_cols_;
    std::string text_;
};

}  // namespace entpart
