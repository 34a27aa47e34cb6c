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


// entpart: dataset generation, training, evaluation, embedding, and transition sweeps.
//
// Exit codes: 0 success, 1 internal error, 2 configuration/usage error, 3 data error,
// 4 numerical failure.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "entpart/dataset_io.hpp"
#include "entpart/experiments.hpp"

namespace fs = std::filesystem;
using namespace entpart;

namespace {

enum ExitCode { kOk = 0, kInternal = 1, kConfig = 2, kData = 3, kNumeric = 4 };

struct CommonOptions {
    std::string config;
    std::string out = "out";
    std::optional<std::uint64_t> seed;
    int workers = 1;
    bool sequential = false;
    std::string scale = "paper";
};

void add_common(CLI::App* cmd, CommonOptions& o, bool needs_config, const std::string& default_scale = "paper") {
    o.scale = default_scale;
    auto* c = cmd->add_option("--config,-c", o.config, "experiment configuration (JSON)")->check(CLI::ExistingFile);
    if (needs_config) c->required();
    cmd->add_option("--out,-o", o.out, "output directory")->capture_default_str();
    cmd->add_option("--seed", o.seed, "override the master seed");
    cmd->add_option("--workers,-j", o.workers, "worker threads for state generation")->check(CLI::PositiveNumber);
    cmd->add_flag("--sequential", o.sequential, "single worker");
    cmd->add_option("--scale", o.scale, "desk: 1/2 states, 2/5 unitaries, 3/10 lambda grid; paper: as configured")
        ->check(CLI::IsMember({"desk", "paper"}))
        ->capture_default_str();
}

ExperimentConfig resolve_config(const CommonOptions& o) {
    auto c = load_config(o.config);
    if (o.seed) c.seed = *o.seed;
    c = apply_scale(c, o.scale == "desk" ? Scale::desk : Scale::paper);
    validate(c);
    return c;
}

RunOptions run_options(const CommonOptions& o) {
    RunOptions r;
    r.workers = o.sequential ? 1 : o.workers;
    r.progress = [last = std::string(), last_pct = -1](const std::string& stage, std::size_t done,
                                                       std::size_t total) mutable {
        const int pct = total ? static_cast<int>(100 * done / total) : 100;
        if (stage == last && pct / 10 == last_pct / 10 && done != total) return;
        last = stage;
        last_pct = pct;
        std::fprintf(stderr, "[%s] %zu/%zu\n", stage.c_str(), done, total);
    };
    return r;
}

void note(const std::string& msg) { std::fprintf(stderr, "%s\n", msg.c_str()); }

Dataset load_matching(const std::string& path, const FeatureLayout& layout) {
    auto d = read_dataset(path);
    if (!(d.layout == layout)) throw DataError(path + ": feature layout does not match the pipeline");
    if (d.rows.empty()) throw DataError(path + ": dataset has no rows");
    return d;
}

int cmd_gen_dataset(const CommonOptions& o, const std::string& split) {
    const auto c = resolve_config(o);
    const auto opt = run_options(o);
    for (const auto s : {Split::train, Split::test}) {
        const std::string name = s == Split::train ? "train" : "test";
        if (split != "both" && split != name) continue;
        const auto d = generate_dataset(c, s, opt);
        const auto path = fs::path(o.out) / ("dataset_" + name + ".csv");
        write_dataset(path, d);
        std::cout << path.string() << " rows=" << d.rows.size() << " features=" << d.layout.size() << "\n";
    }
    return kOk;
}

int cmd_train(const CommonOptions& o, const std::string& dataset_path) {
    const auto c = resolve_config(o);
    const auto d = read_dataset(dataset_path);
    if (d.config_hash != config_hash(c)) note("note: dataset was generated from a different configuration");
    if (label_set(d.labels()).size() < 2) throw DataError(dataset_path + ": training needs at least 2 distinct labels");
    const auto res = train_pipeline(d.layout, d.features(), d.labels(), c.embedding_config(), c.tree, d.config_hash);
    const fs::path out(o.out);
    write_pipeline(out / "pipeline.json", res.pipeline);
    write_file_atomically(out / "embedding_train.csv", embedding_csv(d, res.train_embedding, nullptr, "train"));
    CsvWriter report({"n_rows", "n_labels", "n_features", "train_accuracy", "tree_depth", "config_hash"});
    report.row({std::to_string(d.rows.size()), std::to_string(res.pipeline.labels.size()),
                std::to_string(d.layout.size()), format_double(res.train_accuracy),
                std::to_string(res.pipeline.tree.depth()), d.config_hash});
    report.write(out / "train_report.csv");
    std::cout << "train_accuracy=" << format_double(res.train_accuracy) << "\n";
    return kOk;
}

int cmd_evaluate(const std::string& pipeline_path, const std::string& dataset_path, const std::string& out_dir) {
    const auto p = read_pipeline(pipeline_path);
    const auto d = load_matching(dataset_path, p.layout);
    const auto coords = p.embed(d.features());
    const auto pred = p.tree.predict(coords);
    const auto truth = d.labels();
    const fs::path out(out_dir);
    write_file_atomically(out / "score_report.csv", score_report_csv(pred, truth));
    write_file_atomically(out / "confusion.csv", confusion_csv(pred, truth));
    write_file_atomically(out / "predictions.csv", embedding_csv(d, coords, &pred, "test"));
    std::cout << "accuracy=" << format_double(accuracy(pred, truth)) << "\n";
    return kOk;
}

int cmd_embed(const std::string& pipeline_path, const std::string& dataset_path, const std::string& out_dir) {
    const auto p = read_pipeline(pipeline_path);
    const auto d = load_matching(dataset_path, p.layout);
    const auto coords = p.embed(d.features());
    write_file_atomically(fs::path(out_dir) / "embedding.csv", embedding_csv(d, coords, nullptr, "new"));
    std::cout << "embedded rows=" << d.rows.size() << "\n";
    return kOk;
}

void print_summary(const ExperimentResult& r) {
    for (std::size_t i = 0; i < r.runs.size(); ++i)
        std::cout << to_string(r.config.kind) << " " << r.runs[i].tag
                  << " test_accuracy=" << format_double(r.runs[i].test_accuracy) << "\n";
    if (r.config.kind == ExperimentKind::transition) {
        std::size_t npt = 0;
        for (const auto& row : r.transition.rows) npt += row.is_npt;
        std::cout << "transition rows=" << r.transition.rows.size() << " npt=" << npt
                  << " n_neighbours=" << r.transition.n_neighbours << "\n";
    }
}

int cmd_run(const CommonOptions& o, std::optional<ExperimentKind> required) {
    const auto c = resolve_config(o);
    if (required && c.kind != *required)
        throw ConfigError("invalid configuration:\n  kind: expected " + to_string(*required));
    const auto r = run_experiment(c, run_options(o));
    emit_results(r, o.out);
    print_summary(r);
    return kOk;
}

/// Manifest: {"schema": "entpart.manifest/1", "experiments": [{"name": ..., "config": ...}, ...]}
/// Config paths are relative to the manifest.
int cmd_reproduce(const CommonOptions& o) {
    json m;
    try {
        m = json::parse(read_text_file(o.config));
    } catch (const std::exception& e) {
        throw ConfigError("manifest " + o.config + ": " + e.what());
    }
    if (!m.contains("schema") || m["schema"] != "entpart.manifest/1" || !m.contains("experiments") ||
        !m["experiments"].is_array())
        throw ConfigError("manifest " + o.config + ": expected schema entpart.manifest/1 with an experiments list");
    struct Entry {
        std::string name;
        ExperimentConfig config;
    };
    std::vector<Entry> entries;
    std::string errors;
    const auto base = fs::path(o.config).parent_path();
    for (const auto& e : m["experiments"]) {
        if (!e.contains("name") || !e.contains("config") || !e["name"].is_string() || !e["config"].is_string()) {
            errors += "\n  experiments: each entry needs string fields name and config";
            continue;
        }
        CommonOptions sub = o;
        sub.config = (base / e["config"].get<std::string>()).string();
        try {
            entries.push_back({e["name"].get<std::string>(), resolve_config(sub)});
        } catch (const ConfigError& err) {
            errors += "\n  " + e["name"].get<std::string>() + ": " + err.what();
        }
    }
    if (!errors.empty()) throw ConfigError("invalid manifest:" + errors);
    json summary = json::array();
    for (const auto& e : entries) {
        note("== " + e.name + " (" + to_string(e.config.kind) + ")");
        const auto r = run_experiment(e.config, run_options(o));
        emit_results(r, fs::path(o.out) / e.name);
        print_summary(r);
        json runs = json::object();
        for (const auto& run : r.runs) runs[run.tag] = run.test_accuracy;
        summary.push_back({{"name", e.name}, {"kind", to_string(e.config.kind)}, {"config_hash", r.config_hash},
                           {"test_accuracy", runs}});
    }
    write_file_atomically(fs::path(o.out) / "summary.json", summary.dump(2) + "\n");
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"entpart: multipartite entanglement partitions from randomized measurements"};
    app.require_subcommand(1);

    CommonOptions gen_o, train_o, tr_o, run_o, rep_o;
    std::string split = "both", dataset, pipeline, eval_dataset, eval_out = "out", embed_dataset, embed_pipeline,
                embed_out = "out";

    auto* gen = app.add_subcommand("gen-dataset", "generate train/test moment datasets");
    add_common(gen, gen_o, true);
    gen->add_option("--split", split, "train, test or both")->check(CLI::IsMember({"train", "test", "both"}));

    auto* train = app.add_subcommand("train", "fit standardizer, embedding and tree; write a pipeline artifact");
    add_common(train, train_o, true);
    train->add_option("--dataset,-d", dataset, "training dataset CSV")->required()->check(CLI::ExistingFile);

    auto* eval = app.add_subcommand("evaluate", "score a pipeline artifact on a test dataset");
    eval->add_option("--pipeline,-p", pipeline, "pipeline artifact")->required()->check(CLI::ExistingFile);
    eval->add_option("--dataset,-d", eval_dataset, "test dataset CSV")->required()->check(CLI::ExistingFile);
    eval->add_option("--out,-o", eval_out, "output directory");

    auto* embed = app.add_subcommand("embed", "embed new rows with a trained pipeline");
    embed->add_option("--pipeline,-p", embed_pipeline, "pipeline artifact")->required()->check(CLI::ExistingFile);
    embed->add_option("--dataset,-d", embed_dataset, "dataset CSV")->required()->check(CLI::ExistingFile);
    embed->add_option("--out,-o", embed_out, "output directory");

    auto* trans = app.add_subcommand("transition", "sweep toward the maximally mixed state");
    add_common(trans, tr_o, true);

    auto* run = app.add_subcommand("run", "run one experiment end to end");
    add_common(run, run_o, true);

    auto* rep = app.add_subcommand("reproduce", "run every experiment of a manifest (desk scale by default)");
    add_common(rep, rep_o, true, "desk");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }

    try {
        if (*gen) return cmd_gen_dataset(gen_o, split);
        if (*train) return cmd_train(train_o, dataset);
        if (*eval) return cmd_evaluate(pipeline, eval_dataset, eval_out);
        if (*embed) return cmd_embed(embed_pipeline, embed_dataset, embed_out);
        if (*trans) return cmd_run(tr_o, ExperimentKind::transition);
        if (*run) return cmd_run(run_o, std::nullopt);
        if (*rep) return cmd_reproduce(rep_o);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kData;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kNumeric;
    } catch (const InvalidArgument& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInternal;
    }
    return kInternal;
}
