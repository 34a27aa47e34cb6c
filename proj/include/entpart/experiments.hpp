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

// Experiment drivers: dataset generation, classification runs, the transition sweep,
// and emission of result files.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "entpart/classifier.hpp"
#include "entpart/correlators.hpp"
#include "entpart/dataset_io.hpp"
#include "entpart/embedding.hpp"
#include "entpart/negativity.hpp"
#include "entpart/random.hpp"
#include "entpart/state_gen.hpp"

namespace entpart {

/// Progress callback: stage name, items done, items total.
using ProgressFn = std::function<void(const std::string&, std::size_t, std::size_t)>;

struct RunOptions {
    int workers = 1;  ///< results do not depend on this value
    ProgressFn progress;
};

/// Runs fn(i) for i in [0, n) on up to `workers` threads; rethrows the first failure.
inline void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn,
                         const std::function<void(std::size_t)>& on_done = {}) {
    const auto n_threads = static_cast<std::size_t>(std::max(1, workers));
    if (n_threads == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
            if (on_done) on_done(i + 1);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::exception_ptr failure;
    std::mutex mu;
    auto body = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!failure) failure = std::current_exception();
                next.store(n);
                return;
            }
            const std::size_t d = done.fetch_add(1) + 1;
            if (on_done) {
                std::lock_guard lock(mu);
                on_done(d);
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(n_threads, n); ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

enum class Split { train, test };

/// States of every partition in scope, `count` per partition, each drawn from its own stream.
/// Row i uses derive_stream(seed, domain, i) for both the state and its measurement record.
inline Dataset generate_dataset(const ExperimentConfig& c, Split split, const RunOptions& opt = {}) {
    validate(c);
    const auto parts = c.partitions();
    const int per = split == Split::train ? c.states_per_partition : c.test_states_per_partition;
    const auto domain = split == Split::train ? StreamDomain::train_states : StreamDomain::test_states;
    Dataset d{config_hash(c), FeatureLayout(c.n_qubits, c.moments), {}};
    const std::size_t n = parts.size() * static_cast<std::size_t>(per);
    d.rows.resize(n);
    const std::string stage = split == Split::train ? "train states" : "test states";
    parallel_for(
        n, opt.workers,
        [&](std::size_t i) {
            Rng rng = derive_stream(c.seed, domain, i);
            const auto& p = parts[i / static_cast<std::size_t>(per)];
            const auto rho = random_mixed_partitioned(p, c.n_mixed, rng);
            auto& row = d.rows[i];
            row.state_id = i;
            row.partition = p;
            row.lambda = 0.0;
            row.purity = purity(rho);
            row.features = estimate_moments(rho, c.moments, rng);
        },
        [&](std::size_t done) {
            if (opt.progress) opt.progress(stage, done, n);
        });
    return d;
}

// ---------------------------------------------------------------------------
// classification runs

struct ClassificationRun {
    std::string tag;
    FeatureLayout layout;
    TrainResult train;
    std::vector<Point2> test_embedding;
    std::vector<SetPartition> test_predictions;
    double test_accuracy = 0.0;
};

/// Trains on the `sub` columns of `train` and scores on the same columns of `test`.
inline ClassificationRun run_classification(const std::string& tag, const FeatureLayout& sub, const Dataset& train,
                                            const Dataset& test, const ExperimentConfig& c) {
    if (test.rows.empty()) throw InvalidArgument("classification run needs a non-empty test set");
    ClassificationRun run;
    run.tag = tag;
    run.layout = sub;
    const auto tr = train.select(sub);
    const auto te = test.select(sub);
    run.train = train_pipeline(sub, tr.features(), tr.labels(), c.embedding_config(), c.tree, train.config_hash);
    run.test_embedding = run.train.pipeline.embed(te.features());
    run.test_predictions = run.train.pipeline.tree.predict(run.test_embedding);
    run.test_accuracy = accuracy(run.test_predictions, te.labels());
    return run;
}

// ---------------------------------------------------------------------------
// transition sweep

struct TransitionRow {
    std::uint64_t state_id = 0;
    double lambda = 0.0;
    double purity = 0.0;
    double log_negativity = 0.0;
    bool is_npt = false;
    Point2 coords{};
    bool maximally_mixed = false;  ///< the exactly maximally mixed reference state, embedded out of sample
};

struct TransitionResult {
    Dataset dataset;
    std::vector<TransitionRow> rows;  ///< sweep rows in grid order, then the flagged reference row
    int n_neighbours = 0;
    double d_min = 0.0;
};

inline TransitionResult run_transition(const ExperimentConfig& c, const RunOptions& opt = {}) {
    validate(c);
    if (c.kind != ExperimentKind::transition) throw ConfigError("invalid configuration:\n  kind: expected transition");
    const auto part = SetPartition::parse(c.transition.partition);
    const int n_lambda = c.transition.n_lambda;
    TransitionResult res;
    res.dataset = Dataset{config_hash(c), FeatureLayout(c.n_qubits, c.moments), {}};
    res.dataset.rows.resize(static_cast<std::size_t>(n_lambda));
    res.rows.resize(static_cast<std::size_t>(n_lambda));
    parallel_for(
        static_cast<std::size_t>(n_lambda), opt.workers,
        [&](std::size_t i) {
            Rng rng = derive_stream(c.seed, StreamDomain::transition_states, i);
            const double lambda = static_cast<double>(i) / (n_lambda - 1);
            const auto psi = random_pure_partitioned(part, rng);
            const auto rho = depolarize_interpolate(psi, lambda);
            const auto neg = partition_log_negativity(rho, part);
            auto& row = res.dataset.rows[i];
            row.state_id = i;
            row.partition = part;
            row.lambda = lambda;
            row.purity = purity(rho);
            row.features = estimate_moments(rho, c.moments, rng);
            auto& tr = res.rows[i];
            tr.state_id = i;
            tr.lambda = lambda;
            tr.purity = row.purity;
            tr.log_negativity = neg.total;
            tr.is_npt = neg.is_npt;
        },
        [&](std::size_t done) {
            if (opt.progress) opt.progress("transition states", done, static_cast<std::size_t>(n_lambda));
        });

    EmbeddingConfig emb = c.embedding_config();
    emb.n_neighbours = c.transition.scaled_n_neighbours();
    emb.d_min = c.transition.d_min;
    res.n_neighbours = emb.n_neighbours;
    res.d_min = emb.d_min;
    const auto raw = res.dataset.features();
    const auto stdz = fit_standardizer(raw);
    const auto model = fit_embedding(stdz.apply(raw), emb);
    const auto coords = model.embedding();
    for (std::size_t i = 0; i < res.rows.size(); ++i) res.rows[i].coords = coords[i];

    const auto mixed = DensityMatrix::maximally_mixed(c.n_qubits);
    Rng rng = derive_stream(c.seed, StreamDomain::transition_states, static_cast<std::uint64_t>(n_lambda));
    FeatureMatrix mm(1, raw.n_cols);
    const auto f = estimate_moments(mixed, c.moments, rng);
    std::copy(f.begin(), f.end(), mm.values.begin());
    const auto neg = partition_log_negativity(mixed, part);
    TransitionRow ref;
    ref.state_id = static_cast<std::uint64_t>(n_lambda);
    ref.lambda = 1.0;
    ref.purity = purity(mixed);
    ref.log_negativity = neg.total;
    ref.is_npt = neg.is_npt;
    ref.coords = transform(model, stdz.apply(mm)).front();
    ref.maximally_mixed = true;
    res.rows.push_back(ref);
    return res;
}

// ---------------------------------------------------------------------------
// whole experiments

struct ExperimentResult {
    ExperimentConfig config;
    std::string config_hash;
    Dataset train;
    Dataset test;
    std::vector<ClassificationRun> runs;
    std::vector<int> run_order;  ///< t (moments-compare) or k (orders-compare) per run
    std::vector<std::string> run_mode;
    TransitionResult transition;
};

inline ExperimentResult run_experiment(const ExperimentConfig& c, const RunOptions& opt = {}) {
    validate(c);
    ExperimentResult r;
    r.config = c;
    r.config_hash = config_hash(c);
    if (c.kind == ExperimentKind::transition) {
        r.transition = run_transition(c, opt);
        return r;
    }
    r.train = generate_dataset(c, Split::train, opt);
    r.test = generate_dataset(c, Split::test, opt);
    auto note = [&](const std::string& what, std::size_t done, std::size_t total) {
        if (opt.progress) opt.progress(what, done, total);
    };
    switch (c.kind) {
        case ExperimentKind::moments_compare: {
            for (std::size_t i = 0; i < c.moments.t.size(); ++i) {
                const int t = c.moments.t[i];
                r.runs.push_back(run_classification("t" + std::to_string(t), FeatureLayout(c.n_qubits, {t}, c.moments.k),
                                                    r.train, r.test, c));
                r.run_order.push_back(t);
                r.run_mode.push_back("single");
                note("classification runs", i + 1, c.moments.t.size());
            }
            break;
        }
        case ExperimentKind::orders_compare: {
            const std::size_t total = 2 * c.moments.k.size();
            for (const char* mode : {"exclusive", "cumulative"}) {
                for (int k : c.moments.k) {
                    std::vector<int> ks;
                    if (std::string(mode) == "exclusive")
                        ks = {k};
                    else
                        for (int kk : c.moments.k)
                            if (kk <= k) ks.push_back(kk);
                    r.runs.push_back(run_classification("k" + std::to_string(k) + "_" + mode,
                                                        FeatureLayout(c.n_qubits, c.moments.t, ks), r.train, r.test, c));
                    r.run_order.push_back(k);
                    r.run_mode.push_back(mode);
                    note("classification runs", r.runs.size(), total);
                }
            }
            break;
        }
        case ExperimentKind::all_partitions:
            r.runs.push_back(run_classification("all", r.train.layout, r.train, r.test, c));
            r.run_order.push_back(0);
            r.run_mode.push_back("all");
            break;
        case ExperimentKind::transition:
            break;
    }
    return r;
}

// ---------------------------------------------------------------------------
// result files

inline std::string shape_string(const SetPartition& p) {
    std::string s;
    for (int v : p.shape()) s += (s.empty() ? "" : "+") + std::to_string(v);
    return s;
}

inline std::string embedding_csv(const Dataset& ds, const std::vector<Point2>& coords,
                                 const std::vector<SetPartition>* predicted, const std::string& split) {
    CsvWriter w({"split", "state_id", "partition", "shape", "y1", "y2", "predicted"});
    for (std::size_t i = 0; i < ds.rows.size(); ++i) {
        const auto& row = ds.rows[i];
        w.row({split, std::to_string(row.state_id), csv_quote(row.partition.to_string()), shape_string(row.partition),
               format_double(coords[i][0]), format_double(coords[i][1]),
               predicted ? csv_quote((*predicted)[i].to_string()) : std::string("\"\"")});
    }
    return w.str();
}

inline std::string confusion_csv(const std::vector<SetPartition>& predicted, const std::vector<SetPartition>& truth) {
    CsvWriter w({"true", "predicted", "count"});
    for (const auto& [key, n] : confusion_counts(predicted, truth))
        w.row({csv_quote(key.first.to_string()), csv_quote(key.second.to_string()), std::to_string(n)});
    return w.str();
}

/// Per-class counts plus an overall row ("*").
inline std::string score_report_csv(const std::vector<SetPartition>& predicted, const std::vector<SetPartition>& truth) {
    CsvWriter w({"partition", "n", "correct", "accuracy"});
    std::map<SetPartition, std::pair<int, int>> per;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        auto& e = per[truth[i]];
        ++e.first;
        if (predicted[i] == truth[i]) ++e.second;
    }
    int n = 0, ok = 0;
    for (const auto& [p, e] : per) {
        w.row({csv_quote(p.to_string()), std::to_string(e.first), std::to_string(e.second),
               format_double(static_cast<double>(e.second) / e.first)});
        n += e.first;
        ok += e.second;
    }
    w.row({"\"*\"", std::to_string(n), std::to_string(ok), format_double(accuracy(predicted, truth))});
    return w.str();
}

inline std::string transition_csv(const TransitionResult& t, const ExperimentConfig& c) {
    json header{{"schema", "entpart.transition/1"},
                {"config_hash", config_hash(c)},
                {"partition", c.transition.partition},
                {"n_lambda", c.transition.n_lambda},
                {"n_neighbours", t.n_neighbours},
                {"d_min", t.d_min},
                {"n_neighbours_rule", "round(n_neighbours * n_lambda / reference_points)"}};
    CsvWriter w({"state_id", "lambda", "purity", "log_negativity", "is_npt", "y1", "y2", "maximally_mixed"});
    for (const auto& r : t.rows)
        w.row({std::to_string(r.state_id), format_double(r.lambda), format_double(r.purity),
               format_double(r.log_negativity), r.is_npt ? "1" : "0", format_double(r.coords[0]),
               format_double(r.coords[1]), r.maximally_mixed ? "1" : "0"});
    return "#" + header.dump() + "\n" + w.str();
}

/// Writes datasets, model artifacts, and result CSVs under `out`; returns the files written.
inline std::vector<std::filesystem::path> emit_results(const ExperimentResult& r, const std::filesystem::path& out) {
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    auto put = [&](const fs::path& rel, const std::string& text) {
        write_file_atomically(out / rel, text);
        files.push_back(out / rel);
    };
    put("config.json", to_json(r.config).dump(2) + "\n");
    if (r.config.kind == ExperimentKind::transition) {
        put("dataset_transition.csv", dataset_to_string(r.transition.dataset));
        put("transition.csv", transition_csv(r.transition, r.config));
        return files;
    }
    put("dataset_train.csv", dataset_to_string(r.train));
    put("dataset_test.csv", dataset_to_string(r.test));
    for (const auto& run : r.runs) {
        const auto truth = r.test.labels();
        put(fs::path("models") / ("pipeline_" + run.tag + ".json"), to_json(run.train.pipeline).dump() + "\n");
        put(fs::path("runs") / ("confusion_" + run.tag + ".csv"), confusion_csv(run.test_predictions, truth));
        std::string emb = embedding_csv(r.train, run.train.train_embedding, nullptr, "train");
        const auto test_part = embedding_csv(r.test, run.test_embedding, &run.test_predictions, "test");
        emb += test_part.substr(test_part.find('\n') + 1);
        put(fs::path("runs") / ("embedding_" + run.tag + ".csv"), emb);
    }
    if (r.config.kind == ExperimentKind::moments_compare) {
        CsvWriter w({"t", "test_accuracy", "train_accuracy", "n_train", "n_test", "n_features"});
        for (std::size_t i = 0; i < r.runs.size(); ++i)
            w.row({std::to_string(r.run_order[i]), format_double(r.runs[i].test_accuracy),
                   format_double(r.runs[i].train.train_accuracy), std::to_string(r.train.rows.size()),
                   std::to_string(r.test.rows.size()), std::to_string(r.runs[i].layout.size())});
        put("score_vs_t.csv", w.str());
    } else if (r.config.kind == ExperimentKind::orders_compare) {
        CsvWriter w({"n_qubits", "k", "mode", "test_accuracy", "train_accuracy", "n_features"});
        for (std::size_t i = 0; i < r.runs.size(); ++i)
            w.row({std::to_string(r.config.n_qubits), std::to_string(r.run_order[i]), r.run_mode[i],
                   format_double(r.runs[i].test_accuracy), format_double(r.runs[i].train.train_accuracy),
                   std::to_string(r.runs[i].layout.size())});
        put("score_vs_k.csv", w.str());
    } else {
        const auto& run = r.runs.front();
        put("score_report.csv", score_report_csv(run.test_predictions, r.test.labels()));
        put("embedding.csv", read_text_file(out / "runs" / ("embedding_" + run.tag + ".csv")));
    }
    return files;
}

}  // namespace entpart
