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

// Standardization, CART decision tree on embedded coordinates, accuracy score, and the
// trained standardize -> embed -> classify pipeline.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "entpart/correlators.hpp"
#include "entpart/embedding.hpp"
#include "entpart/errors.hpp"
#include "entpart/partitions.hpp"

namespace entpart {

inline constexpr double kConstantFeatureStd = 1e-12;

struct Standardizer {
    std::vector<double> mean;
    std::vector<double> stddev;
    /// Features whose training std fell below kConstantFeatureStd; they map to 0.
    std::vector<bool> constant;

    std::vector<double> apply(std::span<const double> x) const {
        if (x.size() != mean.size()) throw InvalidArgument("Standardizer: feature length mismatch");
        std::vector<double> out(x.size());
        for (std::size_t c = 0; c < x.size(); ++c) out[c] = constant[c] ? 0.0 : (x[c] - mean[c]) / stddev[c];
        return out;
    }

    FeatureMatrix apply(const FeatureMatrix& m) const {
        if (m.n_cols != mean.size()) throw InvalidArgument("Standardizer: feature length mismatch");
        FeatureMatrix out(m.n_rows, m.n_cols);
        for (std::size_t i = 0; i < m.n_rows; ++i) {
            const auto r = apply(m.row(i));
            std::copy(r.begin(), r.end(), out.row(i).begin());
        }
        return out;
    }

    friend bool operator==(const Standardizer&, const Standardizer&) = default;
};

/// Per-feature mean and population standard deviation.
inline Standardizer fit_standardizer(const FeatureMatrix& data) {
    if (data.n_rows < 2) throw InvalidArgument("fit_standardizer: need at least 2 rows");
    Standardizer s;
    s.mean.assign(data.n_cols, 0.0);
    s.stddev.assign(data.n_cols, 0.0);
    s.constant.assign(data.n_cols, false);
    const double n = static_cast<double>(data.n_rows);
    for (std::size_t i = 0; i < data.n_rows; ++i)
        for (std::size_t c = 0; c < data.n_cols; ++c) s.mean[c] += data.row(i)[c];
    for (auto& m : s.mean) m /= n;
    for (std::size_t i = 0; i < data.n_rows; ++i)
        for (std::size_t c = 0; c < data.n_cols; ++c) {
            const double d = data.row(i)[c] - s.mean[c];
            s.stddev[c] += d * d;
        }
    for (std::size_t c = 0; c < data.n_cols; ++c) {
        s.stddev[c] = std::sqrt(s.stddev[c] / n);
        if (s.stddev[c] < kConstantFeatureStd) {
            s.constant[c] = true;
            s.stddev[c] = 1.0;
        }
    }
    return s;
}

struct TreeConfig {
    int max_depth = 0;  ///< 0: unlimited
    int min_samples_split = 2;
    friend bool operator==(const TreeConfig&, const TreeConfig&) = default;
};

class DecisionTree {
   public:
    struct Node {
        int feature = -1;  ///< -1 for leaves
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        std::vector<int> counts;  ///< training points per class routed here
        int prediction = 0;

        bool is_leaf() const { return feature < 0; }
        friend bool operator==(const Node&, const Node&) = default;
    };

    DecisionTree() = default;
    DecisionTree(std::vector<SetPartition> labels, std::vector<Node> nodes)
        : labels_(std::move(labels)), nodes_(std::move(nodes)) {}

    const std::vector<SetPartition>& labels() const { return labels_; }
    const std::vector<Node>& nodes() const { return nodes_; }

    int predict_class(const Point2& x) const {
        int i = 0;
        while (!nodes_[static_cast<std::size_t>(i)].is_leaf()) {
            const auto& nd = nodes_[static_cast<std::size_t>(i)];
            i = x[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
        }
        return nodes_[static_cast<std::size_t>(i)].prediction;
    }

    const SetPartition& predict(const Point2& x) const {
        return labels_[static_cast<std::size_t>(predict_class(x))];
    }

    std::vector<SetPartition> predict(const std::vector<Point2>& xs) const {
        std::vector<SetPartition> out;
        out.reserve(xs.size());
        for (const auto& x : xs) out.push_back(predict(x));
        return out;
    }

    int depth() const { return depth_from(0); }

    friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

   private:
    int depth_from(int i) const {
        const auto& nd = nodes_[static_cast<std::size_t>(i)];
        if (nd.is_leaf()) return 0;
        return 1 + std::max(depth_from(nd.left), depth_from(nd.right));
    }

    std::vector<SetPartition> labels_;
    std::vector<Node> nodes_;
};

namespace tree_detail {

inline double gini(const std::vector<int>& counts, int total) {
    if (total == 0) return 0.0;
    double s = 0.0;
    for (int c : counts) {
        const double p = static_cast<double>(c) / total;
        s += p * p;
    }
    return 1.0 - s;
}

struct Builder {
    const std::vector<Point2>& x;
    const std::vector<int>& y;
    int n_classes;
    TreeConfig cfg;
    std::vector<DecisionTree::Node> nodes;

    int build(std::vector<std::size_t> idx, int depth) {
        DecisionTree::Node node;
        node.counts.assign(static_cast<std::size_t>(n_classes), 0);
        for (auto i : idx) ++node.counts[static_cast<std::size_t>(y[i])];
        // majority, ties to the lower class index
        node.prediction = static_cast<int>(std::max_element(node.counts.begin(), node.counts.end()) - node.counts.begin());
        const int n = static_cast<int>(idx.size());
        const double parent = gini(node.counts, n);
        const int id = static_cast<int>(nodes.size());
        nodes.push_back(node);

        const bool depth_ok = cfg.max_depth <= 0 || depth < cfg.max_depth;
        if (parent <= 0.0 || n < std::max(2, cfg.min_samples_split) || !depth_ok) return id;

        int best_feature = -1;
        double best_threshold = 0.0, best_gain = -INFINITY;
        for (int f = 0; f < 2; ++f) {
            auto sorted = idx;
            std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
                return x[a][static_cast<std::size_t>(f)] < x[b][static_cast<std::size_t>(f)] ||
                       (x[a][static_cast<std::size_t>(f)] == x[b][static_cast<std::size_t>(f)] && a < b);
            });
            std::vector<int> left(static_cast<std::size_t>(n_classes), 0), right = node.counts;
            for (int pos = 0; pos + 1 < n; ++pos) {
                const auto i = sorted[static_cast<std::size_t>(pos)];
                ++left[static_cast<std::size_t>(y[i])];
                --right[static_cast<std::size_t>(y[i])];
                const double v = x[i][static_cast<std::size_t>(f)];
                const double vn = x[sorted[static_cast<std::size_t>(pos + 1)]][static_cast<std::size_t>(f)];
                if (!(vn > v)) continue;
                const int nl = pos + 1, nr = n - nl;
                const double gain =
                    parent - (static_cast<double>(nl) / n) * gini(left, nl) - (static_cast<double>(nr) / n) * gini(right, nr);
                if (gain > best_gain) {
                    best_gain = gain;
                    best_feature = f;
                    double thr = 0.5 * (v + vn);
                    if (thr >= vn) thr = v;
                    best_threshold = thr;
                }
            }
        }
        if (best_feature < 0) return id;  // all points identical

        std::vector<std::size_t> li, ri;
        for (auto i : idx) (x[i][static_cast<std::size_t>(best_feature)] <= best_threshold ? li : ri).push_back(i);
        const int l = build(std::move(li), depth + 1);
        const int r = build(std::move(ri), depth + 1);
        auto& nd = nodes[static_cast<std::size_t>(id)];
        nd.feature = best_feature;
        nd.threshold = best_threshold;
        nd.left = l;
        nd.right = r;
        return id;
    }
};

}  // namespace tree_detail

/// Distinct labels in canonical order.
inline std::vector<SetPartition> label_set(const std::vector<SetPartition>& labels) {
    std::vector<SetPartition> set = labels;
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    return set;
}

/// CART with Gini impurity. Candidate thresholds are midpoints between consecutive distinct
/// feature values; ties go to the lower feature, then the lower threshold.
inline DecisionTree fit_tree(const std::vector<Point2>& points, const std::vector<SetPartition>& labels,
                             const TreeConfig& cfg = {}) {
    if (points.empty()) throw InvalidArgument("fit_tree: no training points");
    if (points.size() != labels.size()) throw InvalidArgument("fit_tree: points and labels differ in length");
    auto classes = label_set(labels);
    std::vector<int> y(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i)
        y[i] = static_cast<int>(std::lower_bound(classes.begin(), classes.end(), labels[i]) - classes.begin());
    tree_detail::Builder b{points, y, static_cast<int>(classes.size()), cfg, {}};
    std::vector<std::size_t> idx(points.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    b.build(std::move(idx), 0);
    return DecisionTree(std::move(classes), std::move(b.nodes));
}

/// n_correct / (n_correct + n_incorrect)
inline double accuracy(const std::vector<SetPartition>& predictions, const std::vector<SetPartition>& truth) {
    if (predictions.size() != truth.size()) throw InvalidArgument("accuracy: length mismatch");
    if (truth.empty()) throw InvalidArgument("accuracy: no samples");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) correct += predictions[i] == truth[i];
    return static_cast<double>(correct) / static_cast<double>(truth.size());
}

/// Counts of (true label, predicted label) pairs.
inline std::map<std::pair<SetPartition, SetPartition>, int> confusion_counts(
    const std::vector<SetPartition>& predictions, const std::vector<SetPartition>& truth) {
    if (predictions.size() != truth.size()) throw InvalidArgument("confusion_counts: length mismatch");
    std::map<std::pair<SetPartition, SetPartition>, int> m;
    for (std::size_t i = 0; i < truth.size(); ++i) ++m[{truth[i], predictions[i]}];
    return m;
}

/// standardize -> embed -> classify
struct TrainedPipeline {
    FeatureLayout layout;
    Standardizer standardizer;
    EmbeddingModel embedding;
    DecisionTree tree;
    std::vector<SetPartition> labels;
    std::string config_hash;

    std::vector<Point2> embed(const FeatureMatrix& raw) const {
        if (raw.n_cols != layout.size()) throw InvalidArgument("pipeline: feature layout mismatch");
        return transform(embedding, standardizer.apply(raw));
    }

    std::vector<SetPartition> predict(const FeatureMatrix& raw) const { return tree.predict(embed(raw)); }

    friend bool operator==(const TrainedPipeline& a, const TrainedPipeline& b) {
        return a.layout == b.layout && a.standardizer == b.standardizer && a.embedding == b.embedding &&
               a.tree == b.tree && a.labels == b.labels && a.config_hash == b.config_hash;
    }
};

struct TrainResult {
    TrainedPipeline pipeline;
    std::vector<Point2> train_embedding;  ///< in input row order
    double train_accuracy = 0.0;
};

/// Fits standardizer and embedding (unsupervised) and the tree on (embedded point, label) pairs.
inline TrainResult train_pipeline(const FeatureLayout& layout, const FeatureMatrix& raw,
                                  const std::vector<SetPartition>& labels, const EmbeddingConfig& emb_cfg,
                                  const TreeConfig& tree_cfg, std::string config_hash = {}) {
    if (raw.n_rows != labels.size()) throw InvalidArgument("train: rows and labels differ in length");
    if (raw.n_cols != layout.size()) throw InvalidArgument("train: feature layout mismatch");
    auto classes = label_set(labels);
    if (classes.size() < 2) throw InvalidArgument("train: dataset needs at least 2 distinct labels");
    TrainResult r;
    auto& p = r.pipeline;
    p.layout = layout;
    p.standardizer = fit_standardizer(raw);
    p.embedding = fit_embedding(p.standardizer.apply(raw), emb_cfg);
    r.train_embedding = p.embedding.embedding();
    p.tree = fit_tree(r.train_embedding, labels, tree_cfg);
    p.labels = std::move(classes);
    p.config_hash = std::move(config_hash);
    r.train_accuracy = accuracy(p.tree.predict(r.train_embedding), labels);
    return r;
}

}  // namespace entpart
