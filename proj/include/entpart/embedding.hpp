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

// UMAP-style manifold embedding into the plane.
//
// fit() builds an exact k-nearest-neighbour graph, turns it into fuzzy membership weights
// v_ij, and lays the points out in R^2 by stochastic gradient descent on the fuzzy
// cross-entropy between v and the low-dimensional similarities w = 1 / (1 + a d^(2b)).
// transform() places new points against the frozen training layout.
//
// Rows are processed in lexicographic order of their feature values, which makes the result
// independent of the order in which rows are supplied.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "entpart/errors.hpp"
#include "entpart/random.hpp"

namespace entpart {

using Point2 = std::array<double, 2>;

struct EmbeddingConfig {
    int n_neighbours = 10;
    double d_min = 0.6;
    int embedding_dim = 2;
    int n_epochs = 300;
    double learning_rate = 1.0;
    int negative_sample_rate = 5;
    std::uint64_t seed = 0;

    friend bool operator==(const EmbeddingConfig&, const EmbeddingConfig&) = default;
};

/// Row-major matrix of feature rows.
struct FeatureMatrix {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<double> values;

    FeatureMatrix() = default;
    FeatureMatrix(std::size_t rows, std::size_t cols) : n_rows(rows), n_cols(cols), values(rows * cols, 0.0) {}

    static FeatureMatrix from_rows(const std::vector<std::vector<double>>& rows) {
        FeatureMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != m.n_cols) throw InvalidArgument("FeatureMatrix: rows have different lengths");
            std::copy(rows[i].begin(), rows[i].end(), m.values.begin() + static_cast<std::ptrdiff_t>(i * m.n_cols));
        }
        return m;
    }

    std::span<const double> row(std::size_t i) const { return {values.data() + i * n_cols, n_cols}; }
    std::span<double> row(std::size_t i) { return {values.data() + i * n_cols, n_cols}; }

    friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;
};

struct EmbeddingModel {
    EmbeddingConfig config;
    FeatureMatrix train_inputs;          ///< canonical (lexicographic) row order
    std::vector<Point2> train_coords;    ///< aligned with train_inputs
    std::vector<double> rho;
    std::vector<double> sigma;
    double a = 0.0;
    double b = 0.0;
    /// input_order[i] = canonical position of the i-th row passed to fit()
    std::vector<std::size_t> input_order;

    /// Embedded coordinates in the order rows were passed to fit().
    std::vector<Point2> embedding() const {
        std::vector<Point2> out(input_order.size());
        for (std::size_t i = 0; i < input_order.size(); ++i) out[i] = train_coords[input_order[i]];
        return out;
    }

    friend bool operator==(const EmbeddingModel&, const EmbeddingModel&) = default;
};

namespace umap_detail {

inline constexpr double kSmoothKTolerance = 1e-5;
inline constexpr int kSmoothKMaxIter = 64;
inline constexpr double kMinKDistScale = 1e-3;
inline constexpr double kSpread = 1.0;
inline constexpr double kGradClip = 4.0;

inline double sq_dist(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return s;
}

struct Neighbour {
    std::size_t index;
    double dist;
};

/// k nearest training rows of `query` (excluding `self` when given), ties broken by index.
inline std::vector<Neighbour> nearest(const FeatureMatrix& data, std::span<const double> query, std::size_t k,
                                     std::size_t self = SIZE_MAX) {
    std::vector<Neighbour> all;
    all.reserve(data.n_rows);
    for (std::size_t j = 0; j < data.n_rows; ++j) {
        if (j == self) continue;
        all.push_back({j, sq_dist(query, data.row(j))});
    }
    const auto cmp = [](const Neighbour& x, const Neighbour& y) {
        return x.dist < y.dist || (x.dist == y.dist && x.index < y.index);
    };
    k = std::min(k, all.size());
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(), cmp);
    all.resize(k);
    for (auto& nb : all) nb.dist = std::sqrt(nb.dist);
    return all;
}

struct SmoothKnn {
    double rho;
    double sigma;
    double residual;
};

/// Solves sum_i exp(-max(0, d_i - rho) / sigma) = log2(k) for sigma by bisection.
inline SmoothKnn smooth_knn(const std::vector<Neighbour>& nbrs, double mean_all_dist) {
    const double target = std::log2(static_cast<double>(nbrs.size()));
    const double rho = nbrs.empty() ? 0.0 : nbrs.front().dist;
    double lo = 0.0, hi = INFINITY, mid = 1.0;
    auto psum_at = [&](double s) {
        double psum = 0.0;
        for (const auto& nb : nbrs) {
            const double d = nb.dist - rho;
            psum += d > 0.0 ? std::exp(-d / s) : 1.0;
        }
        return psum;
    };
    double psum = psum_at(mid);
    for (int it = 0; it < kSmoothKMaxIter; ++it) {
        psum = psum_at(mid);
        if (std::abs(psum - target) < kSmoothKTolerance) break;
        if (psum > target) {
            hi = mid;
            mid = 0.5 * (lo + hi);
        } else {
            lo = mid;
            mid = std::isinf(hi) ? mid * 2.0 : 0.5 * (lo + hi);
        }
    }
    double sigma = mid;
    double mean_d = 0.0;
    for (const auto& nb : nbrs) mean_d += nb.dist;
    mean_d /= std::max<std::size_t>(1, nbrs.size());
    const double floor = kMinKDistScale * (rho > 0.0 ? mean_d : mean_all_dist);
    if (sigma < floor) sigma = floor;
    return {rho, sigma, std::abs(psum_at(sigma) - target)};
}

inline double membership(double dist, double rho, double sigma) {
    const double d = dist - rho;
    return d > 0.0 ? std::exp(-d / sigma) : 1.0;
}

}  // namespace umap_detail

/// Least-squares fit of 1 / (1 + a x^(2b)) to the curve that is 1 below d_min and
/// exp(-(x - d_min)) above, sampled at 300 points on [0, 3]. Levenberg-Marquardt.
inline std::pair<double, double> fit_ab(double d_min, double spread = umap_detail::kSpread) {
    if (!(d_min > 0.0)) throw InvalidArgument("d_min must be positive");
    constexpr int kSamples = 300;
    std::vector<double> xs(kSamples), ys(kSamples);
    for (int i = 0; i < kSamples; ++i) {
        xs[i] = 3.0 * spread * i / (kSamples - 1);
        ys[i] = xs[i] < d_min ? 1.0 : std::exp(-(xs[i] - d_min) / spread);
    }
    auto residuals = [&](double a, double b, std::vector<double>* ja, std::vector<double>* jb) {
        double sse = 0.0;
        for (int i = 0; i < kSamples; ++i) {
            const double x = xs[i];
            const double u = x > 0.0 ? std::pow(x, 2.0 * b) : 0.0;
            const double f = 1.0 / (1.0 + a * u);
            const double r = f - ys[i];
            sse += r * r;
            if (ja) {
                const double g = f * f;
                (*ja)[i] = -u * g;
                (*jb)[i] = x > 0.0 ? -a * u * 2.0 * std::log(x) * g : 0.0;
            }
        }
        return sse;
    };
    double a = 1.0, b = 1.0, damping = 1e-3;
    std::vector<double> ja(kSamples), jb(kSamples);
    double sse = residuals(a, b, &ja, &jb);
    for (int iter = 0; iter < 500; ++iter) {
        double h_aa = 0, h_ab = 0, h_bb = 0, g_a = 0, g_b = 0;
        for (int i = 0; i < kSamples; ++i) {
            const double x = xs[i];
            const double u = x > 0.0 ? std::pow(x, 2.0 * b) : 0.0;
            const double r = 1.0 / (1.0 + a * u) - ys[i];
            h_aa += ja[i] * ja[i];
            h_ab += ja[i] * jb[i];
            h_bb += jb[i] * jb[i];
            g_a += ja[i] * r;
            g_b += jb[i] * r;
        }
        bool improved = false;
        while (damping < 1e12) {
            const double m_aa = h_aa * (1.0 + damping), m_bb = h_bb * (1.0 + damping);
            const double det = m_aa * m_bb - h_ab * h_ab;
            const double da = -(m_bb * g_a - h_ab * g_b) / det;
            const double db = -(m_aa * g_b - h_ab * g_a) / det;
            const double na = a + da, nb = b + db;
            if (na > 0.0 && nb > 0.0) {
                const double nsse = residuals(na, nb, nullptr, nullptr);
                if (nsse <= sse) {
                    const bool tiny = std::abs(da) < 1e-14 * (1.0 + a) && std::abs(db) < 1e-14 * (1.0 + b);
                    a = na;
                    b = nb;
                    sse = residuals(a, b, &ja, &jb);
                    damping = std::max(damping * 0.3, 1e-12);
                    improved = !tiny;
                    break;
                }
            }
            damping *= 10.0;
        }
        if (!improved) break;
    }
    return {a, b};
}

namespace umap_detail {

/// Directed edge (head, tail) with weight; both directions of every graph edge are present.
struct Edge {
    std::size_t head;
    std::size_t tail;
    double weight;
};

/// Sampling schedule of one edge set: an edge is visited every epochs_per_sample epochs.
inline std::vector<double> epochs_per_sample(const std::vector<Edge>& edges, int n_epochs) {
    double max_w = 0.0;
    for (const auto& e : edges) max_w = std::max(max_w, e.weight);
    std::vector<double> eps(edges.size(), -1.0);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const double n_samples = n_epochs * (edges[i].weight / max_w);
        if (n_samples > 0.0) eps[i] = n_epochs / n_samples;
    }
    return eps;
}

inline double clip(double v) { return std::clamp(v, -kGradClip, kGradClip); }

/// SGD over `edges`. Heads move in `head_emb`; tails live in `tail_emb` and also move when
/// `move_other` is set (then head_emb and tail_emb are the same layout).
inline void optimize_layout(std::vector<Point2>& head_emb, std::vector<Point2>& tail_emb,
                            const std::vector<Edge>& edges, int n_epochs, double a, double b, double initial_alpha,
                            int negative_sample_rate, bool move_other, Rng& rng) {
    const auto eps = epochs_per_sample(edges, n_epochs);
    std::vector<double> next_sample = eps;
    std::vector<double> eps_neg(eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i) eps_neg[i] = eps[i] / negative_sample_rate;
    std::vector<double> next_neg = eps_neg;
    const std::uint64_t n_tail = tail_emb.size();

    for (int epoch = 0; epoch < n_epochs; ++epoch) {
        const double alpha = initial_alpha * (1.0 - static_cast<double>(epoch) / n_epochs);
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (eps[i] <= 0.0 || next_sample[i] > epoch) continue;
            Point2& cur = head_emb[edges[i].head];
            Point2& other = tail_emb[edges[i].tail];
            const double d2 = (cur[0] - other[0]) * (cur[0] - other[0]) + (cur[1] - other[1]) * (cur[1] - other[1]);
            double coeff = 0.0;
            if (d2 > 0.0) {
                coeff = -2.0 * a * b * std::pow(d2, b - 1.0);
                coeff /= a * std::pow(d2, b) + 1.0;
            }
            for (int d = 0; d < 2; ++d) {
                const double g = clip(coeff * (cur[d] - other[d]));
                cur[d] += g * alpha;
                if (move_other) other[d] -= g * alpha;
            }
            next_sample[i] += eps[i];

            const int n_neg = static_cast<int>((epoch - next_neg[i]) / eps_neg[i]);
            for (int p = 0; p < n_neg; ++p) {
                const std::size_t k = static_cast<std::size_t>(rng() % n_tail);
                if (move_other && k == edges[i].head) continue;
                const Point2& neg = tail_emb[k];
                const double nd2 =
                    (cur[0] - neg[0]) * (cur[0] - neg[0]) + (cur[1] - neg[1]) * (cur[1] - neg[1]);
                double ncoeff = 0.0;
                if (nd2 > 0.0) ncoeff = 2.0 * b / ((0.001 + nd2) * (a * std::pow(nd2, b) + 1.0));
                if (ncoeff <= 0.0) continue;
                for (int d = 0; d < 2; ++d) cur[d] += clip(ncoeff * (cur[d] - neg[d])) * alpha;
            }
            next_neg[i] += n_neg * eps_neg[i];
        }
    }
}

/// First two principal components, scaled to unit variance per component.
inline std::vector<Point2> pca_init(const FeatureMatrix& x) {
    const std::size_t n = x.n_rows, dim = x.n_cols;
    std::vector<double> mean(dim, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < dim; ++c) mean[c] += x.row(i)[c];
    for (auto& m : mean) m /= static_cast<double>(n);
    std::vector<double> cov(dim * dim, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = x.row(i);
        for (std::size_t p = 0; p < dim; ++p) {
            const double dp = r[p] - mean[p];
            for (std::size_t q = p; q < dim; ++q) cov[p * dim + q] += dp * (r[q] - mean[q]);
        }
    }
    for (std::size_t p = 0; p < dim; ++p)
        for (std::size_t q = 0; q < p; ++q) cov[p * dim + q] = cov[q * dim + p];

    // subspace iteration for the two leading eigenvectors
    const std::size_t nvec = std::min<std::size_t>(2, dim);
    std::vector<std::vector<double>> v(nvec, std::vector<double>(dim));
    for (std::size_t k = 0; k < nvec; ++k)
        for (std::size_t c = 0; c < dim; ++c) v[k][c] = 1.0 / (1.0 + static_cast<double>((c * 7 + k * 3) % (dim + 1)));
    auto orthonormalize = [&] {
        for (std::size_t k = 0; k < nvec; ++k) {
            for (std::size_t j = 0; j < k; ++j) {
                double dot = 0.0;
                for (std::size_t c = 0; c < dim; ++c) dot += v[k][c] * v[j][c];
                for (std::size_t c = 0; c < dim; ++c) v[k][c] -= dot * v[j][c];
            }
            double nrm = 0.0;
            for (double z : v[k]) nrm += z * z;
            nrm = std::sqrt(nrm);
            if (nrm == 0.0) {
                // restart from a coordinate axis not yet spanned
                std::fill(v[k].begin(), v[k].end(), 0.0);
                v[k][(k + 1) % dim] = 1.0;
                continue;
            }
            for (double& z : v[k]) z /= nrm;
        }
    };
    orthonormalize();
    for (int it = 0; it < 2000; ++it) {
        auto prev = v;
        for (std::size_t k = 0; k < nvec; ++k) {
            std::vector<double> w(dim, 0.0);
            for (std::size_t p = 0; p < dim; ++p) {
                double s = 0.0;
                for (std::size_t q = 0; q < dim; ++q) s += cov[p * dim + q] * prev[k][q];
                w[p] = s;
            }
            v[k] = std::move(w);
        }
        orthonormalize();
        double change = 0.0;
        for (std::size_t k = 0; k < nvec; ++k) {
            double dot = 0.0;
            for (std::size_t c = 0; c < dim; ++c) dot += v[k][c] * prev[k][c];
            change = std::max(change, 1.0 - std::abs(dot));
        }
        if (change < 1e-14) break;
    }
    // deterministic sign: largest-magnitude component positive
    for (auto& vec : v) {
        std::size_t arg = 0;
        for (std::size_t c = 1; c < dim; ++c)
            if (std::abs(vec[c]) > std::abs(vec[arg])) arg = c;
        if (vec[arg] < 0.0)
            for (double& z : vec) z = -z;
    }

    std::vector<Point2> out(n, Point2{0.0, 0.0});
    for (std::size_t k = 0; k < nvec; ++k) {
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            const auto r = x.row(i);
            for (std::size_t c = 0; c < dim; ++c) s += (r[c] - mean[c]) * v[k][c];
            out[i][k] = s;
            ss += s * s;
        }
        const double sd = std::sqrt(ss / static_cast<double>(n));
        if (sd > 0.0)
            for (auto& p : out) p[k] /= sd;
    }
    return out;
}

}  // namespace umap_detail

/// Fits the embedding of `data` (rows are standardized feature vectors).
inline EmbeddingModel fit_embedding(const FeatureMatrix& data, const EmbeddingConfig& config) {
    using namespace umap_detail;
    if (config.embedding_dim != 2) throw InvalidArgument("embedding_dim must be 2");
    if (config.n_neighbours < 2) throw InvalidArgument("n_neighbours must be at least 2");
    if (data.n_rows < static_cast<std::size_t>(config.n_neighbours) + 1) {
        throw InvalidArgument("embedding needs more than n_neighbours points");
    }
    if (config.n_epochs < 1 || config.negative_sample_rate < 1 || !(config.learning_rate > 0.0)) {
        throw InvalidArgument("invalid SGD settings");
    }
    const std::size_t n = data.n_rows;

    // canonical row order
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        const auto ri = data.row(i), rj = data.row(j);
        return std::lexicographical_compare(ri.begin(), ri.end(), rj.begin(), rj.end());
    });
    EmbeddingModel model;
    model.config = config;
    model.train_inputs = FeatureMatrix(n, data.n_cols);
    model.input_order.resize(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::copy(data.row(order[c]).begin(), data.row(order[c]).end(), model.train_inputs.row(c).begin());
        model.input_order[order[c]] = c;
    }
    const FeatureMatrix& x = model.train_inputs;

    bool all_same = true;
    for (std::size_t i = 1; i < n && all_same; ++i)
        all_same = std::equal(x.row(i).begin(), x.row(i).end(), x.row(0).begin());
    if (all_same) throw NumericError("embedding: all data points are identical");

    const std::size_t k = static_cast<std::size_t>(config.n_neighbours);
    std::vector<std::vector<Neighbour>> knn(n);
    double mean_all = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        knn[i] = nearest(x, x.row(i), k, i);
        for (const auto& nb : knn[i]) mean_all += nb.dist;
    }
    mean_all /= static_cast<double>(n * k);

    model.rho.resize(n);
    model.sigma.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto s = smooth_knn(knn[i], mean_all);
        model.rho[i] = s.rho;
        model.sigma[i] = s.sigma;
    }

    // fuzzy union of the directed memberships: v = v_ij + v_ji - v_ij v_ji
    std::vector<std::vector<std::pair<std::size_t, double>>> directed(n);
    for (std::size_t j = 0; j < n; ++j)
        for (const auto& nb : knn[j])
            directed[j].push_back({nb.index, membership(nb.dist, model.rho[j], model.sigma[j])});
    for (auto& row : directed) std::sort(row.begin(), row.end());
    auto lookup = [&](std::size_t from, std::size_t to) {
        const auto& row = directed[from];
        const auto it = std::lower_bound(row.begin(), row.end(), std::pair<std::size_t, double>(to, -std::numeric_limits<double>::infinity()));
        return (it != row.end() && it->first == to) ? it->second : 0.0;
    };
    std::vector<Edge> edges;
    {
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t i = 0; i < n; ++i)
            for (const auto& [j, w] : directed[i]) {
                pairs.push_back({i, j});
                pairs.push_back({j, i});
            }
        std::sort(pairs.begin(), pairs.end());
        pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
        double max_w = 0.0;
        for (const auto& [i, j] : pairs) {
            const double vij = lookup(i, j), vji = lookup(j, i);
            const double w = vij + vji - vij * vji;
            edges.push_back({i, j, w});
            max_w = std::max(max_w, w);
        }
        // edges too weak to be sampled within n_epochs are dropped
        std::erase_if(edges, [&](const Edge& e) { return e.weight < max_w / config.n_epochs; });
    }

    std::tie(model.a, model.b) = fit_ab(config.d_min);

    Rng rng = derive_stream(config.seed, StreamDomain::embedding, 0);
    std::vector<Point2> emb = pca_init(x);
    for (auto& p : emb)
        for (double& c : p) c += 1e-4 * standard_normal(rng);

    optimize_layout(emb, emb, edges, config.n_epochs, model.a, model.b, config.learning_rate,
                    config.negative_sample_rate, true, rng);
    for (const auto& p : emb)
        if (!std::isfinite(p[0]) || !std::isfinite(p[1])) throw NumericError("embedding: layout diverged");
    model.train_coords = std::move(emb);
    return model;
}

/// Symmetrized membership weight v_ij between two training points (0 if not in each other's kNN).
/// Exposed for inspection in tests.
inline std::vector<std::vector<std::pair<std::size_t, double>>> membership_graph(const EmbeddingModel& model) {
    using namespace umap_detail;
    const auto& x = model.train_inputs;
    const std::size_t n = x.n_rows;
    const std::size_t k = static_cast<std::size_t>(model.config.n_neighbours);
    std::vector<std::vector<std::pair<std::size_t, double>>> directed(n);
    for (std::size_t j = 0; j < n; ++j)
        for (const auto& nb : nearest(x, x.row(j), k, j))
            directed[j].push_back({nb.index, membership(nb.dist, model.rho[j], model.sigma[j])});
    return directed;
}

/// Embeds new rows against the frozen training layout of `model`.
inline std::vector<Point2> transform(const EmbeddingModel& model, const FeatureMatrix& points) {
    using namespace umap_detail;
    if (points.n_rows == 0) return {};
    if (points.n_cols != model.train_inputs.n_cols) {
        throw InvalidArgument("transform: feature length " + std::to_string(points.n_cols) + " does not match model (" +
                              std::to_string(model.train_inputs.n_cols) + ")");
    }
    const auto& cfg = model.config;
    const std::size_t k = static_cast<std::size_t>(cfg.n_neighbours);
    const int n_epochs = std::max(1, cfg.n_epochs / 3);
    double mean_all = 0.0;
    for (double r : model.rho) mean_all += r;
    mean_all = model.rho.empty() ? 1.0 : mean_all / static_cast<double>(model.rho.size());

    std::vector<Point2> out(points.n_rows);
    std::vector<Point2> tail = model.train_coords;  // read-only: heads move alone
    for (std::size_t p = 0; p < points.n_rows; ++p) {
        const auto nbrs = nearest(model.train_inputs, points.row(p), k);
        const auto s = smooth_knn(nbrs, mean_all > 0.0 ? mean_all : 1.0);
        std::vector<Edge> edges;
        double wsum = 0.0;
        Point2 init{0.0, 0.0};
        for (const auto& nb : nbrs) {
            const double w = membership(nb.dist, s.rho, s.sigma);
            edges.push_back({0, nb.index, w});
            wsum += w;
            init[0] += w * model.train_coords[nb.index][0];
            init[1] += w * model.train_coords[nb.index][1];
        }
        init[0] /= wsum;
        init[1] /= wsum;
        // an exact copy of a training row starts at that row's fitted position
        if (nbrs.front().dist == 0.0) init = model.train_coords[nbrs.front().index];
        double max_w = 0.0;
        for (const auto& e : edges) max_w = std::max(max_w, e.weight);
        std::erase_if(edges, [&](const Edge& e) { return e.weight < max_w / n_epochs; });

        std::vector<Point2> head{init};
        Rng rng = derive_stream(cfg.seed, StreamDomain::transform, p);
        optimize_layout(head, tail, edges, n_epochs, model.a, model.b, cfg.learning_rate / 4.0,
                        cfg.negative_sample_rate, false, rng);
        out[p] = head[0];
        if (!std::isfinite(out[p][0]) || !std::isfinite(out[p][1])) out[p] = init;
    }
    return out;
}

}  // namespace entpart
