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

// Randomized-measurement correlators.
//
// For a draw of single-qubit Haar unitaries U_1..U_N, the plain correlator of a subset S is
// c_S = tr(rho * prod_{m in S} U_m^dag Z_m U_m), and the connected correlator (joint cumulant)
// is the Moebius sum over set partitions of S. The moments of the connected correlators under
// the Haar measure make up the feature vector of a state.
//
// Subsets are handled as bit masks: bit q of a mask marks qubit q.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "entpart/errors.hpp"
#include "entpart/linalg.hpp"
#include "entpart/partitions.hpp"
#include "entpart/random.hpp"
#include "entpart/state_gen.hpp"

namespace entpart {

using SubsetMask = std::uint32_t;
using BlochVector = std::array<double, 3>;

/// One Haar-random 2x2 unitary per register qubit.
struct UnitaryDraw {
    std::vector<ComplexMatrix> unitaries;

    static UnitaryDraw sample(int n_qubits, Rng& rng) {
        UnitaryDraw d;
        d.unitaries.reserve(static_cast<std::size_t>(n_qubits));
        for (int q = 0; q < n_qubits; ++q) d.unitaries.push_back(haar_unitary(2, rng));
        return d;
    }

    /// The unitaries of the qubits in s, in ascending qubit order.
    UnitaryDraw restricted(const QubitIndexSet& s) const {
        UnitaryDraw d;
        for (int q : s) d.unitaries.push_back(unitaries.at(static_cast<std::size_t>(q)));
        return d;
    }

    std::size_t size() const { return unitaries.size(); }
};

/// Measured observable U^dag Z U of one qubit.
inline ComplexMatrix rotated_z(const ComplexMatrix& u) {
    static const ComplexMatrix z{{1.0, 0.0}, {0.0, -1.0}};
    return u.adjoint() * z * u;
}

/// Bloch vector n with U^dag Z U = n . sigma.
inline BlochVector rotated_z_axis(const ComplexMatrix& u) {
    const cplx a = u(0, 0), b = u(0, 1), c = u(1, 0), d = u(1, 1);
    const cplx m01 = std::conj(a) * b - std::conj(c) * d;
    return {m01.real(), -m01.imag(), std::norm(a) - std::norm(c)};
}

/// Plain correlator from a reduced state on S and the unitaries of S, by a direct trace.
inline double plain_correlator(const DensityMatrix& rho_reduced, const UnitaryDraw& draw) {
    if (draw.size() == 0) throw ContractViolation("plain_correlator: empty subset");
    if (draw.size() != static_cast<std::size_t>(rho_reduced.n_qubits())) {
        throw ContractViolation("plain_correlator: " + std::to_string(draw.size()) + " unitaries for a " +
                                std::to_string(rho_reduced.n_qubits()) + "-qubit state");
    }
    ComplexMatrix obs = rotated_z(draw.unitaries[0]);
    for (std::size_t i = 1; i < draw.size(); ++i) obs = kron(obs, rotated_z(draw.unitaries[i]));
    const auto& r = rho_reduced.matrix();
    cplx t = 0.0;
    for (std::size_t i = 0; i < r.rows(); ++i)
        for (std::size_t j = 0; j < r.cols(); ++j) t += r(i, j) * obs(j, i);
    if (std::abs(t.imag()) > 1e-10) throw NumericError("plain_correlator: expectation value is not real");
    return t.real();
}

/// Moebius weight (|P| - 1)! (-1)^(|P| - 1) of a set partition with the given number of parts.
inline double moebius_weight(std::size_t n_parts) {
    double f = 1.0;
    for (std::size_t i = 2; i < n_parts; ++i) f *= static_cast<double>(i);
    return (n_parts % 2 == 1) ? f : -f;
}

/// Connected correlator of `subset` as the Moebius sum over its set partitions.
/// `plain_values` must hold the plain correlator of every non-empty subset of `subset`.
inline double connected_correlator(const QubitIndexSet& subset, const std::map<QubitIndexSet, double>& plain_values) {
    if (subset.empty()) throw InvalidArgument("connected_correlator: empty subset");
    double total = 0.0;
    for (const auto& p : partitions_of_set(subset)) {
        double prod = moebius_weight(p.size());
        for (const auto& part : p) {
            const auto it = plain_values.find(part);
            if (it == plain_values.end()) {
                throw InvalidArgument("connected_correlator: missing plain correlator for subset " +
                                      SetPartition({part}).to_string());
            }
            prod *= it->second;
        }
        total += prod;
    }
    return total;
}

/// Correlators of all subsets from plain values indexed by mask (entry 0 is ignored).
/// Uses c(S) = sum_{B containing min S} kappa(B) c(S \ B), solved for kappa(S).
inline std::vector<double> connected_from_plain(const std::vector<double>& plain, int max_order) {
    const std::size_t total = plain.size();
    std::vector<double> kappa(total, 0.0);
    for (SubsetMask s = 1; s < total; ++s) {
        if (std::popcount(s) > max_order) continue;
        const SubsetMask low = s & (~s + 1);
        const SubsetMask rest = s ^ low;
        double v = plain[s];
        // proper sub-blocks B = low | r, r a proper subset of rest
        for (SubsetMask r = (rest - 1) & rest;; r = (r - 1) & rest) {
            if (r == rest) break;
            const SubsetMask b = low | r;
            v -= kappa[b] * plain[s ^ b];
            if (r == 0) break;
        }
        kappa[s] = v;
    }
    return kappa;
}

/// Pauli expansion coefficients T[mu_0 .. mu_{n-1}] = tr(rho sigma_mu_0 x ... x sigma_mu_{n-1}),
/// with mu = 0 the identity; qubit 0 is the most significant base-4 digit.
inline std::vector<double> pauli_coefficients(const DensityMatrix& rho) {
    const int n = rho.n_qubits();
    const std::size_t d = rho.dim();
    const std::size_t size = d * d;
    std::vector<cplx> a(size);
    // digit of qubit q is 2*i_q + j_q
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            std::size_t idx = 0;
            for (int q = 0; q < n; ++q) {
                const int bit = detail::qubit_bit(q, n);
                idx = idx * 4 + 2 * ((i >> bit) & 1u) + ((j >> bit) & 1u);
            }
            a[idx] = rho.matrix()(i, j);
        }
    const cplx I(0.0, 1.0);
    for (int q = 0; q < n; ++q) {
        const std::size_t stride = std::size_t{1} << (2 * (n - 1 - q));
        for (std::size_t base = 0; base < size; ++base) {
            if ((base / stride) % 4 != 0) continue;
            const cplx r00 = a[base], r01 = a[base + stride], r10 = a[base + 2 * stride], r11 = a[base + 3 * stride];
            a[base] = r00 + r11;
            a[base + stride] = r01 + r10;
            a[base + 2 * stride] = I * (r01 - r10);
            a[base + 3 * stride] = r00 - r11;
        }
    }
    std::vector<double> t(size);
    for (std::size_t k = 0; k < size; ++k) t[k] = a[k].real();
    return t;
}

/// Plain and connected correlators of one draw, indexed by subset mask.
struct DrawCorrelators {
    std::vector<double> plain;
    std::vector<double> connected;
};

/// Evaluates correlators of a fixed state for many unitary draws.
class CorrelatorSampler {
   public:
    explicit CorrelatorSampler(const DensityMatrix& rho) : n_(rho.n_qubits()), pauli_(pauli_coefficients(rho)) {
        if (n_ < 1 || n_ > 12) throw InvalidArgument("CorrelatorSampler: unsupported qubit count");
    }

    int n_qubits() const { return n_; }

    /// Plain correlators of every subset for the given Bloch axes, indexed by mask; entry 0 is tr(rho) = 1.
    std::vector<double> plain(const std::vector<BlochVector>& axes) const {
        const std::size_t n = static_cast<std::size_t>(n_);
        // buffer layout: [processed-subset index][remaining base-4 digits]
        std::vector<double> cur = pauli_, next;
        std::size_t tail = pauli_.size();
        std::size_t heads = 1;
        for (std::size_t q = 0; q < n; ++q) {
            const std::size_t new_tail = tail / 4;
            next.assign(heads * 2 * new_tail, 0.0);
            const auto& ax = axes[q];
            for (std::size_t h = 0; h < heads; ++h) {
                const double* src = cur.data() + h * tail;
                double* out_id = next.data() + h * new_tail;                // qubit q not in subset
                double* out_in = next.data() + (h + heads) * new_tail;      // qubit q in subset
                for (std::size_t r = 0; r < new_tail; ++r) {
                    out_id[r] = src[r];
                    out_in[r] = ax[0] * src[new_tail + r] + ax[1] * src[2 * new_tail + r] +
                                ax[2] * src[3 * new_tail + r];
                }
            }
            cur.swap(next);
            tail = new_tail;
            heads *= 2;
        }
        return cur;
    }

    DrawCorrelators evaluate(const UnitaryDraw& draw, int max_order) const {
        if (draw.size() != static_cast<std::size_t>(n_)) throw ContractViolation("draw size does not match register");
        std::vector<BlochVector> axes;
        axes.reserve(draw.size());
        for (const auto& u : draw.unitaries) axes.push_back(rotated_z_axis(u));
        DrawCorrelators out;
        out.plain = plain(axes);
        out.connected = connected_from_plain(out.plain, max_order);
        return out;
    }

   private:
    int n_;
    std::vector<double> pauli_;
};

/// Moment orders t, correlation orders k, and number of unitary draws.
struct MomentSpec {
    std::vector<int> t;
    std::vector<int> k;
    int n_unit = 500;

    int max_order() const { return k.empty() ? 0 : k.back(); }

    void validate(int n_qubits) const {
        if (t.empty()) throw InvalidArgument("MomentSpec: t is empty");
        if (k.empty()) throw InvalidArgument("MomentSpec: k is empty");
        if (!std::is_sorted(t.begin(), t.end()) || std::adjacent_find(t.begin(), t.end()) != t.end())
            throw InvalidArgument("MomentSpec: t must be strictly ascending");
        if (!std::is_sorted(k.begin(), k.end()) || std::adjacent_find(k.begin(), k.end()) != k.end())
            throw InvalidArgument("MomentSpec: k must be strictly ascending");
        for (int x : t)
            if (x <= 0 || x % 2 != 0) throw InvalidArgument("MomentSpec: moment orders must be even and positive");
        if (k.front() < 1 || k.back() > n_qubits)
            throw InvalidArgument("MomentSpec: correlation orders must lie in [1, N]");
        if (n_unit < 1) throw InvalidArgument("MomentSpec: n_unit must be positive");
    }

    friend bool operator==(const MomentSpec&, const MomentSpec&) = default;
};

inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

/// |t| * sum_{k in spec} C(n, k)
inline std::size_t feature_dimension(int n, const MomentSpec& spec) {
    std::uint64_t per_t = 0;
    for (int k : spec.k) per_t += binomial(n, k);
    return static_cast<std::size_t>(per_t * spec.t.size());
}

/// One feature column: moment order t of the connected correlator on `subset`.
struct FeatureColumn {
    int t;
    SubsetMask subset;
    friend bool operator==(const FeatureColumn&, const FeatureColumn&) = default;
};

/// Canonical column order: t ascending, then subset size ascending, then subsets lexicographic.
class FeatureLayout {
   public:
    FeatureLayout() = default;
    FeatureLayout(int n_qubits, std::vector<int> t, std::vector<int> k)
        : n_(n_qubits), t_(std::move(t)), k_(std::move(k)) {
        std::vector<std::vector<int>> subsets;
        for (int size : k_) {
            std::vector<std::vector<int>> of_size;
            std::vector<int> idx(static_cast<std::size_t>(size));
            // lexicographic combinations of {0..n-1}
            for (int i = 0; i < size; ++i) idx[static_cast<std::size_t>(i)] = i;
            while (size <= n_) {
                of_size.push_back(idx);
                int i = size - 1;
                while (i >= 0 && idx[static_cast<std::size_t>(i)] == n_ - size + i) --i;
                if (i < 0) break;
                ++idx[static_cast<std::size_t>(i)];
                for (int j = i + 1; j < size; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
            }
            subsets.insert(subsets.end(), of_size.begin(), of_size.end());
        }
        for (int tt : t_)
            for (const auto& s : subsets) columns_.push_back({tt, QubitIndexSet(s).mask()});
    }
    FeatureLayout(int n_qubits, const MomentSpec& spec) : FeatureLayout(n_qubits, spec.t, spec.k) {}

    int n_qubits() const { return n_; }
    const std::vector<int>& t() const { return t_; }
    const std::vector<int>& k() const { return k_; }
    const std::vector<FeatureColumn>& columns() const { return columns_; }
    std::size_t size() const { return columns_.size(); }

    /// Column name such as "M2_1_2" (moment order, then 1-based qubits).
    static std::string column_name(const FeatureColumn& c) {
        std::string s = "M" + std::to_string(c.t);
        for (int q : QubitIndexSet::from_mask(c.subset)) s += "_" + std::to_string(q + 1);
        return s;
    }

    std::vector<std::string> column_names() const {
        std::vector<std::string> names;
        for (const auto& c : columns_) names.push_back(column_name(c));
        return names;
    }

    /// Positions of `sub`'s columns inside this layout; throws if any is absent.
    std::vector<std::size_t> select(const FeatureLayout& sub) const {
        if (sub.n_ != n_) throw InvalidArgument("FeatureLayout: qubit counts differ");
        std::vector<std::size_t> idx;
        for (const auto& c : sub.columns_) {
            const auto it = std::find(columns_.begin(), columns_.end(), c);
            if (it == columns_.end()) throw InvalidArgument("FeatureLayout: column " + column_name(c) + " not present");
            idx.push_back(static_cast<std::size_t>(it - columns_.begin()));
        }
        return idx;
    }

    friend bool operator==(const FeatureLayout& a, const FeatureLayout& b) {
        return a.n_ == b.n_ && a.t_ == b.t_ && a.k_ == b.k_;
    }

   private:
    int n_ = 0;
    std::vector<int> t_;
    std::vector<int> k_;
    std::vector<FeatureColumn> columns_;
};

using FeatureVector = std::vector<double>;

/// Monte-Carlo estimate of the moments of every connected correlator named by `spec`,
/// from spec.n_unit independent draws of single-qubit Haar unitaries.
inline FeatureVector estimate_moments(const DensityMatrix& rho, const MomentSpec& spec, Rng& rng) {
    const int n = rho.n_qubits();
    spec.validate(n);
    const FeatureLayout layout(n, spec);
    const CorrelatorSampler sampler(rho);
    const int max_order = spec.max_order();
    const auto& cols = layout.columns();
    const std::size_t n_subsets = cols.size() / spec.t.size();

    std::vector<double> acc(cols.size(), 0.0);
    for (int draw = 0; draw < spec.n_unit; ++draw) {
        const auto values = sampler.evaluate(UnitaryDraw::sample(n, rng), max_order);
        for (std::size_t s = 0; s < n_subsets; ++s) {
            const double c = values.connected[cols[s].subset];
            const double c2 = c * c;
            double pw = 1.0;
            int have = 0;
            for (std::size_t ti = 0; ti < spec.t.size(); ++ti) {
                while (have < spec.t[ti]) {
                    pw *= c2;
                    have += 2;
                }
                acc[ti * n_subsets + s] += pw;
            }
        }
    }
    for (auto& x : acc) x /= static_cast<double>(spec.n_unit);
    return acc;
}

}  // namespace entpart
