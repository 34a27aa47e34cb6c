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

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "entpart/errors.hpp"
#include "entpart/linalg.hpp"
#include "entpart/partitions.hpp"
#include "entpart/random.hpp"

namespace entpart {

/// Validity tolerances of a density matrix.
struct StateTolerances {
    double hermitian = 1e-10;
    double trace = 1e-10;
    double min_eigenvalue = -1e-9;
};

class DensityMatrix {
   public:
    DensityMatrix() = default;
    /// Wraps a matrix without spectral validation; shape is always checked.
    DensityMatrix(int n_qubits, ComplexMatrix m) : n_qubits_(n_qubits), m_(std::move(m)) {
        detail::checked_qubit_count(m_, n_qubits_, "DensityMatrix");
    }

    /// Full validation: Hermitian, unit trace, and positive semidefinite within tolerances.
    static DensityMatrix checked(int n_qubits, ComplexMatrix m, const StateTolerances& tol = {}) {
        DensityMatrix rho(n_qubits, std::move(m));
        rho.validate(tol);
        return rho;
    }

    static DensityMatrix pure(int n_qubits, std::span<const cplx> psi) {
        return DensityMatrix(n_qubits, ComplexMatrix::outer(psi));
    }

    static DensityMatrix maximally_mixed(int n_qubits) {
        const std::size_t d = std::size_t{1} << n_qubits;
        return DensityMatrix(n_qubits, ComplexMatrix::identity(d) * cplx(1.0 / static_cast<double>(d)));
    }

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return m_.rows(); }
    const ComplexMatrix& matrix() const { return m_; }

    void validate(const StateTolerances& tol = {}) const {
        if (m_.hermiticity_error() > tol.hermitian) throw ContractViolation("DensityMatrix: not Hermitian");
        if (std::abs(m_.trace() - cplx(1.0)) > tol.trace) throw ContractViolation("DensityMatrix: trace is not 1");
        const auto ev = hermitian_eigenvalues(m_, {tol.hermitian, 1e-12, 100});
        if (!ev.empty() && ev.front() < tol.min_eigenvalue) {
            throw ContractViolation("DensityMatrix: negative eigenvalue " + std::to_string(ev.front()));
        }
    }

    /// Reduced state on `keep`.
    DensityMatrix reduced(const QubitIndexSet& keep) const {
        return DensityMatrix(static_cast<int>(keep.size()), partial_trace(m_, keep, n_qubits_));
    }

   private:
    int n_qubits_ = 0;
    ComplexMatrix m_;
};

/// A generated state together with the partition it was sampled from.
struct LabeledState {
    DensityMatrix state;
    SetPartition partition;
    double lambda = 0.0;
    std::uint64_t seed = 0;
};

/// tr(rho^2)
inline double purity(const DensityMatrix& rho) {
    double s = 0.0;
    for (const cplx& x : rho.matrix().entries()) s += std::norm(x);
    return s;
}

/// State vector of a random pure state with entanglement partition p on p.n_elements() qubits:
/// the tensor product of independent Haar-random states, one per part.
inline std::vector<cplx> random_pure_partitioned_vector(const SetPartition& p, Rng& rng) {
    const int n = p.n_elements();
    if (!p.covers_register(n)) throw InvalidArgument("partition does not cover a register 0..n-1");
    std::vector<std::vector<cplx>> factors;
    factors.reserve(p.size());
    for (const auto& part : p) factors.push_back(random_state_vector(std::size_t{1} << part.size(), rng));

    const std::size_t d = std::size_t{1} << n;
    std::vector<cplx> psi(d);
    for (std::size_t b = 0; b < d; ++b) {
        cplx amp = 1.0;
        for (std::size_t k = 0; k < p.size(); ++k) {
            const auto& part = p.parts()[k];
            std::size_t local = 0;
            for (int q : part) local = (local << 1) | ((b >> detail::qubit_bit(q, n)) & 1u);
            amp *= factors[k][local];
        }
        psi[b] = amp;
    }
    return psi;
}

inline DensityMatrix random_pure_partitioned(const SetPartition& p, Rng& rng) {
    return DensityMatrix::pure(p.n_elements(), random_pure_partitioned_vector(p, rng));
}

/// Uniform(0,1) draws renormalized to sum to one.
inline std::vector<double> mixture_weights(int n_mixed, Rng& rng) {
    if (n_mixed < 1) throw InvalidArgument("n_mixed must be at least 1");
    std::vector<double> c(static_cast<std::size_t>(n_mixed));
    double total = 0.0;
    for (auto& x : c) {
        do {
            x = uniform01(rng);
        } while (x == 0.0);
        total += x;
    }
    for (auto& x : c) x /= total;
    return c;
}

/// Random convex mixture of n_mixed pure states, each with entanglement partition p.
inline DensityMatrix random_mixed_partitioned(const SetPartition& p, int n_mixed, Rng& rng) {
    const auto weights = mixture_weights(n_mixed, rng);
    const int n = p.n_elements();
    const std::size_t d = std::size_t{1} << n;
    ComplexMatrix rho(d, d);
    for (double w : weights) {
        const auto psi = random_pure_partitioned_vector(p, rng);
        for (std::size_t i = 0; i < d; ++i) {
            const cplx wi = w * psi[i];
            for (std::size_t j = 0; j < d; ++j) rho(i, j) += wi * std::conj(psi[j]);
        }
    }
    return DensityMatrix(n, std::move(rho));
}

/// (1 - lambda) |psi><psi| + lambda I/d for a pure input state.
inline DensityMatrix depolarize_interpolate(const DensityMatrix& psi_pure, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidArgument("lambda must lie in [0, 1]");
    if (std::abs(purity(psi_pure) - 1.0) > 1e-8) throw InvalidArgument("depolarize_interpolate: input is not pure");
    const std::size_t d = psi_pure.dim();
    ComplexMatrix m = psi_pure.matrix() * cplx(1.0 - lambda);
    for (std::size_t i = 0; i < d; ++i) m(i, i) += lambda / static_cast<double>(d);
    return DensityMatrix(psi_pure.n_qubits(), std::move(m));
}

}  // namespace entpart
