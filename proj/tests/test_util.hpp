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

// Shared helpers for the test suites: random matrices and independent reference routines.

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "entpart/linalg.hpp"
#include "entpart/random.hpp"
#include "entpart/state_gen.hpp"

namespace entpart::testing {

inline ComplexMatrix random_hermitian(std::size_t dim, Rng& rng) {
    ComplexMatrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m(i, i) = standard_normal(rng);
        for (std::size_t j = i + 1; j < dim; ++j) {
            m(i, j) = {standard_normal(rng), standard_normal(rng)};
            m(j, i) = std::conj(m(i, j));
        }
    }
    return m;
}

/// Random full-rank density matrix G G^dag / tr.
inline DensityMatrix random_density(int n_qubits, Rng& rng) {
    const std::size_t d = std::size_t{1} << n_qubits;
    ComplexMatrix g(d, d);
    for (auto& x : g.entries()) x = {standard_normal(rng), standard_normal(rng)};
    ComplexMatrix r = g * g.adjoint();
    const cplx tr = r.trace();
    r *= 1.0 / tr;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) {
            const cplx avg = 0.5 * (r(i, j) + std::conj(r(j, i)));
            r(i, j) = avg;
            r(j, i) = std::conj(avg);
        }
    return DensityMatrix(n_qubits, r);
}

inline Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
    Eigen::MatrixXcd e(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
    return e;
}

/// Reference spectrum from Eigen's self-adjoint solver, ascending.
inline std::vector<double> reference_eigenvalues(const ComplexMatrix& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(m));
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    return ev;
}

inline std::vector<cplx> bell_vector() {
    const double s = 1.0 / std::sqrt(2.0);
    return {s, 0.0, 0.0, s};
}

inline DensityMatrix bell_state() { return DensityMatrix::pure(2, bell_vector()); }

inline DensityMatrix ghz_state(int n) {
    std::vector<cplx> v(std::size_t{1} << n, 0.0);
    v.front() = v.back() = 1.0 / std::sqrt(2.0);
    return DensityMatrix::pure(n, v);
}

}  // namespace entpart::testing
