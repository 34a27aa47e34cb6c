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

// Dense complex linear algebra for registers of up to ~8 qubits.
//
// Qubit convention: qubit 0 is the most significant bit of a computational-basis index,
// i.e. basis index b of an n-qubit register has qubit q in state (b >> (n - 1 - q)) & 1.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "entpart/errors.hpp"
#include "entpart/random.hpp"

namespace entpart {

using cplx = std::complex<double>;

/// Tolerances of the linear-algebra routines. Defaults are used unless a caller passes its own.
struct LinalgTolerances {
    double hermitian = 1e-12;       ///< max |A_ij - conj(A_ji)| accepted as Hermitian
    double jacobi_off_norm = 1e-12; ///< Jacobi stops when the off-diagonal Frobenius norm drops below
    int jacobi_max_sweeps = 100;
};

inline constexpr LinalgTolerances kDefaultTolerances{};

class ComplexMatrix {
   public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (data_.size() != rows_ * cols_) {
            throw InvalidArgument("ComplexMatrix: entry count does not match rows*cols");
        }
    }
    /// Row-major nested initializer, e.g. {{0, 1}, {1, 0}}.
    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) throw InvalidArgument("ComplexMatrix: ragged initializer");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static ComplexMatrix identity(std::size_t dim) {
        ComplexMatrix m(dim, dim);
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix diagonal(std::span<const double> values) {
        ComplexMatrix m(values.size(), values.size());
        for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
        return m;
    }

    /// |v><v| for a column vector v.
    static ComplexMatrix outer(std::span<const cplx> v) {
        ComplexMatrix m(v.size(), v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const cplx> entries() const { return data_; }
    std::span<cplx> entries() { return data_; }

    cplx trace() const {
        cplx t = 0.0;
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }

    ComplexMatrix transpose() const {
        ComplexMatrix m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
        return m;
    }

    /// Largest deviation from Hermiticity, max |A_ij - conj(A_ji)|.
    double hermiticity_error() const {
        if (!is_square()) return INFINITY;
        double err = 0.0;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i; j < cols_; ++j)
                err = std::max(err, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return err;
    }

    bool is_hermitian(double tol = kDefaultTolerances.hermitian) const { return hermiticity_error() <= tol; }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    ComplexMatrix& operator*=(cplx s) {
        for (auto& x : data_) x *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.cols_ != b.rows_) throw InvalidArgument("ComplexMatrix: product shape mismatch");
        ComplexMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const cplx aik = a(i, k);
                if (aik == cplx{}) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

    /// max_ij |A_ij - B_ij|
    friend double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
        a.check_same_shape(b);
        double d = 0.0;
        for (std::size_t i = 0; i < a.data_.size(); ++i) d = std::max(d, std::abs(a.data_[i] - b.data_[i]));
        return d;
    }

   private:
    void check_same_shape(const ComplexMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw InvalidArgument("ComplexMatrix: shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

/// Strictly increasing list of 0-based qubit indices.
class QubitIndexSet {
   public:
    QubitIndexSet() = default;
    QubitIndexSet(std::initializer_list<int> indices) : QubitIndexSet(std::vector<int>(indices)) {}
    explicit QubitIndexSet(std::vector<int> indices) : indices_(std::move(indices)) {
        std::sort(indices_.begin(), indices_.end());
        if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
            throw InvalidArgument("QubitIndexSet: duplicate qubit index");
        }
        if (!indices_.empty() && indices_.front() < 0) throw InvalidArgument("QubitIndexSet: negative qubit index");
    }

    /// Members of a bit mask over n qubits, where bit q (value 1 << q) marks qubit q.
    static QubitIndexSet from_mask(std::uint32_t mask) {
        std::vector<int> v;
        for (int q = 0; q < 32; ++q)
            if (mask >> q & 1u) v.push_back(q);
        return QubitIndexSet(std::move(v));
    }

    static QubitIndexSet range(int n) {
        std::vector<int> v(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i;
        return QubitIndexSet(std::move(v));
    }

    std::size_t size() const { return indices_.size(); }
    bool empty() const { return indices_.empty(); }
    int operator[](std::size_t i) const { return indices_[i]; }
    auto begin() const { return indices_.begin(); }
    auto end() const { return indices_.end(); }
    int front() const { return indices_.front(); }
    int back() const { return indices_.back(); }
    const std::vector<int>& indices() const { return indices_; }

    bool contains(int q) const { return std::binary_search(indices_.begin(), indices_.end(), q); }

    std::uint32_t mask() const {
        std::uint32_t m = 0;
        for (int q : indices_) m |= 1u << q;
        return m;
    }

    /// Throws InvalidArgument unless every index lies in [0, n).
    void check_within(int n) const {
        if (!indices_.empty() && indices_.back() >= n) {
            throw InvalidArgument("qubit index " + std::to_string(indices_.back()) + " out of range for " +
                                  std::to_string(n) + " qubits");
        }
    }

    QubitIndexSet complement(int n) const {
        std::vector<int> v;
        for (int q = 0; q < n; ++q)
            if (!contains(q)) v.push_back(q);
        return QubitIndexSet(std::move(v));
    }

    friend bool operator==(const QubitIndexSet&, const QubitIndexSet&) = default;
    friend auto operator<=>(const QubitIndexSet&, const QubitIndexSet&) = default;

   private:
    std::vector<int> indices_;
};

inline bool is_power_of_two(std::size_t x) { return x != 0 && (x & (x - 1)) == 0; }

inline int log2_dim(std::size_t dim) {
    int n = 0;
    while ((std::size_t{1} << n) < dim) ++n;
    return n;
}

/// Kronecker product; entry[(i*rb + k), (j*cb + l)] = a[i][j] * b[k][l].
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l) c(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return c;
}

/// Kronecker product of column vectors.
inline std::vector<cplx> kron(std::span<const cplx> a, std::span<const cplx> b) {
    std::vector<cplx> c(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k) c[i * b.size() + k] = a[i] * b[k];
    return c;
}

/// Normalized complex-Gaussian vector, i.e. a Haar-random pure state of the given dimension.
inline std::vector<cplx> random_state_vector(std::size_t dim, Rng& rng) {
    std::vector<cplx> v(dim);
    double norm2 = 0.0;
    for (auto& x : v) {
        const double re = standard_normal(rng);
        const double im = standard_normal(rng);
        x = {re, im};
        norm2 += re * re + im * im;
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& x : v) x *= inv;
    return v;
}

/// Haar-random unitary: QR of a complex Ginibre matrix with R's diagonal made real-positive.
/// Gram-Schmidt produces exactly that normalization, so Q is returned directly.
inline ComplexMatrix haar_unitary(std::size_t dim, Rng& rng) {
    if (dim < 2 || !is_power_of_two(dim)) {
        throw InvalidArgument("haar_unitary: invalid dimension " + std::to_string(dim));
    }
    // columns stored contiguously while orthonormalizing
    std::vector<std::vector<cplx>> cols(dim, std::vector<cplx>(dim));
    for (auto& c : cols)
        for (auto& x : c) x = {standard_normal(rng), standard_normal(rng)};

    for (std::size_t j = 0; j < dim; ++j) {
        auto& cj = cols[j];
        // two passes of modified Gram-Schmidt keep orthogonality at machine precision
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < j; ++k) {
                const auto& ck = cols[k];
                cplx proj = 0.0;
                for (std::size_t i = 0; i < dim; ++i) proj += std::conj(ck[i]) * cj[i];
                for (std::size_t i = 0; i < dim; ++i) cj[i] -= proj * ck[i];
            }
        }
        double norm2 = 0.0;
        for (const auto& x : cj) norm2 += std::norm(x);
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& x : cj) x *= inv;
    }

    ComplexMatrix u(dim, dim);
    for (std::size_t j = 0; j < dim; ++j)
        for (std::size_t i = 0; i < dim; ++i) u(i, j) = cols[j][i];
    return u;
}

/// Eigenvalues of a Hermitian matrix, ascending, by cyclic complex Jacobi rotations.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& input,
                                                 const LinalgTolerances& tol = kDefaultTolerances) {
    if (!input.is_square()) throw ContractViolation("hermitian_eigenvalues: matrix is not square");
    const double herr = input.hermiticity_error();
    if (herr > tol.hermitian) {
        throw ContractViolation("hermitian_eigenvalues: matrix is not Hermitian (deviation " + std::to_string(herr) +
                                ")");
    }
    const std::size_t n = input.rows();
    ComplexMatrix a = input;
    // symmetrize exactly so rotations operate on a Hermitian matrix
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = a(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx avg = 0.5 * (a(i, j) + std::conj(a(j, i)));
            a(i, j) = avg;
            a(j, i) = std::conj(avg);
        }
    }

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * std::norm(a(i, j));
        return std::sqrt(s);
    };

    int sweep = 0;
    for (; sweep < tol.jacobi_max_sweeps && off_norm() >= tol.jacobi_off_norm; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double mag = std::abs(a(p, q));
                if (mag == 0.0) continue;
                const cplx phase = a(p, q) / mag;  // e^{i phi}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                // real Jacobi rotation on [[app, mag], [mag, aqq]]
                const double theta = (aqq - app) / (2.0 * mag);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // G = diag(1, conj(phase)) * [[c, s], [-s, c]] on the (p, q) plane; A <- G^H A G
                const cplx gpp = c, gpq = s;
                const cplx gqp = -s * std::conj(phase), gqq = c * std::conj(phase);
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * gpp + akq * gqp;
                    a(k, q) = akp * gpq + akq * gqq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
                    a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }
    if (off_norm() >= tol.jacobi_off_norm * std::max(1.0, std::sqrt(static_cast<double>(n)))) {
        throw NumericError("hermitian_eigenvalues: Jacobi iteration did not converge");
    }

    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i).real();
    std::sort(ev.begin(), ev.end());
    return ev;
}

namespace detail {

/// Bit position (from the least significant end) of qubit q in an n-qubit basis index.
inline int qubit_bit(int q, int n) { return n - 1 - q; }

inline std::size_t index_mask(const QubitIndexSet& qubits, int n) {
    std::size_t m = 0;
    for (int q : qubits) m |= std::size_t{1} << qubit_bit(q, n);
    return m;
}

/// Spreads the bits of `value` (|qubits| bits, most significant first) onto the qubit positions.
inline std::size_t scatter_bits(std::size_t value, const QubitIndexSet& qubits, int n) {
    std::size_t out = 0;
    const std::size_t k = qubits.size();
    for (std::size_t i = 0; i < k; ++i) {
        if (value >> (k - 1 - i) & 1u) out |= std::size_t{1} << qubit_bit(qubits[i], n);
    }
    return out;
}

inline int checked_qubit_count(const ComplexMatrix& rho, int n_qubits, const char* who) {
    if (n_qubits < 0 || n_qubits > 16 || !rho.is_square() || rho.rows() != (std::size_t{1} << n_qubits)) {
        throw InvalidArgument(std::string(who) + ": matrix is not 2^n x 2^n for n = " + std::to_string(n_qubits));
    }
    return n_qubits;
}

}  // namespace detail

/// Reduced state on `keep` (kept qubits retain their relative order).
inline ComplexMatrix partial_trace(const ComplexMatrix& rho, const QubitIndexSet& keep, int n_qubits) {
    const int n = detail::checked_qubit_count(rho, n_qubits, "partial_trace");
    keep.check_within(n);
    const QubitIndexSet traced = keep.complement(n);
    const std::size_t dk = std::size_t{1} << keep.size();
    const std::size_t dt = std::size_t{1} << traced.size();

    std::vector<std::size_t> kept_pos(dk), traced_pos(dt);
    for (std::size_t a = 0; a < dk; ++a) kept_pos[a] = detail::scatter_bits(a, keep, n);
    for (std::size_t e = 0; e < dt; ++e) traced_pos[e] = detail::scatter_bits(e, traced, n);

    ComplexMatrix out(dk, dk);
    for (std::size_t a = 0; a < dk; ++a)
        for (std::size_t b = 0; b < dk; ++b) {
            cplx s = 0.0;
            for (std::size_t e = 0; e < dt; ++e) s += rho(kept_pos[a] | traced_pos[e], kept_pos[b] | traced_pos[e]);
            out(a, b) = s;
        }
    return out;
}

/// Partial transpose with respect to the qubits in `party`.
inline ComplexMatrix partial_transpose(const ComplexMatrix& rho, const QubitIndexSet& party, int n_qubits) {
    const int n = detail::checked_qubit_count(rho, n_qubits, "partial_transpose");
    party.check_within(n);
    const std::size_t m = detail::index_mask(party, n);
    const std::size_t d = rho.rows();
    ComplexMatrix out(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) out((i & ~m) | (j & m), (j & ~m) | (i & m)) = rho(i, j);
    return out;
}

/// Trace norm of a Hermitian matrix as the sum of absolute eigenvalues.
inline double trace_norm_hermitian(const ComplexMatrix& x, const LinalgTolerances& tol = kDefaultTolerances) {
    double s = 0.0;
    for (double ev : hermitian_eigenvalues(x, tol)) s += std::abs(ev);
    return s;
}

}  // namespace entpart
