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

// Logarithmic negativity and the partition-log-negativity.

#include <cmath>
#include <map>
#include <vector>

#include "entpart/errors.hpp"
#include "entpart/linalg.hpp"
#include "entpart/partitions.hpp"
#include "entpart/state_gen.hpp"

namespace entpart {

/// Log-negativities with |value| below this are treated as exactly zero.
inline constexpr double kNegativityZeroClamp = 1e-9;

struct NegativityReport {
    SetPartition partition;
    /// Geometric-mean negativity of each multi-qubit part.
    std::map<QubitIndexSet, double> per_part;
    double total = 0.0;
    bool is_npt = false;
};

/// log2 || rho^{T_A} ||_1 for a non-trivial bipartition (party, complement).
inline double log_negativity(const DensityMatrix& rho, const QubitIndexSet& party) {
    const int n = rho.n_qubits();
    party.check_within(n);
    if (party.empty() || static_cast<int>(party.size()) >= n) {
        throw InvalidArgument("log_negativity: party must be a non-empty strict subset of the register");
    }
    const ComplexMatrix pt = partial_transpose(rho.matrix(), party, n);
    // partial transposition is exact, but mixtures carry ~1e-16 asymmetry
    const double v = std::log2(trace_norm_hermitian(pt, {1e-10, 1e-12, 100}));
    return std::abs(v) < kNegativityZeroClamp ? 0.0 : v;
}

/// Geometric mean of the log-negativities over all 2^(n-1) - 1 bipartitions of a state.
inline double part_tilde_negativity(const DensityMatrix& rho_part) {
    const int n = rho_part.n_qubits();
    if (n < 2) throw InvalidArgument("part_tilde_negativity: part needs at least 2 qubits");
    const auto splits = bipartitions(QubitIndexSet::range(n));
    double log_sum = 0.0;
    for (const auto& [a, b] : splits) {
        const double e = log_negativity(rho_part, a);
        if (e <= 0.0) return 0.0;
        log_sum += std::log(e);
    }
    return std::exp(log_sum / static_cast<double>(splits.size()));
}

/// Product over multi-qubit parts P_i of tilde-E(rho_{P_i})^(|P_i| / ||P||).
/// A fully separable partition yields total 0.
inline NegativityReport partition_log_negativity(const DensityMatrix& rho, const SetPartition& p) {
    if (!p.covers_register(rho.n_qubits())) {
        throw InvalidArgument("partition " + p.to_string() + " does not match a " + std::to_string(rho.n_qubits()) +
                              "-qubit register");
    }
    NegativityReport report;
    report.partition = p;
    const int entangled = entangled_qubit_count(p);
    if (entangled == 0) return report;

    double log_total = 0.0;
    bool zero = false;
    for (const auto& part : p) {
        if (part.size() < 2) continue;
        const double e = part_tilde_negativity(rho.reduced(part));
        report.per_part[part] = e;
        if (e <= 0.0)
            zero = true;
        else
            log_total += static_cast<double>(part.size()) / entangled * std::log(e);
    }
    report.total = zero ? 0.0 : std::exp(log_total);
    report.is_npt = report.total > 0.0;
    return report;
}

}  // namespace entpart
