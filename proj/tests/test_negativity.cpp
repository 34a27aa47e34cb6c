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

#include "entpart/negativity.hpp"

#include <gtest/gtest.h>

#include <numeric>

#include "test_util.hpp"

using namespace entpart;
using entpart::testing::bell_state;
using entpart::testing::bell_vector;
using entpart::testing::ghz_state;
using entpart::testing::random_density;

namespace {

/// Relabels qubits: qubit q of the input becomes qubit perm[q].
DensityMatrix permute_qubits(const DensityMatrix& rho, const std::vector<int>& perm) {
    const int n = rho.n_qubits();
    const std::size_t d = rho.dim();
    auto map_index = [&](std::size_t idx) {
        std::size_t out = 0;
        for (int q = 0; q < n; ++q)
            if ((idx >> (n - 1 - q)) & 1u) out |= std::size_t{1} << (n - 1 - perm[static_cast<std::size_t>(q)]);
        return out;
    };
    ComplexMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m(map_index(i), map_index(j)) = rho.matrix()(i, j);
    return DensityMatrix(n, m);
}

SetPartition permute_partition(const SetPartition& p, const std::vector<int>& perm) {
    std::vector<QubitIndexSet> parts;
    for (const auto& part : p) {
        std::vector<int> idx;
        for (int q : part) idx.push_back(perm[static_cast<std::size_t>(q)]);
        parts.emplace_back(idx);
    }
    return SetPartition(parts);
}

DensityMatrix werner(double lambda) { return depolarize_interpolate(bell_state(), lambda); }

}  // namespace

TEST(LogNegativity, ProductStateIsZero) {
    Rng rng(1);
    const auto a = random_density(1, rng), b = random_density(2, rng);
    const DensityMatrix ab(3, kron(a.matrix(), b.matrix()));
    EXPECT_EQ(log_negativity(ab, {0}), 0.0);
}

TEST(LogNegativity, BellIsOne) { EXPECT_NEAR(log_negativity(bell_state(), {0}), 1.0, 1e-12); }

TEST(LogNegativity, WernerThreshold) {
    // smallest PT eigenvalue is -(1 - lambda)/2 + lambda/4, which vanishes at lambda = 2/3
    for (double l : {0.67, 0.8, 1.0}) EXPECT_EQ(log_negativity(werner(l), {0}), 0.0) << l;
    for (double l : {0.0, 0.3, 0.5, 0.66}) {
        const double neg_ev = (1.0 - l) * 0.5 - l / 4.0;
        EXPECT_NEAR(log_negativity(werner(l), {0}), std::log2(1.0 + 2.0 * neg_ev), 1e-12) << l;
    }
}

TEST(LogNegativity, SymmetricUnderComplement) {
    Rng rng(2);
    for (int rep = 0; rep < 10; ++rep) {
        const auto rho = random_mixed_partitioned(SetPartition{{0, 1, 2, 3}}, 2, rng);
        for (const auto& [a, b] : bipartitions(QubitIndexSet::range(4)))
            EXPECT_NEAR(log_negativity(rho, a), log_negativity(rho, b), 1e-9);
    }
}

TEST(LogNegativity, RejectsTrivialBipartition) {
    EXPECT_THROW(log_negativity(bell_state(), {}), InvalidArgument);
    EXPECT_THROW(log_negativity(bell_state(), {0, 1}), InvalidArgument);
    EXPECT_THROW(log_negativity(bell_state(), {2}), InvalidArgument);
}

TEST(PartTildeNegativity, TwoQubitsEqualsSingleBipartition) {
    Rng rng(3);
    const auto rho = random_mixed_partitioned(SetPartition{{0, 1}}, 2, rng);
    EXPECT_DOUBLE_EQ(part_tilde_negativity(rho), log_negativity(rho, {0}));
}

TEST(PartTildeNegativity, Ghz) {
    const auto ghz = ghz_state(3);
    for (const auto& [a, b] : bipartitions({0, 1, 2})) EXPECT_NEAR(log_negativity(ghz, a), 1.0, 1e-12);
    EXPECT_NEAR(part_tilde_negativity(ghz), 1.0, 1e-12);
}

TEST(PartTildeNegativity, ZeroFactorGivesZero) {
    // Bell pair on qubits 0,1 with qubit 2 in |0>: the split {0,1} | {2} is PPT
    const std::vector<cplx> zero{1.0, 0.0};
    const auto psi = kron(std::span<const cplx>(bell_vector()), std::span<const cplx>(zero));
    const auto rho = DensityMatrix::pure(3, psi);
    EXPECT_EQ(log_negativity(rho, {2}), 0.0);
    EXPECT_EQ(part_tilde_negativity(rho), 0.0);
    EXPECT_THROW(part_tilde_negativity(DensityMatrix::maximally_mixed(1)), InvalidArgument);
}

TEST(PartitionLogNegativity, MaximallyMixedIsZero) {
    for (const auto& p : all_partitions(4)) {
        const auto r = partition_log_negativity(DensityMatrix::maximally_mixed(4), p);
        EXPECT_EQ(r.total, 0.0);
        EXPECT_FALSE(r.is_npt);
    }
}

TEST(PartitionLogNegativity, ThreeBellPairs) {
    auto psi = bell_vector();
    psi = kron(std::span<const cplx>(psi), std::span<const cplx>(bell_vector()));
    psi = kron(std::span<const cplx>(psi), std::span<const cplx>(bell_vector()));
    const auto rho = DensityMatrix::pure(6, psi);
    const auto r = partition_log_negativity(rho, SetPartition{{0, 1}, {2, 3}, {4, 5}});
    EXPECT_NEAR(r.total, 1.0, 1e-10);
    EXPECT_TRUE(r.is_npt);
    EXPECT_EQ(r.per_part.size(), 3u);
}

TEST(PartitionLogNegativity, RandomPureStatesAreNpt) {
    Rng rng(4);
    const SetPartition p{{0}, {1, 2, 3, 4, 5}};
    int positive = 0;
    for (int s = 0; s < 100; ++s) {
        const auto rho = depolarize_interpolate(random_pure_partitioned(p, rng), 0.0);
        positive += partition_log_negativity(rho, p).total > 0.0;
    }
    EXPECT_GE(positive, 95);
}

TEST(PartitionLogNegativity, FullySeparableAndMismatch) {
    Rng rng(5);
    const auto rho = random_density(3, rng);
    const auto r = partition_log_negativity(rho, SetPartition{{0}, {1}, {2}});
    EXPECT_EQ(r.total, 0.0);
    EXPECT_FALSE(r.is_npt);
    EXPECT_THROW(partition_log_negativity(rho, SetPartition{{0, 1}}), InvalidArgument);
}

TEST(PartitionLogNegativity, PermutationInvariant) {
    Rng rng(6);
    std::vector<int> perm{0, 1, 2, 3};
    for (int rep = 0; rep < 8; ++rep) {
        const auto& parts = all_partitions(4);
        const auto& p = parts[static_cast<std::size_t>(rng() % parts.size())];
        const auto rho = random_mixed_partitioned(p, 2, rng);
        std::shuffle(perm.begin(), perm.end(), rng);
        const auto a = partition_log_negativity(rho, p);
        const auto b = partition_log_negativity(permute_qubits(rho, perm), permute_partition(p, perm));
        EXPECT_NEAR(a.total, b.total, 1e-9);
        EXPECT_EQ(a.is_npt, b.is_npt);
    }
}

TEST(PartitionLogNegativity, NonIncreasingAlongDepolarization) {
    Rng rng(7);
    const SetPartition p{{0, 1, 2}};
    const auto psi = random_pure_partitioned(p, rng);
    double prev = INFINITY, prev_total = INFINITY;
    for (int i = 0; i <= 20; ++i) {
        const auto rho = depolarize_interpolate(psi, i / 20.0);
        const double e = log_negativity(rho, {0});
        EXPECT_LE(e, prev + 1e-9);
        prev = e;
        const double t = partition_log_negativity(rho, p).total;
        EXPECT_LE(t, prev_total + 1e-9);
        prev_total = t;
    }
}

TEST(PartitionLogNegativity, PositiveImpliesEveryBipartitionPositive) {
    Rng rng(8);
    for (int rep = 0; rep < 20; ++rep) {
        const SetPartition p{{0, 1}, {2, 3, 4}};
        const auto rho = depolarize_interpolate(random_pure_partitioned(p, rng), uniform01(rng));
        const auto r = partition_log_negativity(rho, p);
        EXPECT_EQ(r.total > 0.0, r.is_npt);
        EXPECT_GE(r.total, 0.0);
        if (!r.is_npt) continue;
        for (const auto& part : p) {
            if (part.size() < 2) continue;
            const auto red = rho.reduced(part);
            for (const auto& [a, b] : bipartitions(QubitIndexSet::range(static_cast<int>(part.size()))))
                EXPECT_GT(log_negativity(red, a), 0.0);
        }
    }
}
