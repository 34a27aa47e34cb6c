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

#include "entpart/correlators.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace entpart;
using entpart::testing::bell_state;
using entpart::testing::random_density;

namespace {

// Bloch axis of U^dag Z U via explicit traces with the Pauli matrices.
BlochVector axis_by_traces(const ComplexMatrix& u) {
    const ComplexMatrix x{{0.0, 1.0}, {1.0, 0.0}};
    const ComplexMatrix y{{0.0, cplx(0, -1)}, {cplx(0, 1), 0.0}};
    const ComplexMatrix z{{1.0, 0.0}, {0.0, -1.0}};
    const auto m = u.adjoint() * z * u;
    return {0.5 * (m * x).trace().real(), 0.5 * (m * y).trace().real(), 0.5 * (m * z).trace().real()};
}

std::map<QubitIndexSet, double> plain_map(const std::vector<double>& plain, int n) {
    std::map<QubitIndexSet, double> m;
    for (SubsetMask s = 1; s < (1u << n); ++s) m[QubitIndexSet::from_mask(s)] = plain[s];
    return m;
}

}  // namespace

TEST(PlainCorrelator, MaximallyMixedIsZero) {
    Rng rng(1);
    for (int n = 1; n <= 3; ++n) {
        const auto draw = UnitaryDraw::sample(n, rng);
        EXPECT_NEAR(plain_correlator(DensityMatrix::maximally_mixed(n), draw), 0.0, 1e-15);
    }
}

TEST(PlainCorrelator, ZEigenstate) {
    const std::vector<cplx> zero{1.0, 0.0};
    UnitaryDraw id{{ComplexMatrix::identity(2)}};
    EXPECT_DOUBLE_EQ(plain_correlator(DensityMatrix::pure(1, zero), id), 1.0);
}

TEST(PlainCorrelator, BellMatchesBlochOracle) {
    Rng rng(2);
    for (int rep = 0; rep < 20; ++rep) {
        const auto draw = UnitaryDraw::sample(2, rng);
        const auto a = axis_by_traces(draw.unitaries[0]);
        const auto b = axis_by_traces(draw.unitaries[1]);
        const double oracle = a[0] * b[0] - a[1] * b[1] + a[2] * b[2];
        EXPECT_NEAR(plain_correlator(bell_state(), draw), oracle, 1e-12);
        EXPECT_NEAR(rotated_z_axis(draw.unitaries[0])[0], a[0], 1e-14);
        EXPECT_NEAR(rotated_z_axis(draw.unitaries[0])[1], a[1], 1e-14);
        EXPECT_NEAR(rotated_z_axis(draw.unitaries[0])[2], a[2], 1e-14);
    }
}

TEST(PlainCorrelator, DimensionMismatch) {
    Rng rng(3);
    EXPECT_THROW(plain_correlator(bell_state(), UnitaryDraw::sample(3, rng)), ContractViolation);
}

TEST(CorrelatorSampler, MatchesDirectTracesOnEverySubset) {
    // Pauli-expansion route against reduced states and explicit observables; a subset's value
    // must not depend on whether it is read from a larger draw.
    Rng rng(4);
    for (int n : {1, 2, 4}) {
        const auto rho = random_density(n, rng);
        const CorrelatorSampler sampler(rho);
        for (int rep = 0; rep < 5; ++rep) {
            const auto draw = UnitaryDraw::sample(n, rng);
            const auto values = sampler.evaluate(draw, n);
            EXPECT_NEAR(values.plain[0], 1.0, 1e-12);
            for (SubsetMask s = 1; s < (1u << n); ++s) {
                const auto subset = QubitIndexSet::from_mask(s);
                const double direct = plain_correlator(rho.reduced(subset), draw.restricted(subset));
                EXPECT_NEAR(values.plain[s], direct, 1e-10);
                EXPECT_LE(std::abs(values.plain[s]), 1.0 + 1e-12);
            }
        }
    }
}

TEST(ConnectedCorrelator, Covariance) {
    const std::map<QubitIndexSet, double> v{{{0}, 0.3}, {{1}, -0.2}, {{0, 1}, 0.5}};
    EXPECT_NEAR(connected_correlator({0, 1}, v), 0.5 - 0.3 * -0.2, 1e-15);
    EXPECT_NEAR(connected_correlator({0}, v), 0.3, 1e-15);
}

TEST(ConnectedCorrelator, ThreePointByEnumeration) {
    Rng rng(5);
    for (int rep = 0; rep < 10; ++rep) {
        std::map<QubitIndexSet, double> v;
        for (SubsetMask s = 1; s < 8; ++s) v[QubitIndexSet::from_mask(s)] = 2.0 * uniform01(rng) - 1.0;
        const double c1 = v[{0}], c2 = v[{1}], c3 = v[{2}];
        const double c12 = v[{0, 1}], c13 = v[{0, 2}], c23 = v[{1, 2}], c123 = v[{0, 1, 2}];
        // {123} - {1}{23} - {2}{13} - {3}{12} + 2 {1}{2}{3}
        const double oracle = c123 - c1 * c23 - c2 * c13 - c3 * c12 + 2.0 * c1 * c2 * c3;
        EXPECT_NEAR(connected_correlator({0, 1, 2}, v), oracle, 1e-14);
    }
}

TEST(ConnectedCorrelator, ProductValuesVanish) {
    Rng rng(6);
    std::vector<double> single{0.4, -0.7, 0.1, 0.9};
    std::map<QubitIndexSet, double> v;
    for (SubsetMask s = 1; s < 16; ++s) {
        double prod = 1.0;
        for (int q : QubitIndexSet::from_mask(s)) prod *= single[static_cast<std::size_t>(q)];
        v[QubitIndexSet::from_mask(s)] = prod;
    }
    for (SubsetMask s = 1; s < 16; ++s) {
        if (std::popcount(s) < 2) continue;
        EXPECT_NEAR(connected_correlator(QubitIndexSet::from_mask(s), v), 0.0, 1e-15);
    }
}

TEST(ConnectedCorrelator, MissingSubset) {
    const std::map<QubitIndexSet, double> v{{{0}, 0.3}, {{0, 1}, 0.5}};
    EXPECT_THROW(connected_correlator({0, 1}, v), InvalidArgument);
}

TEST(ConnectedCorrelator, RecursionMatchesMoebiusSum) {
    Rng rng(7);
    for (int n : {2, 3, 4, 5}) {
        std::vector<double> plain(1u << n);
        plain[0] = 1.0;
        for (SubsetMask s = 1; s < plain.size(); ++s) plain[s] = 2.0 * uniform01(rng) - 1.0;
        const auto fast = connected_from_plain(plain, n);
        const auto m = plain_map(plain, n);
        for (SubsetMask s = 1; s < plain.size(); ++s)
            EXPECT_NEAR(fast[s], connected_correlator(QubitIndexSet::from_mask(s), m), 1e-12);
    }
}

TEST(CorrelatorSampler, CrossPartConnectedCorrelatorsVanishPerDraw) {
    Rng rng(8);
    const SetPartition p{{0, 2}, {1}, {3, 4}};
    const auto rho = random_mixed_partitioned(p, 1, rng);
    const CorrelatorSampler sampler(rho);
    for (int rep = 0; rep < 20; ++rep) {
        const auto values = sampler.evaluate(UnitaryDraw::sample(5, rng), 5);
        for (SubsetMask s = 1; s < 32; ++s) {
            bool inside_one_part = false;
            for (const auto& part : p) inside_one_part |= (s & ~part.mask()) == 0;
            if (!inside_one_part) EXPECT_LE(std::abs(values.connected[s]), 1e-9) << s;
        }
    }
}

TEST(MomentSpec, Validation) {
    EXPECT_NO_THROW((MomentSpec{{2, 4}, {1, 2}, 10}.validate(3)));
    EXPECT_THROW((MomentSpec{{}, {1}, 10}.validate(3)), InvalidArgument);
    EXPECT_THROW((MomentSpec{{3}, {1}, 10}.validate(3)), InvalidArgument);
    EXPECT_THROW((MomentSpec{{2}, {}, 10}.validate(3)), InvalidArgument);
    EXPECT_THROW((MomentSpec{{2}, {4}, 10}.validate(3)), InvalidArgument);
    EXPECT_THROW((MomentSpec{{4, 2}, {1}, 10}.validate(3)), InvalidArgument);
    EXPECT_THROW((MomentSpec{{2}, {1}, 0}.validate(3)), InvalidArgument);
}

TEST(FeatureDimension, Examples) {
    EXPECT_EQ(feature_dimension(6, {{2, 4, 6, 8, 10}, {1, 2, 3, 4, 5, 6}, 1}), 315u);
    EXPECT_EQ(feature_dimension(6, {{2}, {2}, 1}), 15u);
    EXPECT_EQ(feature_dimension(8, {{2}, {4}, 1}), 70u);
    for (int n = 1; n <= 8; ++n) {
        const MomentSpec all{{2, 4, 6}, {}, 1};
        MomentSpec s = all;
        for (int k = 1; k <= n; ++k) s.k.push_back(k);
        EXPECT_EQ(feature_dimension(n, s), 3u * ((1u << n) - 1u));
    }
}

TEST(FeatureLayout, CanonicalOrder) {
    const FeatureLayout layout(3, {2, 4}, {1, 2});
    const std::vector<std::string> expected{"M2_1",   "M2_2",   "M2_3",   "M2_1_2", "M2_1_3", "M2_2_3",
                                            "M4_1",   "M4_2",   "M4_3",   "M4_1_2", "M4_1_3", "M4_2_3"};
    EXPECT_EQ(layout.column_names(), expected);
    const FeatureLayout sub(3, {4}, {2});
    EXPECT_EQ(layout.select(sub), (std::vector<std::size_t>{9, 10, 11}));
    EXPECT_THROW(sub.select(layout), InvalidArgument);
}

TEST(EstimateMoments, PureQubitSecondMoment) {
    // E[(n.r)^2] over Haar-random axes n is |r|^2 / 3.
    Rng rng(9);
    const std::vector<cplx> psi{0.6, cplx(0.0, 0.8)};
    const auto f = estimate_moments(DensityMatrix::pure(1, psi), {{2}, {1}, 2000}, rng);
    ASSERT_EQ(f.size(), 1u);
    EXPECT_NEAR(f[0], 1.0 / 3.0, 0.03);
}

TEST(EstimateMoments, MaximallyMixedIsExactlyZero) {
    Rng rng(10);
    const auto f = estimate_moments(DensityMatrix::maximally_mixed(1), {{2, 4}, {1}, 100}, rng);
    for (double x : f) EXPECT_EQ(x, 0.0);
    const auto g = estimate_moments(DensityMatrix::maximally_mixed(4), {{2}, {1, 2, 3, 4}, 50}, rng);
    for (double x : g) EXPECT_EQ(x, 0.0);
}

TEST(EstimateMoments, BellConnectedSecondMoment) {
    // E[(a.T b)^2] = ||T||_F^2 / 9 with T = diag(1, -1, 1).
    Rng rng(11);
    const auto f = estimate_moments(bell_state(), {{2}, {1, 2}, 2000}, rng);
    ASSERT_EQ(f.size(), 3u);
    EXPECT_NEAR(f[0], 0.0, 1e-12);
    EXPECT_NEAR(f[1], 0.0, 1e-12);
    EXPECT_NEAR(f[2], 1.0 / 3.0, 0.03);
}

TEST(EstimateMoments, OddPlainMomentsVanish) {
    Rng rng(12);
    const int n_unit = 2000;
    const auto rho = random_mixed_partitioned(SetPartition{{0, 1, 2}}, 3, rng);
    const CorrelatorSampler sampler(rho);
    std::vector<double> first(8, 0.0), third(8, 0.0);
    for (int d = 0; d < n_unit; ++d) {
        const auto v = sampler.evaluate(UnitaryDraw::sample(3, rng), 3);
        for (SubsetMask s = 1; s < 8; ++s) {
            first[s] += v.plain[s];
            third[s] += v.plain[s] * v.plain[s] * v.plain[s];
        }
    }
    for (SubsetMask s = 1; s < 8; ++s) {
        EXPECT_LE(std::abs(first[s] / n_unit), 4.0 / std::sqrt(n_unit));
        EXPECT_LE(std::abs(third[s] / n_unit), 4.0 / std::sqrt(n_unit));
    }
}

TEST(EstimateMoments, StandardErrorScalesAsInverseSqrt) {
    Rng rng(13);
    const auto rho = random_mixed_partitioned(SetPartition{{0, 1}}, 2, rng);
    const MomentSpec base{{2}, {2}, 1};
    std::vector<double> log_n, log_se;
    for (int n_unit = 25; n_unit <= 800; n_unit *= 2) {
        constexpr int kRepeats = 200;
        double s = 0.0, s2 = 0.0;
        for (int r = 0; r < kRepeats; ++r) {
            MomentSpec spec = base;
            spec.n_unit = n_unit;
            const double m = estimate_moments(rho, spec, rng)[0];
            s += m;
            s2 += m * m;
        }
        const double mean = s / kRepeats;
        log_n.push_back(std::log(n_unit));
        log_se.push_back(0.5 * std::log(s2 / kRepeats - mean * mean));
    }
    ASSERT_GE(log_n.size(), 6u);
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < log_n.size(); ++i) {
        mx += log_n[i];
        my += log_se[i];
    }
    mx /= log_n.size();
    my /= log_n.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < log_n.size(); ++i) {
        sxy += (log_n[i] - mx) * (log_se[i] - my);
        sxx += (log_n[i] - mx) * (log_n[i] - mx);
    }
    EXPECT_NEAR(sxy / sxx, -0.5, 0.1);
}

TEST(EstimateMoments, LayoutAndReproducibility) {
    Rng a(14), b(14);
    Rng gen(15);
    const auto rho = random_mixed_partitioned(SetPartition{{0, 1}, {2}}, 10, gen);
    const MomentSpec spec{{2, 4}, {1, 2, 3}, 100};
    const auto fa = estimate_moments(rho, spec, a);
    const auto fb = estimate_moments(rho, spec, b);
    EXPECT_EQ(fa, fb);
    EXPECT_EQ(fa.size(), feature_dimension(3, spec));
    for (double x : fa) EXPECT_TRUE(std::isfinite(x));
}
