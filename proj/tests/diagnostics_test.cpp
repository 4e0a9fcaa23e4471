// Copyright 2026 The psne-lab Authors
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

#include "psne/diagnostics.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "psne/error.hpp"
#include "psne/rng.hpp"
#include "psne/sampler.hpp"

namespace psne {
namespace {

struct Truth {
  LinearInfluenceGame game;
  PsneSet psne;
};

Truth FirstNonTrivial(int n, int k, std::uint64_t seed) {
  for (;; ++seed) {
    Rng rng(seed);
    LinearInfluenceGame g = random_lig(n, k, rng);
    PsneSet s = enumerate_psne(g);
    if (!s.empty() && s.size() < (std::size_t{1} << n)) return {std::move(g), std::move(s)};
  }
}

TEST(Nu, Values) {
  EXPECT_NEAR(nu(0.01, 2, 10), (0.01 - 2.0 / 1024) / (1 - 2.0 / 1024), 1e-15);
  EXPECT_NEAR(nu(0.01, 2, 10), 0.008063, 1e-6);
  EXPECT_LT(nu(2.0 / 1024 + 1e-12, 2, 10), 1e-11);
  EXPECT_GT(nu(1 - 1e-12, 2, 10), 1 - 1e-11);
  EXPECT_THROW(nu(0.001, 2, 10), DomainError);
  EXPECT_THROW(nu(0.5, 0, 10), DomainError);
  EXPECT_THROW(nu(0.5, 1024, 10), DomainError);
}

TEST(Kappa, Values) {
  EXPECT_EQ(kappa(0.0), 0.5);
  EXPECT_NEAR(kappa(1.0), 0.26894, 1e-5);
  EXPECT_THROW(kappa(-0.1), UsageError);
  double prev = kappa(0.0);
  for (double r = 0.1; r < 20; r += 0.1) {
    EXPECT_LT(kappa(r), prev);
    prev = kappa(r);
  }
}

TEST(ExpectedHessian, RademacherAtZeroIsQuarterIdentity) {
  const Truth t = FirstNonTrivial(5, 1, 1);
  const LinearInfluenceGame zero = LinearInfluenceGame::Zero(5);
  for (int i = 0; i < 5; ++i) {
    const HessianDecomposition h = expected_hessian(zero, t.psne, 0.5, i);
    EXPECT_LT((h.h_rad - 0.25 * Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(ExpectedHessian, NuZeroLimit) {
  const Truth t = FirstNonTrivial(6, 1, 2);
  const double q = t.psne.density() * (1 + 1e-14);
  const HessianDecomposition h = expected_hessian(t.game, t.psne, q, 0);
  EXPECT_LT(h.nu, 1e-12);
  EXPECT_LT((h.h_star - h.h_rad).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ExpectedHessian, DecompositionMatchesDirectAndOracle) {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const int n = 3 + static_cast<int>(seed % 8);
    const Truth t = FirstNonTrivial(n, 1 + static_cast<int>(seed % 2) * (n > 3 ? 2 : 0), seed);
    const double q = t.psne.density() + (1 - t.psne.density()) * 0.3;
    const int i = static_cast<int>(seed) % n;
    const HessianDecomposition h = expected_hessian(t.game, t.psne, q, i);
    const Eigen::MatrixXd direct = expected_hessian_direct(t.game, t.psne, q, i);
    const Eigen::MatrixXd independent =
        oracle::direct_expected_hessian(t.game, t.psne.codes(), q, i);
    const Eigen::MatrixXd combo = h.nu * h.h_ne + (1 - h.nu) * h.h_rad;
    EXPECT_LT((h.h_star - combo).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((h.h_star - direct).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((h.h_star - independent).cwiseAbs().maxCoeff(), 1e-12);
    for (const Eigen::MatrixXd* m : {&h.h_star, &h.h_ne, &h.h_rad}) {
      EXPECT_LT((*m - m->transpose()).cwiseAbs().maxCoeff(), 1e-14);
      EXPECT_GE(min_eigenvalue(*m), -1e-10);
    }
  }
}

TEST(ExpectedHessian, MonteCarloReportsStandardError) {
  const Truth t = FirstNonTrivial(8, 1, 3);
  ExpectationOptions opts;
  opts.mode = ExpectationMode::kMonteCarlo;
  opts.mc_samples = 200000;
  opts.seed = 4;
  const HessianDecomposition mc = expected_hessian(t.game, t.psne, 0.1, 2, opts);
  const HessianDecomposition ex = expected_hessian(t.game, t.psne, 0.1, 2);
  ASSERT_TRUE(mc.h_rad_stderr.has_value());
  const Eigen::MatrixXd z = (mc.h_rad - ex.h_rad).cwiseAbs().cwiseQuotient(
      mc.h_rad_stderr->cwiseMax(1e-12));
  EXPECT_LT(z.maxCoeff(), 6.0);
}

TEST(ExpectedHessian, ExactModeCapacity) {
  const LinearInfluenceGame g = LinearInfluenceGame::Zero(17);
  EXPECT_THROW(expected_hessian(g, PsneSet(17, {0}), 0.5, 0), CapacityError);
}

TEST(Support, BiasOnlyWhenNonZero) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(3, 3);
  w(0, 2) = -1;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(3);
  b(1) = 0.5;
  const LinearInfluenceGame g(w, b);
  EXPECT_EQ(parameter_support(g, 0), (std::vector<int>{1}));
  EXPECT_EQ(parameter_support(g, 1), (std::vector<int>{2}));
  EXPECT_TRUE(parameter_support(g, 2).empty());
}

TEST(AssumptionReportTest, EmptySupportFlagsAbsence) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(3, 3);
  w(0, 1) = -1;
  w(1, 0) = -1;
  const LinearInfluenceGame g(w, Eigen::VectorXd::Zero(3));
  const PsneSet s = enumerate_psne(g);
  const AssumptionReport r = assumption_report(g, s, 0.9, 2);
  EXPECT_TRUE(r.support.empty());
  EXPECT_FALSE(r.c_min_est.has_value());
  EXPECT_FALSE(r.d_max_est.has_value());
}

TEST(AssumptionReportTest, DerivationBoundsHold) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const int n = 6 + static_cast<int>(seed % 5);
    const int k = seed % 2 ? 1 : 3;
    const Truth t = FirstNonTrivial(n, k, seed * 31);
    const double q = std::max(0.01, t.psne.density() * 1.5);
    if (q >= 1) continue;
    for (int i = 0; i < n; ++i) {
      const AssumptionReport r = assumption_report(t.game, t.psne, q, i);
      ASSERT_TRUE(r.c_min_est && r.d_max_est);
      EXPECT_LE(*r.d_max_est, r.d_max_upper_bound + 1e-9);
      EXPECT_GE(*r.c_min_est, r.c_min_lower_bound - 1e-9);
      EXPECT_TRUE(r.derivation_bounds_hold());
      EXPECT_LT(r.hessian_decomposition_residual, 1e-12);
      EXPECT_GT(r.nu, 0.0);
      EXPECT_LT(r.nu, 1.0);
      EXPECT_GT(r.kappa, 0.0);
      EXPECT_LE(r.kappa, 0.5);
    }
  }
}

TEST(SecondMoment, MatchesPmfWeightedScatter) {
  const Truth t = FirstNonTrivial(6, 1, 9);
  const double q = 0.3;
  const int i = 4;
  Eigen::MatrixXd want = Eigen::MatrixXd::Zero(6, 6);
  for (ActionCode x = 0; x < 64; ++x) {
    const FeatureVector z = featurize(x, 6, i);
    want += exact_pmf(x, t.psne, q, 6) * z * z.transpose();
  }
  EXPECT_LT((expected_second_moment(t.psne, q, i) - want).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Eigen, MinMax) {
  Eigen::Matrix2d m;
  m << 2, 1, 1, 2;
  EXPECT_NEAR(min_eigenvalue(m), 1.0, 1e-12);
  EXPECT_NEAR(max_eigenvalue(m), 3.0, 1e-12);
  EXPECT_EQ(restrict(m, {1}), Eigen::MatrixXd::Constant(1, 1, 2.0));
}

TEST(GradientBound, BoundShape) {
  EXPECT_NEAR(lemma2_gradient_bound(std::size_t{1} << 62, 10, 0.01, 0.3, 0.2), 0.06, 1e-8);
  EXPECT_NEAR(lemma2_gradient_bound(1000, 10, 0.01, 0.0, 0.2),
              std::sqrt(2.0 / 1000 * std::log(2000.0)), 1e-15);
}

TEST(GradientBound, GradientAtTruthMatchesSolver) {
  const Truth t = FirstNonTrivial(8, 1, 12);
  const Dataset d = sample_dataset(t.psne, 8, 0.05, 5000, 1);
  const ActionHistogram h = action_histogram(d);
  for (int i = 0; i < 8; ++i) {
    const double want =
        gradient(pack_params(t.game, i), player_features_raw(d, i)).cwiseAbs().maxCoeff();
    EXPECT_NEAR(gradient_norm_at_truth(t.game, h, i), want, 1e-12);
  }
}

TEST(SampleBoundTest, InfeasibleAndMonotone) {
  EXPECT_FALSE(theorem_sample_bound(1, 10, 0.01, 1e-3, 1.0, 0.1, 0.5).feasible);
  EXPECT_FALSE(theorem_sample_bound(1, 10, 0.01, 1e-3, 1.0, 0.1, 0.5).samples.has_value());
  const SampleBound a = theorem_sample_bound(1, 10, 0.01, 0.2, 1.0, 0.008, 0.27);
  const SampleBound b = theorem_sample_bound(1, 10, 0.005, 0.2, 1.0, 0.008, 0.27);
  ASSERT_TRUE(a.samples && b.samples);
  EXPECT_GE(*b.samples, *a.samples);
  const double top = std::max({a.curvature_term, a.hessian_term, a.scatter_term});
  EXPECT_EQ(*a.samples, static_cast<std::uint64_t>(std::ceil(top)));
}

TEST(EigenvalueCheck, HugeSampleAlwaysPasses) {
  const Truth t = FirstNonTrivial(8, 1, 14);
  const Lemma1Result r = lemma1_eigenvalue_check(t.game, t.psne, 0.05, 0, 200000, 5, 3);
  EXPECT_EQ(r.min_eig_pass_rate, 1.0);
  EXPECT_EQ(r.max_eig_pass_rate, 1.0);
}

TEST(EigenvalueCheck, SingleSampleIsWellDefined) {
  const Truth t = FirstNonTrivial(8, 1, 15);
  const Lemma1Result r = lemma1_eigenvalue_check(t.game, t.psne, 0.05, 0, 1, 20, 3);
  EXPECT_GE(r.min_eig_pass_rate, 0.0);
  EXPECT_LE(r.min_eig_pass_rate, 1.0);
  EXPECT_GE(r.max_eig_pass_rate, 0.0);
  EXPECT_LE(r.max_eig_pass_rate, 1.0);
}

TEST(EigenvalueCheck, RatesMeetStatedProbabilitiesAtTheoremSize) {
  const Truth t = FirstNonTrivial(10, 1, 16);
  const double q = 0.01;
  const int i = 0;
  const AssumptionReport rep = assumption_report(t.game, t.psne, q, i);
  ASSERT_TRUE(rep.c_min_est && rep.d_max_est);
  const SampleBound sb = theorem_sample_bound(1, 10, 0.01, *rep.c_min_est, *rep.d_max_est,
                                              rep.nu, rep.kappa);
  // The curvature-free terms give the size the lemma is stated at.
  const auto m = static_cast<std::size_t>(std::ceil(std::max(sb.hessian_term, sb.scatter_term)));
  const Lemma1Result r = lemma1_eigenvalue_check(t.game, t.psne, q, i, m, 200, 5);
  EXPECT_GE(r.min_eig_pass_rate, r.min_eig_probability_bound);
  EXPECT_GE(r.max_eig_pass_rate, r.max_eig_probability_bound);
}

}  // namespace
}  // namespace psne
