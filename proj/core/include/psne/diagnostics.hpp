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

#ifndef PSNE_DIAGNOSTICS_HPP_
#define PSNE_DIAGNOSTICS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "psne/game.hpp"
#include "psne/solver.hpp"

namespace psne {

inline constexpr int kExactExpectationCap = 16;

// Weight of the equilibrium component once the observation model is
// rewritten as nu * Uniform(NE) + (1 - nu) * Uniform({-1,+1}^n).
double nu(double q, std::size_t ne_size, int n);

// 1 / (1 + e^{rho_min}).
double kappa(double rho_min);

enum class ExpectationMode { kExact, kMonteCarlo };

struct ExpectationOptions {
  ExpectationMode mode = ExpectationMode::kExact;
  std::size_t mc_samples = 100000;
  std::uint64_t seed = 0;
};

// Expected Hessian of player i's loss at the true parameters, together with
// its two mixture components: h_star = nu * h_ne + (1 - nu) * h_rad.
struct HessianDecomposition {
  Eigen::MatrixXd h_star;
  Eigen::MatrixXd h_ne;
  Eigen::MatrixXd h_rad;
  double nu = 0.0;
  // Elementwise standard error of h_rad in Monte Carlo mode.
  std::optional<Eigen::MatrixXd> h_rad_stderr;
};

HessianDecomposition expected_hessian(const LinearInfluenceGame& game,
                                      const PsneSet& psne, double q, int i,
                                      const ExpectationOptions& options = {});

// sum_x p(x) eta(v* . z(x)) z(x) z(x)^T, weighting every action by its
// observation probability instead of going through the decomposition.
Eigen::MatrixXd expected_hessian_direct(const LinearInfluenceGame& game,
                                        const PsneSet& psne, double q, int i);

// E[z z^T] under the observation model.
Eigen::MatrixXd expected_second_moment(const PsneSet& psne, double q, int i);

// Nonzero coordinates of pack_params(game, i); the bias coordinate is
// included only when b_i != 0.
std::vector<int> parameter_support(const LinearInfluenceGame& game, int i);

Eigen::MatrixXd restrict(const Eigen::MatrixXd& m, const std::vector<int>& idx);
double min_eigenvalue(const Eigen::MatrixXd& symmetric);
double max_eigenvalue(const Eigen::MatrixXd& symmetric);

struct AssumptionReport {
  int player = 0;
  std::vector<int> support;
  std::optional<double> c_min_est;  // lambda_min(H*_SS)
  std::optional<double> d_max_est;  // lambda_max(E[z_S z_S^T])
  double nu = 0.0;
  double kappa = 0.0;
  double rho_min = 0.0;
  // rho_min > 5 C_min / D_max; absent with an empty support.
  std::optional<bool> payoff_condition_met;
  // ||H* - (nu H_NE + (1 - nu) H_Rad)||_max against the direct computation.
  double hessian_decomposition_residual = 0.0;
  double c_min_lower_bound = 0.0;  // (1 - nu) eta(||v*||_1)
  double d_max_upper_bound = 0.0;  // nu |S| + (1 - nu)

  // Whether the C_min lower bound and D_max upper bound hold within tol
  // (vacuously true when the support is empty).
  bool derivation_bounds_hold(double tol = 1e-9) const;
};

AssumptionReport assumption_report(const LinearInfluenceGame& game,
                                   const PsneSet& psne, double q, int i);

// nu kappa + sqrt((2/m) log(2n/delta)).
double lemma2_gradient_bound(std::size_t m, int n, double delta, double nu,
                             double kappa);

// ||grad loss(v*, D)||_inf for player i, v* = pack_params(game, i).
double gradient_norm_at_truth(const LinearInfluenceGame& game,
                              const ActionHistogram& data, int i);

struct SampleBound {
  double k_margin = 0.0;  // K
  bool feasible = false;  // K > 0
  double curvature_term = 0.0;
  double hessian_term = 0.0;
  double scatter_term = 0.0;
  std::optional<std::uint64_t> samples;  // absent when infeasible
};

SampleBound theorem_sample_bound(int k, int n, double delta, double c_min,
                                 double d_max, double nu, double kappa);

struct Lemma1Result {
  double min_eig_pass_rate = 0.0;
  double max_eig_pass_rate = 0.0;
  // The same max-eigenvalue check on the un-normalized scatter sum.
  double max_eig_unnormalized_pass_rate = 0.0;
  double min_eig_probability_bound = 0.0;
  double max_eig_probability_bound = 0.0;
  double c_min_est = 0.0;
  double d_max_est = 0.0;
};

// Over `trials` fresh datasets of size m: how often lambda_min of the
// S-restricted sample Hessian at v* is >= C_min/2, and how often the
// S-restricted mean scatter has lambda_max <= 2 D_max.
Lemma1Result lemma1_eigenvalue_check(const LinearInfluenceGame& game,
                                     const PsneSet& psne, double q, int i,
                                     std::size_t m, int trials,
                                     std::uint64_t seed);

}  // namespace psne

#endif  // PSNE_DIAGNOSTICS_HPP_
