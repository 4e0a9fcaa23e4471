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

#ifndef PSNE_SOLVER_HPP_
#define PSNE_SOLVER_HPP_

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "psne/game.hpp"
#include "psne/sampler.hpp"

namespace psne {

// Per-player parameter vector v_i = (w_{i,-i}, -b_i): positions 0..n-2 hold
// W_ij for ascending j != i, position n-1 holds -b_i.
using ParamVector = Eigen::VectorXd;

// Per-player feature vector z_i(x) = (x_i x_{-i}, x_i), laid out like
// ParamVector so that v . z is player i's payoff.
using FeatureVector = Eigen::VectorXd;

// Rows of feature vectors with non-negative multiplicities. Losses are
// count-weighted means, so a histogram of distinct rows and the raw
// sample-by-sample matrix describe the same objective.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  // One row per sample, multiplicity 1.
  explicit FeatureMatrix(Eigen::MatrixXd rows);
  FeatureMatrix(Eigen::MatrixXd rows, Eigen::VectorXd counts);

  Eigen::Index rows() const { return rows_.rows(); }
  Eigen::Index dim() const { return rows_.cols(); }
  const Eigen::MatrixXd& z() const { return rows_; }
  const Eigen::VectorXd& counts() const { return counts_; }
  double total() const { return total_; }

 private:
  Eigen::MatrixXd rows_;
  Eigen::VectorXd counts_;
  double total_ = 0.0;
};

FeatureVector featurize(const JointAction& x, int i);
FeatureVector featurize(ActionCode x, int n, int i);

ParamVector pack_params(const LinearInfluenceGame& game, int i);
// Writes v into row i of `weights` (leaving the diagonal at zero) and b_i.
void unpack_params(const ParamVector& v, int i, Eigen::MatrixXd& weights,
                   Eigen::VectorXd& biases);

// Distinct actions of a dataset in ascending code order with their counts.
struct ActionHistogram {
  int n = 0;
  std::vector<ActionCode> codes;
  std::vector<double> counts;
};

ActionHistogram action_histogram(const Dataset& dataset);

// Player i's features over the distinct actions, weighted by multiplicity.
FeatureMatrix player_features(const ActionHistogram& histogram, int i);
FeatureMatrix player_features(const Dataset& dataset, int i);
// One row per sample, in dataset order.
FeatureMatrix player_features_raw(const Dataset& dataset, int i);

// 1 / (e^{t/2} + e^{-t/2})^2 = sigma(t) (1 - sigma(t)).
double eta(double t);

// log(1 + e^u) without overflow.
double softplus(double u);

double loss(const ParamVector& v, const FeatureMatrix& features);
Eigen::VectorXd gradient(const ParamVector& v, const FeatureMatrix& features);
Eigen::MatrixXd hessian(const ParamVector& v, const FeatureMatrix& features);

double soft_threshold(double t, double tau);

struct FitOptions {
  int max_iters = 10000;
  double objective_tol = 1e-9;
  double kkt_tol = 1e-6;
  std::optional<ParamVector> initial_v;
  // Extension: the objective penalizes every coordinate by default,
  // including the bias.
  bool penalize_bias = true;
  bool record_objective_trace = false;
  int power_iterations = 20;
  double power_tol = 1e-10;
};

struct FitReport {
  ParamVector v_hat;
  int iterations = 0;
  int restarts = 0;
  double initial_objective = 0.0;
  double final_objective = 0.0;
  double kkt_residual = 0.0;
  double lipschitz = 0.0;
  bool converged = false;
  // Accepted objective values, one per iteration that moved the iterate.
  std::vector<double> objective_trace;
};

// loss(v) + lambda * ||v||_1 (bias excluded when !penalize_bias).
double l1_objective(const ParamVector& v, const FeatureMatrix& features,
                    double lambda, bool penalize_bias = true);

// Largest per-coordinate violation of the subgradient optimality
// conditions at v.
double kkt_residual(const ParamVector& v, const Eigen::VectorXd& grad,
                    double lambda, bool penalize_bias = true);

// Largest eigenvalue of (1/4) sum_l w_l z_l z_l^T by power iteration.
double lipschitz_constant(const FeatureMatrix& features, int iterations = 20,
                          double tol = 1e-10);

// argmin_v loss(v) + lambda ||v||_1 by FISTA with objective-based restart.
FitReport fit_l1_logistic(const FeatureMatrix& features, double lambda,
                          const FitOptions& options = {});

}  // namespace psne

#endif  // PSNE_SOLVER_HPP_
