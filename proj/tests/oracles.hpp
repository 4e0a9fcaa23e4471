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

// Reference implementations used only by tests. Each one is written
// independently of the library code path it checks.

#ifndef PSNE_TESTS_ORACLES_HPP_
#define PSNE_TESTS_ORACLES_HPP_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "psne/game.hpp"
#include "psne/rng.hpp"
#include "psne/solver.hpp"

namespace psne::oracle {

// Actions decoded by repeated division rather than bit operations.
std::vector<int> decode(std::uint64_t index, int n);

// Full-row dot product (the zero diagonal contributes nothing).
double naive_payoff(const Eigen::MatrixXd& w, const Eigen::VectorXd& b, int i,
                    const std::vector<int>& x);

// Double loop over all 2^n actions and all players.
std::vector<std::uint64_t> naive_psne_scan(const LinearInfluenceGame& game);

// Observation-model probability written from scratch.
double mixture_pmf(std::uint64_t index, const std::vector<std::uint64_t>& ne,
                   double q, int n);

// sum_x p(x) eta(v* . z) z z^T with an independently coded eta and feature map.
Eigen::MatrixXd direct_expected_hessian(const LinearInfluenceGame& game,
                                        const std::vector<std::uint64_t>& ne,
                                        double q, int i);

// Mean logistic loss in 50-digit decimal arithmetic.
double high_precision_loss(const Eigen::VectorXd& v, const Eigen::MatrixXd& z);

// Central differences of psne::loss and psne::gradient.
Eigen::VectorXd fd_gradient(const Eigen::VectorXd& v, const FeatureMatrix& f,
                            double h);
Eigen::MatrixXd fd_hessian(const Eigen::VectorXd& v, const FeatureMatrix& f,
                           double h);

// Cyclic coordinate descent on loss + lambda ||v||_1 with per-coordinate
// curvature bound 1/4, run until the largest coordinate move is below tol.
Eigen::VectorXd coordinate_descent(const FeatureMatrix& f, double lambda,
                                   double tol = 1e-14,
                                   long max_sweeps = 2000000);

// Objective evaluated with the oracle's own arithmetic.
double cd_objective(const Eigen::VectorXd& v, const FeatureMatrix& f,
                    double lambda);

double chi_square_quantile(double dof, double p);

// Random test instances. Rows are +-1 when `signs` is set, Gaussian otherwise;
// counts are random positive integers.
FeatureMatrix random_features(std::uint64_t seed, int rows, int dim, bool signs);
Eigen::VectorXd random_vector(std::uint64_t seed, int dim, double scale);

// Player-i features of all 2^n actions with random positive counts, so every
// direction is covered and the unpenalized loss is strictly convex.
FeatureMatrix covering_features(std::uint64_t seed, int n, int i);

}  // namespace psne::oracle

#endif  // PSNE_TESTS_ORACLES_HPP_
