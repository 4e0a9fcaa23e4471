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

#ifndef PSNE_RECOVERY_HPP_
#define PSNE_RECOVERY_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "psne/game.hpp"
#include "psne/sampler.hpp"
#include "psne/solver.hpp"

namespace psne {

// Game assembled from one l1-regularized logistic fit per player.
struct LearnedGame {
  LinearInfluenceGame game;
  std::vector<FitReport> fits;
  double lambda = 0.0;

  bool all_converged() const;
  int total_iterations() const;
};

// Fits every player independently (up to `workers` at a time) and
// assembles (W_hat, b_hat). The result does not depend on scheduling.
LearnedGame learn_game(const Dataset& dataset, double lambda,
                       const FitOptions& options = {}, int workers = 1);

// multiplier * sqrt((2/m) log(2n/delta)).
double lambda_schedule(std::size_t m, int n, double delta, double multiplier);

struct LambdaWindow {
  double lower = 0.0;
  double upper = 0.0;
  double k_margin = 0.0;  // K = 5 C_min^2 / (32 k D_max) - nu kappa
  bool feasible = false;
};

// Admissible regularization interval of the exact-recovery guarantee.
// Reporting only; it needs population constants.
LambdaWindow theorem_lambda_window(std::size_t m, int n, double delta, int k,
                                   double c_min, double d_max, double nu,
                                   double kappa);

struct PsneComparison {
  bool equal = false;
  std::size_t missed = 0;    // |NE* \ NE_hat|
  std::size_t spurious = 0;  // |NE_hat \ NE*|
};

PsneComparison compare_psne(const PsneSet& truth, const PsneSet& learned);
PsneComparison psne_equivalent(const LinearInfluenceGame& learned,
                               const PsneSet& truth,
                               int cap = kDefaultEnumerationCap);
PsneComparison psne_equivalent(const LearnedGame& learned, const PsneSet& truth,
                               int cap = kDefaultEnumerationCap);

// Per player: does {j : |W_hat_ij| > zero_tol} with signs match the true
// signed neighborhood?
std::vector<bool> signed_neighborhood_match(const LinearInfluenceGame& learned,
                                            const LinearInfluenceGame& truth,
                                            double zero_tol = 1e-6);
std::vector<bool> signed_neighborhood_match(const LearnedGame& learned,
                                            const LinearInfluenceGame& truth,
                                            double zero_tol = 1e-6);

// Game document plus a "fits" array and "lambda".
std::string learned_game_to_json(const LearnedGame& learned);

}  // namespace psne

#endif  // PSNE_RECOVERY_HPP_
