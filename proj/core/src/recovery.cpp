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

#include "psne/recovery.hpp"

#include <cmath>
#include <string>
#include <utility>

#include <json.hpp>

#include "parallel.hpp"
#include "psne/error.hpp"

namespace psne {

bool LearnedGame::all_converged() const {
  for (const auto& f : fits) {
    if (!f.converged) return false;
  }
  return true;
}

int LearnedGame::total_iterations() const {
  int total = 0;
  for (const auto& f : fits) total += f.iterations;
  return total;
}

LearnedGame learn_game(const Dataset& dataset, double lambda,
                       const FitOptions& options, int workers) {
  if (dataset.size() == 0) throw UsageError("learn_game needs a non-empty dataset");
  if (!(lambda >= 0.0)) throw UsageError("lambda must be non-negative");
  const int n = dataset.n();
  const ActionHistogram hist = action_histogram(dataset);

  std::vector<FitReport> fits(static_cast<std::size_t>(n));
  internal::parallel_for(fits.size(), workers, [&](std::size_t i) {
    const FeatureMatrix features = player_features(hist, static_cast<int>(i));
    fits[i] = fit_l1_logistic(features, lambda, options);
  });

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    unpack_params(fits[static_cast<std::size_t>(i)].v_hat, i, w, b);
  }
  return LearnedGame{LinearInfluenceGame(std::move(w), std::move(b)),
                     std::move(fits), lambda};
}

double lambda_schedule(std::size_t m, int n, double delta, double multiplier) {
  if (m < 1) throw UsageError("lambda_schedule needs m >= 1");
  if (n < 1) throw UsageError("lambda_schedule needs n >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw UsageError("delta must lie in (0, 1)");
  if (!(multiplier >= 0.0)) throw UsageError("lambda multiplier must be non-negative");
  return multiplier * std::sqrt(2.0 / static_cast<double>(m) *
                                std::log(2.0 * n / delta));
}

LambdaWindow theorem_lambda_window(std::size_t m, int n, double delta, int k,
                                   double c_min, double d_max, double nu,
                                   double kappa) {
  const double slack = std::sqrt(2.0 / static_cast<double>(m) *
                                 std::log(6.0 * n * static_cast<double>(n) / delta));
  LambdaWindow window;
  window.k_margin = 5.0 * c_min * c_min / (32.0 * k * d_max) - nu * kappa;
  window.lower = nu * kappa + slack;
  window.upper = 2.0 * window.k_margin + nu * kappa - slack;
  window.feasible = window.lower <= window.upper;
  return window;
}

PsneComparison compare_psne(const PsneSet& truth, const PsneSet& learned) {
  if (truth.n() != learned.n()) throw UsageError("PSNE sets disagree on n");
  PsneComparison cmp;
  for (ActionCode x : truth) cmp.missed += learned.contains(x) ? 0 : 1;
  for (ActionCode x : learned) cmp.spurious += truth.contains(x) ? 0 : 1;
  cmp.equal = cmp.missed == 0 && cmp.spurious == 0;
  return cmp;
}

PsneComparison psne_equivalent(const LinearInfluenceGame& learned,
                               const PsneSet& truth, int cap) {
  return compare_psne(truth, enumerate_psne(learned, cap));
}

PsneComparison psne_equivalent(const LearnedGame& learned, const PsneSet& truth,
                               int cap) {
  return psne_equivalent(learned.game, truth, cap);
}

std::vector<bool> signed_neighborhood_match(const LinearInfluenceGame& learned,
                                            const LinearInfluenceGame& truth,
                                            double zero_tol) {
  if (learned.n() != truth.n()) throw UsageError("games disagree on n");
  if (!(zero_tol >= 0.0)) throw UsageError("zero_tol must be non-negative");
  std::vector<bool> match(static_cast<std::size_t>(truth.n()));
  for (int i = 0; i < truth.n(); ++i) {
    match[static_cast<std::size_t>(i)] =
        neighborhood(learned, i, zero_tol) == neighborhood(truth, i);
  }
  return match;
}

std::vector<bool> signed_neighborhood_match(const LearnedGame& learned,
                                            const LinearInfluenceGame& truth,
                                            double zero_tol) {
  return signed_neighborhood_match(learned.game, truth, zero_tol);
}

std::string learned_game_to_json(const LearnedGame& learned) {
  nlohmann::json j = nlohmann::json::parse(game_to_json(learned.game));
  j["lambda"] = learned.lambda;
  nlohmann::json fits = nlohmann::json::array();
  for (const auto& f : learned.fits) {
    fits.push_back({{"iterations", f.iterations},
                    {"kkt_residual", f.kkt_residual},
                    {"final_objective", f.final_objective},
                    {"converged", f.converged}});
  }
  j["fits"] = std::move(fits);
  return j.dump(2) + "\n";
}

}  // namespace psne
