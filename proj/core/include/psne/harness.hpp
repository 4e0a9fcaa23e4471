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

#ifndef PSNE_HARNESS_HPP_
#define PSNE_HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "psne/game.hpp"
#include "psne/solver.hpp"

namespace psne {

// Sample-scaling sweep: for every control value c, `games` random games
// are learned from m(c) = floor(C_scale * 10^c * k^2 * ln(6 n^2 / delta))
// noisy observations.
struct ExperimentConfig {
  int n = 10;
  int k = 1;
  double q = 0.01;
  double delta = 0.01;
  double lambda_multiplier = 1.0;
  std::vector<double> c_grid;  // empty -> default_c_grid()
  std::optional<double> c_scale;  // absent -> default_c_scale(k)
  int games = 40;
  std::uint64_t base_seed = 1;
  int workers = 1;
  int max_redraws = 100;
  bool diagnostics = true;
  std::vector<double> calibration_multipliers{0.5, 1.0, 2.0};

  std::vector<double> grid() const;
  double scale() const;
  // Throws UsageError on any invalid field.
  void validate() const;
};

// -1.0, -0.75, ..., +2.0
std::vector<double> default_c_grid();
// 10000 for k = 1, 1000 otherwise.
double default_c_scale(int k);

// Parses a JSON config; unknown keys and wrong types are usage errors.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig read_config_file(const std::string& path);
std::string config_to_json(const ExperimentConfig& config);
// JSON Schema (draft 2020-12) describing the accepted config document.
std::string config_schema();

std::uint64_t sample_count(const ExperimentConfig& config, double c);

// hash(base_seed, n, k, c, trial_index)
std::uint64_t trial_seed(std::uint64_t base_seed, int n, int k, double c,
                         int trial);

// Worker count after the PSNE_WORKERS environment override.
int effective_workers(const ExperimentConfig& config);

// A random game that passed the admission checks (non-trivial PSNE set,
// |NE|/2^n < q, strictly positive rho_min).
struct AdmittedGame {
  LinearInfluenceGame game;
  PsneSet psne;
  double rho_min = 0.0;
  std::uint64_t seed = 0;  // seed of the accepted draw
  int attempts = 0;
  std::map<std::string, int> rejections;  // reason code -> count
};

// Throws DomainError when max_redraws draws are all rejected.
AdmittedGame draw_admissible_game(int n, int k, double q, std::uint64_t seed,
                                  int max_redraws,
                                  int cap = kDefaultEnumerationCap);

struct TrialDiagnostics {
  double c_min = 0.0;  // min over players
  double d_max = 0.0;  // max over players
  double nu = 0.0;
  double kappa = 0.0;
  int players_checked = 0;
  int derivation_bound_violations = 0;
  int payoff_condition_met = 0;
  double lemma2_bound = 0.0;
  std::vector<double> gradient_norms;  // per player, at v*
  int lemma2_passes = 0;
  double lambda_lower = 0.0;
  double lambda_upper = 0.0;
  bool lambda_window_feasible = false;
  std::optional<std::uint64_t> sample_bound;
};

struct TrialRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  std::uint64_t game_seed = 0;
  int attempts = 0;
  std::map<std::string, int> rejections;
  std::size_t ne_size = 0;
  bool equal = false;
  std::size_t missed = 0;
  std::size_t spurious = 0;
  int iterations = 0;
  bool all_converged = false;
  double neighborhood_match_rate = 0.0;
  double runtime_s = 0.0;
  std::optional<TrialDiagnostics> diagnostics;
  std::string error;
};

struct CellRecord {
  int n = 0;
  int k = 0;
  double c = 0.0;
  std::uint64_t m = 0;
  double lambda = 0.0;
  int successes = 0;
  int games = 0;
  double recovery_probability = 0.0;
  double mean_solver_iterations = 0.0;
  double mean_runtime_s = 0.0;
  std::map<std::string, int> rejections;
  // Aggregated diagnostics over trials that computed them.
  int diagnosed_trials = 0;
  int derivation_bound_violations = 0;
  int lemma2_checks = 0;
  int lemma2_passes = 0;
  double min_c_min = 0.0;
  double max_d_max = 0.0;
  std::vector<TrialRecord> trials;
  std::string error;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<CellRecord> cells;  // ascending c
  std::string software_version;
  std::string rng;
};

// `log`, when set, receives one line per trial after the cell finishes.
CellRecord run_cell(const ExperimentConfig& config, double c,
                    std::ostream* log = nullptr);
ExperimentResult run_sweep(const ExperimentConfig& config,
                           std::ostream* log = nullptr);

std::string results_json(const ExperimentResult& result);
ExperimentResult results_from_json(std::string_view text);
// Columns: n,k,c,m,lambda,successes,games,probability
std::string results_csv(const ExperimentResult& result);
// Writes results.json and results.csv into `dir` (created if missing).
void write_results(const ExperimentResult& result, const std::string& dir);

struct CalibrationResult {
  std::vector<ExperimentResult> runs;  // one per multiplier
  double chosen_multiplier = 1.0;
};

// Runs the sweep once per calibration multiplier and keeps the one with the
// highest mean recovery probability (ties prefer the earliest).
CalibrationResult run_calibration(const ExperimentConfig& config,
                                  std::ostream* log = nullptr);

}  // namespace psne

#endif  // PSNE_HARNESS_HPP_
