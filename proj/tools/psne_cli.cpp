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

// Command-line front end: game generation, PSNE enumeration, sampling,
// learning, recovery checks, diagnostics and the sample-scaling sweep.
//
// Exit status: 0 success, 1 usage error, 2 runtime or capacity error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "psne/diagnostics.hpp"
#include "psne/error.hpp"
#include "psne/game.hpp"
#include "psne/harness.hpp"
#include "psne/recovery.hpp"
#include "psne/sampler.hpp"
#include "psne/solver.hpp"
#include "psne/version.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string fmt_optional(const std::optional<double>& v) {
  if (!v) return "absent";
  std::ostringstream s;
  s.precision(10);
  s << *v;
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn sparse linear influence games and check exact PSNE recovery"};
  app.set_version_flag("--version", std::string("psne ") + psne::kVersion +
                                        " rng=" + psne::kRngId);
  app.require_subcommand(1);

  // gen-game
  int gen_n = 0, gen_k = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen-game", "Draw a random game with k -1 weights per row");
  gen->add_option("--n", gen_n, "Number of players")->required();
  gen->add_option("--k", gen_k, "In-degree of every player")->required();
  gen->add_option("--seed", gen_seed, "RNG seed")->required();
  gen->add_option("--out", gen_out, "Output game file (default stdout)");

  // enumerate
  std::string enum_game, enum_out;
  int enum_cap = psne::kDefaultEnumerationCap;
  auto* enumerate = app.add_subcommand("enumerate", "List the PSNE set of a game");
  enumerate->add_option("--game", enum_game, "Game file")->required();
  enumerate->add_option("--out", enum_out, "Output file (default stdout)");
  enumerate->add_option("--cap", enum_cap, "Largest n to enumerate");

  // sample
  std::string sample_game, sample_out;
  double sample_q = 0.0;
  std::size_t sample_m = 0;
  std::uint64_t sample_seed = 0;
  auto* sample = app.add_subcommand("sample", "Draw noisy observations of a game's equilibria");
  sample->add_option("--game", sample_game, "Game file")->required();
  sample->add_option("--q", sample_q, "Probability of observing an equilibrium")->required();
  sample->add_option("--m", sample_m, "Number of samples")->required();
  sample->add_option("--seed", sample_seed, "RNG seed")->required();
  sample->add_option("--out", sample_out, "Output dataset file (default stdout)");

  // fit
  std::string fit_data, fit_out;
  double fit_lambda = 0.0;
  int fit_workers = 1;
  psne::FitOptions fit_options;
  bool no_bias_penalty = false;
  auto* fit = app.add_subcommand("fit", "Learn a game by per-player l1-regularized logistic regression");
  fit->add_option("--data", fit_data, "Dataset file")->required();
  fit->add_option("--lambda", fit_lambda, "Regularization strength")->required();
  fit->add_option("--out", fit_out, "Output learned-game file (default stdout)");
  fit->add_option("--workers", fit_workers, "Players fitted concurrently");
  fit->add_option("--max-iters", fit_options.max_iters, "Iteration cap per player");
  fit->add_flag("--no-bias-penalty", no_bias_penalty, "Leave the bias coordinate unpenalized");

  // recover
  std::string rec_game, rec_data, rec_learned;
  double rec_lambda = -1.0;
  auto* recover = app.add_subcommand("recover", "Check whether a learned game has the true PSNE set");
  recover->add_option("--game", rec_game, "True game file")->required();
  auto* rec_data_opt = recover->add_option("--data", rec_data, "Dataset to learn from");
  auto* rec_lambda_opt = recover->add_option("--lambda", rec_lambda, "Regularization strength");
  auto* rec_learned_opt = recover->add_option("--learned", rec_learned, "Already learned game file");
  rec_data_opt->needs(rec_lambda_opt);
  rec_lambda_opt->needs(rec_data_opt);
  rec_learned_opt->excludes(rec_data_opt);

  // diagnose
  std::string diag_game;
  double diag_q = 0.0;
  auto* diagnose = app.add_subcommand("diagnose", "Print curvature and payoff diagnostics per player");
  diagnose->add_option("--game", diag_game, "Game file")->required();
  diagnose->add_option("--q", diag_q, "Probability of observing an equilibrium")->required();

  // sweep
  std::string sweep_config, sweep_out = "sweep-results";
  bool calibrate = false, print_schema = false, quiet = false;
  auto* sweep = app.add_subcommand("sweep", "Run the recovery-probability sweep over c");
  sweep->add_option("--config", sweep_config, "JSON config file (defaults if omitted)");
  sweep->add_option("--out-dir", sweep_out, "Directory for results.json and results.csv");
  sweep->add_flag("--calibrate", calibrate, "Sweep every calibration multiplier and pick one");
  sweep->add_flag("--print-schema", print_schema, "Print the config JSON schema and exit");
  sweep->add_flag("--quiet", quiet, "Suppress per-trial log lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) {
      psne::Rng rng(gen_seed);
      psne::GameDocument doc{psne::random_lig(gen_n, gen_k, rng), gen_seed, gen_k};
      emit(gen_out, psne::game_to_json(doc));
    } else if (*enumerate) {
      const auto doc = psne::read_game_file(enum_game);
      const psne::PsneSet psne = psne::enumerate_psne(doc.game, enum_cap);
      emit(enum_out, psne::psne_to_json(psne));
      if (!enum_out.empty() && enum_out != "-") std::cout << "count=" << psne.size() << "\n";
    } else if (*sample) {
      const auto doc = psne::read_game_file(sample_game);
      const psne::PsneSet psne = psne::enumerate_psne(doc.game);
      const psne::Dataset data = psne::sample_dataset(
          psne, doc.game.n(), sample_q, sample_m, sample_seed, doc.game.content_hash());
      std::ostringstream text;
      psne::write_dataset(text, data);
      emit(sample_out, text.str());
    } else if (*fit) {
      const psne::Dataset data = psne::read_dataset_file(fit_data);
      fit_options.penalize_bias = !no_bias_penalty;
      const psne::LearnedGame learned =
          psne::learn_game(data, fit_lambda, fit_options, fit_workers);
      emit(fit_out, psne::learned_game_to_json(learned));
      if (!learned.all_converged()) {
        std::cerr << "warning: some player fits did not converge\n";
      }
    } else if (*recover) {
      const auto truth = psne::read_game_file(rec_game);
      const psne::PsneSet truth_psne = psne::enumerate_psne(truth.game);
      psne::LinearInfluenceGame learned;
      if (!rec_learned.empty()) {
        learned = psne::read_game_file(rec_learned).game;
      } else if (!rec_data.empty()) {
        learned = psne::learn_game(psne::read_dataset_file(rec_data), rec_lambda).game;
      } else {
        throw psne::UsageError("recover needs --learned or --data with --lambda");
      }
      const psne::PsneComparison cmp = psne::psne_equivalent(learned, truth_psne);
      std::cout << "equal=" << (cmp.equal ? "true" : "false")
                << " missed=" << cmp.missed << " spurious=" << cmp.spurious << "\n";
    } else if (*diagnose) {
      const auto doc = psne::read_game_file(diag_game);
      const psne::PsneSet psne = psne::enumerate_psne(doc.game);
      psne::check_observation_model(psne, doc.game.n(), diag_q);
      for (int i = 0; i < doc.game.n(); ++i) {
        const psne::AssumptionReport r = psne::assumption_report(doc.game, psne, diag_q, i);
        std::cout << "player=" << r.player << " support=[";
        for (std::size_t s = 0; s < r.support.size(); ++s) {
          std::cout << (s ? "," : "") << r.support[s];
        }
        std::cout << "] C_min=" << fmt_optional(r.c_min_est)
                  << " D_max=" << fmt_optional(r.d_max_est) << " nu=" << r.nu
                  << " kappa=" << r.kappa << " rho_min=" << r.rho_min
                  << " payoff_condition_met="
                  << (r.payoff_condition_met ? (*r.payoff_condition_met ? "true" : "false")
                                             : "absent")
                  << " C_min_lower_bound=" << r.c_min_lower_bound
                  << " D_max_upper_bound=" << r.d_max_upper_bound
                  << " decomposition_residual=" << r.hessian_decomposition_residual
                  << "\n";
      }
    } else if (*sweep) {
      if (print_schema) {
        std::cout << psne::config_schema();
        return 0;
      }
      psne::ExperimentConfig config;
      if (!sweep_config.empty()) config = psne::read_config_file(sweep_config);
      config.validate();
      std::ostream* log = quiet ? nullptr : &std::cerr;
      if (calibrate) {
        const psne::CalibrationResult cal = psne::run_calibration(config, log);
        for (const auto& run : cal.runs) {
          std::ostringstream sub;
          sub << sweep_out << "/multiplier-" << run.config.lambda_multiplier;
          psne::write_results(run, sub.str());
        }
        std::ofstream(sweep_out + "/calibration.json")
            << "{\"chosen_multiplier\": " << cal.chosen_multiplier << "}\n";
        std::cout << "chosen_multiplier=" << cal.chosen_multiplier << "\n";
      } else {
        const psne::ExperimentResult result = psne::run_sweep(config, log);
        psne::write_results(result, sweep_out);
        std::cout << psne::results_csv(result);
      }
    }
  } catch (const psne::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
