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

#include "psne/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <type_traits>
#include <utility>

#include <json.hpp>

#include "parallel.hpp"
#include "psne/diagnostics.hpp"
#include "psne/error.hpp"
#include "psne/recovery.hpp"
#include "psne/sampler.hpp"
#include "psne/version.hpp"

namespace psne {

using nlohmann::json;

namespace {

constexpr std::uint64_t kGameStream = 0x67616d65;  // "game"
constexpr std::uint64_t kDataStream = 0x64617461;  // "data"

std::string shortest(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void add_counts(std::map<std::string, int>& into,
                const std::map<std::string, int>& from) {
  for (const auto& [reason, count] : from) into[reason] += count;
}

// --- JSON for results -----------------------------------------------------

json diagnostics_json(const TrialDiagnostics& d) {
  json j{{"c_min", d.c_min},
         {"d_max", d.d_max},
         {"nu", d.nu},
         {"kappa", d.kappa},
         {"players_checked", d.players_checked},
         {"derivation_bound_violations", d.derivation_bound_violations},
         {"payoff_condition_met", d.payoff_condition_met},
         {"lemma2_bound", d.lemma2_bound},
         {"gradient_norms", d.gradient_norms},
         {"lemma2_passes", d.lemma2_passes},
         {"lambda_lower", d.lambda_lower},
         {"lambda_upper", d.lambda_upper},
         {"lambda_window_feasible", d.lambda_window_feasible}};
  j["sample_bound"] = d.sample_bound ? json(*d.sample_bound) : json(nullptr);
  return j;
}

TrialDiagnostics diagnostics_from_json(const json& j) {
  TrialDiagnostics d;
  d.c_min = j.at("c_min").get<double>();
  d.d_max = j.at("d_max").get<double>();
  d.nu = j.at("nu").get<double>();
  d.kappa = j.at("kappa").get<double>();
  d.players_checked = j.at("players_checked").get<int>();
  d.derivation_bound_violations = j.at("derivation_bound_violations").get<int>();
  d.payoff_condition_met = j.at("payoff_condition_met").get<int>();
  d.lemma2_bound = j.at("lemma2_bound").get<double>();
  d.gradient_norms = j.at("gradient_norms").get<std::vector<double>>();
  d.lemma2_passes = j.at("lemma2_passes").get<int>();
  d.lambda_lower = j.at("lambda_lower").get<double>();
  d.lambda_upper = j.at("lambda_upper").get<double>();
  d.lambda_window_feasible = j.at("lambda_window_feasible").get<bool>();
  if (!j.at("sample_bound").is_null()) {
    d.sample_bound = j.at("sample_bound").get<std::uint64_t>();
  }
  return d;
}

json trial_json(const TrialRecord& t) {
  json j{{"trial", t.trial},
         {"seed", t.seed},
         {"game_seed", t.game_seed},
         {"attempts", t.attempts},
         {"rejections", t.rejections},
         {"ne_size", t.ne_size},
         {"equal", t.equal},
         {"missed", t.missed},
         {"spurious", t.spurious},
         {"iterations", t.iterations},
         {"all_converged", t.all_converged},
         {"neighborhood_match_rate", t.neighborhood_match_rate},
         {"runtime_s", t.runtime_s},
         {"error", t.error}};
  j["diagnostics"] = t.diagnostics ? diagnostics_json(*t.diagnostics) : json(nullptr);
  return j;
}

TrialRecord trial_from_json(const json& j) {
  TrialRecord t;
  t.trial = j.at("trial").get<int>();
  t.seed = j.at("seed").get<std::uint64_t>();
  t.game_seed = j.at("game_seed").get<std::uint64_t>();
  t.attempts = j.at("attempts").get<int>();
  t.rejections = j.at("rejections").get<std::map<std::string, int>>();
  t.ne_size = j.at("ne_size").get<std::size_t>();
  t.equal = j.at("equal").get<bool>();
  t.missed = j.at("missed").get<std::size_t>();
  t.spurious = j.at("spurious").get<std::size_t>();
  t.iterations = j.at("iterations").get<int>();
  t.all_converged = j.at("all_converged").get<bool>();
  t.neighborhood_match_rate = j.at("neighborhood_match_rate").get<double>();
  t.runtime_s = j.at("runtime_s").get<double>();
  t.error = j.at("error").get<std::string>();
  if (!j.at("diagnostics").is_null()) {
    t.diagnostics = diagnostics_from_json(j.at("diagnostics"));
  }
  return t;
}

json cell_json(const CellRecord& c) {
  json trials = json::array();
  for (const auto& t : c.trials) trials.push_back(trial_json(t));
  return json{{"n", c.n},
              {"k", c.k},
              {"c", c.c},
              {"m", c.m},
              {"lambda", c.lambda},
              {"successes", c.successes},
              {"games", c.games},
              {"recovery_probability", c.recovery_probability},
              {"mean_solver_iterations", c.mean_solver_iterations},
              {"mean_runtime_s", c.mean_runtime_s},
              {"rejections", c.rejections},
              {"assumption_summary",
               {{"diagnosed_trials", c.diagnosed_trials},
                {"derivation_bound_violations", c.derivation_bound_violations},
                {"lemma2_checks", c.lemma2_checks},
                {"lemma2_passes", c.lemma2_passes},
                {"min_c_min", c.min_c_min},
                {"max_d_max", c.max_d_max}}},
              {"trials", std::move(trials)},
              {"error", c.error}};
}

CellRecord cell_from_json(const json& j) {
  CellRecord c;
  c.n = j.at("n").get<int>();
  c.k = j.at("k").get<int>();
  c.c = j.at("c").get<double>();
  c.m = j.at("m").get<std::uint64_t>();
  c.lambda = j.at("lambda").get<double>();
  c.successes = j.at("successes").get<int>();
  c.games = j.at("games").get<int>();
  c.recovery_probability = j.at("recovery_probability").get<double>();
  c.mean_solver_iterations = j.at("mean_solver_iterations").get<double>();
  c.mean_runtime_s = j.at("mean_runtime_s").get<double>();
  c.rejections = j.at("rejections").get<std::map<std::string, int>>();
  const json& s = j.at("assumption_summary");
  c.diagnosed_trials = s.at("diagnosed_trials").get<int>();
  c.derivation_bound_violations = s.at("derivation_bound_violations").get<int>();
  c.lemma2_checks = s.at("lemma2_checks").get<int>();
  c.lemma2_passes = s.at("lemma2_passes").get<int>();
  c.min_c_min = s.at("min_c_min").get<double>();
  c.max_d_max = s.at("max_d_max").get<double>();
  for (const auto& t : j.at("trials")) c.trials.push_back(trial_from_json(t));
  c.error = j.at("error").get<std::string>();
  return c;
}

json config_json(const ExperimentConfig& cfg) {
  json j{{"n", cfg.n},
         {"k", cfg.k},
         {"q", cfg.q},
         {"delta", cfg.delta},
         {"lambda_multiplier", cfg.lambda_multiplier},
         {"c_grid", cfg.grid()},
         {"C_scale", cfg.scale()},
         {"games", cfg.games},
         {"base_seed", cfg.base_seed},
         {"workers", cfg.workers},
         {"max_redraws", cfg.max_redraws},
         {"diagnostics", cfg.diagnostics},
         {"calibration_multipliers", cfg.calibration_multipliers}};
  return j;
}

template <typename T>
T typed_field(const json& value, const std::string& key) {
  bool ok = false;
  if constexpr (std::is_same_v<T, bool>) {
    ok = value.is_boolean();
  } else if constexpr (std::is_unsigned_v<T>) {
    ok = value.is_number_unsigned();
  } else if constexpr (std::is_integral_v<T>) {
    ok = value.is_number_integer();
  } else {
    ok = value.is_number();
  }
  if (!ok) throw UsageError("config: field '" + key + "' has the wrong type");
  return value.get<T>();
}

std::vector<double> number_list(const json& value, const std::string& key) {
  if (!value.is_array()) throw UsageError("config: '" + key + "' must be an array");
  std::vector<double> out;
  for (const auto& v : value) out.push_back(typed_field<double>(v, key));
  return out;
}

// --- trial pipeline -------------------------------------------------------

TrialDiagnostics diagnose_trial(const ExperimentConfig& cfg,
                                const AdmittedGame& admitted,
                                const ActionHistogram& data, std::size_t m) {
  TrialDiagnostics d;
  const int n = cfg.n;
  d.c_min = std::numeric_limits<double>::infinity();
  d.d_max = 0.0;
  d.kappa = kappa(admitted.rho_min);
  for (int i = 0; i < n; ++i) {
    const AssumptionReport report =
        assumption_report(admitted.game, admitted.psne, cfg.q, i);
    d.nu = report.nu;
    ++d.players_checked;
    if (report.c_min_est) d.c_min = std::min(d.c_min, *report.c_min_est);
    if (report.d_max_est) d.d_max = std::max(d.d_max, *report.d_max_est);
    if (!report.derivation_bounds_hold()) ++d.derivation_bound_violations;
    if (report.payoff_condition_met.value_or(false)) ++d.payoff_condition_met;
  }
  d.lemma2_bound = lemma2_gradient_bound(m, n, cfg.delta, d.nu, d.kappa);
  for (int i = 0; i < n; ++i) {
    const double g = gradient_norm_at_truth(admitted.game, data, i);
    d.gradient_norms.push_back(g);
    if (g < d.lemma2_bound) ++d.lemma2_passes;
  }
  const LambdaWindow window = theorem_lambda_window(
      m, n, cfg.delta, cfg.k, d.c_min, d.d_max, d.nu, d.kappa);
  d.lambda_lower = window.lower;
  d.lambda_upper = window.upper;
  d.lambda_window_feasible = window.feasible;
  d.sample_bound = theorem_sample_bound(cfg.k, n, cfg.delta, d.c_min, d.d_max,
                                        d.nu, d.kappa).samples;
  return d;
}

TrialRecord run_trial(const ExperimentConfig& cfg, double c, int trial,
                      std::uint64_t m, double lambda) {
  const auto start = std::chrono::steady_clock::now();
  TrialRecord rec;
  rec.trial = trial;
  rec.seed = trial_seed(cfg.base_seed, cfg.n, cfg.k, c, trial);

  const AdmittedGame admitted =
      draw_admissible_game(cfg.n, cfg.k, cfg.q, hash_seed({rec.seed, kGameStream}),
                           cfg.max_redraws);
  rec.game_seed = admitted.seed;
  rec.attempts = admitted.attempts;
  rec.rejections = admitted.rejections;
  rec.ne_size = admitted.psne.size();

  const Dataset data =
      sample_dataset(admitted.psne, cfg.n, cfg.q, m,
                     hash_seed({rec.seed, kDataStream}),
                     admitted.game.content_hash());
  const ActionHistogram hist = action_histogram(data);

  if (cfg.diagnostics && cfg.n <= kExactExpectationCap) {
    rec.diagnostics = diagnose_trial(cfg, admitted, hist, m);
    if (rec.diagnostics->derivation_bound_violations > 0) {
      rec.error = "derivation_bound_violation";
    }
  }

  if (rec.error.empty()) {
    const LearnedGame learned = learn_game(data, lambda);
    const PsneComparison cmp = psne_equivalent(learned, admitted.psne);
    rec.equal = cmp.equal;
    rec.missed = cmp.missed;
    rec.spurious = cmp.spurious;
    rec.iterations = learned.total_iterations();
    rec.all_converged = learned.all_converged();
    const std::vector<bool> match = signed_neighborhood_match(learned, admitted.game);
    rec.neighborhood_match_rate =
        static_cast<double>(std::count(match.begin(), match.end(), true)) /
        static_cast<double>(match.size());
  }
  rec.runtime_s = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::string cell_label(const ExperimentConfig& cfg, double c) {
  return "(" + std::to_string(cfg.n) + "," + std::to_string(cfg.k) + "," +
         shortest(c) + ")";
}

}  // namespace

std::vector<double> default_c_grid() {
  std::vector<double> grid;
  for (int step = -4; step <= 8; ++step) grid.push_back(0.25 * step);
  return grid;
}

double default_c_scale(int k) { return k == 1 ? 10000.0 : 1000.0; }

std::vector<double> ExperimentConfig::grid() const {
  return c_grid.empty() ? default_c_grid() : c_grid;
}

double ExperimentConfig::scale() const {
  return c_scale.value_or(default_c_scale(k));
}

void ExperimentConfig::validate() const {
  if (n < 2 || n > kDefaultEnumerationCap) {
    throw UsageError("config: n must lie in [2, " +
                     std::to_string(kDefaultEnumerationCap) + "]");
  }
  if (k < 1 || k > n - 1) throw UsageError("config: k must lie in [1, n - 1]");
  if (!(q > 0.0 && q < 1.0)) throw UsageError("config: q must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw UsageError("config: delta must lie in (0, 1)");
  if (!(lambda_multiplier >= 0.0) || !std::isfinite(lambda_multiplier)) {
    throw UsageError("config: lambda_multiplier must be finite and >= 0");
  }
  if (!(scale() > 0.0) || !std::isfinite(scale())) {
    throw UsageError("config: C_scale must be positive");
  }
  if (games < 1) throw UsageError("config: games must be >= 1");
  if (workers < 1) throw UsageError("config: workers must be >= 1");
  if (max_redraws < 1) throw UsageError("config: max_redraws must be >= 1");
  for (double c : grid()) {
    if (!std::isfinite(c)) throw UsageError("config: c_grid entries must be finite");
    if (sample_count(*this, c) < 1) {
      throw UsageError("config: m(c) < 1 at c = " + shortest(c));
    }
  }
  for (double mult : calibration_multipliers) {
    if (!(mult >= 0.0)) throw UsageError("config: calibration multipliers must be >= 0");
  }
}

ExperimentConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("config: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("config: top level must be an object");
  ExperimentConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "n") cfg.n = typed_field<int>(value, key);
    else if (key == "k") cfg.k = typed_field<int>(value, key);
    else if (key == "q") cfg.q = typed_field<double>(value, key);
    else if (key == "delta") cfg.delta = typed_field<double>(value, key);
    else if (key == "lambda_multiplier") cfg.lambda_multiplier = typed_field<double>(value, key);
    else if (key == "c_grid") cfg.c_grid = number_list(value, key);
    else if (key == "C_scale") cfg.c_scale = typed_field<double>(value, key);
    else if (key == "games") cfg.games = typed_field<int>(value, key);
    else if (key == "base_seed") cfg.base_seed = typed_field<std::uint64_t>(value, key);
    else if (key == "workers") cfg.workers = typed_field<int>(value, key);
    else if (key == "max_redraws") cfg.max_redraws = typed_field<int>(value, key);
    else if (key == "diagnostics") cfg.diagnostics = typed_field<bool>(value, key);
    else if (key == "calibration_multipliers") cfg.calibration_multipliers = number_list(value, key);
    else throw UsageError("config: unknown key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const ExperimentConfig& config) {
  return config_json(config).dump(2) + "\n";
}

std::string config_schema() {
  const json number{{"type", "number"}};
  const json numbers{{"type", "array"}, {"items", number}};
  json schema{
      {"$schema", "https://json-schema.org/draft/2020-12/schema"},
      {"title", "psne-lab sweep configuration"},
      {"type", "object"},
      {"additionalProperties", false},
      {"properties",
       {{"n", {{"type", "integer"}, {"minimum", 2}, {"maximum", kDefaultEnumerationCap}}},
        {"k", {{"type", "integer"}, {"minimum", 1}}},
        {"q", {{"type", "number"}, {"exclusiveMinimum", 0}, {"exclusiveMaximum", 1}}},
        {"delta", {{"type", "number"}, {"exclusiveMinimum", 0}, {"exclusiveMaximum", 1}}},
        {"lambda_multiplier", {{"type", "number"}, {"minimum", 0}}},
        {"c_grid", numbers},
        {"C_scale", {{"type", "number"}, {"exclusiveMinimum", 0}}},
        {"games", {{"type", "integer"}, {"minimum", 1}}},
        {"base_seed", {{"type", "integer"}, {"minimum", 0}}},
        {"workers", {{"type", "integer"}, {"minimum", 1}}},
        {"max_redraws", {{"type", "integer"}, {"minimum", 1}}},
        {"diagnostics", {{"type", "boolean"}}},
        {"calibration_multipliers", numbers}}}};
  return schema.dump(2) + "\n";
}

std::uint64_t sample_count(const ExperimentConfig& config, double c) {
  const double n = config.n;
  const double k = config.k;
  const double m = config.scale() * std::pow(10.0, c) * k * k *
                   std::log(6.0 * n * n / config.delta);
  if (!(m >= 0.0) || !std::isfinite(m)) return 0;
  return static_cast<std::uint64_t>(std::floor(m));
}

std::uint64_t trial_seed(std::uint64_t base_seed, int n, int k, double c,
                         int trial) {
  return hash_seed({base_seed, static_cast<std::uint64_t>(n),
                    static_cast<std::uint64_t>(k), double_bits(c),
                    static_cast<std::uint64_t>(trial)});
}

int effective_workers(const ExperimentConfig& config) {
  if (const char* env = std::getenv("PSNE_WORKERS")) {
    int value = 0;
    const std::string_view s(env);
    auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || value < 1) {
      throw UsageError("PSNE_WORKERS must be a positive integer");
    }
    return value;
  }
  return config.workers;
}

AdmittedGame draw_admissible_game(int n, int k, double q, std::uint64_t seed,
                                  int max_redraws, int cap) {
  AdmittedGame out;
  const double total = std::ldexp(1.0, n);
  for (int attempt = 0; attempt < max_redraws; ++attempt) {
    const std::uint64_t draw_seed =
        hash_seed({seed, static_cast<std::uint64_t>(attempt)});
    Rng rng(draw_seed);
    LinearInfluenceGame game = random_lig(n, k, rng);
    PsneSet psne = enumerate_psne(game, cap);
    ++out.attempts;
    std::string reason;
    double rho = 0.0;
    if (psne.empty()) {
      reason = "empty_psne";
    } else if (static_cast<double>(psne.size()) >= total) {
      reason = "full_psne";
    } else if (!(static_cast<double>(psne.size()) / total < q)) {
      reason = "q_range";
    } else if (rho = min_psne_payoff(game, psne); !(rho > 0.0)) {
      reason = "nonpositive_rho_min";
    }
    if (!reason.empty()) {
      ++out.rejections[reason];
      continue;
    }
    out.game = std::move(game);
    out.psne = std::move(psne);
    out.rho_min = rho;
    out.seed = draw_seed;
    return out;
  }
  std::string detail;
  for (const auto& [reason, count] : out.rejections) {
    detail += " " + reason + "=" + std::to_string(count);
  }
  throw DomainError("no admissible game in " + std::to_string(max_redraws) +
                    " draws (n=" + std::to_string(n) + ", k=" +
                    std::to_string(k) + "):" + detail);
}

CellRecord run_cell(const ExperimentConfig& config, double c, std::ostream* log) {
  config.validate();
  CellRecord cell;
  cell.n = config.n;
  cell.k = config.k;
  cell.c = c;
  cell.m = sample_count(config, c);
  cell.lambda = lambda_schedule(cell.m, config.n, config.delta,
                                config.lambda_multiplier);
  cell.games = config.games;
  cell.trials.resize(static_cast<std::size_t>(config.games));

  internal::parallel_for(cell.trials.size(), effective_workers(config),
                         [&](std::size_t t) {
                           cell.trials[t] = run_trial(config, c, static_cast<int>(t),
                                                      cell.m, cell.lambda);
                         });

  double iterations = 0.0, runtime = 0.0;
  cell.min_c_min = std::numeric_limits<double>::infinity();
  for (const TrialRecord& t : cell.trials) {
    cell.successes += t.equal ? 1 : 0;
    iterations += t.iterations;
    runtime += t.runtime_s;
    add_counts(cell.rejections, t.rejections);
    if (t.diagnostics) {
      const TrialDiagnostics& d = *t.diagnostics;
      ++cell.diagnosed_trials;
      cell.derivation_bound_violations += d.derivation_bound_violations;
      cell.lemma2_checks += static_cast<int>(d.gradient_norms.size());
      cell.lemma2_passes += d.lemma2_passes;
      cell.min_c_min = std::min(cell.min_c_min, d.c_min);
      cell.max_d_max = std::max(cell.max_d_max, d.d_max);
    }
    if (log) {
      *log << "trial=" << t.trial << " cell=" << cell_label(config, c)
           << " m=" << cell.m << " equal=" << (t.equal ? "true" : "false")
           << " iters=" << t.iterations;
      for (const auto& [reason, count] : t.rejections) {
        *log << " rejected." << reason << "=" << count;
      }
      if (!t.error.empty()) *log << " error=" << t.error;
      *log << '\n';
    }
  }
  if (cell.diagnosed_trials == 0) cell.min_c_min = 0.0;
  cell.recovery_probability =
      static_cast<double>(cell.successes) / static_cast<double>(cell.games);
  cell.mean_solver_iterations = iterations / cell.games;
  cell.mean_runtime_s = runtime / cell.games;
  return cell;
}

ExperimentResult run_sweep(const ExperimentConfig& config, std::ostream* log) {
  config.validate();
  ExperimentResult result;
  result.config = config;
  result.software_version = kVersion;
  result.rng = kRngId;
  std::vector<double> grid = config.grid();
  std::sort(grid.begin(), grid.end());
  for (double c : grid) {
    try {
      result.cells.push_back(run_cell(config, c, log));
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception& e) {
      CellRecord failed;
      failed.n = config.n;
      failed.k = config.k;
      failed.c = c;
      failed.m = sample_count(config, c);
      failed.lambda = lambda_schedule(failed.m, config.n, config.delta,
                                      config.lambda_multiplier);
      failed.games = config.games;
      failed.error = e.what();
      if (log) *log << "cell=" << cell_label(config, c) << " error=" << e.what() << '\n';
      result.cells.push_back(std::move(failed));
    }
  }
  return result;
}

std::string results_json(const ExperimentResult& result) {
  json cells = json::array();
  for (const auto& c : result.cells) cells.push_back(cell_json(c));
  json j{{"config", config_json(result.config)},
         {"software_version", result.software_version},
         {"rng", result.rng},
         {"cells", std::move(cells)}};
  return j.dump(2) + "\n";
}

ExperimentResult results_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    ExperimentResult result;
    result.config = parse_config(j.at("config").dump());
    result.software_version = j.at("software_version").get<std::string>();
    result.rng = j.at("rng").get<std::string>();
    for (const auto& c : j.at("cells")) result.cells.push_back(cell_from_json(c));
    return result;
  } catch (const json::exception& e) {
    throw UsageError(std::string("results document: ") + e.what());
  }
}

std::string results_csv(const ExperimentResult& result) {
  std::string out = "n,k,c,m,lambda,successes,games,probability\n";
  for (const auto& c : result.cells) {
    out += std::to_string(c.n) + "," + std::to_string(c.k) + "," + shortest(c.c) +
           "," + std::to_string(c.m) + "," + shortest(c.lambda) + "," +
           std::to_string(c.successes) + "," + std::to_string(c.games) + "," +
           shortest(c.recovery_probability) + "\n";
  }
  return out;
}

void write_results(const ExperimentResult& result, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  std::ofstream json_out(base / "results.json");
  std::ofstream csv_out(base / "results.csv");
  if (!json_out || !csv_out) throw std::runtime_error("cannot write results to " + dir);
  json_out << results_json(result);
  csv_out << results_csv(result);
}

CalibrationResult run_calibration(const ExperimentConfig& config,
                                  std::ostream* log) {
  config.validate();
  if (config.calibration_multipliers.empty()) {
    throw UsageError("config: calibration needs at least one multiplier");
  }
  CalibrationResult out;
  double best = -1.0;
  for (double mult : config.calibration_multipliers) {
    ExperimentConfig cfg = config;
    cfg.lambda_multiplier = mult;
    ExperimentResult run = run_sweep(cfg, log);
    double mean = 0.0;
    for (const auto& c : run.cells) mean += c.recovery_probability;
    mean /= static_cast<double>(std::max<std::size_t>(run.cells.size(), 1));
    if (mean > best) {
      best = mean;
      out.chosen_multiplier = mult;
    }
    out.runs.push_back(std::move(run));
  }
  return out;
}

}  // namespace psne
