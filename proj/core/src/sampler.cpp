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

#include "psne/sampler.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <utility>

#include "psne/error.hpp"

namespace psne {
namespace {

constexpr const char* kDatasetMagic = "psne-lab-dataset";

std::string shortest(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

// Parses "key=value" and returns value; throws if the key differs.
std::string header_field(const std::string& token, const std::string& key) {
  const std::string prefix = key + "=";
  if (token.rfind(prefix, 0) != 0) {
    throw UsageError("dataset header: expected '" + prefix + "...', got '" +
                     token + "'");
  }
  return token.substr(prefix.size());
}

template <typename T>
T parse_number(const std::string& s, const std::string& what) {
  T value{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw UsageError("dataset header: bad " + what + " '" + s + "'");
  }
  return value;
}

}  // namespace

Dataset::Dataset(int n, std::vector<ActionCode> samples, DatasetMeta meta)
    : n_(n), samples_(std::move(samples)), meta_(std::move(meta)) {
  if (n_ < 1 || n_ > kMaxCodablePlayers) {
    throw UsageError("dataset n must be in [1, 63]");
  }
  if (samples_.empty()) throw UsageError("a dataset needs at least one sample");
  const ActionCode limit = ActionCode{1} << n_;
  for (ActionCode c : samples_) {
    if (c >= limit) throw UsageError("dataset sample does not fit n players");
  }
}

void check_observation_model(const PsneSet& psne, int n, double q) {
  if (psne.n() != n) throw UsageError("PSNE set and n disagree");
  const double total = std::ldexp(1.0, n);
  if (psne.empty() || static_cast<double>(psne.size()) >= total) {
    throw DomainError("trivial game: |PSNE| = " + std::to_string(psne.size()) +
                      " must lie in [1, 2^n - 1]");
  }
  const double floor_q = static_cast<double>(psne.size()) / total;
  if (!(q > floor_q && q < 1.0)) {
    throw UsageError("q = " + shortest(q) + " outside (" + shortest(floor_q) +
                     ", 1)");
  }
}

Dataset sample_dataset(const PsneSet& psne, int n, double q, std::size_t m,
                       std::uint64_t seed, std::string game_id) {
  check_observation_model(psne, n, q);
  if (m < 1) throw UsageError("sample count m must be at least 1");
  Rng rng(seed);
  std::bernoulli_distribution from_equilibria(q);
  std::uniform_int_distribution<std::size_t> pick_equilibrium(0, psne.size() - 1);
  std::uniform_int_distribution<ActionCode> pick_action(
      0, (ActionCode{1} << n) - 1);
  const auto& members = psne.codes();

  std::vector<ActionCode> samples;
  samples.reserve(m);
  for (std::size_t l = 0; l < m; ++l) {
    if (from_equilibria(rng)) {
      samples.push_back(members[pick_equilibrium(rng)]);
    } else {
      ActionCode x;
      do {
        x = pick_action(rng);
      } while (psne.contains(x));
      samples.push_back(x);
    }
  }
  DatasetMeta meta{q, seed, std::move(game_id), psne.size(), kRngId};
  return Dataset(n, std::move(samples), std::move(meta));
}

double empirical_mixture_fraction(const Dataset& dataset, const PsneSet& psne) {
  if (dataset.n() != psne.n()) throw UsageError("dataset and PSNE set disagree on n");
  std::size_t hits = 0;
  for (ActionCode x : dataset.codes()) hits += psne.contains(x) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(dataset.size());
}

double exact_pmf(ActionCode x, const PsneSet& psne, double q, int n) {
  check_observation_model(psne, n, q);
  const double ne = static_cast<double>(psne.size());
  if (psne.contains(x)) return q / ne;
  return (1.0 - q) / (std::ldexp(1.0, n) - ne);
}

double exact_pmf(const JointAction& x, const PsneSet& psne, double q) {
  return exact_pmf(x.code(), psne, q, x.size());
}

double exact_pmf_mixture_form(ActionCode x, const PsneSet& psne, double q,
                              int n) {
  check_observation_model(psne, n, q);
  const double total = std::ldexp(1.0, n);
  const double ne = static_cast<double>(psne.size());
  const double density = ne / total;
  const double nu = (q - density) / (1.0 - density);
  const double in_ne = psne.contains(x) ? 1.0 : 0.0;
  return nu * in_ne / ne + (1.0 - nu) / total;
}

void write_dataset(std::ostream& out, const Dataset& dataset) {
  const DatasetMeta& meta = dataset.meta();
  out << kDatasetMagic << " v1 n=" << dataset.n() << " m=" << dataset.size()
      << " q=" << shortest(meta.q) << " seed=" << meta.seed
      << " game=" << (meta.game_id.empty() ? "-" : meta.game_id) << '\n';
  std::string line;
  for (ActionCode x : dataset.codes()) {
    line.clear();
    for (int j = 0; j < dataset.n(); ++j) {
      if (j > 0) line += ' ';
      line += action_of(x, j) > 0 ? "+1" : "-1";
    }
    line += '\n';
    out << line;
  }
}

Dataset read_dataset(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw UsageError("dataset: missing header");
  std::istringstream hs(header);
  std::string magic, version, tn, tm, tq, tseed, tgame, extra;
  hs >> magic >> version >> tn >> tm >> tq >> tseed >> tgame;
  if (magic != kDatasetMagic || version != "v1" || tgame.empty() || (hs >> extra)) {
    throw UsageError("dataset: unrecognized header '" + header + "'");
  }
  const int n = parse_number<int>(header_field(tn, "n"), "n");
  const auto m = parse_number<std::size_t>(header_field(tm, "m"), "m");
  DatasetMeta meta;
  meta.q = parse_number<double>(header_field(tq, "q"), "q");
  meta.seed = parse_number<std::uint64_t>(header_field(tseed, "seed"), "seed");
  meta.game_id = header_field(tgame, "game");
  if (meta.game_id == "-") meta.game_id.clear();
  if (n < 1 || n > kMaxCodablePlayers) throw UsageError("dataset: n out of range");

  std::vector<ActionCode> samples;
  samples.reserve(m);
  std::string line, token;
  while (samples.size() < m && std::getline(in, line)) {
    std::istringstream ls(line);
    ActionCode code = 0;
    int j = 0;
    while (ls >> token) {
      if (j >= n) throw UsageError("dataset: too many tokens on sample line");
      if (token == "+1") {
        code |= ActionCode{1} << j;
      } else if (token != "-1") {
        throw UsageError("dataset: invalid token '" + token + "'");
      }
      ++j;
    }
    if (j != n) throw UsageError("dataset: sample line has " + std::to_string(j) +
                                 " tokens, expected " + std::to_string(n));
    samples.push_back(code);
  }
  if (samples.size() != m) {
    throw UsageError("dataset: header promises " + std::to_string(m) +
                     " samples, found " + std::to_string(samples.size()));
  }
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) {
      throw UsageError("dataset: trailing content after the last sample");
    }
  }
  return Dataset(n, std::move(samples), std::move(meta));
}

void write_dataset_file(const std::string& path, const Dataset& dataset) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset file " + path);
  write_dataset(out, dataset);
}

Dataset read_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open dataset file " + path);
  return read_dataset(in);
}

}  // namespace psne
