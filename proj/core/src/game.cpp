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

#include "psne/game.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iterator>
#include <limits>
#include <numeric>
#include <utility>

#include "psne/error.hpp"

namespace psne {
namespace {

void check_player(const LinearInfluenceGame& game, int i) {
  if (i < 0 || i >= game.n()) {
    throw UsageError("player index " + std::to_string(i) +
                     " out of range for n = " + std::to_string(game.n()));
  }
}

void check_action(const LinearInfluenceGame& game, const JointAction& x) {
  if (x.size() != game.n()) {
    throw UsageError("joint action has " + std::to_string(x.size()) +
                     " entries, game has " + std::to_string(game.n()) +
                     " players");
  }
}

void fnv1a(std::uint64_t& h, std::uint64_t word) {
  for (int byte = 0; byte < 8; ++byte) {
    h ^= (word >> (8 * byte)) & 0xffU;
    h *= 0x100000001b3ULL;
  }
}

}  // namespace

JointAction::JointAction(std::vector<int> actions)
    : actions_(std::move(actions)) {
  for (int a : actions_) {
    if (a != 1 && a != -1) {
      throw UsageError("joint action entries must be -1 or +1, got " +
                       std::to_string(a));
    }
  }
}

JointAction JointAction::FromCode(ActionCode code, int n) {
  if (n < 0 || n > kMaxCodablePlayers) {
    throw UsageError("cannot decode an action for n = " + std::to_string(n));
  }
  std::vector<int> actions(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) actions[static_cast<std::size_t>(j)] = action_of(code, j);
  JointAction x;
  x.actions_ = std::move(actions);
  return x;
}

ActionCode JointAction::code() const {
  if (size() > kMaxCodablePlayers) {
    throw CapacityError("joint action too long to encode");
  }
  ActionCode code = 0;
  for (int j = 0; j < size(); ++j) {
    if ((*this)[j] == 1) code |= ActionCode{1} << j;
  }
  return code;
}

JointAction JointAction::negated() const {
  JointAction x = *this;
  for (int& a : x.actions_) a = -a;
  return x;
}

LinearInfluenceGame::LinearInfluenceGame(Eigen::MatrixXd weights,
                                         Eigen::VectorXd biases)
    : weights_(std::move(weights)), biases_(std::move(biases)) {
  const auto n = biases_.size();
  if (n < 1) throw UsageError("a game needs at least one player");
  if (weights_.rows() != n || weights_.cols() != n) {
    throw UsageError("weight matrix must be n x n with n = " +
                     std::to_string(n));
  }
  if (!weights_.allFinite() || !biases_.allFinite()) {
    throw UsageError("game parameters must be finite");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (weights_(i, i) != 0.0) {
      throw UsageError("weight matrix diagonal must be zero (row " +
                       std::to_string(i) + ")");
    }
  }
}

LinearInfluenceGame LinearInfluenceGame::Zero(int n) {
  return LinearInfluenceGame(Eigen::MatrixXd::Zero(n, n),
                             Eigen::VectorXd::Zero(n));
}

std::string LinearInfluenceGame::content_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  fnv1a(h, static_cast<std::uint64_t>(n()));
  for (int i = 0; i < n(); ++i) {
    for (int j = 0; j < n(); ++j) fnv1a(h, double_bits(weights_(i, j)));
  }
  for (int i = 0; i < n(); ++i) fnv1a(h, double_bits(biases_(i)));
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

PsneSet::PsneSet(int n, std::vector<ActionCode> actions)
    : n_(n), actions_(std::move(actions)) {
  std::sort(actions_.begin(), actions_.end());
  actions_.erase(std::unique(actions_.begin(), actions_.end()),
                 actions_.end());
  lookup_.reserve(actions_.size());
  lookup_.insert(actions_.begin(), actions_.end());
}

double PsneSet::density() const {
  return static_cast<double>(actions_.size()) / std::ldexp(1.0, n_);
}

double payoff(const LinearInfluenceGame& game, int i, ActionCode x) {
  check_player(game, i);
  const int n = game.n();
  double influence = 0.0;
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    influence += game.weight(i, j) * action_of(x, j);
  }
  return action_of(x, i) * (influence - game.bias(i));
}

double payoff(const LinearInfluenceGame& game, int i, const JointAction& x) {
  check_action(game, x);
  check_player(game, i);
  double influence = 0.0;
  for (int j = 0; j < game.n(); ++j) {
    if (j == i) continue;
    influence += game.weight(i, j) * x[j];
  }
  return x[i] * (influence - game.bias(i));
}

bool is_psne(const LinearInfluenceGame& game, ActionCode x) {
  for (int i = 0; i < game.n(); ++i) {
    if (!(payoff(game, i, x) >= 0.0)) return false;
  }
  return true;
}

bool is_psne(const LinearInfluenceGame& game, const JointAction& x) {
  check_action(game, x);
  return is_psne(game, x.code());
}

PsneSet enumerate_psne(const LinearInfluenceGame& game, int cap) {
  const int n = game.n();
  if (cap > kMaxCodablePlayers) cap = kMaxCodablePlayers;
  if (n > cap) {
    throw CapacityError("PSNE enumeration is capped at n = " +
                        std::to_string(cap) + ", got n = " +
                        std::to_string(n));
  }
  // Row-major copy so the inner loop walks contiguous memory.
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
      w = game.weights();
  const Eigen::VectorXd& b = game.biases();
  std::vector<ActionCode> found;
  const ActionCode total = ActionCode{1} << n;
  for (ActionCode code = 0; code < total; ++code) {
    bool equilibrium = true;
    for (int i = 0; i < n && equilibrium; ++i) {
      const double* row = w.data() + static_cast<std::ptrdiff_t>(i) * n;
      double influence = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        influence += row[j] * action_of(code, j);
      }
      equilibrium = action_of(code, i) * (influence - b(i)) >= 0.0;
    }
    if (equilibrium) found.push_back(code);
  }
  return PsneSet(n, std::move(found));
}

double min_psne_payoff(const LinearInfluenceGame& game, const PsneSet& psne) {
  if (psne.empty()) throw DomainError("rho_min is undefined on an empty PSNE set");
  if (psne.n() != game.n()) throw UsageError("PSNE set and game disagree on n");
  double rho = std::numeric_limits<double>::infinity();
  for (ActionCode x : psne) {
    for (int i = 0; i < game.n(); ++i) rho = std::min(rho, payoff(game, i, x));
  }
  return rho;
}

Neighborhood neighborhood(const LinearInfluenceGame& game, int i,
                          double zero_tol) {
  check_player(game, i);
  Neighborhood hood;
  hood.player = i;
  for (int j = 0; j < game.n(); ++j) {
    const double w = game.weight(i, j);
    if (j == i || !(std::abs(w) > zero_tol)) continue;
    hood.neighbors.push_back(j);
    hood.signs.push_back(w > 0.0 ? 1 : -1);
  }
  return hood;
}

int max_in_degree(const LinearInfluenceGame& game) {
  int k = 0;
  for (int i = 0; i < game.n(); ++i) {
    k = std::max(k, static_cast<int>(neighborhood(game, i).neighbors.size()));
  }
  return k;
}

LinearInfluenceGame random_lig(int n, int k, Rng& rng) {
  if (n < 2 || n > kMaxCodablePlayers) {
    throw UsageError("random_lig needs 2 <= n <= 63, got n = " +
                     std::to_string(n));
  }
  if (k < 1 || k > n - 1) {
    throw UsageError("random_lig needs 1 <= k <= n - 1, got k = " +
                     std::to_string(k));
  }
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  std::vector<int> others(static_cast<std::size_t>(n - 1));
  std::vector<int> chosen(static_cast<std::size_t>(k));
  for (int i = 0; i < n; ++i) {
    std::iota(others.begin(), others.begin() + i, 0);
    std::iota(others.begin() + i, others.end(), i + 1);
    std::sample(others.begin(), others.end(), chosen.begin(), k, rng);
    for (int j : chosen) w(i, j) = -1.0;
  }
  return LinearInfluenceGame(std::move(w), Eigen::VectorXd::Zero(n));
}

LinearInfluenceGame scale_game(const LinearInfluenceGame& game, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw UsageError("scale factor must be positive and finite");
  }
  return LinearInfluenceGame(c * game.weights(), c * game.biases());
}

}  // namespace psne
