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

#ifndef PSNE_GAME_HPP_
#define PSNE_GAME_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>

#include "psne/rng.hpp"

namespace psne {

// Canonical bit encoding of a joint action: bit j is 1 iff player j plays
// +1. Player 0 is the least significant bit.
using ActionCode = std::uint64_t;

inline constexpr int kMaxCodablePlayers = 63;
inline constexpr int kDefaultEnumerationCap = 25;

// Returns +1 or -1, the action of `player` in `code`.
inline int action_of(ActionCode code, int player) {
  return ((code >> player) & 1U) ? 1 : -1;
}

// One +/-1 assignment to every player.
class JointAction {
 public:
  JointAction() = default;
  // Throws UsageError unless every entry is -1 or +1.
  explicit JointAction(std::vector<int> actions);

  static JointAction FromCode(ActionCode code, int n);

  int size() const { return static_cast<int>(actions_.size()); }
  int operator[](int i) const { return actions_[static_cast<std::size_t>(i)]; }
  std::span<const int> actions() const { return actions_; }

  ActionCode code() const;
  JointAction negated() const;

  friend bool operator==(const JointAction&, const JointAction&) = default;

 private:
  std::vector<int> actions_;
};

// G(n) = (W, b) with zero diagonal. Payoff of player i under x is
// x_i * (sum_{j != i} W_ij x_j - b_i).
class LinearInfluenceGame {
 public:
  LinearInfluenceGame() = default;
  // Throws UsageError on shape mismatch, non-zero diagonal, non-finite
  // entries or n < 1.
  LinearInfluenceGame(Eigen::MatrixXd weights, Eigen::VectorXd biases);

  static LinearInfluenceGame Zero(int n);

  int n() const { return static_cast<int>(biases_.size()); }
  const Eigen::MatrixXd& weights() const { return weights_; }
  const Eigen::VectorXd& biases() const { return biases_; }
  double weight(int i, int j) const { return weights_(i, j); }
  double bias(int i) const { return biases_(i); }

  // 64-bit FNV-1a over n, row-major W and b, as 16 hex digits.
  std::string content_hash() const;

  friend bool operator==(const LinearInfluenceGame& a,
                         const LinearInfluenceGame& b) {
    return a.weights_ == b.weights_ && a.biases_ == b.biases_;
  }

 private:
  Eigen::MatrixXd weights_;
  Eigen::VectorXd biases_;
};

// PSNE set of a game, in enumeration order (ascending action code).
class PsneSet {
 public:
  PsneSet() = default;
  PsneSet(int n, std::vector<ActionCode> actions);

  int n() const { return n_; }
  std::size_t size() const { return actions_.size(); }
  bool empty() const { return actions_.empty(); }
  const std::vector<ActionCode>& codes() const { return actions_; }
  bool contains(ActionCode code) const { return lookup_.contains(code); }
  bool contains(const JointAction& x) const { return contains(x.code()); }

  // Fraction |NE| / 2^n.
  double density() const;

  auto begin() const { return actions_.begin(); }
  auto end() const { return actions_.end(); }

  friend bool operator==(const PsneSet& a, const PsneSet& b) {
    return a.n_ == b.n_ && a.actions_ == b.actions_;
  }

 private:
  int n_ = 0;
  std::vector<ActionCode> actions_;
  std::unordered_set<ActionCode> lookup_;
};

struct Neighborhood {
  int player = 0;
  std::vector<int> neighbors;  // ascending, excludes `player`
  std::vector<int> signs;      // sign(W_ij), aligned with `neighbors`

  friend bool operator==(const Neighborhood&, const Neighborhood&) = default;
};

double payoff(const LinearInfluenceGame& game, int i, const JointAction& x);
double payoff(const LinearInfluenceGame& game, int i, ActionCode x);

bool is_psne(const LinearInfluenceGame& game, const JointAction& x);
bool is_psne(const LinearInfluenceGame& game, ActionCode x);

// Exhaustive scan of {-1,+1}^n. Throws CapacityError when n > cap.
PsneSet enumerate_psne(const LinearInfluenceGame& game,
                       int cap = kDefaultEnumerationCap);

// rho_min: smallest payoff over all equilibria and players. Throws
// DomainError when `psne` is empty.
double min_psne_payoff(const LinearInfluenceGame& game, const PsneSet& psne);

// Neighbors j with |W_ij| > zero_tol.
Neighborhood neighborhood(const LinearInfluenceGame& game, int i,
                          double zero_tol = 0.0);

// Largest in-degree over players.
int max_in_degree(const LinearInfluenceGame& game);

// W with exactly k entries equal to -1 per row, chosen uniformly among the
// off-diagonal positions, and b = 0.
LinearInfluenceGame random_lig(int n, int k, Rng& rng);

// (c W, c b); leaves the PSNE set unchanged for c > 0.
LinearInfluenceGame scale_game(const LinearInfluenceGame& game, double c);

// On-disk game document.
struct GameDocument {
  LinearInfluenceGame game;
  std::optional<std::uint64_t> seed;
  std::optional<int> k;
};

std::string game_to_json(const GameDocument& doc);
std::string game_to_json(const LinearInfluenceGame& game);
GameDocument game_from_json(std::string_view text);

std::string psne_to_json(const PsneSet& psne);

GameDocument read_game_file(const std::string& path);
void write_game_file(const std::string& path, const GameDocument& doc);

}  // namespace psne

#endif  // PSNE_GAME_HPP_
