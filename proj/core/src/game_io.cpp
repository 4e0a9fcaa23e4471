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

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "psne/error.hpp"
#include "psne/game.hpp"

namespace psne {

using nlohmann::json;

namespace {

json game_json(const LinearInfluenceGame& game) {
  json w = json::array();
  for (int i = 0; i < game.n(); ++i) {
    json row = json::array();
    for (int j = 0; j < game.n(); ++j) row.push_back(game.weight(i, j));
    w.push_back(std::move(row));
  }
  json b = json::array();
  for (int i = 0; i < game.n(); ++i) b.push_back(game.bias(i));
  return json{{"n", game.n()}, {"w", std::move(w)}, {"b", std::move(b)}};
}

}  // namespace

std::string game_to_json(const GameDocument& doc) {
  json j = game_json(doc.game);
  if (doc.seed) j["seed"] = *doc.seed;
  if (doc.k) j["k"] = *doc.k;
  return j.dump(2) + "\n";
}

std::string game_to_json(const LinearInfluenceGame& game) {
  return game_to_json(GameDocument{game, std::nullopt, std::nullopt});
}

GameDocument game_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("malformed game document: ") + e.what());
  }
  try {
    const int n = j.at("n").get<int>();
    if (n < 1) throw UsageError("game document: n must be positive");
    const json& w = j.at("w");
    const json& b = j.at("b");
    if (!w.is_array() || w.size() != static_cast<std::size_t>(n) ||
        !b.is_array() || b.size() != static_cast<std::size_t>(n)) {
      throw UsageError("game document: w must be n x n and b length n");
    }
    Eigen::MatrixXd weights(n, n);
    Eigen::VectorXd biases(n);
    for (int i = 0; i < n; ++i) {
      const json& row = w[static_cast<std::size_t>(i)];
      if (!row.is_array() || row.size() != static_cast<std::size_t>(n)) {
        throw UsageError("game document: row " + std::to_string(i) +
                         " of w has the wrong length");
      }
      for (int c = 0; c < n; ++c) {
        weights(i, c) = row[static_cast<std::size_t>(c)].get<double>();
      }
      biases(i) = b[static_cast<std::size_t>(i)].get<double>();
    }
    GameDocument doc{LinearInfluenceGame(std::move(weights), std::move(biases)),
                     std::nullopt, std::nullopt};
    if (j.contains("seed")) doc.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("k")) doc.k = j["k"].get<int>();
    return doc;
  } catch (const json::exception& e) {
    throw UsageError(std::string("game document: ") + e.what());
  }
}

std::string psne_to_json(const PsneSet& psne) {
  json actions = json::array();
  for (ActionCode code : psne) {
    const JointAction x = JointAction::FromCode(code, psne.n());
    actions.push_back(std::vector<int>(x.actions().begin(), x.actions().end()));
  }
  json j{{"n", psne.n()}, {"count", psne.size()}, {"actions", std::move(actions)}};
  return j.dump() + "\n";
}

GameDocument read_game_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open game file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return game_from_json(buf.str());
}

void write_game_file(const std::string& path, const GameDocument& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write game file " + path);
  out << game_to_json(doc);
}

}  // namespace psne
