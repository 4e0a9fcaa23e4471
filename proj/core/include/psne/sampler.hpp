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

#ifndef PSNE_SAMPLER_HPP_
#define PSNE_SAMPLER_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "psne/game.hpp"

namespace psne {

struct DatasetMeta {
  double q = 0.0;
  std::uint64_t seed = 0;
  std::string game_id;
  std::size_t ne_size = 0;  // 0 when unknown (e.g. read back from disk)
  std::string rng = kRngId;
};

// m observed joint actions, stored by action code.
class Dataset {
 public:
  Dataset() = default;
  Dataset(int n, std::vector<ActionCode> samples, DatasetMeta meta);

  int n() const { return n_; }
  std::size_t size() const { return samples_.size(); }
  const std::vector<ActionCode>& codes() const { return samples_; }
  JointAction sample(std::size_t l) const {
    return JointAction::FromCode(samples_[l], n_);
  }
  const DatasetMeta& meta() const { return meta_; }

  friend bool operator==(const Dataset& a, const Dataset& b) {
    return a.n_ == b.n_ && a.samples_ == b.samples_;
  }

 private:
  int n_ = 0;
  std::vector<ActionCode> samples_;
  DatasetMeta meta_;
};

// Throws DomainError unless 1 <= |psne| <= 2^n - 1 and UsageError unless
// |psne| / 2^n < q < 1.
void check_observation_model(const PsneSet& psne, int n, double q);

// Draws m i.i.d. actions: with probability q uniform over `psne`, otherwise
// uniform over the complement (rejection against PSNE membership).
Dataset sample_dataset(const PsneSet& psne, int n, double q, std::size_t m,
                       std::uint64_t seed, std::string game_id = {});

// Fraction of samples that are members of `psne`.
double empirical_mixture_fraction(const Dataset& dataset, const PsneSet& psne);

// Probability of x under the noisy-equilibrium observation model.
double exact_pmf(ActionCode x, const PsneSet& psne, double q, int n);
double exact_pmf(const JointAction& x, const PsneSet& psne, double q);

// Same distribution written as nu * Uniform(NE) + (1 - nu) * Uniform(all).
double exact_pmf_mixture_form(ActionCode x, const PsneSet& psne, double q,
                              int n);

// Text format: header line followed by one line of n tokens (-1/+1) per
// sample. Readers reject any other token.
void write_dataset(std::ostream& out, const Dataset& dataset);
Dataset read_dataset(std::istream& in);
void write_dataset_file(const std::string& path, const Dataset& dataset);
Dataset read_dataset_file(const std::string& path);

}  // namespace psne

#endif  // PSNE_SAMPLER_HPP_
