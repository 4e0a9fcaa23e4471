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

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "psne/error.hpp"
#include "psne/rng.hpp"

namespace psne {
namespace {

PsneSet Anti2Psne() {
  return PsneSet(2, {JointAction({1, -1}).code(), JointAction({-1, 1}).code()});
}

// A fixed n = 10 game with a non-trivial equilibrium set.
struct FixedGame {
  LinearInfluenceGame game;
  PsneSet psne;
};

FixedGame TenPlayerGame() {
  for (std::uint64_t seed = 1;; ++seed) {
    Rng rng(seed);
    LinearInfluenceGame g = random_lig(10, 1, rng);
    PsneSet s = enumerate_psne(g);
    if (!s.empty()) return {std::move(g), std::move(s)};
  }
}

TEST(Sampler, HighQConcentratesOnSingleEquilibrium) {
  const PsneSet one(3, {5});
  const Dataset d = sample_dataset(one, 3, 0.999, 20000, 4);
  EXPECT_GE(empirical_mixture_fraction(d, one), 0.99);
}

TEST(Sampler, CltOnMixtureFraction) {
  const double q = 0.6;
  const std::size_t m = 100000;
  const Dataset d = sample_dataset(Anti2Psne(), 2, q, m, 21);
  EXPECT_NEAR(empirical_mixture_fraction(d, Anti2Psne()), q,
              3 * std::sqrt(q * (1 - q) / m));
}

TEST(Sampler, ProtocolScaleFraction) {
  const FixedGame fg = TenPlayerGame();
  const double q = 0.01;
  const std::size_t m = 1000000;
  const Dataset d = sample_dataset(fg.psne, 10, q, m, 33);
  EXPECT_NEAR(empirical_mixture_fraction(d, fg.psne), q,
              3 * std::sqrt(q * (1 - q) / m));
}

TEST(Sampler, Preconditions) {
  EXPECT_THROW(sample_dataset(PsneSet(2, {}), 2, 0.5, 10, 1), DomainError);
  EXPECT_THROW(sample_dataset(PsneSet(2, {0, 1, 2, 3}), 2, 0.5, 10, 1), DomainError);
  EXPECT_THROW(sample_dataset(Anti2Psne(), 2, 0.5, 10, 1), UsageError);
  EXPECT_THROW(sample_dataset(Anti2Psne(), 2, 1.0, 10, 1), UsageError);
  EXPECT_THROW(sample_dataset(Anti2Psne(), 2, 0.6, 0, 1), UsageError);
}

TEST(Sampler, Deterministic) {
  const Dataset a = sample_dataset(Anti2Psne(), 2, 0.7, 1000, 5);
  const Dataset b = sample_dataset(Anti2Psne(), 2, 0.7, 1000, 5);
  const Dataset c = sample_dataset(Anti2Psne(), 2, 0.7, 1000, 6);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  std::ostringstream sa, sb;
  write_dataset(sa, a);
  write_dataset(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
}

TEST(MixtureFraction, Extremes) {
  EXPECT_EQ(empirical_mixture_fraction(Dataset(2, {1, 2, 1}, {}), Anti2Psne()), 1.0);
  EXPECT_EQ(empirical_mixture_fraction(Dataset(2, {0, 3}, {}), Anti2Psne()), 0.0);
}

TEST(ExactPmf, SmallExamples) {
  EXPECT_DOUBLE_EQ(exact_pmf(JointAction({1, -1}), Anti2Psne(), 0.6), 0.3);
  EXPECT_DOUBLE_EQ(exact_pmf(JointAction({1, 1}), Anti2Psne(), 0.6), 0.2);
}

TEST(ExactPmf, NormalizedTwoFormsAndOracle) {
  Rng rng(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int rep = 0; rep < 30; ++rep) {
    const int n = 2 + rep % 9;
    const std::uint64_t total = std::uint64_t{1} << n;
    std::vector<ActionCode> codes;
    for (ActionCode x = 0; x < total; ++x) {
      if (unit(rng) < 0.2) codes.push_back(x);
    }
    if (codes.empty()) codes.push_back(0);
    if (codes.size() == total) codes.pop_back();
    const PsneSet s(n, codes);
    const double floor_q = s.density();
    const double q = floor_q + (1 - floor_q) * (0.01 + 0.98 * unit(rng));
    double sum = 0.0;
    for (ActionCode x = 0; x < total; ++x) {
      const double p = exact_pmf(x, s, q, n);
      sum += p;
      EXPECT_NEAR(exact_pmf_mixture_form(x, s, q, n), p, 1e-12 * p);
      EXPECT_NEAR(oracle::mixture_pmf(x, codes, q, n), p, 1e-15);
    }
    EXPECT_NEAR(sum, 1.0, 1e-10);
  }
}

TEST(Sampler, ChiSquareGoodnessOfFit) {
  const FixedGame fg = TenPlayerGame();
  const double q = 0.01;
  const std::size_t m = 1000000;
  const Dataset d = sample_dataset(fg.psne, 10, q, m, 2026);
  std::vector<double> counts(1024, 0.0);
  for (ActionCode x : d.codes()) counts[x] += 1.0;
  double chi2 = 0.0;
  for (ActionCode x = 0; x < 1024; ++x) {
    const double expected = m * exact_pmf(x, fg.psne, q, 10);
    chi2 += (counts[x] - expected) * (counts[x] - expected) / expected;
  }
  EXPECT_LT(chi2, oracle::chi_square_quantile(1023, 0.999));
}

TEST(DatasetIo, RoundTrip) {
  const Dataset d = sample_dataset(Anti2Psne(), 2, 0.6, 50, 9, "abc");
  std::stringstream s;
  write_dataset(s, d);
  const Dataset back = read_dataset(s);
  EXPECT_EQ(back, d);
  EXPECT_EQ(back.meta().q, 0.6);
  EXPECT_EQ(back.meta().seed, 9u);
  EXPECT_EQ(back.meta().game_id, "abc");
}

TEST(DatasetIo, RejectsMalformedInput) {
  const std::string header = "psne-lab-dataset v1 n=2 m=2 q=0.6 seed=1 game=-\n";
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_dataset(in);
  };
  EXPECT_NO_THROW(parse(header + "+1 -1\n-1 +1\n"));
  EXPECT_THROW(parse(header + "+1 -1\n"), UsageError);
  EXPECT_THROW(parse(header + "+1 -1\n-1 0\n"), UsageError);
  EXPECT_THROW(parse(header + "+1 -1\n-1 +1 +1\n"), UsageError);
  EXPECT_THROW(parse(header + "+1 -1\n-1 +1\n+1 +1\n"), UsageError);
  EXPECT_THROW(parse("garbage\n"), UsageError);
  EXPECT_THROW(parse(""), UsageError);
}

}  // namespace
}  // namespace psne
