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

#include "psne/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "psne/error.hpp"
#include "psne/sampler.hpp"

namespace psne {
namespace {

void check_exact_capacity(int n) {
  if (n > kExactExpectationCap) {
    throw CapacityError("exact expectations are capped at n = " +
                        std::to_string(kExactExpectationCap) + ", got n = " +
                        std::to_string(n));
  }
}

// Adds w * eta(v . z) z z^T into acc.
void accumulate_curvature(Eigen::MatrixXd& acc, const ParamVector& v,
                          const FeatureVector& z, double w) {
  acc.noalias() += (w * eta(v.dot(z))) * (z * z.transpose());
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

}  // namespace

double nu(double q, std::size_t ne_size, int n) {
  const double total = std::ldexp(1.0, n);
  if (ne_size < 1 || static_cast<double>(ne_size) >= total) {
    throw DomainError("nu needs 1 <= |NE| <= 2^n - 1");
  }
  const double density = static_cast<double>(ne_size) / total;
  if (!(q > density && q < 1.0)) {
    throw DomainError("nu needs |NE|/2^n < q < 1");
  }
  return (q - density) / (1.0 - density);
}

double kappa(double rho_min) {
  if (!(rho_min >= 0.0)) throw UsageError("kappa needs rho_min >= 0");
  return 1.0 / (1.0 + std::exp(rho_min));
}

HessianDecomposition expected_hessian(const LinearInfluenceGame& game,
                                      const PsneSet& psne, double q, int i,
                                      const ExpectationOptions& options) {
  const int n = game.n();
  if (psne.n() != n) throw UsageError("PSNE set and game disagree on n");
  if (options.mode == ExpectationMode::kExact) check_exact_capacity(n);

  HessianDecomposition out;
  out.nu = nu(q, psne.size(), n);
  const ParamVector v = pack_params(game, i);

  out.h_ne = Eigen::MatrixXd::Zero(n, n);
  for (ActionCode x : psne) accumulate_curvature(out.h_ne, v, featurize(x, n, i), 1.0);
  out.h_ne /= static_cast<double>(psne.size());

  out.h_rad = Eigen::MatrixXd::Zero(n, n);
  if (options.mode == ExpectationMode::kExact) {
    const ActionCode total = ActionCode{1} << n;
    for (ActionCode x = 0; x < total; ++x) {
      accumulate_curvature(out.h_rad, v, featurize(x, n, i), 1.0);
    }
    out.h_rad /= static_cast<double>(total);
  } else {
    if (options.mc_samples < 2) throw UsageError("Monte Carlo needs >= 2 samples");
    Rng rng(options.seed);
    std::uniform_int_distribution<ActionCode> draw(0, (ActionCode{1} << n) - 1);
    Eigen::MatrixXd sq = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t s = 0; s < options.mc_samples; ++s) {
      const FeatureVector z = featurize(draw(rng), n, i);
      const Eigen::MatrixXd term = eta(v.dot(z)) * (z * z.transpose());
      out.h_rad += term;
      sq += term.cwiseProduct(term);
    }
    const double count = static_cast<double>(options.mc_samples);
    out.h_rad /= count;
    const Eigen::MatrixXd var =
        ((sq / count - out.h_rad.cwiseProduct(out.h_rad)) * (count / (count - 1.0)))
            .cwiseMax(0.0);
    out.h_rad_stderr = (var / count).cwiseSqrt();
  }
  out.h_ne = symmetrized(out.h_ne);
  out.h_rad = symmetrized(out.h_rad);
  out.h_star = out.nu * out.h_ne + (1.0 - out.nu) * out.h_rad;
  return out;
}

Eigen::MatrixXd expected_hessian_direct(const LinearInfluenceGame& game,
                                        const PsneSet& psne, double q, int i) {
  const int n = game.n();
  check_exact_capacity(n);
  const ParamVector v = pack_params(game, i);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  const ActionCode total = ActionCode{1} << n;
  for (ActionCode x = 0; x < total; ++x) {
    accumulate_curvature(h, v, featurize(x, n, i), exact_pmf(x, psne, q, n));
  }
  return symmetrized(h);
}

Eigen::MatrixXd expected_second_moment(const PsneSet& psne, double q, int i) {
  const int n = psne.n();
  check_exact_capacity(n);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  const ActionCode total = ActionCode{1} << n;
  for (ActionCode x = 0; x < total; ++x) {
    const FeatureVector z = featurize(x, n, i);
    m.noalias() += exact_pmf(x, psne, q, n) * (z * z.transpose());
  }
  return symmetrized(m);
}

std::vector<int> parameter_support(const LinearInfluenceGame& game, int i) {
  const ParamVector v = pack_params(game, i);
  std::vector<int> support;
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (v(j) != 0.0) support.push_back(static_cast<int>(j));
  }
  return support;
}

Eigen::MatrixXd restrict(const Eigen::MatrixXd& m, const std::vector<int>& idx) {
  const auto s = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd out(s, s);
  for (Eigen::Index a = 0; a < s; ++a) {
    for (Eigen::Index b = 0; b < s; ++b) {
      out(a, b) = m(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
    }
  }
  return out;
}

double min_eigenvalue(const Eigen::MatrixXd& symmetric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric,
                                                        Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw InternalError("eigensolver failed");
  return solver.eigenvalues().minCoeff();
}

double max_eigenvalue(const Eigen::MatrixXd& symmetric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric,
                                                        Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw InternalError("eigensolver failed");
  return solver.eigenvalues().maxCoeff();
}

bool AssumptionReport::derivation_bounds_hold(double tol) const {
  if (!c_min_est || !d_max_est) return true;
  return *c_min_est >= c_min_lower_bound - tol &&
         *d_max_est <= d_max_upper_bound + tol;
}

AssumptionReport assumption_report(const LinearInfluenceGame& game,
                                   const PsneSet& psne, double q, int i) {
  const int n = game.n();
  check_exact_capacity(n);
  AssumptionReport report;
  report.player = i;
  report.support = parameter_support(game, i);
  report.rho_min = min_psne_payoff(game, psne);
  report.kappa = kappa(std::max(report.rho_min, 0.0));

  const HessianDecomposition h = expected_hessian(game, psne, q, i);
  report.nu = h.nu;
  report.hessian_decomposition_residual =
      (h.h_star - expected_hessian_direct(game, psne, q, i)).cwiseAbs().maxCoeff();

  const double s = static_cast<double>(report.support.size());
  report.c_min_lower_bound =
      (1.0 - report.nu) * eta(pack_params(game, i).lpNorm<1>());
  report.d_max_upper_bound = report.nu * s + (1.0 - report.nu);
  if (report.support.empty()) return report;

  report.c_min_est = min_eigenvalue(restrict(h.h_star, report.support));
  report.d_max_est =
      max_eigenvalue(restrict(expected_second_moment(psne, q, i), report.support));
  report.payoff_condition_met =
      report.rho_min > 5.0 * *report.c_min_est / *report.d_max_est;
  return report;
}

double lemma2_gradient_bound(std::size_t m, int n, double delta, double nu,
                             double kappa) {
  return nu * kappa + std::sqrt(2.0 / static_cast<double>(m) *
                                std::log(2.0 * n / delta));
}

double gradient_norm_at_truth(const LinearInfluenceGame& game,
                              const ActionHistogram& data, int i) {
  return gradient(pack_params(game, i), player_features(data, i))
      .lpNorm<Eigen::Infinity>();
}

SampleBound theorem_sample_bound(int k, int n, double delta, double c_min,
                                 double d_max, double nu, double kappa) {
  SampleBound bound;
  bound.k_margin = 5.0 * c_min * c_min / (32.0 * k * d_max) - nu * kappa;
  const double nn = static_cast<double>(n);
  const double log_union = std::log(6.0 * nn * nn / delta);
  const double log_support = std::log(3.0 * k * nn / delta);
  bound.hessian_term = 2.0 * k / c_min * log_support;
  bound.scatter_term = 4.0 * k / (1.0 - nu) * log_support;
  bound.feasible = bound.k_margin > 0.0;
  if (!bound.feasible) return bound;
  bound.curvature_term = 2.0 / (bound.k_margin * bound.k_margin) * log_union;
  const double worst =
      std::max({bound.curvature_term, bound.hessian_term, bound.scatter_term});
  bound.samples = static_cast<std::uint64_t>(std::ceil(worst));
  return bound;
}

Lemma1Result lemma1_eigenvalue_check(const LinearInfluenceGame& game,
                                     const PsneSet& psne, double q, int i,
                                     std::size_t m, int trials,
                                     std::uint64_t seed) {
  if (trials < 1) throw UsageError("lemma1_eigenvalue_check needs trials >= 1");
  const AssumptionReport report = assumption_report(game, psne, q, i);
  if (report.support.empty()) {
    throw DomainError("player " + std::to_string(i) + " has an empty support");
  }
  Lemma1Result out;
  out.c_min_est = *report.c_min_est;
  out.d_max_est = *report.d_max_est;
  const double s = static_cast<double>(report.support.size());
  const double md = static_cast<double>(m);
  out.min_eig_probability_bound = 1.0 - s * std::exp(-md * out.c_min_est / (2.0 * s));
  out.max_eig_probability_bound = 1.0 - s * std::exp(-md * (1.0 - report.nu) / (4.0 * s));

  const ParamVector v = pack_params(game, i);
  int min_pass = 0, max_pass = 0, raw_pass = 0;
  for (int t = 0; t < trials; ++t) {
    const Dataset data = sample_dataset(psne, game.n(), q, m,
                                        hash_seed({seed, static_cast<std::uint64_t>(i),
                                                   static_cast<std::uint64_t>(t)}));
    const FeatureMatrix features = player_features(data, i);
    const Eigen::MatrixXd h = restrict(hessian(v, features), report.support);
    const Eigen::MatrixXd& z = features.z();
    const Eigen::MatrixXd scatter_sum = restrict(
        symmetrized(z.transpose() * features.counts().asDiagonal() * z),
        report.support);
    const double scatter_max = max_eigenvalue(scatter_sum);
    min_pass += min_eigenvalue(h) >= out.c_min_est / 2.0 ? 1 : 0;
    max_pass += scatter_max / md <= 2.0 * out.d_max_est ? 1 : 0;
    raw_pass += scatter_max <= 2.0 * out.d_max_est ? 1 : 0;
  }
  out.min_eig_pass_rate = static_cast<double>(min_pass) / trials;
  out.max_eig_pass_rate = static_cast<double>(max_pass) / trials;
  out.max_eig_unnormalized_pass_rate = static_cast<double>(raw_pass) / trials;
  return out;
}

}  // namespace psne
