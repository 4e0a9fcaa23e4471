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

#include "psne/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "psne/error.hpp"

namespace psne {
namespace {

// Up to this many players the histogram is built by direct counting.
constexpr int kDenseHistogramPlayers = 20;

// 1 / (1 + e^a), i.e. sigma(-a).
double logistic_complement(double a) {
  if (a >= 0.0) {
    const double e = std::exp(-a);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(a));
}

void check_dims(const ParamVector& v, const FeatureMatrix& features) {
  if (v.size() != features.dim()) {
    throw UsageError("parameter vector has " + std::to_string(v.size()) +
                     " entries, features have " +
                     std::to_string(features.dim()) + " columns");
  }
}

ParamVector prox_l1(const ParamVector& u, double tau, bool penalize_bias) {
  ParamVector out(u.size());
  for (Eigen::Index j = 0; j < u.size(); ++j) out(j) = soft_threshold(u(j), tau);
  if (!penalize_bias && u.size() > 0) out(u.size() - 1) = u(u.size() - 1);
  return out;
}

}  // namespace

FeatureMatrix::FeatureMatrix(Eigen::MatrixXd rows)
    : FeatureMatrix(std::move(rows), Eigen::VectorXd()) {}

FeatureMatrix::FeatureMatrix(Eigen::MatrixXd rows, Eigen::VectorXd counts)
    : rows_(std::move(rows)), counts_(std::move(counts)) {
  if (counts_.size() == 0) counts_ = Eigen::VectorXd::Ones(rows_.rows());
  if (counts_.size() != rows_.rows()) {
    throw UsageError("feature matrix: one count per row required");
  }
  if (rows_.rows() == 0) throw UsageError("feature matrix has no rows");
  if ((counts_.array() < 0.0).any()) {
    throw UsageError("feature matrix: counts must be non-negative");
  }
  total_ = counts_.sum();
  if (!(total_ > 0.0)) throw UsageError("feature matrix: total weight is zero");
}

FeatureVector featurize(ActionCode x, int n, int i) {
  if (i < 0 || i >= n) {
    throw UsageError("player index " + std::to_string(i) + " out of range");
  }
  FeatureVector z(n);
  const int xi = action_of(x, i);
  Eigen::Index pos = 0;
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    z(pos++) = xi * action_of(x, j);
  }
  z(pos) = xi;
  return z;
}

FeatureVector featurize(const JointAction& x, int i) {
  return featurize(x.code(), x.size(), i);
}

ParamVector pack_params(const LinearInfluenceGame& game, int i) {
  const int n = game.n();
  if (i < 0 || i >= n) throw UsageError("player index out of range");
  ParamVector v(n);
  Eigen::Index pos = 0;
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    v(pos++) = game.weight(i, j);
  }
  v(pos) = -game.bias(i);
  return v;
}

void unpack_params(const ParamVector& v, int i, Eigen::MatrixXd& weights,
                   Eigen::VectorXd& biases) {
  const auto n = v.size();
  if (weights.rows() != n || weights.cols() != n || biases.size() != n ||
      i < 0 || i >= n) {
    throw UsageError("unpack_params: shape mismatch");
  }
  Eigen::Index pos = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j == i) {
      weights(i, j) = 0.0;
      continue;
    }
    weights(i, j) = v(pos++);
  }
  biases(i) = -v(pos);
}

ActionHistogram action_histogram(const Dataset& dataset) {
  ActionHistogram hist;
  hist.n = dataset.n();
  if (dataset.n() <= kDenseHistogramPlayers) {
    std::vector<std::size_t> counts(std::size_t{1} << dataset.n(), 0);
    for (ActionCode x : dataset.codes()) ++counts[x];
    for (std::size_t x = 0; x < counts.size(); ++x) {
      if (counts[x] == 0) continue;
      hist.codes.push_back(x);
      hist.counts.push_back(static_cast<double>(counts[x]));
    }
    return hist;
  }
  std::vector<ActionCode> sorted = dataset.codes();
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t l = 0; l < sorted.size();) {
    std::size_t r = l;
    while (r < sorted.size() && sorted[r] == sorted[l]) ++r;
    hist.codes.push_back(sorted[l]);
    hist.counts.push_back(static_cast<double>(r - l));
    l = r;
  }
  return hist;
}

FeatureMatrix player_features(const ActionHistogram& histogram, int i) {
  const auto rows = static_cast<Eigen::Index>(histogram.codes.size());
  Eigen::MatrixXd z(rows, histogram.n);
  Eigen::VectorXd counts(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    z.row(r) = featurize(histogram.codes[static_cast<std::size_t>(r)],
                         histogram.n, i).transpose();
    counts(r) = histogram.counts[static_cast<std::size_t>(r)];
  }
  return FeatureMatrix(std::move(z), std::move(counts));
}

FeatureMatrix player_features(const Dataset& dataset, int i) {
  return player_features(action_histogram(dataset), i);
}

FeatureMatrix player_features_raw(const Dataset& dataset, int i) {
  const auto rows = static_cast<Eigen::Index>(dataset.size());
  Eigen::MatrixXd z(rows, dataset.n());
  for (Eigen::Index r = 0; r < rows; ++r) {
    z.row(r) = featurize(dataset.codes()[static_cast<std::size_t>(r)],
                         dataset.n(), i).transpose();
  }
  return FeatureMatrix(std::move(z));
}

double eta(double t) {
  const double e = std::exp(-std::abs(t));
  const double d = 1.0 + e;
  return e / (d * d);
}

double softplus(double u) {
  return std::max(u, 0.0) + std::log1p(std::exp(-std::abs(u)));
}

double loss(const ParamVector& v, const FeatureMatrix& features) {
  check_dims(v, features);
  const Eigen::VectorXd margins = features.z() * v;
  const Eigen::VectorXd& c = features.counts();
  double sum = 0.0;
  for (Eigen::Index l = 0; l < margins.size(); ++l) {
    sum += c(l) * softplus(-margins(l));
  }
  return sum / features.total();
}

Eigen::VectorXd gradient(const ParamVector& v, const FeatureMatrix& features) {
  check_dims(v, features);
  const Eigen::VectorXd margins = features.z() * v;
  Eigen::VectorXd weights(margins.size());
  for (Eigen::Index l = 0; l < margins.size(); ++l) {
    weights(l) = features.counts()(l) * logistic_complement(margins(l));
  }
  return -(features.z().transpose() * weights) / features.total();
}

Eigen::MatrixXd hessian(const ParamVector& v, const FeatureMatrix& features) {
  check_dims(v, features);
  const Eigen::VectorXd margins = features.z() * v;
  Eigen::VectorXd weights(margins.size());
  for (Eigen::Index l = 0; l < margins.size(); ++l) {
    weights(l) = features.counts()(l) * eta(margins(l));
  }
  Eigen::MatrixXd h =
      features.z().transpose() * weights.asDiagonal() * features.z();
  h /= features.total();
  // Exact symmetry regardless of the product's evaluation order.
  return 0.5 * (h + h.transpose());
}

double soft_threshold(double t, double tau) {
  if (tau < 0.0) throw UsageError("soft_threshold needs tau >= 0");
  const double shrunk = std::abs(t) - tau;
  if (!(shrunk > 0.0)) return 0.0;
  return t > 0.0 ? shrunk : -shrunk;
}

double l1_objective(const ParamVector& v, const FeatureMatrix& features,
                    double lambda, bool penalize_bias) {
  double penalty = v.lpNorm<1>();
  if (!penalize_bias && v.size() > 0) penalty -= std::abs(v(v.size() - 1));
  return loss(v, features) + lambda * penalty;
}

double kkt_residual(const ParamVector& v, const Eigen::VectorXd& grad,
                    double lambda, bool penalize_bias) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    const bool penalized = penalize_bias || j != v.size() - 1;
    const double pen = penalized ? lambda : 0.0;
    double r;
    if (v(j) != 0.0) {
      r = std::abs(grad(j) + pen * (v(j) > 0.0 ? 1.0 : -1.0));
    } else {
      r = std::max(std::abs(grad(j)) - pen, 0.0);
    }
    worst = std::max(worst, r);
  }
  return worst;
}

double lipschitz_constant(const FeatureMatrix& features, int iterations,
                          double tol) {
  const Eigen::MatrixXd& z = features.z();
  const Eigen::MatrixXd m =
      z.transpose() * features.counts().asDiagonal() * z /
      (4.0 * features.total());
  const Eigen::Index d = m.rows();
  Eigen::VectorXd x(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    x(j) = 1.0 + static_cast<double>(j + 1) / static_cast<double>(d + 1);
  }
  x.normalize();
  double estimate = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const Eigen::VectorXd y = m * x;
    const double norm = y.norm();
    if (norm == 0.0) return 0.0;
    x = y / norm;
    const bool settled = std::abs(norm - estimate) <= tol * norm;
    estimate = norm;
    if (settled) break;
  }
  return estimate;
}

FitReport fit_l1_logistic(const FeatureMatrix& features, double lambda,
                          const FitOptions& options) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw UsageError("lambda must be finite and non-negative");
  }
  const Eigen::Index d = features.dim();
  ParamVector x = options.initial_v.value_or(ParamVector::Zero(d));
  if (x.size() != d) throw UsageError("initial_v has the wrong dimension");

  const bool pen_bias = options.penalize_bias;
  auto objective = [&](const ParamVector& v) {
    const double f = l1_objective(v, features, lambda, pen_bias);
    if (!std::isfinite(f)) throw InternalError("non-finite objective");
    return f;
  };

  FitReport report;
  double step_l = lipschitz_constant(features, options.power_iterations,
                                     options.power_tol);
  if (!(step_l > 0.0)) step_l = 0.25 * static_cast<double>(d);

  double fx = objective(x);
  report.initial_objective = fx;
  if (options.record_objective_trace) report.objective_trace.push_back(fx);

  ParamVector y = x;
  bool y_is_x = true;
  double t = 1.0;
  int stalled = 0;
  int iter = 0;
  while (iter < options.max_iters) {
    ++iter;
    const Eigen::VectorXd g = gradient(y, features);
    ParamVector candidate = prox_l1(y - g / step_l, lambda / step_l, pen_bias);
    const double fc = objective(candidate);
    if (fc > fx) {
      ++report.restarts;
      if (y_is_x) {
        // A plain proximal step from x went uphill: the curvature estimate
        // was too small.
        step_l *= 2.0;
      } else {
        y = x;
        y_is_x = true;
        t = 1.0;
      }
      stalled = 0;
      continue;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = candidate + ((t - 1.0) / t_next) * (candidate - x);
    y_is_x = (t - 1.0) == 0.0 || candidate == x;
    const double rel = (fx - fc) / std::max(std::abs(fx), 1e-300);
    x = std::move(candidate);
    fx = fc;
    t = t_next;
    if (options.record_objective_trace) report.objective_trace.push_back(fx);

    stalled = rel < options.objective_tol ? stalled + 1 : 0;
    if (stalled >= 3) {
      const double r = kkt_residual(x, gradient(x, features), lambda, pen_bias);
      if (r <= options.kkt_tol) {
        report.converged = true;
        break;
      }
      stalled = 0;
    }
  }

  report.v_hat = std::move(x);
  report.iterations = iter;
  report.final_objective = fx;
  report.kkt_residual =
      kkt_residual(report.v_hat, gradient(report.v_hat, features), lambda, pen_bias);
  report.lipschitz = step_l;
  report.converged = report.converged && report.kkt_residual <= options.kkt_tol;
  return report;
}

}  // namespace psne
