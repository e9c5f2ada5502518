// Copyright 2026 The mercerbnn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mercerbnn/prior.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "mercerbnn/errors.hpp"

namespace mbn {

using Eigen::ArrayXd;
using Eigen::VectorXd;

FieldFn make_field(const Architecture& arch, const ParamVector& theta) {
  auto ev = std::make_shared<BatchEvaluator>(arch, theta);
  return [ev](const ArrayXd& xs) -> ArrayXd {
    return ev->forward(VectorXd(xs.matrix())).array();
  };
}

FieldFn make_eigenfunction_field(EigenbasisPtr basis, int n) {
  return [basis, n](const ArrayXd& xs) { return basis->eigenfunction_batch(n, xs); };
}

MercerPrior::MercerPrior(EigenbasisPtr basis, PriorConfig config,
                         std::optional<ImportanceDensity> importance)
    : basis_(std::move(basis)), config_(config), importance_(std::move(importance)) {
  if (!basis_) throw ConfigError("MercerPrior: null basis");
  if (config_.eigen_batch < 1 || config_.point_batch1 < 1 || config_.point_batch2 < 1)
    throw ConfigError("MercerPrior: batch sizes N, M1, M2 must be >= 1");
  if (config_.lambda_floor < 0.0)
    throw ConfigError("MercerPrior: lambda_floor must be >= 0");
  if (importance_ && config_.sampling != PointSampling::kIid)
    throw ConfigError("MercerPrior: importance sampling requires iid point draws");
  if (importance_ && (!importance_->density || !importance_->sample))
    throw ConfigError("MercerPrior: importance density needs both density and sampler");

  for (int n = 1; n <= basis_->truncation(); ++n) {
    if (basis_->eigenvalue(n) >= config_.lambda_floor) active_.push_back(n);
  }
  excluded_ = basis_->truncation() - static_cast<int>(active_.size());
  if (active_.empty())
    throw ConfigError("MercerPrior: every eigenvalue falls below the floor");
  if (excluded_ > 0) {
    std::fprintf(stderr,
                 "mercerbnn: warning: %d of %d eigen-indices excluded from the "
                 "prior (eigenvalue below floor %g)\n",
                 excluded_, basis_->truncation(), config_.lambda_floor);
  }

  mass_.resize(active_.size());
  switch (config_.index_dist) {
    case IndexDistKind::kUniformTruncated:
      std::fill(mass_.begin(), mass_.end(), 1.0 / static_cast<double>(active_.size()));
      break;
    case IndexDistKind::kZeta:
      for (std::size_t i = 0; i < active_.size(); ++i)
        mass_[i] = 1.0 / (static_cast<double>(active_[i]) * active_[i]);
      break;
    case IndexDistKind::kGeometricTruncated: {
      const double p = config_.geometric_p;
      if (p <= 0.0 || p >= 1.0)
        throw ConfigError("MercerPrior: geometric parameter must lie in (0,1)");
      for (std::size_t i = 0; i < active_.size(); ++i)
        mass_[i] = p * std::pow(1.0 - p, static_cast<double>(active_[i] - 1));
      break;
    }
  }
  double total = 0.0;
  for (double m : mass_) total += m;
  cumulative_.resize(mass_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < mass_.size(); ++i) {
    mass_[i] /= total;
    acc += mass_[i];
    cumulative_[i] = acc;
  }
  cumulative_.back() = 1.0;
}

double MercerPrior::index_mass(int n) const {
  const auto it = std::lower_bound(active_.begin(), active_.end(), n);
  if (it == active_.end() || *it != n) return 0.0;
  return mass_[static_cast<std::size_t>(it - active_.begin())];
}

int MercerPrior::sample_index(RngStream& rng) const {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const std::size_t i = std::min<std::size_t>(it - cumulative_.begin(), active_.size() - 1);
  return active_[i];
}

EstimatorDraw MercerPrior::draw_randomness(RngStream& rng) const {
  EstimatorDraw d;
  d.rng_key = rng.key();
  d.indices.resize(config_.eigen_batch);
  for (int& n : d.indices) n = sample_index(rng);
  const double a = basis_->domain_min();
  const double width = basis_->domain_volume();
  auto draw_batch = [&](int m, std::vector<double>& out) {
    out.resize(m);
    if (importance_) {
      for (double& x : out) x = importance_->sample(rng);
    } else if (config_.sampling == PointSampling::kIid) {
      for (double& x : out) x = a + width * rng.uniform();
    } else {
      for (int i = 0; i < m; ++i)
        out[i] = a + width * ((static_cast<double>(i) + rng.uniform()) / m);
    }
  };
  draw_batch(config_.point_batch1, d.points_beta);
  draw_batch(config_.point_batch2, d.points_gamma);
  return d;
}

ArrayXd MercerPrior::point_weights(const std::vector<double>& pts) const {
  ArrayXd w(pts.size());
  if (importance_) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double q = importance_->density(pts[i]);
      if (!(q > 0.0))
        throw NumericError("MercerPrior: importance density is not positive at a drawn point");
      w[i] = 1.0 / q;
    }
  } else {
    w.setConstant(basis_->domain_volume());
  }
  return w;
}

double MercerPrior::value_from_draw(const ArrayXd& u_beta, const ArrayXd& u_gamma,
                                    const EstimatorDraw& draw, ArrayXd* s1_out,
                                    ArrayXd* s2_out) const {
  const int n_idx = static_cast<int>(draw.indices.size());
  const ArrayXd xb = Eigen::Map<const ArrayXd>(draw.points_beta.data(),
                                               draw.points_beta.size());
  const ArrayXd xg = Eigen::Map<const ArrayXd>(draw.points_gamma.data(),
                                               draw.points_gamma.size());
  // One eigenfunction table per batch, shared by the two inner sums and by
  // the gradient cotangents.
  const Eigen::MatrixXd phi_b = basis_->eigenfunction_matrix(xb, draw.indices);
  const Eigen::MatrixXd phi_g = basis_->eigenfunction_matrix(xg, draw.indices);
  const ArrayXd wub = point_weights(draw.points_beta) * u_beta;
  const ArrayXd wug = point_weights(draw.points_gamma) * u_gamma;

  ArrayXd s1 = (phi_b.transpose() * wub.matrix()).array();
  ArrayXd s2 = (phi_g.transpose() * wug.matrix()).array();
  double acc = 0.0;
  const double norm = -0.5 / (static_cast<double>(config_.eigen_batch) *
                              config_.point_batch1 * config_.point_batch2);
  for (int a = 0; a < n_idx; ++a) {
    const int n = draw.indices[a];
    acc += s1[a] * s2[a] / (basis_->eigenvalue(n) * index_mass(n));
  }
  if (s1_out) *s1_out = std::move(s1);
  if (s2_out) *s2_out = std::move(s2);
  return norm * acc;
}

EstimatorDraw MercerPrior::estimate_log_prior(const FieldFn& field,
                                              RngStream& rng) const {
  EstimatorDraw d = draw_randomness(rng);
  const ArrayXd xb = Eigen::Map<const ArrayXd>(d.points_beta.data(), d.points_beta.size());
  const ArrayXd xg = Eigen::Map<const ArrayXd>(d.points_gamma.data(), d.points_gamma.size());
  d.value = value_from_draw(field(xb), field(xg), d);
  return d;
}

double MercerPrior::replay_log_prior(const FieldFn& field,
                                     const EstimatorDraw& draw) const {
  const ArrayXd xb = Eigen::Map<const ArrayXd>(draw.points_beta.data(),
                                               draw.points_beta.size());
  const ArrayXd xg = Eigen::Map<const ArrayXd>(draw.points_gamma.data(),
                                               draw.points_gamma.size());
  return value_from_draw(field(xb), field(xg), draw);
}

VectorXd MercerPrior::grad_impl(const Architecture& arch, const ParamVector& theta,
                                EstimatorDraw& draw) const {
  const int m1 = static_cast<int>(draw.points_beta.size());
  const int m2 = static_cast<int>(draw.points_gamma.size());
  const int n_idx = static_cast<int>(draw.indices.size());

  BatchEvaluator ev(arch, theta, ExecMode::kFastGemm);
  VectorXd all(m1 + m2);
  for (int i = 0; i < m1; ++i) all[i] = draw.points_beta[i];
  for (int i = 0; i < m2; ++i) all[m1 + i] = draw.points_gamma[i];
  const VectorXd& u = ev.forward(all);

  const ArrayXd xb = Eigen::Map<const ArrayXd>(draw.points_beta.data(), m1);
  const ArrayXd xg = Eigen::Map<const ArrayXd>(draw.points_gamma.data(), m2);
  const Eigen::MatrixXd phi_b = basis_->eigenfunction_matrix(xb, draw.indices);
  const Eigen::MatrixXd phi_g = basis_->eigenfunction_matrix(xg, draw.indices);
  const ArrayXd wb = point_weights(draw.points_beta);
  const ArrayXd wg = point_weights(draw.points_gamma);

  const ArrayXd s1 = (phi_b.transpose() * (wb * u.head(m1).array()).matrix()).array();
  const ArrayXd s2 = (phi_g.transpose() * (wg * u.tail(m2).array()).matrix()).array();

  const double norm = -0.5 / (static_cast<double>(n_idx) * m1 * m2);
  ArrayXd coef(n_idx);
  double acc = 0.0;
  for (int a = 0; a < n_idx; ++a) {
    const int n = draw.indices[a];
    const double lp = basis_->eigenvalue(n) * index_mass(n);
    coef[a] = norm / lp;
    acc += s1[a] * s2[a] / lp;
  }
  draw.value = norm * acc;

  VectorXd cot(m1 + m2);
  cot.head(m1) = (phi_b * (coef * s2).matrix()).array().cwiseProduct(wb).matrix();
  cot.tail(m2) = (phi_g * (coef * s1).matrix()).array().cwiseProduct(wg).matrix();
  return ev.backward(cot);
}

std::pair<EstimatorDraw, VectorXd> MercerPrior::estimate_log_prior_grad(
    const Architecture& arch, const ParamVector& theta, RngStream& rng) const {
  EstimatorDraw d = draw_randomness(rng);
  VectorXd grad = grad_impl(arch, theta, d);
  return {std::move(d), std::move(grad)};
}

VectorXd MercerPrior::replay_log_prior_grad(const Architecture& arch,
                                            const ParamVector& theta,
                                            const EstimatorDraw& draw) const {
  EstimatorDraw scratch = draw;
  return grad_impl(arch, theta, scratch);
}

double MercerPrior::exact_log_prior(const FieldFn& field, int grid_size) const {
  if (grid_size < 2) throw ConfigError("exact_log_prior: grid_size must be >= 2");
  const double a = basis_->domain_min();
  const double b = basis_->domain_max();
  const double h = (b - a) / static_cast<double>(grid_size - 1);
  ArrayXd xs = ArrayXd::LinSpaced(grid_size, a, b);
  ArrayXd w = ArrayXd::Constant(grid_size, h);
  w[0] = 0.5 * h;
  w[grid_size - 1] = 0.5 * h;
  const ArrayXd u = field(xs);
  double acc = 0.0;
  for (int n : active_) {
    const double inner = (w * u * basis_->eigenfunction_batch(n, xs)).sum();
    acc += inner * inner / basis_->eigenvalue(n);
  }
  return -0.5 * acc;
}

}  // namespace mbn
