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

#include "mercerbnn/stats.hpp"

#include <algorithm>
#include <cmath>

#include "mercerbnn/errors.hpp"

namespace mbn {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void SampleEnsemble::validate() const {
  if (values.cols() != grid.size())
    throw ConfigError("SampleEnsemble: column count does not match grid size");
  for (Eigen::Index i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw ConfigError("SampleEnsemble: grid must be strictly increasing");
}

MatrixXd empirical_covariance(const SampleEnsemble& ensemble) {
  ensemble.validate();
  const Eigen::Index n = ensemble.values.rows();
  if (n < 2) throw ConfigError("empirical_covariance: need at least 2 samples");
  const Eigen::RowVectorXd mean = ensemble.values.colwise().mean();
  const MatrixXd centered = ensemble.values.rowwise() - mean;
  MatrixXd q = MatrixXd::Zero(ensemble.values.cols(), ensemble.values.cols());
  q.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose(),
                                               1.0 / static_cast<double>(n - 1));
  q.triangularView<Eigen::StrictlyUpper>() = q.transpose();
  return q;
}

CovarianceErrorMap covariance_error_map(const MatrixXd& Q, const KernelFn& kernel,
                                        const VectorXd& grid) {
  if (Q.rows() != grid.size() || Q.cols() != grid.size())
    throw ConfigError("covariance_error_map: Q shape does not match grid");
  CovarianceErrorMap out;
  out.abs_error = (Q - kernel_gram(kernel, grid)).cwiseAbs();
  out.max_error = out.abs_error.maxCoeff(&out.arg_row, &out.arg_col);
  return out;
}

double ks_critical_coefficient(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ConfigError("ks: significance level must lie in (0,1)");
  // Inverse of the asymptotic Kolmogorov tail: c = sqrt(-ln(alpha/2) / 2).
  return std::sqrt(-std::log(alpha / 2.0) / 2.0);
}

KsResult ks_two_sample(const std::vector<double>& a, const std::vector<double>& b,
                       double alpha) {
  if (a.empty() || b.empty())
    throw ConfigError("ks_two_sample: empty sample vector");
  std::vector<double> sa = a, sb = b;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double n1 = static_cast<double>(sa.size());
  const double n2 = static_cast<double>(sb.size());

  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= x) ++i;
    while (j < sb.size() && sb[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n1 -
                             static_cast<double>(j) / n2));
  }

  KsResult r;
  r.d_stat = d;
  r.d_alpha = ks_critical_coefficient(alpha) * std::sqrt((n1 + n2) / (n1 * n2));
  r.reject = r.d_stat > r.d_alpha;
  return r;
}

std::vector<KsSliceEntry> ks_slice_profile(const SampleEnsemble& ensemble,
                                           const SliceReferenceSampler& reference,
                                           const std::vector<double>& times,
                                           double alpha, int n_ref, RngStream& rng) {
  ensemble.validate();
  if (n_ref < 1) throw ConfigError("ks_slice_profile: need n_ref >= 1");
  std::vector<KsSliceEntry> out;
  out.reserve(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    // Nearest grid point to the requested slice time.
    Eigen::Index best = 0;
    double best_dist = std::abs(ensemble.grid[0] - times[k]);
    for (Eigen::Index i = 1; i < ensemble.grid.size(); ++i) {
      const double dist = std::abs(ensemble.grid[i] - times[k]);
      if (dist < best_dist) {
        best = i;
        best_dist = dist;
      }
    }
    std::vector<double> slice(ensemble.values.rows());
    for (Eigen::Index i = 0; i < ensemble.values.rows(); ++i)
      slice[i] = ensemble.values(i, best);

    RngStream sub = rng.split(k);
    const std::vector<double> ref = reference(ensemble.grid[best], n_ref, sub);

    KsSliceEntry entry;
    entry.time = times[k];
    entry.grid_point = ensemble.grid[best];
    entry.ks = ks_two_sample(slice, ref, alpha);
    out.push_back(entry);
  }
  return out;
}

double silverman_bandwidth(const std::vector<double>& samples) {
  if (samples.empty()) throw ConfigError("silverman_bandwidth: empty sample");
  const double n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : samples) var += (x - mean) * (x - mean);
  var = (samples.size() > 1) ? var / (n - 1.0) : 0.0;
  const double sd = std::sqrt(var);

  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&](double q) {
    const double pos = q * (n - 1.0);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
  };
  const double iqr = quantile(0.75) - quantile(0.25);

  double spread = sd;
  if (iqr > 0.0) spread = std::min(sd, iqr / 1.34);
  if (spread == 0.0) spread = (sd > 0.0) ? sd : 1.0;
  return 0.9 * spread * std::pow(n, -0.2);
}

VectorXd kde_marginal(const std::vector<double>& samples, const VectorXd& grid,
                      double bandwidth) {
  if (samples.empty()) throw ConfigError("kde_marginal: empty sample");
  const double h = bandwidth > 0.0 ? bandwidth : silverman_bandwidth(samples);
  const double norm = 1.0 / (static_cast<double>(samples.size()) * h *
                             std::sqrt(2.0 * M_PI));
  VectorXd density = VectorXd::Zero(grid.size());
  for (double x : samples) {
    density.array() +=
        (-0.5 * ((grid.array() - x) / h).square()).exp();
  }
  return norm * density;
}

}  // namespace mbn
