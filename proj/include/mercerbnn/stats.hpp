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

#ifndef MERCERBNN_STATS_HPP_
#define MERCERBNN_STATS_HPP_

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mercerbnn/gp_oracle.hpp"
#include "mercerbnn/rng.hpp"

namespace mbn {

// Validation statistics over sample ensembles: empirical covariance,
// covariance error maps, two-sample Kolmogorov-Smirnov tests on time
// slices, and Gaussian kernel density estimates.

struct SampleEnsemble {
  Eigen::MatrixXd values;  // N_F samples x m grid points
  Eigen::VectorXd grid;    // strictly increasing
  std::string provenance;  // config hash or free-form origin tag

  void validate() const;   // shape and grid monotonicity
};

// Unbiased empirical covariance Q = 1/(N_F - 1) sum (u - mean)(u - mean)^T.
// Requires at least two samples.
Eigen::MatrixXd empirical_covariance(const SampleEnsemble& ensemble);

struct CovarianceErrorMap {
  Eigen::MatrixXd abs_error;
  double max_error = 0.0;
  int arg_row = 0;
  int arg_col = 0;
};

CovarianceErrorMap covariance_error_map(const Eigen::MatrixXd& Q,
                                        const KernelFn& kernel,
                                        const Eigen::VectorXd& grid);

struct KsResult {
  double d_stat = 0.0;    // sup |ECDF_a - ECDF_b| over pooled points
  double d_alpha = 0.0;   // c(alpha) sqrt((n1+n2)/(n1 n2))
  bool reject = false;    // d_stat > d_alpha
};

// Asymptotic two-sample critical coefficient, c(0.05) = 1.358.
double ks_critical_coefficient(double alpha);

KsResult ks_two_sample(const std::vector<double>& a, const std::vector<double>& b,
                       double alpha);

struct KsSliceEntry {
  double time = 0.0;
  double grid_point = 0.0;  // nearest ensemble grid point actually used
  KsResult ks;
};

// Compares the ensemble marginal at each requested time against n_ref draws
// from `reference` at the nearest grid point.
using SliceReferenceSampler =
    std::function<std::vector<double>(double t, int n, RngStream& rng)>;

std::vector<KsSliceEntry> ks_slice_profile(const SampleEnsemble& ensemble,
                                           const SliceReferenceSampler& reference,
                                           const std::vector<double>& times,
                                           double alpha, int n_ref, RngStream& rng);

// Gaussian KDE evaluated on `grid`. bandwidth <= 0 selects Silverman's rule.
Eigen::VectorXd kde_marginal(const std::vector<double>& samples,
                             const Eigen::VectorXd& grid, double bandwidth = 0.0);
double silverman_bandwidth(const std::vector<double>& samples);

}  // namespace mbn

#endif  // MERCERBNN_STATS_HPP_
