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

#ifndef MERCERBNN_PRIOR_HPP_
#define MERCERBNN_PRIOR_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "mercerbnn/field_net.hpp"
#include "mercerbnn/rng.hpp"
#include "mercerbnn/spectrum.hpp"

namespace mbn {

// Spectral prior over parameterized fields: log p(theta) is, up to its
// normalization constant,
//
//   -1/2 sum_{n<=K} (1/lambda_n) <u_theta, phi_n>^2,
//
// estimated without bias by subsampling eigen-indices and domain points:
//
//   S = -1/2 * 1/(N M1 M2) * sum_a 1/(lambda_{n_a} p(n_a))
//         * [sum_b u(x_b) phi_{n_a}(x_b) w(x_b)]
//         * [sum_g u(x_g) phi_{n_a}(x_g) w(x_g)],
//
// with w = |domain| for uniform draws (1/q(x) under an importance density)
// and the two point batches drawn independently of each other — sharing one
// batch across both inner sums would bias the product. For the uniform
// truncated index distribution this is exactly the K/N prefactor form.

// Anything evaluable in batch on 1-D domain points.
using FieldFn = std::function<Eigen::ArrayXd(const Eigen::ArrayXd&)>;

FieldFn make_field(const Architecture& arch, const ParamVector& theta);
FieldFn make_eigenfunction_field(EigenbasisPtr basis, int n);

enum class IndexDistKind { kUniformTruncated, kZeta, kGeometricTruncated };

// How the inner-product point batches are drawn. Both choices keep every
// point marginally uniform on the domain and keep the two batches
// independent, so the estimator stays unbiased. kJittered places one
// uniform point in each of M equal strata, which cuts the Monte Carlo
// variance of the inner sums for smooth integrands; it is the documented
// choice for long SGLD runs.
enum class PointSampling { kIid, kJittered };

struct PriorConfig {
  int eigen_batch = 1;   // N
  int point_batch1 = 1;  // M1
  int point_batch2 = 1;  // M2
  IndexDistKind index_dist = IndexDistKind::kUniformTruncated;
  double geometric_p = 0.5;    // GeometricTruncated parameter
  double lambda_floor = 1e-12; // indices below are excluded, with a warning
  PointSampling sampling = PointSampling::kIid;
};

// Optional importance density for unbounded domains: points are drawn from
// `sample` and inner sums weighted by 1/density(x).
struct ImportanceDensity {
  std::function<double(double)> density;
  std::function<double(RngStream&)> sample;
};

// One stochastic estimate together with everything needed to replay it.
// Replaying the recorded indices and points reproduces `value` bit-for-bit.
struct EstimatorDraw {
  double value = 0.0;
  std::vector<int> indices;           // n_a, 1-based into the basis
  std::vector<double> points_beta;    // M1 points
  std::vector<double> points_gamma;   // M2 points
  std::uint64_t rng_key = 0;          // key of the stream that drew this
};

class MercerPrior {
 public:
  MercerPrior(EigenbasisPtr basis, PriorConfig config,
              std::optional<ImportanceDensity> importance = std::nullopt);

  const Eigenbasis& basis() const { return *basis_; }
  const PriorConfig& config() const { return config_; }
  int active_count() const { return static_cast<int>(active_.size()); }
  int excluded_count() const { return excluded_; }

  // Probability mass p(n) of the index distribution over the active set.
  double index_mass(int n) const;
  int sample_index(RngStream& rng) const;

  EstimatorDraw estimate_log_prior(const FieldFn& field, RngStream& rng) const;
  double replay_log_prior(const FieldFn& field, const EstimatorDraw& draw) const;

  // Estimator value and its exact parameter gradient on the same recorded
  // draws, for fields given by a network.
  std::pair<EstimatorDraw, Eigen::VectorXd> estimate_log_prior_grad(
      const Architecture& arch, const ParamVector& theta, RngStream& rng) const;
  Eigen::VectorXd replay_log_prior_grad(const Architecture& arch,
                                        const ParamVector& theta,
                                        const EstimatorDraw& draw) const;

  // Dense-quadrature oracle: -1/2 sum over active n of <u, phi_n>^2 /
  // lambda_n with composite trapezoid on grid_size points. Deterministic.
  double exact_log_prior(const FieldFn& field, int grid_size) const;

 private:
  EstimatorDraw draw_randomness(RngStream& rng) const;
  double value_from_draw(const Eigen::ArrayXd& u_beta,
                         const Eigen::ArrayXd& u_gamma,
                         const EstimatorDraw& draw,
                         Eigen::ArrayXd* s1_out = nullptr,
                         Eigen::ArrayXd* s2_out = nullptr) const;
  Eigen::VectorXd grad_impl(const Architecture& arch, const ParamVector& theta,
                            EstimatorDraw& draw) const;
  Eigen::ArrayXd point_weights(const std::vector<double>& pts) const;

  EigenbasisPtr basis_;
  PriorConfig config_;
  std::optional<ImportanceDensity> importance_;
  std::vector<int> active_;       // indices with lambda >= floor, ascending
  std::vector<double> mass_;      // p(n) aligned with active_
  std::vector<double> cumulative_;
  int excluded_ = 0;
};

}  // namespace mbn

#endif  // MERCERBNN_PRIOR_HPP_
