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

// Test-only oracles: finite differences, quadrature, and running moments.
// These stay independent of the implementation paths they check.

#ifndef MERCERBNN_TESTS_ORACLE_HELPERS_HPP_
#define MERCERBNN_TESTS_ORACLE_HELPERS_HPP_

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Core>

namespace mbn::testing {

// Central finite differences, one column per parameter.
inline Eigen::VectorXd finite_difference_gradient(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& theta, double h = 1e-5) {
  Eigen::VectorXd g(theta.size());
  Eigen::VectorXd probe = theta;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    probe[i] = theta[i] + h;
    const double up = f(probe);
    probe[i] = theta[i] - h;
    const double down = f(probe);
    probe[i] = theta[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

// max_i |a_i - b_i| / max(1, ||a||_inf): relative where gradients are large,
// absolute near zero.
inline double max_rel_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

// Composite trapezoid over [a, b].
inline double trapezoid(const std::function<double(double)>& f, double a,
                        double b, int points) {
  const double h = (b - a) / (points - 1);
  double acc = 0.5 * (f(a) + f(b));
  for (int i = 1; i < points - 1; ++i) acc += f(a + h * i);
  return acc * h;
}

struct RunningMoments {
  long n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double std_error() const {
    return std::sqrt(variance() / static_cast<double>(n));
  }
};

inline double sample_mean(const std::vector<double>& xs) {
  double m = 0.0;
  for (double x : xs) m += x;
  return m / static_cast<double>(xs.size());
}

inline double sample_variance(const std::vector<double>& xs) {
  const double m = sample_mean(xs);
  double v = 0.0;
  for (double x : xs) v += (x - m) * (x - m);
  return v / static_cast<double>(xs.size() - 1);
}

// Pearson correlation.
inline double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  const double ma = sample_mean(a), mb = sample_mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace mbn::testing

#endif  // MERCERBNN_TESTS_ORACLE_HELPERS_HPP_
