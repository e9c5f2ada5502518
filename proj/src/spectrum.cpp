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

#include "mercerbnn/spectrum.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mercerbnn/errors.hpp"

namespace mbn {

using Eigen::ArrayXd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr long kTailCutoff = 1000000;  // terms before the integral tail bound
}  // namespace

Eigenbasis Eigenbasis::brownian_motion(int truncation) {
  if (truncation < 0) throw ConfigError("Eigenbasis: truncation must be >= 0");
  Eigenbasis b;
  b.kind_ = BasisKind::kBrownianMotion;
  b.truncation_ = truncation;
  return b;
}

Eigenbasis Eigenbasis::dirichlet_power(double alpha, int truncation) {
  if (alpha <= 0.5)
    throw ConfigError("DirichletPower: alpha must exceed 1/2 for a trace-class operator");
  if (truncation < 0) throw ConfigError("Eigenbasis: truncation must be >= 0");
  Eigenbasis b;
  b.kind_ = BasisKind::kDirichletPower;
  b.alpha_ = alpha;
  b.truncation_ = truncation;
  return b;
}

Eigenbasis Eigenbasis::periodic_fourier(double period, int n_max, double decay_rate,
                                        double domain_min, double domain_max) {
  if (period <= 0.0) throw ConfigError("PeriodicFourier: period must be positive");
  if (n_max < 0) throw ConfigError("PeriodicFourier: n_max must be >= 0");
  if (decay_rate <= 0.0) throw ConfigError("PeriodicFourier: decay_rate must be positive");
  if (domain_max <= domain_min) throw ConfigError("PeriodicFourier: empty domain");
  Eigenbasis b;
  b.kind_ = BasisKind::kPeriodicFourier;
  b.period_ = period;
  b.n_max_ = n_max;
  b.decay_rate_ = decay_rate;
  b.truncation_ = 1 + 2 * n_max;
  b.domain_min_ = domain_min;
  b.domain_max_ = domain_max;
  return b;
}

Eigenbasis Eigenbasis::custom(std::vector<CustomEigenpair> pairs, double domain_min,
                              double domain_max, bool validate_orthonormality) {
  if (domain_max <= domain_min) throw ConfigError("Custom basis: empty domain");
  if (pairs.empty()) throw ConfigError("Custom basis: no eigenpairs supplied");
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].eigenvalue <= 0.0)
      throw ConfigError("Custom basis: eigenvalues must be strictly positive");
    if (i > 0 && pairs[i].eigenvalue > pairs[i - 1].eigenvalue)
      throw ConfigError("Custom basis: eigenvalues must be non-increasing");
    if (!pairs[i].phi) throw ConfigError("Custom basis: missing eigenfunction rule");
  }
  Eigenbasis b;
  b.kind_ = BasisKind::kCustom;
  b.domain_min_ = domain_min;
  b.domain_max_ = domain_max;
  b.truncation_ = static_cast<int>(pairs.size());
  b.custom_ = std::move(pairs);
  if (validate_orthonormality) {
    const int n = std::min(b.truncation_, 32);
    const double defect = b.orthonormality_defect(n, 10000);
    if (defect > 1e-4) {
      std::ostringstream os;
      os << "Custom basis: orthonormality defect " << defect
         << " exceeds 1e-4 on a 10^4-point grid";
      throw ConfigError(os.str());
    }
  }
  return b;
}

double Eigenbasis::eigenvalue(int n) const {
  if (n < 1 || n > truncation_) {
    std::ostringstream os;
    os << "eigenvalue index " << n << " outside [1, " << truncation_ << "]";
    throw std::out_of_range(os.str());
  }
  switch (kind_) {
    case BasisKind::kBrownianMotion: {
      const double m = static_cast<double>(n) - 0.5;
      return 1.0 / (kPi * kPi * m * m);
    }
    case BasisKind::kDirichletPower:
      return std::pow(static_cast<double>(n) * kPi, -2.0 * alpha_);
    case BasisKind::kPeriodicFourier: {
      if (n == 1) return 1.0;
      const int j = n / 2;  // cos at even, sin at odd flat index
      const double w = static_cast<double>(j) * kPi / period_;
      return std::exp(-decay_rate_ * w * w);
    }
    case BasisKind::kCustom:
      return custom_[n - 1].eigenvalue;
  }
  return 0.0;
}

double Eigenbasis::eigenvalue_dalpha(int n) const {
  if (!has_alpha_derivative())
    throw ConfigError("eigenvalue_dalpha: only the DirichletPower family exposes "
                      "an analytic derivative in its damping exponent");
  const double npi = static_cast<double>(n) * kPi;
  // d/da (n pi)^(-2a) = -2 ln(n pi) (n pi)^(-2a)
  return -2.0 * std::log(npi) * std::pow(npi, -2.0 * alpha_);
}

double Eigenbasis::eigenfunction(int n, double x) const {
  if (n < 1 || n > truncation_) {
    std::ostringstream os;
    os << "eigenfunction index " << n << " outside [1, " << truncation_ << "]";
    throw std::out_of_range(os.str());
  }
  switch (kind_) {
    case BasisKind::kBrownianMotion:
      return std::sqrt(2.0) * std::sin((static_cast<double>(n) - 0.5) * kPi * x);
    case BasisKind::kDirichletPower:
      return std::sqrt(2.0) * std::sin(static_cast<double>(n) * kPi * x);
    case BasisKind::kPeriodicFourier: {
      if (n == 1) return 1.0 / std::sqrt(period_);
      const int j = n / 2;
      const double arg = 2.0 * kPi * static_cast<double>(j) * x / period_;
      const double amp = std::sqrt(2.0 / period_);
      return (n % 2 == 0) ? amp * std::cos(arg) : amp * std::sin(arg);
    }
    case BasisKind::kCustom:
      return custom_[n - 1].phi(x);
  }
  return 0.0;
}

ArrayXd Eigenbasis::eigenfunction_batch(int n, const ArrayXd& xs) const {
  if (n < 1 || n > truncation_) {
    std::ostringstream os;
    os << "eigenfunction index " << n << " outside [1, " << truncation_ << "]";
    throw std::out_of_range(os.str());
  }
  switch (kind_) {
    case BasisKind::kBrownianMotion:
      return std::sqrt(2.0) * ((static_cast<double>(n) - 0.5) * kPi * xs).sin();
    case BasisKind::kDirichletPower:
      return std::sqrt(2.0) * (static_cast<double>(n) * kPi * xs).sin();
    case BasisKind::kPeriodicFourier: {
      if (n == 1) return ArrayXd::Constant(xs.size(), 1.0 / std::sqrt(period_));
      const int j = n / 2;
      const double amp = std::sqrt(2.0 / period_);
      const ArrayXd arg = 2.0 * kPi * static_cast<double>(j) / period_ * xs;
      return (n % 2 == 0) ? (amp * arg.cos()).eval() : (amp * arg.sin()).eval();
    }
    case BasisKind::kCustom: {
      ArrayXd out(xs.size());
      const auto& phi = custom_[n - 1].phi;
      for (Eigen::Index i = 0; i < xs.size(); ++i) out[i] = phi(xs[i]);
      return out;
    }
  }
  return ArrayXd();
}

MatrixXd Eigenbasis::eigenfunction_matrix(const ArrayXd& xs,
                                          const std::vector<int>& indices) const {
  int n_hi = 0;
  for (int n : indices) {
    if (n < 1 || n > truncation_)
      throw std::out_of_range("eigenfunction_matrix: index outside [1, K]");
    n_hi = std::max(n_hi, n);
  }
  const Eigen::Index m = xs.size();
  MatrixXd out(m, static_cast<Eigen::Index>(indices.size()));
  if (indices.empty() || n_hi == 0) return out;

  MatrixXd table(m, n_hi);
  switch (kind_) {
    case BasisKind::kBrownianMotion:
    case BasisKind::kDirichletPower: {
      // sin(w_n x) with w_{n+1} = w_n + pi, advanced by angle addition.
      const double root2 = std::sqrt(2.0);
      const double first = (kind_ == BasisKind::kBrownianMotion) ? 0.5 : 1.0;
      const ArrayXd ds = (kPi * xs).sin();
      const ArrayXd dc = (kPi * xs).cos();
      ArrayXd s = (first * kPi * xs).sin();
      ArrayXd c = (first * kPi * xs).cos();
      table.col(0) = (root2 * s).matrix();
      for (int n = 2; n <= n_hi; ++n) {
        const ArrayXd s_next = s * dc + c * ds;
        c = (c * dc - s * ds).eval();
        s = s_next;
        table.col(n - 1) = (root2 * s).matrix();
      }
      break;
    }
    case BasisKind::kPeriodicFourier: {
      table.col(0).setConstant(1.0 / std::sqrt(period_));
      if (n_hi > 1) {
        const double amp = std::sqrt(2.0 / period_);
        const ArrayXd dc = (2.0 * kPi / period_ * xs).cos();
        const ArrayXd ds = (2.0 * kPi / period_ * xs).sin();
        ArrayXd c = dc;
        ArrayXd s = ds;
        for (int j = 1; 2 * j <= n_hi; ++j) {
          table.col(2 * j - 1) = (amp * c).matrix();
          if (2 * j + 1 <= n_hi) table.col(2 * j) = (amp * s).matrix();
          const ArrayXd c_next = c * dc - s * ds;
          s = (s * dc + c * ds).eval();
          c = c_next;
        }
      }
      break;
    }
    case BasisKind::kCustom: {
      for (std::size_t i = 0; i < indices.size(); ++i)
        out.col(static_cast<Eigen::Index>(i)) =
            eigenfunction_batch(indices[i], xs).matrix();
      return out;
    }
  }
  for (std::size_t i = 0; i < indices.size(); ++i)
    out.col(static_cast<Eigen::Index>(i)) = table.col(indices[i] - 1);
  return out;
}

double Eigenbasis::truncated_kernel(double s, double t) const {
  double acc = 0.0;
  for (int n = 1; n <= truncation_; ++n)
    acc += eigenvalue(n) * eigenfunction(n, s) * eigenfunction(n, t);
  return acc;
}

MatrixXd Eigenbasis::kernel_matrix(const VectorXd& grid) const {
  const Eigen::Index m = grid.size();
  MatrixXd phi(m, truncation_);
  VectorXd lam(truncation_);
  const ArrayXd xs = grid.array();
  for (int n = 1; n <= truncation_; ++n) {
    phi.col(n - 1) = eigenfunction_batch(n, xs).matrix();
    lam[n - 1] = eigenvalue(n);
  }
  MatrixXd K = phi * lam.asDiagonal() * phi.transpose();
  // Mirror the lower triangle so the result is exactly symmetric.
  K.triangularView<Eigen::StrictlyUpper>() = K.transpose();
  return K;
}

double Eigenbasis::eigenvalue_total() const {
  switch (kind_) {
    case BasisKind::kBrownianMotion:
      // sum pi^-2 (n-1/2)^-2 = pi^-2 * pi^2/2
      return 0.5;
    case BasisKind::kDirichletPower: {
      // pi^-2a * zeta(2a), summed to the cutoff with the integral tail.
      const double s = 2.0 * alpha_;
      double acc = 0.0;
      for (long n = 1; n <= kTailCutoff; ++n)
        acc += std::pow(static_cast<double>(n), -s);
      acc += std::pow(static_cast<double>(kTailCutoff), 1.0 - s) / (s - 1.0);
      return std::pow(kPi, -s) * acc;
    }
    case BasisKind::kPeriodicFourier:
    case BasisKind::kCustom: {
      double acc = 0.0;
      for (int n = 1; n <= truncation_; ++n) acc += eigenvalue(n);
      return acc;
    }
  }
  return 0.0;
}

double Eigenbasis::energy_ratio(int k) const {
  if (k < 1) throw ConfigError("energy_ratio: k must be >= 1");
  k = std::min(k, truncation_);
  double part = 0.0;
  for (int n = 1; n <= k; ++n) part += eigenvalue(n);
  return part / eigenvalue_total();
}

double Eigenbasis::orthonormality_defect(int n_max, int quadrature_points) const {
  if (n_max < 1 || n_max > truncation_)
    throw ConfigError("orthonormality_defect: n_max outside [1, K]");
  if (quadrature_points < 2)
    throw ConfigError("orthonormality_defect: need at least 2 quadrature points");
  const Eigen::Index q = quadrature_points;
  // For the periodic family orthonormality holds on one period.
  const double a = (kind_ == BasisKind::kPeriodicFourier) ? 0.0 : domain_min_;
  const double b = (kind_ == BasisKind::kPeriodicFourier) ? period_ : domain_max_;
  const double h = (b - a) / static_cast<double>(q - 1);
  ArrayXd xs = ArrayXd::LinSpaced(q, a, b);
  ArrayXd w = ArrayXd::Constant(q, h);
  w[0] = 0.5 * h;
  w[q - 1] = 0.5 * h;

  MatrixXd phi(q, n_max);
  for (int n = 1; n <= n_max; ++n)
    phi.col(n - 1) = eigenfunction_batch(n, xs).matrix();
  MatrixXd gram = phi.transpose() * w.matrix().asDiagonal() * phi;
  gram.diagonal().array() -= 1.0;
  return gram.array().abs().maxCoeff();
}

std::string Eigenbasis::kind_name() const {
  switch (kind_) {
    case BasisKind::kBrownianMotion: return "brownian_motion";
    case BasisKind::kDirichletPower: return "dirichlet_power";
    case BasisKind::kPeriodicFourier: return "periodic_fourier";
    case BasisKind::kCustom: return "custom";
  }
  return "";
}

}  // namespace mbn
