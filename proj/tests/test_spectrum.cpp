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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>
#include <mercerbnn/errors.hpp>
#include <mercerbnn/spectrum.hpp>

using namespace mbn;
using Eigen::VectorXd;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("brownian motion eigenvalues") {
  const auto b = Eigenbasis::brownian_motion(10);
  CHECK(b.eigenvalue(1) == doctest::Approx(4.0 / (kPi * kPi)).epsilon(1e-12));
  CHECK(b.eigenvalue(2) == doctest::Approx(1.0 / (kPi * kPi * 2.25)).epsilon(1e-12));
}

TEST_CASE("dirichlet power eigenvalues and damping") {
  const auto bridge = Eigenbasis::dirichlet_power(1.0, 10);
  CHECK(bridge.eigenvalue(1) == doctest::Approx(1.0 / (kPi * kPi)).epsilon(1e-12));

  const auto damped = Eigenbasis::dirichlet_power(2.0, 10);
  CHECK(damped.eigenvalue(2) == doctest::Approx(std::pow(2.0 * kPi, -4.0)).epsilon(1e-12));
  // Damping formula cross-check: the alpha = 2 value is the alpha = 1 value squared.
  CHECK(damped.eigenvalue(2) ==
        doctest::Approx(bridge.eigenvalue(2) * bridge.eigenvalue(2)).epsilon(1e-12));
}

TEST_CASE("eigenfunction closed forms") {
  const auto bm = Eigenbasis::brownian_motion(5);
  CHECK(bm.eigenfunction(1, 0.5) == doctest::Approx(1.0).epsilon(1e-15));

  const auto d = Eigenbasis::dirichlet_power(1.5, 5);
  for (int n = 1; n <= 5; ++n) CHECK(d.eigenfunction(n, 0.0) == 0.0);

  const auto p = Eigenbasis::periodic_fourier(0.18, 5, 0.005);
  CHECK(p.eigenfunction(1, 0.3) == doctest::Approx(1.0 / std::sqrt(0.18)).epsilon(1e-12));
  CHECK(p.eigenvalue(1) == 1.0);
  // cos/sin pairs share an eigenvalue (multiplicity two).
  CHECK(p.eigenvalue(2) == p.eigenvalue(3));
  CHECK(p.eigenvalue(2) ==
        doctest::Approx(std::exp(-0.005 * std::pow(kPi / 0.18, 2))).epsilon(1e-12));
}

TEST_CASE("index range errors") {
  const auto b = Eigenbasis::brownian_motion(3);
  CHECK_THROWS_AS(b.eigenvalue(0), std::out_of_range);
  CHECK_THROWS_AS(b.eigenvalue(4), std::out_of_range);
  CHECK_THROWS_AS(b.eigenfunction(4, 0.5), std::out_of_range);
}

TEST_CASE("truncated kernel approaches closed forms") {
  SUBCASE("empty truncation is the empty sum") {
    const auto b = Eigenbasis::brownian_motion(0);
    CHECK(b.truncated_kernel(0.3, 0.8) == 0.0);
  }
  SUBCASE("brownian motion kernel min(s,t)") {
    const auto b = Eigenbasis::brownian_motion(5000);
    CHECK(std::abs(b.truncated_kernel(1.0, 1.0) - 1.0) < 1e-3);
    CHECK(std::abs(b.truncated_kernel(0.4, 0.7) - 0.4) < 1e-3);
  }
  SUBCASE("bridge kernel min(s,t) - st") {
    const auto b = Eigenbasis::dirichlet_power(1.0, 5000);
    CHECK(std::abs(b.truncated_kernel(0.3, 0.7) - 0.09) < 1e-3);
  }
}

TEST_CASE("energy ratio") {
  const auto bm = Eigenbasis::brownian_motion(100);
  CHECK(bm.eigenvalue_total() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(bm.energy_ratio(1) == doctest::Approx(8.0 / (kPi * kPi)).epsilon(1e-9));
  const double r20 = bm.energy_ratio(20);
  CHECK(r20 > 0.985);
  CHECK(r20 < 0.995);

  // A finite family sums to one at full truncation.
  std::vector<CustomEigenpair> pairs;
  for (int n = 1; n <= 4; ++n) {
    const auto phi = [n](double t) {
      return std::sqrt(2.0) * std::sin((n - 0.5) * kPi * t);
    };
    pairs.push_back({1.0 / (kPi * kPi * (n - 0.5) * (n - 0.5)), phi});
  }
  const auto custom = Eigenbasis::custom(pairs, 0.0, 1.0);
  CHECK(custom.energy_ratio(4) == doctest::Approx(1.0).epsilon(1e-12));

  // Dirichlet total via the zeta series: alpha = 1 gives 1/6.
  const auto d = Eigenbasis::dirichlet_power(1.0, 10);
  CHECK(d.eigenvalue_total() == doctest::Approx(1.0 / 6.0).epsilon(1e-6));
}

TEST_CASE("orthonormality defects under trapezoid quadrature") {
  const auto bm = Eigenbasis::brownian_motion(50);
  CHECK(bm.orthonormality_defect(10, 10000) <= 1e-6);
  CHECK(bm.orthonormality_defect(1, 10000) <= 1e-8);

  const auto p = Eigenbasis::periodic_fourier(0.18, 5, 0.005);
  CHECK(p.orthonormality_defect(11, 10001) <= 1e-6);
}

TEST_CASE("eigenvalues decay monotonically in every family") {
  const auto bm = Eigenbasis::brownian_motion(200);
  const auto d = Eigenbasis::dirichlet_power(2.0, 200);
  const auto p = Eigenbasis::periodic_fourier(0.18, 5, 0.005);
  for (const auto* basis : {&bm, &d, &p}) {
    for (int n = 1; n < basis->truncation(); ++n)
      CHECK(basis->eigenvalue(n + 1) <= basis->eigenvalue(n));
  }
}

TEST_CASE("truncated kernel matrices are symmetric and positive semidefinite") {
  const auto b = Eigenbasis::brownian_motion(64);
  const VectorXd grid = VectorXd::LinSpaced(40, 0.0, 1.0);
  const Eigen::MatrixXd K = b.kernel_matrix(grid);
  CHECK((K - K.transpose()).cwiseAbs().maxCoeff() == 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() >= -1e-10);
}

TEST_CASE("mercer convergence is monotone on a fixed grid") {
  const VectorXd grid = VectorXd::LinSpaced(100, 0.0, 1.0);
  double prev = 1e9;
  for (int K : {10, 100, 1000, 10000}) {
    const auto b = Eigenbasis::brownian_motion(K);
    double sup = 0.0;
    for (int i = 0; i < grid.size(); ++i)
      for (int j = 0; j <= i; ++j)
        sup = std::max(sup, std::abs(b.truncated_kernel(grid[i], grid[j]) -
                                     std::min(grid[i], grid[j])));
    CHECK(sup <= prev);
    prev = sup;
  }
  CHECK(prev <= 1e-2);  // K = 10^4
}

TEST_CASE("periodic eigenfunctions repeat with period rho") {
  const auto p = Eigenbasis::periodic_fourier(0.18, 5, 0.005);
  for (int n = 1; n <= p.truncation(); ++n) {
    for (double t : {0.05, 0.3, 0.77}) {
      CHECK(p.eigenfunction(n, t + 0.18) ==
            doctest::Approx(p.eigenfunction(n, t)).epsilon(1e-10));
    }
  }
}

TEST_CASE("custom bases validate their inputs") {
  const auto phi1 = [](double t) { return std::sqrt(2.0) * std::sin(kPi * t); };
  const auto phi2 = [](double t) { return std::sqrt(2.0) * std::sin(2.0 * kPi * t); };

  SUBCASE("orthonormal system passes") {
    const auto b = Eigenbasis::custom({{0.5, phi1}, {0.25, phi2}}, 0.0, 1.0);
    CHECK(b.truncation() == 2);
  }
  SUBCASE("non-orthonormal system is rejected") {
    const auto bad = [](double) { return 0.7; };
    CHECK_THROWS_AS(Eigenbasis::custom({{0.5, phi1}, {0.25, bad}}, 0.0, 1.0),
                    ConfigError);
  }
  SUBCASE("validation can be skipped explicitly") {
    const auto bad = [](double) { return 0.7; };
    CHECK_NOTHROW(Eigenbasis::custom({{0.5, phi1}, {0.25, bad}}, 0.0, 1.0, false));
  }
  SUBCASE("increasing eigenvalues are rejected") {
    CHECK_THROWS_AS(Eigenbasis::custom({{0.25, phi1}, {0.5, phi2}}, 0.0, 1.0),
                    ConfigError);
  }
  SUBCASE("non-positive eigenvalues are rejected") {
    CHECK_THROWS_AS(Eigenbasis::custom({{0.0, phi1}}, 0.0, 1.0), ConfigError);
  }
}

TEST_CASE("analytic eigenvalue derivative for the damping exponent") {
  const auto d = Eigenbasis::dirichlet_power(2.0, 5);
  const double h = 1e-6;
  const auto up = Eigenbasis::dirichlet_power(2.0 + h, 5);
  const auto down = Eigenbasis::dirichlet_power(2.0 - h, 5);
  for (int n = 1; n <= 5; ++n) {
    const double fd = (up.eigenvalue(n) - down.eigenvalue(n)) / (2.0 * h);
    CHECK(d.eigenvalue_dalpha(n) == doctest::Approx(fd).epsilon(1e-6));
  }
  const auto bm = Eigenbasis::brownian_motion(5);
  CHECK_THROWS_AS(bm.eigenvalue_dalpha(1), ConfigError);
}
