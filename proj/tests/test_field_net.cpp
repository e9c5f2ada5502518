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

#include <mercerbnn/errors.hpp>
#include <mercerbnn/field_net.hpp>

#include "oracle_helpers.hpp"

using namespace mbn;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

Architecture small_arch(int width, WrapperKind wrap,
                        Activation act = Activation::kSigmoid) {
  Architecture a;
  a.input_dim = 1;
  a.hidden_widths = {width};
  a.activation = act;
  a.wrapper = wrap;
  return a;
}

VectorXd random_theta(const Architecture& arch, std::uint64_t seed) {
  RngStream rng = derive_stream(seed);
  return init_params(arch, rng);
}

}  // namespace

TEST_CASE("times-t wrapper with zero output weights is identically zero") {
  Architecture arch = small_arch(8, WrapperKind::kTimesT);
  VectorXd theta = random_theta(arch, 7);
  theta.tail(8).setZero();  // output weight row
  for (double t : {0.0, 0.1, 0.5, 0.99, 1.0})
    CHECK(forward(arch, theta, t) == 0.0);
}

TEST_CASE("single sigmoid neuron with zero input weight gives 0.5 everywhere") {
  Architecture arch = small_arch(1, WrapperKind::kIdentity);
  VectorXd theta(3);
  theta << 0.0, 0.0, 1.0;  // input weight, bias, output weight
  for (double t : {-2.0, 0.0, 0.3, 1.0})
    CHECK(forward(arch, theta, t) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("bridge wrapper vanishes exactly at both endpoints") {
  Architecture arch = small_arch(16, WrapperKind::kBridge);
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    VectorXd theta = random_theta(arch, seed);
    CHECK(forward(arch, theta, 0.0) == 0.0);
    CHECK(forward(arch, theta, 1.0) == 0.0);
  }
}

TEST_CASE("forward_batch matches looped forward") {
  Architecture arch = small_arch(8, WrapperKind::kTimesT);
  arch.fourier = FourierFeatures::draw(4, 1, 10.0, 99);
  VectorXd theta = random_theta(arch, 11);

  SUBCASE("empty batch") {
    CHECK(forward_batch(arch, theta, VectorXd(0)).size() == 0);
  }
  SUBCASE("singleton") {
    VectorXd ts(1);
    ts << 0.37;
    CHECK(forward_batch(arch, theta, ts)[0] == forward(arch, theta, 0.37));
  }
  SUBCASE("100 random points, zero max abs diff") {
    RngStream rng = derive_stream(123);
    VectorXd ts(100);
    for (int i = 0; i < 100; ++i) ts[i] = rng.uniform();
    const VectorXd batched = forward_batch(arch, theta, ts);
    for (int i = 0; i < 100; ++i)
      CHECK(batched[i] == forward(arch, theta, ts[i]));
  }
}

TEST_CASE("grad_params is linear in cotangents") {
  Architecture arch = small_arch(8, WrapperKind::kIdentity);
  VectorXd theta = random_theta(arch, 5);
  VectorXd ts(2);
  ts << 0.2, 0.8;

  SUBCASE("zero cotangents give the zero vector") {
    CHECK(grad_params(arch, theta, ts, VectorXd::Zero(2)).isZero(0.0));
  }
  SUBCASE("two points equal the sum of single-point gradients") {
    VectorXd c(2);
    c << 1.3, -0.4;
    VectorXd t0(1), t1(1), c0(1), c1(1);
    t0 << ts[0];
    t1 << ts[1];
    c0 << c[0];
    c1 << c[1];
    const VectorXd combined = grad_params(arch, theta, ts, c);
    const VectorXd split = grad_params(arch, theta, t0, c0) +
                           grad_params(arch, theta, t1, c1);
    CHECK((combined - split).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("analytic gradient matches central finite differences") {
  Architecture arch = small_arch(8, WrapperKind::kIdentity);
  arch.fourier = FourierFeatures::draw(3, 1, 5.0, 21);
  VectorXd theta = random_theta(arch, 17);

  RngStream rng = derive_stream(31);
  VectorXd ts(10), cot(10);
  for (int i = 0; i < 10; ++i) {
    ts[i] = rng.uniform();
    cot[i] = rng.normal();
  }
  auto objective = [&](const VectorXd& p) {
    return forward_batch(arch, p, ts).dot(cot);
  };
  const VectorXd analytic = grad_params(arch, theta, ts, cot);
  const VectorXd fd = testing::finite_difference_gradient(objective, theta, 1e-5);
  CHECK(testing::max_rel_error(analytic, fd) <= 1e-5);
}

TEST_CASE("every wrapper differentiates correctly at random draws") {
  for (WrapperKind wrap : {WrapperKind::kIdentity, WrapperKind::kTimesT,
                           WrapperKind::kBridge, WrapperKind::kSoftplus,
                           WrapperKind::kMeanShift}) {
    Architecture arch = small_arch(6, wrap);
    arch.mean_shift = {0.3, 0.95};
    VectorXd theta = random_theta(arch, 40 + static_cast<int>(wrap));
    RngStream rng = derive_stream(50 + static_cast<int>(wrap));
    VectorXd ts(5), cot(5);
    for (int i = 0; i < 5; ++i) {
      ts[i] = rng.uniform();
      cot[i] = rng.normal();
    }
    auto objective = [&](const VectorXd& p) {
      return forward_batch(arch, p, ts).dot(cot);
    };
    const VectorXd analytic = grad_params(arch, theta, ts, cot);
    const VectorXd fd = testing::finite_difference_gradient(objective, theta, 1e-5);
    CHECK(testing::max_rel_error(analytic, fd) <= 1e-5);
  }
}

TEST_CASE("tanh activation also differentiates correctly") {
  Architecture arch = small_arch(6, WrapperKind::kIdentity, Activation::kTanh);
  VectorXd theta = random_theta(arch, 61);
  VectorXd ts(4), cot(4);
  RngStream rng = derive_stream(62);
  for (int i = 0; i < 4; ++i) {
    ts[i] = rng.uniform();
    cot[i] = rng.normal();
  }
  auto objective = [&](const VectorXd& p) {
    return forward_batch(arch, p, ts).dot(cot);
  };
  CHECK(testing::max_rel_error(grad_params(arch, theta, ts, cot),
                               testing::finite_difference_gradient(objective, theta))
        <= 1e-5);
}

TEST_CASE("softplus wrapper output is strictly positive") {
  Architecture arch = small_arch(8, WrapperKind::kSoftplus);
  for (std::uint64_t seed : {3ull, 4ull}) {
    VectorXd theta = 5.0 * random_theta(arch, seed);
    for (double t : {0.0, 0.25, 0.5, 1.0})
      CHECK(forward(arch, theta, t) > 0.0);
  }
}

TEST_CASE("multi-layer networks evaluate and differentiate") {
  Architecture arch;
  arch.hidden_widths = {6, 5};
  arch.wrapper = WrapperKind::kIdentity;
  VectorXd theta = random_theta(arch, 71);
  CHECK(theta.size() == arch.param_count());
  VectorXd ts(3), cot(3);
  ts << 0.1, 0.4, 0.9;
  cot << 1.0, -2.0, 0.5;
  auto objective = [&](const VectorXd& p) {
    return forward_batch(arch, p, ts).dot(cot);
  };
  CHECK(testing::max_rel_error(grad_params(arch, theta, ts, cot),
                               testing::finite_difference_gradient(objective, theta))
        <= 1e-5);
}

TEST_CASE("forward is deterministic") {
  Architecture arch = small_arch(16, WrapperKind::kTimesT);
  arch.fourier = FourierFeatures::draw(8, 1, 10.0, 3);
  VectorXd theta = random_theta(arch, 9);
  const double a = forward(arch, theta, 0.618);
  const double b = forward(arch, theta, 0.618);
  CHECK(a == b);
}

TEST_CASE("parameter length mismatch is a configuration error") {
  Architecture arch = small_arch(4, WrapperKind::kIdentity);
  VectorXd theta = VectorXd::Zero(arch.param_count() + 1);
  CHECK_THROWS_AS(forward(arch, theta, 0.5), ConfigError);
  VectorXd ts(2), cot(3);
  ts << 0.1, 0.2;
  cot << 1, 2, 3;
  VectorXd ok = VectorXd::Zero(arch.param_count());
  CHECK_THROWS_AS(grad_params(arch, ok, ts, cot), ConfigError);
}

TEST_CASE("invalid architectures are rejected") {
  Architecture arch;
  arch.hidden_widths = {};
  CHECK_THROWS_AS(arch.validate(), ConfigError);
  arch.hidden_widths = {0};
  CHECK_THROWS_AS(arch.validate(), ConfigError);
  CHECK_THROWS_AS(activation_from_name("relu"), ConfigError);
}

TEST_CASE("model JSON round trip preserves evaluation bit-for-bit") {
  Architecture arch = small_arch(12, WrapperKind::kMeanShift);
  arch.mean_shift = {0.0, 0.95};
  arch.fourier = FourierFeatures::draw(6, 1, 10.0, 13);
  VectorXd theta = random_theta(arch, 77);

  const std::string doc = model_to_json(arch, theta);
  auto [arch2, theta2] = model_from_json(doc);
  CHECK(theta2.size() == theta.size());
  RngStream rng = derive_stream(78);
  for (int i = 0; i < 20; ++i) {
    const double t = rng.uniform();
    CHECK(forward(arch, theta, t) == forward(arch2, theta2, t));
  }
}

TEST_CASE("fourier feature matrix is fixed and reproducible") {
  const auto a = FourierFeatures::draw(5, 1, 10.0, 42);
  const auto b = FourierFeatures::draw(5, 1, 10.0, 42);
  CHECK(a.frequencies == b.frequencies);
  const auto c = FourierFeatures::draw(5, 1, 10.0, 43);
  CHECK(a.frequencies != c.frequencies);
}
