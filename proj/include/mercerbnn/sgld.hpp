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

#ifndef MERCERBNN_SGLD_HPP_
#define MERCERBNN_SGLD_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "mercerbnn/rng.hpp"

namespace mbn {

// Stochastic-gradient Langevin chains over a composable log-density:
//
//   theta' = theta + eps/2 * g_hat + eta,   eta ~ N(0, eps I),
//
// with g_hat the sum of per-term unbiased stochastic gradients. A chain is
// fully determined by (seed, chain id, config): every step derives its
// noise and term streams by counter splitting, never by shared state, so
// chains can run in parallel and reproduce serial results exactly.

struct StepSchedule {
  enum class Kind { kConstant, kPolyDecay };
  Kind kind = Kind::kConstant;
  double epsilon = 1e-5;                      // constant
  double a = 1e-4, b = 1.0, gamma = 0.55;     // eps_t = a (b + t)^-gamma

  double at(std::int64_t t) const;
  static StepSchedule constant(double eps);
  static StepSchedule poly_decay(double a, double b, double gamma);
};

struct ChainConfig {
  std::int64_t steps = 0;
  StepSchedule schedule;
  std::int64_t burn_in = 0;
  std::int64_t thinning = 1;
  std::uint64_t seed = 0;
  int minibatch = 0;          // likelihood minibatch size B, read by terms
  bool inject_noise = true;   // test hook; keep true outside tests

  void validate() const;
  std::int64_t kept_count() const { return (steps - burn_in) / thinning; }
};

struct TermEval {
  double value = 0.0;
  Eigen::VectorXd grad;
};

// One additive term of the target log-density (prior, likelihood, ...).
// eval must return an unbiased stochastic (value, gradient) pair and be
// safe to call concurrently from several chains.
class LogDensityTerm {
 public:
  virtual ~LogDensityTerm() = default;
  virtual TermEval eval(const Eigen::VectorXd& theta, RngStream& rng) const = 0;
};

class LogDensity {
 public:
  void add_term(std::shared_ptr<const LogDensityTerm> term);
  TermEval eval(const Eigen::VectorXd& theta, RngStream& rng) const;
  std::size_t term_count() const { return terms_.size(); }

 private:
  std::vector<std::shared_ptr<const LogDensityTerm>> terms_;
};

struct ChainState {
  Eigen::VectorXd theta;
  std::int64_t t = 0;
  std::uint64_t seed = 0;
  std::uint64_t chain_id = 0;
};

// One update. Throws ConfigError for eps <= 0 and NumericError when the
// summed gradient is non-finite.
ChainState sgld_step(const ChainState& state, const LogDensity& target,
                     double eps, bool inject_noise = true);

// Runs `config.steps` updates from theta0, returning the post-burn-in
// thinned parameter vectors. Deterministic given (config, chain_id, theta0).
std::vector<Eigen::VectorXd> run_chain(const LogDensity& target,
                                       const ChainConfig& config,
                                       const Eigen::VectorXd& theta0,
                                       std::uint64_t chain_id = 0);

// Independent chains on a thread pool, samples concatenated in chain order.
std::vector<Eigen::VectorXd> run_chains(
    const LogDensity& target, const ChainConfig& config, int n_chains,
    const std::function<Eigen::VectorXd(std::uint64_t chain_id)>& init,
    int threads);

// Adam ascent on the stochastic log-density; MAP initialization for
// posteriors. Not guaranteed global.
struct MapConfig {
  int steps = 5000;
  double learning_rate = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon_hat = 1e-8;
  std::uint64_t seed = 0;
};

Eigen::VectorXd map_optimize(const LogDensity& target, const MapConfig& config,
                             Eigen::VectorXd theta0);

}  // namespace mbn

#endif  // MERCERBNN_SGLD_HPP_
