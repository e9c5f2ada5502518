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

#include "mercerbnn/sgld.hpp"

#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "mercerbnn/errors.hpp"

namespace mbn {

using Eigen::VectorXd;

double StepSchedule::at(std::int64_t t) const {
  if (kind == Kind::kConstant) return epsilon;
  return a * std::pow(b + static_cast<double>(t), -gamma);
}

StepSchedule StepSchedule::constant(double eps) {
  StepSchedule s;
  s.kind = Kind::kConstant;
  s.epsilon = eps;
  return s;
}

StepSchedule StepSchedule::poly_decay(double a, double b, double gamma) {
  StepSchedule s;
  s.kind = Kind::kPolyDecay;
  s.a = a;
  s.b = b;
  s.gamma = gamma;
  return s;
}

void ChainConfig::validate() const {
  if (steps < 1) throw ConfigError("ChainConfig: steps must be >= 1");
  if (burn_in < 0 || burn_in >= steps)
    throw ConfigError("ChainConfig: burn_in must lie in [0, steps)");
  if (thinning < 1) throw ConfigError("ChainConfig: thinning must be >= 1");
  if (schedule.at(1) <= 0.0 || schedule.at(steps) <= 0.0)
    throw ConfigError("ChainConfig: step sizes must stay positive");
}

void LogDensity::add_term(std::shared_ptr<const LogDensityTerm> term) {
  if (!term) throw ConfigError("LogDensity: null term");
  terms_.push_back(std::move(term));
}

TermEval LogDensity::eval(const VectorXd& theta, RngStream& rng) const {
  TermEval total;
  total.grad = VectorXd::Zero(theta.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    RngStream sub = rng.split(i + 1);
    TermEval e = terms_[i]->eval(theta, sub);
    total.value += e.value;
    total.grad += e.grad;
  }
  return total;
}

ChainState sgld_step(const ChainState& state, const LogDensity& target,
                     double eps, bool inject_noise) {
  if (!(eps > 0.0)) throw ConfigError("sgld_step: step size must be positive");
  const std::int64_t t = state.t + 1;
  RngStream step_stream = derive_stream(state.seed, state.chain_id,
                                        static_cast<std::uint64_t>(t));
  TermEval e = target.eval(state.theta, step_stream);
  if (!e.grad.allFinite()) {
    std::ostringstream os;
    os << "sgld_step: non-finite gradient at step " << t;
    throw NumericError(os.str());
  }
  ChainState next;
  next.theta = state.theta + 0.5 * eps * e.grad;
  if (inject_noise) {
    RngStream noise = step_stream.split(0);
    VectorXd eta(state.theta.size());
    fill_normal(noise, eta);
    next.theta += std::sqrt(eps) * eta;
  }
  next.t = t;
  next.seed = state.seed;
  next.chain_id = state.chain_id;
  return next;
}

std::vector<VectorXd> run_chain(const LogDensity& target, const ChainConfig& config,
                                const VectorXd& theta0, std::uint64_t chain_id) {
  config.validate();
  std::vector<VectorXd> kept;
  kept.reserve(static_cast<std::size_t>(config.kept_count()));
  ChainState state{theta0, 0, config.seed, chain_id};
  for (std::int64_t t = 1; t <= config.steps; ++t) {
    try {
      state = sgld_step(state, target, config.schedule.at(t), config.inject_noise);
    } catch (const NumericError& e) {
      std::ostringstream os;
      os << "chain " << chain_id << ": " << e.what();
      throw NumericError(os.str());
    }
    if (t > config.burn_in && (t - config.burn_in) % config.thinning == 0)
      kept.push_back(state.theta);
  }
  return kept;
}

std::vector<VectorXd> run_chains(
    const LogDensity& target, const ChainConfig& config, int n_chains,
    const std::function<VectorXd(std::uint64_t)>& init, int threads) {
  if (n_chains < 1) throw ConfigError("run_chains: need at least one chain");
  threads = std::max(1, std::min(threads, n_chains));
  std::vector<std::vector<VectorXd>> per_chain(n_chains);
  std::vector<std::string> failures(n_chains);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int c = next.fetch_add(1);
      if (c >= n_chains) return;
      try {
        per_chain[c] = run_chain(target, config, init(static_cast<std::uint64_t>(c)),
                                 static_cast<std::uint64_t>(c));
      } catch (const std::exception& e) {
        failures[c] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (const auto& f : failures)
    if (!f.empty()) throw NumericError(f);

  std::vector<VectorXd> all;
  for (auto& chain : per_chain)
    for (auto& s : chain) all.push_back(std::move(s));
  return all;
}

VectorXd map_optimize(const LogDensity& target, const MapConfig& config,
                      VectorXd theta) {
  if (config.steps < 0) throw ConfigError("map_optimize: steps must be >= 0");
  VectorXd m = VectorXd::Zero(theta.size());
  VectorXd v = VectorXd::Zero(theta.size());
  for (int t = 1; t <= config.steps; ++t) {
    RngStream rng = derive_stream(config.seed, 0x4d4150ull, static_cast<std::uint64_t>(t));
    TermEval e = target.eval(theta, rng);
    if (!std::isfinite(e.value) || !e.grad.allFinite()) {
      std::ostringstream os;
      os << "map_optimize: non-finite objective or gradient at step " << t;
      throw NumericError(os.str());
    }
    m = config.beta1 * m + (1.0 - config.beta1) * e.grad;
    v = config.beta2 * v.array().matrix() +
        (1.0 - config.beta2) * e.grad.array().square().matrix();
    const double bc1 = 1.0 - std::pow(config.beta1, t);
    const double bc2 = 1.0 - std::pow(config.beta2, t);
    // Ascent on the log-density.
    theta.array() += config.learning_rate * (m.array() / bc1) /
                     ((v.array() / bc2).sqrt() + config.epsilon_hat);
  }
  return theta;
}

}  // namespace mbn
