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

#ifndef MERCERBNN_FIELD_NET_HPP_
#define MERCERBNN_FIELD_NET_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mercerbnn/rng.hpp"

namespace mbn {

// Parameterized scalar fields u(x) = wrapper(net(features(x))), where net is
// a small dense feedforward network with everywhere-differentiable
// activations. All types here are immutable after construction; forward and
// gradient evaluation are pure and safe to call concurrently.

enum class Activation { kSigmoid, kTanh };

// Output wrappers. TimesT and Bridge enforce boundary conditions exactly,
// Softplus maps to strictly positive fields, MeanShift adds a fixed affine
// mean. The wrapper is applied after the network: u = wrap(t, f(t)).
enum class WrapperKind { kIdentity, kTimesT, kBridge, kSoftplus, kMeanShift };

// Fixed random Fourier input layer: x -> [cos(Bx); sin(Bx)], with B an
// F x d matrix drawn once at construction (zero-mean Gaussian, std `scale`)
// and stored with the model. B is not a learned parameter.
struct FourierFeatures {
  Eigen::MatrixXd frequencies;  // F x d
  double scale = 0.0;           // std used to draw `frequencies`

  static FourierFeatures draw(int n_features, int input_dim, double scale,
                              std::uint64_t seed);
  int output_dim() const { return 2 * static_cast<int>(frequencies.rows()); }
};

// Affine mean m(t) = intercept + slope * t for the MeanShift wrapper,
// where t is the first input coordinate.
struct AffineMean {
  double intercept = 0.0;
  double slope = 0.0;
  double operator()(double t) const { return intercept + slope * t; }
};

struct Architecture {
  int input_dim = 1;
  std::vector<int> hidden_widths = {256};
  Activation activation = Activation::kSigmoid;
  std::optional<FourierFeatures> fourier;
  WrapperKind wrapper = WrapperKind::kIdentity;
  AffineMean mean_shift;  // used only when wrapper == kMeanShift

  // Throws ConfigError on invalid dimensions.
  void validate() const;

  // Dimension fed to the first dense layer (2F with Fourier features).
  int feature_dim() const;

  // Total number of parameters D. Flat layout, layer by layer: weights
  // row-major (out x in) then biases, hidden layers first, then the output
  // weight row (no output bias). This layout is the serialization order.
  int param_count() const;

  // Copy with a different output wrapper; the parameter layout is unchanged,
  // so the same ParamVector is valid for both views.
  Architecture with_wrapper(WrapperKind k) const;
};

using ParamVector = Eigen::VectorXd;

// Independent zero-mean Gaussian initialization, std 1/sqrt(fan-in) per
// layer. `output_scale` multiplies the output layer std only.
ParamVector init_params(const Architecture& arch, RngStream& rng,
                        double output_scale = 1.0);

double forward(const Architecture& arch, const ParamVector& theta,
               const Eigen::VectorXd& x);
double forward(const Architecture& arch, const ParamVector& theta, double t);

// Elementwise forward over rows of xs (n x d). Empty input gives an empty
// vector. Identical results to looping `forward`.
Eigen::VectorXd forward_batch(const Architecture& arch,
                              const ParamVector& theta,
                              const Eigen::MatrixXd& xs);
Eigen::VectorXd forward_batch(const Architecture& arch,
                              const ParamVector& theta,
                              const Eigen::VectorXd& ts);  // input_dim == 1

// Exact gradient of sum_i cotangents[i] * u(xs_i) with respect to theta.
Eigen::VectorXd grad_params(const Architecture& arch, const ParamVector& theta,
                            const Eigen::MatrixXd& xs,
                            const Eigen::VectorXd& cotangents);
Eigen::VectorXd grad_params(const Architecture& arch, const ParamVector& theta,
                            const Eigen::VectorXd& ts,
                            const Eigen::VectorXd& cotangents);

// Two-phase batch evaluation sharing the forward trace, for callers that
// need values before they can form cotangents. Binds (arch, theta) at
// construction; backward() reuses the trace of the last forward().
//
// The default execution mode reduces every output coefficient as a
// standalone dot product, which makes batched evaluation bit-identical to
// looped single-point evaluation. kFastGemm uses packed matrix products
// instead (a few ulps difference, batch-order dependent) and is the mode
// for long sampling runs.
enum class ExecMode { kRowwise, kFastGemm };

class BatchEvaluator {
 public:
  BatchEvaluator(const Architecture& arch, const ParamVector& theta,
                 ExecMode mode = ExecMode::kRowwise);

  const Eigen::VectorXd& forward(const Eigen::MatrixXd& xs);
  const Eigen::VectorXd& forward(const Eigen::VectorXd& ts);
  Eigen::VectorXd backward(const Eigen::VectorXd& cotangents) const;

  const Eigen::VectorXd& values() const { return wrapped_; }

 private:
  // Row-major storage so the forward pass reduces each point independently
  // of the batch size: batched and looped evaluation agree bit-for-bit.
  using RowMatrixXd =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  const Architecture arch_;
  const ExecMode mode_;
  std::vector<RowMatrixXd> weights_;
  std::vector<Eigen::VectorXd> biases_;
  Eigen::VectorXd out_weights_;

  Eigen::MatrixXd xs_;
  RowMatrixXd features_;
  std::vector<RowMatrixXd> hidden_;  // post-activation per layer
  Eigen::VectorXd net_out_;
  Eigen::VectorXd wrapped_;
};

// Model serialization: architecture descriptor, Fourier frequency matrix,
// and flat parameter vector as a JSON document. Field names are stable.
std::string model_to_json(const Architecture& arch, const ParamVector& theta);
std::pair<Architecture, ParamVector> model_from_json(const std::string& text);

std::string activation_name(Activation a);
Activation activation_from_name(const std::string& name);
std::string wrapper_name(WrapperKind w);
WrapperKind wrapper_from_name(const std::string& name);

}  // namespace mbn

#endif  // MERCERBNN_FIELD_NET_HPP_
