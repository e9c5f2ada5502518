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

#include "mercerbnn/field_net.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mercerbnn/errors.hpp"

namespace mbn {

using Eigen::ArrayXd;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using json = nlohmann::json;

FourierFeatures FourierFeatures::draw(int n_features, int input_dim,
                                      double scale, std::uint64_t seed) {
  if (n_features < 1 || input_dim < 1 || scale <= 0.0) {
    throw ConfigError("FourierFeatures: need n_features >= 1, input_dim >= 1, scale > 0");
  }
  FourierFeatures ff;
  ff.scale = scale;
  ff.frequencies.resize(n_features, input_dim);
  RngStream rng = derive_stream(seed, 0x466f75726965ull);  // fixed slot
  for (int i = 0; i < n_features; ++i)
    for (int j = 0; j < input_dim; ++j) ff.frequencies(i, j) = scale * rng.normal();
  return ff;
}

void Architecture::validate() const {
  if (input_dim < 1) throw ConfigError("Architecture: input_dim must be >= 1");
  if (hidden_widths.empty())
    throw ConfigError("Architecture: need at least one hidden layer");
  for (int w : hidden_widths)
    if (w < 1) throw ConfigError("Architecture: hidden widths must be >= 1");
  if (fourier && fourier->frequencies.cols() != input_dim)
    throw ConfigError("Architecture: Fourier frequency matrix columns must equal input_dim");
}

int Architecture::feature_dim() const {
  return fourier ? fourier->output_dim() : input_dim;
}

int Architecture::param_count() const {
  int n = 0;
  int prev = feature_dim();
  for (int w : hidden_widths) {
    n += w * prev + w;
    prev = w;
  }
  n += prev;  // output weights, no bias
  return n;
}

Architecture Architecture::with_wrapper(WrapperKind k) const {
  Architecture a = *this;
  a.wrapper = k;
  return a;
}

ParamVector init_params(const Architecture& arch, RngStream& rng,
                        double output_scale) {
  arch.validate();
  ParamVector theta(arch.param_count());
  int pos = 0;
  int prev = arch.feature_dim();
  for (int w : arch.hidden_widths) {
    const double std = 1.0 / std::sqrt(static_cast<double>(prev));
    for (int i = 0; i < w * prev; ++i) theta[pos++] = std * rng.normal();
    for (int i = 0; i < w; ++i) theta[pos++] = std * rng.normal();
    prev = w;
  }
  const double std = output_scale / std::sqrt(static_cast<double>(prev));
  for (int i = 0; i < prev; ++i) theta[pos++] = std * rng.normal();
  return theta;
}

namespace {

using RowMatrixXd =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Derived>
void apply_activation(Activation act, Eigen::MatrixBase<Derived>& z) {
  if (act == Activation::kSigmoid) {
    z = z.array().logistic().matrix();
  } else {
    z = z.array().tanh().matrix();
  }
}

double wrap_value(const Architecture& arch, double t, double f) {
  switch (arch.wrapper) {
    case WrapperKind::kIdentity:
      return f;
    case WrapperKind::kTimesT:
      return t * f;
    case WrapperKind::kBridge:
      return t * (1.0 - t) * f;
    case WrapperKind::kSoftplus:
      return f > 0.0 ? f + std::log1p(std::exp(-f)) : std::log1p(std::exp(f));
    case WrapperKind::kMeanShift:
      return arch.mean_shift(t) + f;
  }
  return f;
}

double wrap_deriv(const Architecture& arch, double t, double f) {
  switch (arch.wrapper) {
    case WrapperKind::kIdentity:
    case WrapperKind::kMeanShift:
      return 1.0;
    case WrapperKind::kTimesT:
      return t;
    case WrapperKind::kBridge:
      return t * (1.0 - t);
    case WrapperKind::kSoftplus:
      return 1.0 / (1.0 + std::exp(-f));
  }
  return 1.0;
}

RowMatrixXd feature_map(const Architecture& arch, const MatrixXd& xs) {
  if (!arch.fourier) return xs;
  // Row-wise phases; cos/sin are elementwise, so per-point values do not
  // depend on the batch size.
  RowMatrixXd phase = xs.lazyProduct(arch.fourier->frequencies.transpose());
  RowMatrixXd feats(xs.rows(), 2 * phase.cols());
  feats.leftCols(phase.cols()) = phase.array().cos().matrix();
  feats.rightCols(phase.cols()) = phase.array().sin().matrix();
  return feats;
}

}  // namespace

BatchEvaluator::BatchEvaluator(const Architecture& arch, const ParamVector& theta,
                               ExecMode mode)
    : arch_(arch), mode_(mode) {
  arch_.validate();
  if (theta.size() != arch_.param_count()) {
    std::ostringstream os;
    os << "parameter vector length " << theta.size()
       << " does not match architecture (expected " << arch_.param_count() << ")";
    throw ConfigError(os.str());
  }
  int pos = 0;
  int prev = arch_.feature_dim();
  for (int w : arch_.hidden_widths) {
    RowMatrixXd W(w, prev);
    for (int i = 0; i < w; ++i)
      for (int j = 0; j < prev; ++j) W(i, j) = theta[pos++];
    VectorXd b = theta.segment(pos, w);
    pos += w;
    weights_.push_back(std::move(W));
    biases_.push_back(std::move(b));
    prev = w;
  }
  out_weights_ = theta.segment(pos, prev);
}

const VectorXd& BatchEvaluator::forward(const MatrixXd& xs) {
  if (xs.cols() != arch_.input_dim)
    throw ConfigError("forward: point dimension does not match input_dim");
  xs_ = xs;
  features_ = feature_map(arch_, xs);
  hidden_.clear();
  const RowMatrixXd* prev = &features_;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    // lazyProduct keeps each output coefficient a standalone contiguous dot
    // product, so row i is bit-identical whether evaluated alone or batched.
    RowMatrixXd z = (mode_ == ExecMode::kRowwise)
                        ? RowMatrixXd((*prev).lazyProduct(weights_[l].transpose()))
                        : RowMatrixXd((*prev) * weights_[l].transpose());
    z.rowwise() += biases_[l].transpose();
    apply_activation(arch_.activation, z);
    hidden_.push_back(std::move(z));
    prev = &hidden_.back();
  }
  net_out_ = (mode_ == ExecMode::kRowwise)
                 ? VectorXd(hidden_.back().lazyProduct(out_weights_))
                 : VectorXd(hidden_.back() * out_weights_);
  wrapped_.resize(net_out_.size());
  for (Eigen::Index i = 0; i < net_out_.size(); ++i)
    wrapped_[i] = wrap_value(arch_, xs_(i, 0), net_out_[i]);
  return wrapped_;
}

const VectorXd& BatchEvaluator::forward(const VectorXd& ts) {
  return forward(MatrixXd(ts));
}

VectorXd BatchEvaluator::backward(const VectorXd& cotangents) const {
  if (cotangents.size() != net_out_.size())
    throw ConfigError("backward: cotangent length does not match batch size");
  const Eigen::Index n = cotangents.size();

  VectorXd delta_out(n);
  for (Eigen::Index i = 0; i < n; ++i)
    delta_out[i] = cotangents[i] * wrap_deriv(arch_, xs_(i, 0), net_out_[i]);

  VectorXd grad(arch_.param_count());
  const std::size_t L = weights_.size();

  // Output layer: row vector times row-major H keeps the reduction contiguous.
  const VectorXd g_out = (delta_out.transpose() * hidden_.back()).transpose();

  // Walk hidden layers backward, filling `grad` segments forward afterwards.
  std::vector<RowMatrixXd> grad_w(L);
  std::vector<VectorXd> grad_b(L);
  const bool sigmoid = arch_.activation == Activation::kSigmoid;
  auto scale_by_deriv = [&](RowMatrixXd& d, const RowMatrixXd& h) {
    if (sigmoid)
      d.array() *= h.array() * (1.0 - h.array());
    else
      d.array() *= 1.0 - h.array().square();
  };
  RowMatrixXd delta = delta_out * out_weights_.transpose();
  scale_by_deriv(delta, hidden_.back());
  for (std::size_t l = L; l-- > 0;) {
    const RowMatrixXd& input = (l == 0) ? features_ : hidden_[l - 1];
    grad_w[l] = delta.transpose() * input;  // w x prev
    grad_b[l] = delta.colwise().sum().transpose();
    if (l > 0) {
      RowMatrixXd next = delta * weights_[l];
      scale_by_deriv(next, hidden_[l - 1]);
      delta = std::move(next);
    }
  }

  int pos = 0;
  for (std::size_t l = 0; l < L; ++l) {
    const auto& W = grad_w[l];
    grad.segment(pos, W.size()) = Eigen::Map<const VectorXd>(W.data(), W.size());
    pos += static_cast<int>(W.size());
    grad.segment(pos, grad_b[l].size()) = grad_b[l];
    pos += static_cast<int>(grad_b[l].size());
  }
  grad.segment(pos, g_out.size()) = g_out;
  return grad;
}

double forward(const Architecture& arch, const ParamVector& theta,
               const Eigen::VectorXd& x) {
  BatchEvaluator ev(arch, theta);
  return ev.forward(MatrixXd(x.transpose()))[0];
}

double forward(const Architecture& arch, const ParamVector& theta, double t) {
  Eigen::VectorXd x(1);
  x[0] = t;
  return forward(arch, theta, x);
}

VectorXd forward_batch(const Architecture& arch, const ParamVector& theta,
                       const MatrixXd& xs) {
  if (xs.rows() == 0) return VectorXd(0);
  BatchEvaluator ev(arch, theta);
  return ev.forward(xs);
}

VectorXd forward_batch(const Architecture& arch, const ParamVector& theta,
                       const VectorXd& ts) {
  return forward_batch(arch, theta, MatrixXd(ts));
}

VectorXd grad_params(const Architecture& arch, const ParamVector& theta,
                     const MatrixXd& xs, const VectorXd& cotangents) {
  if (xs.rows() != cotangents.size())
    throw ConfigError("grad_params: xs and cotangents lengths differ");
  if (xs.rows() == 0) return VectorXd::Zero(arch.param_count());
  BatchEvaluator ev(arch, theta);
  ev.forward(xs);
  return ev.backward(cotangents);
}

VectorXd grad_params(const Architecture& arch, const ParamVector& theta,
                     const VectorXd& ts, const VectorXd& cotangents) {
  return grad_params(arch, theta, MatrixXd(ts), cotangents);
}

std::string activation_name(Activation a) {
  return a == Activation::kSigmoid ? "sigmoid" : "tanh";
}

Activation activation_from_name(const std::string& name) {
  if (name == "sigmoid") return Activation::kSigmoid;
  if (name == "tanh") return Activation::kTanh;
  throw ConfigError("unknown or non-differentiable activation: " + name);
}

std::string wrapper_name(WrapperKind w) {
  switch (w) {
    case WrapperKind::kIdentity:  return "identity";
    case WrapperKind::kTimesT:    return "times_t";
    case WrapperKind::kBridge:    return "bridge";
    case WrapperKind::kSoftplus:  return "softplus";
    case WrapperKind::kMeanShift: return "mean_shift";
  }
  return "identity";
}

WrapperKind wrapper_from_name(const std::string& name) {
  if (name == "identity") return WrapperKind::kIdentity;
  if (name == "times_t") return WrapperKind::kTimesT;
  if (name == "bridge") return WrapperKind::kBridge;
  if (name == "softplus") return WrapperKind::kSoftplus;
  if (name == "mean_shift") return WrapperKind::kMeanShift;
  throw ConfigError("unknown wrapper: " + name);
}

std::string model_to_json(const Architecture& arch, const ParamVector& theta) {
  arch.validate();
  if (theta.size() != arch.param_count())
    throw ConfigError("model_to_json: parameter vector does not match architecture");
  json j;
  j["input_dim"] = arch.input_dim;
  j["hidden_widths"] = arch.hidden_widths;
  j["activation"] = activation_name(arch.activation);
  j["wrapper"] = wrapper_name(arch.wrapper);
  if (arch.wrapper == WrapperKind::kMeanShift) {
    j["mean_shift"] = {{"intercept", arch.mean_shift.intercept},
                       {"slope", arch.mean_shift.slope}};
  }
  if (arch.fourier) {
    const auto& B = arch.fourier->frequencies;
    std::vector<std::vector<double>> rows(B.rows());
    for (Eigen::Index i = 0; i < B.rows(); ++i) {
      rows[i].resize(B.cols());
      for (Eigen::Index k = 0; k < B.cols(); ++k) rows[i][k] = B(i, k);
    }
    j["fourier"] = {{"scale", arch.fourier->scale}, {"frequencies", rows}};
  }
  j["params"] = std::vector<double>(theta.data(), theta.data() + theta.size());
  return j.dump();
}

std::pair<Architecture, ParamVector> model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("model_from_json: invalid JSON: ") + e.what());
  }
  Architecture arch;
  try {
    arch.input_dim = j.at("input_dim").get<int>();
    arch.hidden_widths = j.at("hidden_widths").get<std::vector<int>>();
    arch.activation = activation_from_name(j.at("activation").get<std::string>());
    arch.wrapper = wrapper_from_name(j.at("wrapper").get<std::string>());
    if (j.contains("mean_shift")) {
      arch.mean_shift.intercept = j["mean_shift"].at("intercept").get<double>();
      arch.mean_shift.slope = j["mean_shift"].at("slope").get<double>();
    }
    if (j.contains("fourier")) {
      FourierFeatures ff;
      ff.scale = j["fourier"].at("scale").get<double>();
      const auto rows = j["fourier"].at("frequencies")
                            .get<std::vector<std::vector<double>>>();
      if (rows.empty()) throw ConfigError("model_from_json: empty frequency matrix");
      ff.frequencies.resize(rows.size(), rows[0].size());
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != ff.frequencies.cols())
          throw ConfigError("model_from_json: ragged frequency matrix");
        for (std::size_t k = 0; k < rows[i].size(); ++k)
          ff.frequencies(i, k) = rows[i][k];
      }
      arch.fourier = std::move(ff);
    }
    const auto params = j.at("params").get<std::vector<double>>();
    arch.validate();
    if (static_cast<int>(params.size()) != arch.param_count())
      throw ConfigError("model_from_json: parameter count mismatch");
    ParamVector theta = Eigen::Map<const VectorXd>(params.data(), params.size());
    return {std::move(arch), std::move(theta)};
  } catch (const json::exception& e) {
    throw ConfigError(std::string("model_from_json: ") + e.what());
  }
}

}  // namespace mbn
