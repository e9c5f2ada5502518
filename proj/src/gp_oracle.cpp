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

#include "mercerbnn/gp_oracle.hpp"

#include <algorithm>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "mercerbnn/errors.hpp"

namespace mbn {

using Eigen::MatrixXd;
using Eigen::VectorXd;

KernelFn min_kernel() {
  return [](double s, double t) { return std::min(s, t); };
}

KernelFn bridge_kernel() {
  return [](double s, double t) { return std::min(s, t) - s * t; };
}

KernelFn truncated_mercer_kernel(EigenbasisPtr basis) {
  return [basis](double s, double t) { return basis->truncated_kernel(s, t); };
}

MatrixXd kernel_gram(const KernelFn& kernel, const VectorXd& grid) {
  const Eigen::Index m = grid.size();
  MatrixXd K(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      K(i, j) = kernel(grid[i], grid[j]);
      K(j, i) = K(i, j);
    }
  }
  return K;
}

namespace {

// Cholesky factor with jitter escalation. Zero matrices factor cleanly.
MatrixXd factor_with_jitter(const MatrixXd& K, double jitter) {
  if (jitter < 0.0) throw ConfigError("gp_sample_exact: jitter must be >= 0");
  double j = std::max(jitter, 0.0);
  for (;;) {
    MatrixXd A = K;
    A.diagonal().array() += j;
    Eigen::LLT<MatrixXd> llt(A);
    if (llt.info() == Eigen::Success) return llt.matrixL();
    j = (j == 0.0) ? 1e-12 : 10.0 * j;
    if (j > 1e-6) {
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(K, Eigen::EigenvaluesOnly);
      std::ostringstream os;
      os << "gp_sample_exact: factorization failed after jitter escalation to 1e-6; "
         << "smallest kernel-matrix eigenvalue " << es.eigenvalues().minCoeff();
      throw NumericError(os.str());
    }
  }
}

}  // namespace

MatrixXd gp_sample_exact_many(const KernelFn& kernel, const VectorXd& grid,
                              int n_draws, RngStream& rng, double jitter) {
  if (grid.size() == 0) throw ConfigError("gp_sample_exact: empty grid");
  if (n_draws < 1) throw ConfigError("gp_sample_exact: need n_draws >= 1");
  const MatrixXd L = factor_with_jitter(kernel_gram(kernel, grid), jitter);
  MatrixXd draws(n_draws, grid.size());
  VectorXd xi(grid.size());
  for (int i = 0; i < n_draws; ++i) {
    RngStream sub = rng.split(static_cast<std::uint64_t>(i));
    fill_normal(sub, xi);
    draws.row(i) = (L * xi).transpose();
  }
  return draws;
}

VectorXd gp_sample_exact(const KernelFn& kernel, const VectorXd& grid,
                         RngStream& rng, double jitter) {
  return gp_sample_exact_many(kernel, grid, 1, rng, jitter).row(0);
}

MatrixXd kle_sample_many(const Eigenbasis& basis, const VectorXd& grid,
                         int n_draws, RngStream& rng) {
  if (n_draws < 1) throw ConfigError("kle_sample: need n_draws >= 1");
  const int K = basis.truncation();
  MatrixXd phi(grid.size(), K);
  VectorXd root_lambda(K);
  for (int n = 1; n <= K; ++n) {
    phi.col(n - 1) = basis.eigenfunction_batch(n, grid.array()).matrix();
    root_lambda[n - 1] = std::sqrt(basis.eigenvalue(n));
  }
  MatrixXd draws(n_draws, grid.size());
  VectorXd xi(K);
  for (int i = 0; i < n_draws; ++i) {
    RngStream sub = rng.split(static_cast<std::uint64_t>(i));
    fill_normal(sub, xi);
    draws.row(i) = (phi * root_lambda.cwiseProduct(xi)).transpose();
  }
  return draws;
}

VectorXd kle_sample(const Eigenbasis& basis, const VectorXd& grid, RngStream& rng) {
  return kle_sample_many(basis, grid, 1, rng).row(0);
}

}  // namespace mbn
