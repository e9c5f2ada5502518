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

#ifndef MERCERBNN_GP_ORACLE_HPP_
#define MERCERBNN_GP_ORACLE_HPP_

#include <functional>

#include <Eigen/Core>

#include "mercerbnn/rng.hpp"
#include "mercerbnn/spectrum.hpp"

namespace mbn {

// Reference samplers for validating ensembles: exact GP draws via dense
// symmetric factorization, and truncated Karhunen-Loeve draws.

using KernelFn = std::function<double(double, double)>;

KernelFn min_kernel();            // k(s,t) = min(s,t)
KernelFn bridge_kernel();         // k(s,t) = min(s,t) - s t
KernelFn truncated_mercer_kernel(EigenbasisPtr basis);

Eigen::MatrixXd kernel_gram(const KernelFn& kernel, const Eigen::VectorXd& grid);

// Draw z ~ N(0, K + jitter I) by Cholesky, escalating jitter tenfold up to
// 1e-6 before failing with the smallest eigenvalue in the message.
Eigen::VectorXd gp_sample_exact(const KernelFn& kernel, const Eigen::VectorXd& grid,
                                RngStream& rng, double jitter = 1e-12);

// n_draws rows of independent draws sharing one factorization.
Eigen::MatrixXd gp_sample_exact_many(const KernelFn& kernel,
                                     const Eigen::VectorXd& grid, int n_draws,
                                     RngStream& rng, double jitter = 1e-12);

// u = sum_{n<=K} sqrt(lambda_n) xi_n phi_n(grid), xi_n iid standard normal.
Eigen::VectorXd kle_sample(const Eigenbasis& basis, const Eigen::VectorXd& grid,
                           RngStream& rng);
Eigen::MatrixXd kle_sample_many(const Eigenbasis& basis, const Eigen::VectorXd& grid,
                                int n_draws, RngStream& rng);

}  // namespace mbn

#endif  // MERCERBNN_GP_ORACLE_HPP_
