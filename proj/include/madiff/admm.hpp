// Copyright 2026 The madiff Authors.
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

#pragma once

#include <Eigen/Dense>

#include "madiff/block_matrix.hpp"
#include "madiff/loss.hpp"
#include "madiff/solver.hpp"

/// Two-block ADMM for the group-lasso penalized D-trace loss. The
/// single-attribute variant is the same iteration with groups of size one.
namespace madiff::admm {

struct SpectralFactors {
  Eigen::MatrixXd q;  // orthonormal eigenvectors, column-wise
  Eigen::VectorXd d;  // matching eigenvalues
};

struct Eigensystems {
  SpectralFactors x;
  SpectralFactors y;
};

/// Symmetric eigendecompositions of both covariances. Throws ArgumentError on
/// a non-symmetric input.
Eigensystems precompute_eigs(const BlockMatrix& sigma_x, const BlockMatrix& sigma_y);

/// Closed-form minimizer of the augmented Lagrangian in Delta:
/// Qx [B o (Qx^T (Sx - Sy + rho (W - U)) Qy)] Qy^T with
/// B_jk = 1 / (dx_j dy_k + rho).
BlockMatrix delta_update(const Eigensystems& eigs, const BlockMatrix& sigma_x,
                         const BlockMatrix& sigma_y, const BlockMatrix& w,
                         const BlockMatrix& u, double rho);

/// Group soft-thresholding: each group is scaled by max(0, 1 - kappa/||g||_F);
/// groups with norm <= kappa (up to a few ulps) become exactly zero.
BlockMatrix group_soft_threshold(const BlockMatrix& a, double kappa, GroupMode mode);

EstimateResult solve(const BlockMatrix& sigma_x, const BlockMatrix& sigma_y,
                     double lambda, const AdmmConfig& config = {});

}  // namespace madiff::admm
