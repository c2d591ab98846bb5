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

#include "madiff/block_matrix.hpp"
#include "madiff/loss.hpp"

/// Brute-force reference implementations for auditing solver output. These
/// deliberately share no code with the solvers and only scale to toy sizes.
namespace madiff::oracle {

struct KktReport {
  /// Worst ||G_b + lambda * D_b / ||D_b||_F||_F over groups with D_b != 0.
  double max_active_violation = 0.0;
  /// Worst max(0, ||G_b||_F - lambda) over groups with D_b == 0.
  double max_inactive_violation = 0.0;
  int active_groups = 0;
};

/// Solves (Sy kron Sx + rho I) vec(Delta) = vec(Sx - Sy + rho (W - U)) by dense
/// LU. Throws ArgumentError when m*p > 16.
BlockMatrix direct_delta_update(const BlockMatrix& sigma_x, const BlockMatrix& sigma_y,
                                const BlockMatrix& w, const BlockMatrix& u, double rho);

/// Subgradient optimality residuals of `delta` for the penalized loss, with
/// G = Sx Delta Sy - (Sx - Sy).
KktReport kkt_residual(const BlockMatrix& delta, const BlockMatrix& sigma_x,
                       const BlockMatrix& sigma_y, double lambda,
                       GroupMode mode = GroupMode::kMultiAttribute);

/// Minimizes the penalized loss on the vectorized problem with accelerated
/// proximal steps from several starting points and keeps the best. Throws
/// ArgumentError when m*p > 6.
BlockMatrix brute_force_minimize(const BlockMatrix& sigma_x, const BlockMatrix& sigma_y,
                                 double lambda,
                                 GroupMode mode = GroupMode::kMultiAttribute);

}  // namespace madiff::oracle
