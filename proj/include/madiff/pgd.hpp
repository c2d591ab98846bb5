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
#include "madiff/solver.hpp"

/// Proximal gradient descent with fixed step 1/L for the same objective.
namespace madiff::pgd {

/// 1 / (phi_max(Sx) * phi_max(Sy)), the inverse Lipschitz constant of the
/// loss gradient. Throws DegenerateInputError if either top eigenvalue is not
/// positive.
double step_size(const BlockMatrix& sigma_x, const BlockMatrix& sigma_y);

/// Stops when |L(new) - L(old)| / max(1, |L(old)|) <= eps.
EstimateResult solve(const BlockMatrix& sigma_x, const BlockMatrix& sigma_y,
                     double lambda, const PgdConfig& config = {});

}  // namespace madiff::pgd
