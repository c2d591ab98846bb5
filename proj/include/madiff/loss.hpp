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

namespace madiff {

/// Penalty grouping. Multi-attribute groups are the m x m blocks;
/// single-attribute groups are individual entries.
enum class GroupMode { kMultiAttribute, kSingleAttribute };

/// Edge length of one penalty group under `mode`.
inline int group_size(GroupMode mode, int m) {
  return mode == GroupMode::kMultiAttribute ? m : 1;
}

/// 1/2 tr(Sx D Sy D^T) - tr(D (Sx - Sy)).
double dtrace_loss(const BlockMatrix& delta, const BlockMatrix& sigma_x,
                   const BlockMatrix& sigma_y);

/// Sx D Sy - (Sx - Sy).
BlockMatrix loss_gradient(const BlockMatrix& delta, const BlockMatrix& sigma_x,
                          const BlockMatrix& sigma_y);

/// Sum of group Frobenius norms over every group, diagonal blocks included.
double group_penalty(const BlockMatrix& delta, GroupMode mode);

/// dtrace_loss + lambda * group_penalty. Throws ArgumentError for lambda < 0.
double penalized_loss(const BlockMatrix& delta, const BlockMatrix& sigma_x,
                      const BlockMatrix& sigma_y, double lambda,
                      GroupMode mode = GroupMode::kMultiAttribute);

/// Throws ArgumentError unless all three share (m, p).
void check_conforming(const BlockMatrix& delta, const BlockMatrix& sigma_x,
                      const BlockMatrix& sigma_y);

}  // namespace madiff
