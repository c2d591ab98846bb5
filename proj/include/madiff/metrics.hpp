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

#include <cstddef>
#include <vector>

#include "madiff/block_matrix.hpp"
#include "madiff/solver.hpp"

namespace madiff {

/// Counts over the p(p-1)/2 unordered off-diagonal node pairs.
struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  /// tp / (tp + fn); 0 when there are no true edges.
  double tpr() const;
  /// tn / (tn + fp); 1 when there are no true non-edges.
  double tnr() const;
  double fpr() const { return 1.0 - tnr(); }
};

Confusion confusion(const EdgeSet& estimate, const EdgeSet& truth, int p);

/// 2 tp / (2 tp + fp + fn), or 0 when the denominator is 0.
double f1(const Confusion& c);

struct RocPoint {
  double lambda = 0.0;
  double tpr = 0.0;
  double fpr = 0.0;
  double f1 = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // lambda non-increasing
};

/// One solve per penalty, points ordered by decreasing lambda.
RocCurve roc_sweep(const BlockMatrix& sigma_x, const BlockMatrix& sigma_y,
                   const EdgeSet& truth, std::vector<double> lambdas,
                   const SolverConfig& solver, int jobs = 1);

/// Trapezoidal area under (fpr, tpr), anchored at (0, 0) and (1, 1).
double roc_auc(const RocCurve& curve);

}  // namespace madiff
