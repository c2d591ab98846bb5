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

namespace madiff {

/// n observations of an (m*p)-dimensional vector in node-major order: column
/// k*m + r holds attribute r of node k.
class MultiAttributeDataset {
 public:
  MultiAttributeDataset(Eigen::MatrixXd samples, int m, int p);

  const Eigen::MatrixXd& samples() const { return samples_; }
  int m() const { return m_; }
  int p() const { return p_; }
  Eigen::Index n() const { return samples_.rows(); }

 private:
  Eigen::MatrixXd samples_;
  int m_;
  int p_;
};

/// (1/n) * sum_t x(t) x(t)^T with no centering, symmetrized after
/// accumulation. Throws ArgumentError when the dataset has no rows.
BlockMatrix sample_covariance(const MultiAttributeDataset& data);

}  // namespace madiff
