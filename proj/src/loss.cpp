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

#include "madiff/loss.hpp"

#include <cmath>
#include <string>

#include "madiff/errors.hpp"

namespace madiff {

void check_conforming(const BlockMatrix& delta, const BlockMatrix& sigma_x,
                      const BlockMatrix& sigma_y) {
  if (!delta.same_shape(sigma_x) || !delta.same_shape(sigma_y)) {
    throw ArgumentError("dimension mismatch: delta (m=" + std::to_string(delta.m()) +
                        ", p=" + std::to_string(delta.p()) + "), sigma_x (m=" +
                        std::to_string(sigma_x.m()) + ", p=" +
                        std::to_string(sigma_x.p()) + "), sigma_y (m=" +
                        std::to_string(sigma_y.m()) + ", p=" +
                        std::to_string(sigma_y.p()) + ")");
  }
}

double dtrace_loss(const BlockMatrix& delta, const BlockMatrix& sigma_x,
                   const BlockMatrix& sigma_y) {
  check_conforming(delta, sigma_x, sigma_y);
  const Eigen::MatrixXd& d = delta.data();
  const Eigen::MatrixXd sds = sigma_x.data() * d * sigma_y.data();
  // tr(X D^T) = <X, D> and tr(D A) = <D, A^T>.
  const double quadratic = 0.5 * sds.cwiseProduct(d).sum();
  const double linear =
      d.cwiseProduct((sigma_x.data() - sigma_y.data()).transpose()).sum();
  return quadratic - linear;
}

BlockMatrix loss_gradient(const BlockMatrix& delta, const BlockMatrix& sigma_x,
                          const BlockMatrix& sigma_y) {
  check_conforming(delta, sigma_x, sigma_y);
  Eigen::MatrixXd g = sigma_x.data() * delta.data() * sigma_y.data();
  g -= sigma_x.data() - sigma_y.data();
  return BlockMatrix(std::move(g), delta.m(), delta.p());
}

double group_penalty(const BlockMatrix& delta, GroupMode mode) {
  const Eigen::MatrixXd& d = delta.data();
  const int g = group_size(mode, delta.m());
  const Eigen::Index groups = d.rows() / g;
  double total = 0.0;
  for (Eigen::Index l = 0; l < groups; ++l)
    for (Eigen::Index k = 0; k < groups; ++k)
      total += std::sqrt(d.block(k * g, l * g, g, g).squaredNorm());
  return total;
}

double penalized_loss(const BlockMatrix& delta, const BlockMatrix& sigma_x,
                      const BlockMatrix& sigma_y, double lambda, GroupMode mode) {
  if (!(lambda >= 0.0)) {
    throw ArgumentError("penalty weight must be nonnegative, got " +
                        std::to_string(lambda));
  }
  return dtrace_loss(delta, sigma_x, sigma_y) + lambda * group_penalty(delta, mode);
}

}  // namespace madiff
