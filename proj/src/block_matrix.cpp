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

#include "madiff/block_matrix.hpp"

#include <algorithm>
#include <string>

#include "madiff/errors.hpp"

namespace madiff {

BlockMatrix::BlockMatrix(Eigen::MatrixXd data, int m, int p)
    : data_(std::move(data)), m_(m), p_(p) {
  if (m <= 0 || p <= 0) {
    throw ArgumentError("block matrix needs positive m and p, got m=" +
                        std::to_string(m) + " p=" + std::to_string(p));
  }
  const Eigen::Index side = static_cast<Eigen::Index>(m) * p;
  if (data_.rows() != side || data_.cols() != side) {
    throw ArgumentError("block matrix data is " + std::to_string(data_.rows()) +
                        "x" + std::to_string(data_.cols()) + ", expected side " +
                        std::to_string(side));
  }
}

BlockMatrix BlockMatrix::Zero(int m, int p) {
  const Eigen::Index side = static_cast<Eigen::Index>(m) * p;
  return BlockMatrix(Eigen::MatrixXd::Zero(side, side), m, p);
}

BlockMatrix BlockMatrix::Identity(int m, int p) {
  const Eigen::Index side = static_cast<Eigen::Index>(m) * p;
  return BlockMatrix(Eigen::MatrixXd::Identity(side, side), m, p);
}

void EdgeSet::insert(int k, int l) {
  if (k < 0 || l < 0) throw ArgumentError("negative node index in edge");
  if (k == l) {
    throw ArgumentError("self-loop {" + std::to_string(k) + "," +
                        std::to_string(l) + "} is not an edge");
  }
  edges_.emplace(std::min(k, l), std::max(k, l));
}

bool EdgeSet::contains(int k, int l) const {
  return edges_.count({std::min(k, l), std::max(k, l)}) > 0;
}

Eigen::MatrixXd block_view(const BlockMatrix& M, int k, int l) {
  if (k < 0 || l < 0 || k >= M.p() || l >= M.p()) {
    throw ArgumentError("block index (" + std::to_string(k) + "," +
                        std::to_string(l) + ") out of range for p=" +
                        std::to_string(M.p()));
  }
  return M.block(k, l);
}

Eigen::MatrixXd cmap(const BlockMatrix& M) {
  Eigen::MatrixXd out(M.p(), M.p());
  for (int l = 0; l < M.p(); ++l)
    for (int k = 0; k < M.p(); ++k) out(k, l) = M.block(k, l).norm();
  return out;
}

Eigen::VectorXd bvec(const BlockMatrix& M) {
  const Eigen::Index mm = static_cast<Eigen::Index>(M.m()) * M.m();
  Eigen::VectorXd out(M.side() * M.side());
  Eigen::Index offset = 0;
  for (int l = 0; l < M.p(); ++l) {
    for (int k = 0; k < M.p(); ++k) {
      const Eigen::MatrixXd blk = M.block(k, l);
      out.segment(offset, mm) = blk.reshaped();
      offset += mm;
    }
  }
  return out;
}

BlockMatrix tracy_singh(const BlockMatrix& A, const BlockMatrix& B) {
  const int m = A.m() * B.m();
  const int p = A.p() * B.p();
  BlockMatrix out = BlockMatrix::Zero(m, p);
  for (int i = 0; i < A.p(); ++i) {
    for (int j = 0; j < A.p(); ++j) {
      const Eigen::MatrixXd a = A.block(i, j);
      for (int k = 0; k < B.p(); ++k) {
        for (int l = 0; l < B.p(); ++l) {
          const Eigen::MatrixXd b = B.block(k, l);
          auto dst = out.block(i * B.p() + k, j * B.p() + l);
          for (int r = 0; r < A.m(); ++r)
            for (int c = 0; c < A.m(); ++c)
              dst.block(r * B.m(), c * B.m(), B.m(), B.m()) = a(r, c) * b;
        }
      }
    }
  }
  return out;
}

BlockMatrix symmetrize(const BlockMatrix& M) {
  Eigen::MatrixXd sym = 0.5 * (M.data() + M.data().transpose());
  return BlockMatrix(std::move(sym), M.m(), M.p());
}

EdgeSet edges_from_delta(const BlockMatrix& delta) {
  if (delta.data() != delta.data().transpose()) {
    throw ArgumentError("edge extraction needs an exactly symmetric matrix");
  }
  EdgeSet edges;
  for (int k = 0; k < delta.p(); ++k)
    for (int l = k + 1; l < delta.p(); ++l)
      if ((delta.block(k, l).array() != 0.0).any()) edges.insert(k, l);
  return edges;
}

}  // namespace madiff
