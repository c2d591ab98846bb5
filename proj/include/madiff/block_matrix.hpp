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
#include <set>
#include <utility>

#include <Eigen/Dense>

namespace madiff {

/// A square matrix of side m*p viewed as a p x p grid of m x m blocks.
///
/// Node k (0-based) owns rows and columns [k*m, (k+1)*m). This is the shared
/// representation for covariances, precision matrices and the difference
/// estimate. Storage is always dense.
class BlockMatrix {
 public:
  BlockMatrix(Eigen::MatrixXd data, int m, int p);

  static BlockMatrix Zero(int m, int p);
  static BlockMatrix Identity(int m, int p);

  int m() const { return m_; }
  int p() const { return p_; }
  Eigen::Index side() const { return data_.rows(); }

  const Eigen::MatrixXd& data() const { return data_; }
  // Callers may write entries but must not resize.
  Eigen::MatrixXd& data() { return data_; }

  /// Unchecked block access, 0-based.
  auto block(int k, int l) const { return data_.block(k * m_, l * m_, m_, m_); }
  auto block(int k, int l) { return data_.block(k * m_, l * m_, m_, m_); }

  bool same_shape(const BlockMatrix& other) const {
    return m_ == other.m_ && p_ == other.p_;
  }

 private:
  Eigen::MatrixXd data_;
  int m_;
  int p_;
};

/// Unordered node pairs {k, l}, k != l, stored normalized as (min, max).
class EdgeSet {
 public:
  using Edge = std::pair<int, int>;
  using const_iterator = std::set<Edge>::const_iterator;

  EdgeSet() = default;

  /// Throws ArgumentError on a self-loop or negative index.
  void insert(int k, int l);
  bool contains(int k, int l) const;

  std::size_t size() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }
  const_iterator begin() const { return edges_.begin(); }
  const_iterator end() const { return edges_.end(); }

  friend bool operator==(const EdgeSet&, const EdgeSet&) = default;

 private:
  std::set<Edge> edges_;
};

/// Number of unordered off-diagonal node pairs, p(p-1)/2.
inline std::size_t pair_count(int p) {
  return static_cast<std::size_t>(p) * static_cast<std::size_t>(p - 1) / 2;
}

/// Checked copy of block (k, l), 0-based. Throws ArgumentError when out of range.
Eigen::MatrixXd block_view(const BlockMatrix& M, int k, int l);

/// p x p matrix of block Frobenius norms.
Eigen::MatrixXd cmap(const BlockMatrix& M);

/// Block-column-major stacking of column-major vectorized blocks.
Eigen::VectorXd bvec(const BlockMatrix& M);

/// Blockwise Kronecker product: block (i,j) of A times every block (k,l) of B
/// lands at block (i*pB + k, j*pB + l) of the result, which has block size
/// mA*mB. Satisfies bvec(A*D*B) == tracy_singh(B^T, A) * bvec(D).
BlockMatrix tracy_singh(const BlockMatrix& A, const BlockMatrix& B);

/// (M + M^T) / 2, exactly symmetric.
BlockMatrix symmetrize(const BlockMatrix& M);

/// {k, l} is an edge iff block (k, l) has nonzero Frobenius norm. The input
/// must be exactly symmetric; diagonal blocks never produce edges.
EdgeSet edges_from_delta(const BlockMatrix& delta);

}  // namespace madiff
