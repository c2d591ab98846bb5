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

#include <cstdint>
#include <random>

#include "madiff/block_matrix.hpp"
#include "madiff/covariance.hpp"

namespace madiff {

/// All randomness in the library flows through this engine. Seeded runs are
/// bit-reproducible for a given standard library implementation.
using Rng = std::mt19937_64;

enum class GraphKind { kErdosRenyi, kBarabasiAlbert };

struct GraphSpec {
  GraphKind kind = GraphKind::kErdosRenyi;
  int p = 100;
  double er_prob = 0.5;
  double mean_degree = 2.0;

  /// Throws ArgumentError on an out-of-range field.
  void validate() const;
};

struct GroundTruth {
  BlockMatrix omega_x;
  BlockMatrix omega_y;
  /// omega_y - omega_x, exactly.
  BlockMatrix delta;
  EdgeSet support;
  double gamma = 0.0;
};

/// Each of the p(p-1)/2 pairs independently with probability `prob`.
EdgeSet er_edges(int p, double prob, Rng& rng);

/// Preferential attachment seeded with a triangle. Every new node attaches
/// max(1, round(mean_degree / 2)) edges to distinct existing nodes chosen with
/// probability proportional to degree, so mean_degree = 2 gives exactly p edges.
EdgeSet ba_edges(int p, double mean_degree, Rng& rng);

/// Diagonal blocks are the Toeplitz pattern 0.5^|s-t|; each edge block is
/// i.i.d. uniform on [-0.4, -0.1] U [0.1, 0.4] and mirrored by its transpose.
/// Not necessarily positive definite.
BlockMatrix build_precision_x(const EdgeSet& edges, int p, int m, Rng& rng);

struct DeltaDraw {
  BlockMatrix delta;
  EdgeSet edges;
};

/// ER support at rate `prob`; every entry of a selected block is +-0.9 with
/// equal probability and the mirrored block is its transpose.
DeltaDraw build_delta(int p, int m, double prob, Rng& rng);

/// Composes the two builders, then shifts both precisions by
/// gamma = max(0, -lmin(Ox), -lmin(Oy)) + 0.5 so both are positive definite.
GroundTruth make_pair(const GraphSpec& spec, int m, double delta_prob, Rng& rng);

/// n rows x = Phi w with Phi the lower Cholesky factor of Omega^-1 and w
/// standard normal. Throws DegenerateInputError if Omega is not positive
/// definite.
MultiAttributeDataset sample_gaussian(const BlockMatrix& omega, int n, Rng& rng);

}  // namespace madiff
