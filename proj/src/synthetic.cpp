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

#include "madiff/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "madiff/errors.hpp"

namespace madiff {

void GraphSpec::validate() const {
  if (p < 1) throw ArgumentError("graph needs at least one node");
  if (!(er_prob >= 0.0 && er_prob <= 1.0)) {
    throw ArgumentError("er_prob must lie in [0, 1]");
  }
  if (!(mean_degree >= 1.0)) throw ArgumentError("mean_degree must be at least 1");
  if (kind == GraphKind::kBarabasiAlbert && p < 3) {
    throw ArgumentError("BA graphs need p >= 3");
  }
}

EdgeSet er_edges(int p, double prob, Rng& rng) {
  if (!(prob >= 0.0 && prob <= 1.0)) throw ArgumentError("edge probability must lie in [0, 1]");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  EdgeSet edges;
  for (int k = 0; k < p; ++k)
    for (int l = k + 1; l < p; ++l)
      if (unif(rng) < prob) edges.insert(k, l);
  return edges;
}

EdgeSet ba_edges(int p, double mean_degree, Rng& rng) {
  if (p < 3) throw ArgumentError("BA graphs need p >= 3");
  if (!(mean_degree >= 1.0)) throw ArgumentError("mean_degree must be at least 1");
  const int per_node = std::max(1, static_cast<int>(std::lround(mean_degree / 2.0)));

  EdgeSet edges;
  // Every edge contributes both endpoints, so a uniform pick from `ends` is a
  // degree-proportional pick of a node.
  std::vector<int> ends;
  auto connect = [&](int a, int b) {
    edges.insert(a, b);
    ends.push_back(a);
    ends.push_back(b);
  };
  connect(0, 1);
  connect(1, 2);
  connect(0, 2);

  for (int node = 3; node < p; ++node) {
    const int want = std::min(per_node, node);
    std::vector<int> targets;
    while (static_cast<int>(targets.size()) < want) {
      std::uniform_int_distribution<std::size_t> pick(0, ends.size() - 1);
      const int t = ends[pick(rng)];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (int t : targets) connect(node, t);
  }
  return edges;
}

BlockMatrix build_precision_x(const EdgeSet& edges, int p, int m, Rng& rng) {
  BlockMatrix omega = BlockMatrix::Zero(m, p);
  Eigen::MatrixXd toeplitz(m, m);
  for (int s = 0; s < m; ++s)
    for (int t = 0; t < m; ++t) toeplitz(s, t) = std::pow(0.5, std::abs(s - t));
  for (int k = 0; k < p; ++k) omega.block(k, k) = toeplitz;

  std::uniform_real_distribution<double> magnitude(0.1, 0.4);
  std::bernoulli_distribution negative(0.5);
  for (const auto& [j, k] : edges) {
    if (k >= p) throw ArgumentError("edge endpoint out of range for p=" + std::to_string(p));
    Eigen::MatrixXd blk(m, m);
    for (int c = 0; c < m; ++c)
      for (int r = 0; r < m; ++r) {
        const double v = magnitude(rng);
        blk(r, c) = negative(rng) ? -v : v;
      }
    omega.block(j, k) = blk;
    omega.block(k, j) = blk.transpose();
  }
  return omega;
}

DeltaDraw build_delta(int p, int m, double prob, Rng& rng) {
  EdgeSet edges = er_edges(p, prob, rng);
  BlockMatrix delta = BlockMatrix::Zero(m, p);
  std::bernoulli_distribution negative(0.5);
  for (const auto& [j, k] : edges) {
    Eigen::MatrixXd blk(m, m);
    for (int c = 0; c < m; ++c)
      for (int r = 0; r < m; ++r) blk(r, c) = negative(rng) ? -0.9 : 0.9;
    delta.block(j, k) = blk;
    delta.block(k, j) = blk.transpose();
  }
  return {std::move(delta), std::move(edges)};
}

namespace {

double min_eigenvalue(const Eigen::MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

GroundTruth make_pair(const GraphSpec& spec, int m, double delta_prob, Rng& rng) {
  spec.validate();
  if (m < 1) throw ArgumentError("m must be positive");
  const EdgeSet graph = spec.kind == GraphKind::kErdosRenyi
                            ? er_edges(spec.p, spec.er_prob, rng)
                            : ba_edges(spec.p, spec.mean_degree, rng);
  BlockMatrix omega_x = build_precision_x(graph, spec.p, m, rng);
  DeltaDraw draw = build_delta(spec.p, m, delta_prob, rng);

  BlockMatrix omega_y(omega_x.data() + draw.delta.data(), m, spec.p);
  // Exact difference; within one rounding of the drawn +-0.9 entries.
  BlockMatrix delta(omega_y.data() - omega_x.data(), m, spec.p);

  const double gamma =
      std::max({0.0, -min_eigenvalue(omega_x.data()), -min_eigenvalue(omega_y.data())}) + 0.5;
  omega_x.data().diagonal().array() += gamma;
  omega_y.data().diagonal().array() += gamma;

  return {std::move(omega_x), std::move(omega_y), std::move(delta), std::move(draw.edges),
          gamma};
}

MultiAttributeDataset sample_gaussian(const BlockMatrix& omega, int n, Rng& rng) {
  if (n < 1) throw ArgumentError("sample count must be positive");
  Eigen::LLT<Eigen::MatrixXd> omega_chol(omega.data());
  if (omega_chol.info() != Eigen::Success) {
    throw DegenerateInputError("precision matrix is not positive definite");
  }
  const Eigen::Index side = omega.side();
  const Eigen::MatrixXd cov = omega_chol.solve(Eigen::MatrixXd::Identity(side, side));
  const Eigen::MatrixXd sym_cov = 0.5 * (cov + cov.transpose());
  Eigen::LLT<Eigen::MatrixXd> cov_chol(sym_cov);
  if (cov_chol.info() != Eigen::Success) {
    throw DegenerateInputError("covariance factorization failed");
  }
  const Eigen::MatrixXd phi = cov_chol.matrixL();

  std::normal_distribution<double> normal;
  Eigen::MatrixXd w(n, side);
  for (int t = 0; t < n; ++t)
    for (Eigen::Index j = 0; j < side; ++j) w(t, j) = normal(rng);
  Eigen::MatrixXd x = w * phi.transpose();
  return MultiAttributeDataset(std::move(x), omega.m(), omega.p());
}

}  // namespace madiff
