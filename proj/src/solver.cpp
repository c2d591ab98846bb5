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

#include "madiff/solver.hpp"

#include <algorithm>
#include <string>

#include "madiff/admm.hpp"
#include "madiff/errors.hpp"
#include "madiff/pgd.hpp"

namespace madiff {

void AdmmConfig::validate() const {
  if (!(rho0 > 0.0)) throw ArgumentError("rho0 must be positive");
  if (!(mu > 1.0)) throw ArgumentError("mu must exceed 1");
  if (!(tol_abs > 0.0) || !(tol_rel > 0.0)) {
    throw ArgumentError("ADMM tolerances must be positive");
  }
  if (max_iter <= 0) throw ArgumentError("max_iter must be positive");
  if (rho_freeze_iter && *rho_freeze_iter <= 0) {
    throw ArgumentError("rho_freeze_iter must be positive");
  }
}

void PgdConfig::validate() const {
  if (!(eps > 0.0)) throw ArgumentError("PGD tolerance eps must be positive");
  if (max_iter <= 0) throw ArgumentError("max_iter must be positive");
}

EstimateResult solve(const BlockMatrix& sigma_x, const BlockMatrix& sigma_y,
                     double lambda, const SolverConfig& config) {
  return std::visit(
      [&](const auto& cfg) -> EstimateResult {
        using T = std::decay_t<decltype(cfg)>;
        if constexpr (std::is_same_v<T, AdmmConfig>) {
          return admm::solve(sigma_x, sigma_y, lambda, cfg);
        } else {
          return pgd::solve(sigma_x, sigma_y, lambda, cfg);
        }
      },
      config);
}

namespace {

void check_covariance(const Eigen::MatrixXd& s, const char* name) {
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw ArgumentError(std::string(name) + " is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw ArgumentError(std::string(name) + ": eigenvalue computation failed");
  }
  if (es.eigenvalues().minCoeff() < -1e-8 * scale) {
    throw ArgumentError(std::string(name) + " is not positive semidefinite (min eigenvalue " +
                        std::to_string(es.eigenvalues().minCoeff()) + ")");
  }
}

}  // namespace

void check_solver_inputs(const BlockMatrix& sigma_x, const BlockMatrix& sigma_y,
                         double lambda) {
  if (!sigma_x.same_shape(sigma_y)) {
    throw ArgumentError("sigma_x and sigma_y have different block shapes");
  }
  if (!(lambda > 0.0)) {
    throw ArgumentError("lambda must be positive, got " + std::to_string(lambda));
  }
  check_covariance(sigma_x.data(), "sigma_x");
  check_covariance(sigma_y.data(), "sigma_y");
}

double lambda_max(const BlockMatrix& sigma_x, const BlockMatrix& sigma_y) {
  if (!sigma_x.same_shape(sigma_y)) {
    throw ArgumentError("sigma_x and sigma_y have different block shapes");
  }
  const BlockMatrix diff(sigma_x.data() - sigma_y.data(), sigma_x.m(), sigma_x.p());
  return cmap(diff).maxCoeff();
}

double lambda_max(const BlockMatrix& sigma_x, const BlockMatrix& sigma_y, GroupMode mode) {
  if (!sigma_x.same_shape(sigma_y)) {
    throw ArgumentError("sigma_x and sigma_y have different block shapes");
  }
  const Eigen::MatrixXd diff = sigma_x.data() - sigma_y.data();
  const int g = group_size(mode, sigma_x.m());
  const Eigen::Index groups = diff.rows() / g;
  double top = 0.0;
  for (Eigen::Index l = 0; l < groups; ++l)
    for (Eigen::Index k = 0; k < groups; ++k)
      top = std::max(top, diff.block(k * g, l * g, g, g).norm());
  return top;
}

bool zero_is_optimal(const BlockMatrix& sigma_x, const BlockMatrix& sigma_y,
                     double lambda, GroupMode mode) {
  return lambda_max(sigma_x, sigma_y, mode) <= lambda * (1.0 + kThresholdTieSlack);
}

EstimateResult zero_estimate(int m, int p, double lambda) {
  SolverReport report;
  report.converged = true;
  return {BlockMatrix::Zero(m, p), BlockMatrix::Zero(m, p), EdgeSet{}, lambda,
          std::move(report)};
}

}  // namespace madiff
