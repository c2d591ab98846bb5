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

#include "madiff/pgd.hpp"

#include <algorithm>
#include <cmath>

#include "madiff/admm.hpp"
#include "madiff/errors.hpp"

namespace madiff::pgd {
namespace {

double top_eigenvalue(const Eigen::MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

}  // namespace

double step_size(const BlockMatrix& sigma_x, const BlockMatrix& sigma_y) {
  const double lx = top_eigenvalue(sigma_x.data());
  const double ly = top_eigenvalue(sigma_y.data());
  if (!(lx > 0.0) || !(ly > 0.0)) {
    throw DegenerateInputError("step size undefined: largest covariance eigenvalue is not positive");
  }
  return 1.0 / (lx * ly);
}

EstimateResult solve(const BlockMatrix& sigma_x, const BlockMatrix& sigma_y,
                     double lambda, const PgdConfig& config) {
  config.validate();
  check_solver_inputs(sigma_x, sigma_y, lambda);

  const int m = sigma_x.m();
  const int p = sigma_x.p();
  const Eigen::Index side = sigma_x.side();
  const double eta = step_size(sigma_x, sigma_y);
  const Eigen::MatrixXd& sx = sigma_x.data();
  const Eigen::MatrixXd& sy = sigma_y.data();
  const Eigen::MatrixXd diff = sx - sy;

  BlockMatrix delta = BlockMatrix::Zero(m, p);
  // Sx * Delta * Sy for the current iterate; reused by gradient and loss.
  Eigen::MatrixXd sds = Eigen::MatrixXd::Zero(side, side);
  Eigen::MatrixXd tmp(side, side);
  double loss_old = 0.0;

  SolverReport report;
  report.final_rho = 1.0 / eta;
  for (int it = 0; it < config.max_iter; ++it) {
    BlockMatrix a(delta.data() - eta * (sds - diff), m, p);
    BlockMatrix next = admm::group_soft_threshold(a, lambda * eta, config.mode);

    tmp.noalias() = sx * next.data();
    sds.noalias() = tmp * sy;
    const double loss_new = 0.5 * sds.cwiseProduct(next.data()).sum() -
                            next.data().cwiseProduct(diff).sum() +
                            lambda * group_penalty(next, config.mode);
    const double change = std::abs(loss_new - loss_old) / std::max(1.0, std::abs(loss_old));

    report.iterations = it + 1;
    report.primal_residuals.push_back((next.data() - delta.data()).norm());
    report.dual_residuals.push_back(change);
    report.objective_trace.push_back(loss_new);

    delta = std::move(next);
    loss_old = loss_new;
    if (change <= config.eps) {
      report.converged = true;
      break;
    }
  }

  BlockMatrix sym = symmetrize(delta);
  EdgeSet edges = edges_from_delta(sym);
  return {std::move(delta), std::move(sym), std::move(edges), lambda, std::move(report)};
}

}  // namespace madiff::pgd
