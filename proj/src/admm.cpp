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

#include "madiff/admm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "madiff/errors.hpp"

namespace madiff::admm {
namespace {

SpectralFactors decompose(const Eigen::MatrixXd& s, const char* name) {
  if (s != s.transpose()) {
    const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
    if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
      throw ArgumentError(std::string(name) + " is not symmetric");
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  if (es.info() != Eigen::Success) {
    throw ArgumentError(std::string(name) + ": eigendecomposition failed");
  }
  return {es.eigenvectors(), es.eigenvalues()};
}

Eigen::MatrixXd hadamard_weights(const Eigensystems& eigs, double rho) {
  // Eigenvalues may be slightly negative from roundoff; rho > 0 keeps the
  // denominators away from zero in practice.
  return ((eigs.x.d * eigs.y.d.transpose()).array() + rho).inverse().matrix();
}

// Delta-update with precomputed weights. `rhs` is Sx - Sy + rho (W - U).
Eigen::MatrixXd solve_sylvester_like(const Eigensystems& eigs,
                                     const Eigen::MatrixXd& weights,
                                     const Eigen::MatrixXd& rhs) {
  Eigen::MatrixXd t(rhs.rows(), rhs.cols());
  Eigen::MatrixXd tmp(rhs.rows(), rhs.cols());
  tmp.noalias() = eigs.x.q.transpose() * rhs;
  t.noalias() = tmp * eigs.y.q;
  t.array() *= weights.array();
  tmp.noalias() = eigs.x.q * t;
  t.noalias() = tmp * eigs.y.q.transpose();
  return t;
}

void threshold_groups(Eigen::MatrixXd& a, int g, double kappa) {
  const double cut = kappa * (1.0 + kThresholdTieSlack);
  const Eigen::Index groups = a.rows() / g;
  for (Eigen::Index l = 0; l < groups; ++l) {
    for (Eigen::Index k = 0; k < groups; ++k) {
      auto blk = a.block(k * g, l * g, g, g);
      const double norm = std::sqrt(blk.squaredNorm());
      if (norm <= cut) {
        blk.setZero();
      } else {
        blk *= 1.0 - kappa / norm;
      }
    }
  }
}

}  // namespace

Eigensystems precompute_eigs(const BlockMatrix& sigma_x, const BlockMatrix& sigma_y) {
  return {decompose(sigma_x.data(), "sigma_x"), decompose(sigma_y.data(), "sigma_y")};
}

BlockMatrix delta_update(const Eigensystems& eigs, const BlockMatrix& sigma_x,
                         const BlockMatrix& sigma_y, const BlockMatrix& w,
                         const BlockMatrix& u, double rho) {
  if (!(rho > 0.0)) throw ArgumentError("rho must be positive, got " + std::to_string(rho));
  if (!sigma_x.same_shape(sigma_y) || !sigma_x.same_shape(w) || !sigma_x.same_shape(u)) {
    throw ArgumentError("delta_update: dimension mismatch");
  }
  const Eigen::MatrixXd rhs =
      sigma_x.data() - sigma_y.data() + rho * (w.data() - u.data());
  return BlockMatrix(solve_sylvester_like(eigs, hadamard_weights(eigs, rho), rhs),
                     sigma_x.m(), sigma_x.p());
}

BlockMatrix group_soft_threshold(const BlockMatrix& a, double kappa, GroupMode mode) {
  if (!(kappa >= 0.0)) {
    throw ArgumentError("threshold must be nonnegative, got " + std::to_string(kappa));
  }
  Eigen::MatrixXd out = a.data();
  threshold_groups(out, group_size(mode, a.m()), kappa);
  return BlockMatrix(std::move(out), a.m(), a.p());
}

EstimateResult solve(const BlockMatrix& sigma_x, const BlockMatrix& sigma_y,
                     double lambda, const AdmmConfig& config) {
  config.validate();
  check_solver_inputs(sigma_x, sigma_y, lambda);
  if (zero_is_optimal(sigma_x, sigma_y, lambda, config.mode)) {
    return zero_estimate(sigma_x.m(), sigma_x.p(), lambda);
  }

  const int m = sigma_x.m();
  const int p = sigma_x.p();
  const Eigen::Index side = sigma_x.side();
  const int g = group_size(config.mode, m);
  const Eigensystems eigs = precompute_eigs(sigma_x, sigma_y);
  const Eigen::MatrixXd diff = sigma_x.data() - sigma_y.data();
  const double abs_floor = static_cast<double>(side) * config.tol_abs;
  const int freeze = config.freeze_iter();

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(side, side);
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(side, side);
  Eigen::MatrixXd w_new(side, side);
  double rho = config.rho0;
  Eigen::MatrixXd weights = hadamard_weights(eigs, rho);

  SolverReport report;
  for (int it = 0; it < config.max_iter; ++it) {
    const Eigen::MatrixXd delta =
        solve_sylvester_like(eigs, weights, diff + rho * (w - u));

    w_new = delta + u;
    threshold_groups(w_new, g, lambda / rho);
    u += delta - w_new;

    const double e_p = (delta - w_new).norm();
    const double e_d = rho * (w_new - w).norm();
    const double tau_pri =
        abs_floor + config.tol_rel * std::max(delta.norm(), w_new.norm());
    const double tau_dual = abs_floor + config.tol_rel * u.norm() / rho;
    w.swap(w_new);

    report.iterations = it + 1;
    report.primal_residuals.push_back(e_p);
    report.dual_residuals.push_back(e_d);
    report.primal_tolerances.push_back(tau_pri);
    report.dual_tolerances.push_back(tau_dual);
    if (config.record_objective) {
      report.objective_trace.push_back(penalized_loss(
          BlockMatrix(w, m, p), sigma_x, sigma_y, lambda, config.mode));
    }
    if (e_p <= tau_pri && e_d <= tau_dual) {
      report.converged = true;
      break;
    }

    if (it + 1 < freeze) {
      // U is the scaled dual, so it rescales inversely with rho.
      if (e_p > config.mu * e_d) {
        rho *= 2.0;
        u /= 2.0;
        weights = hadamard_weights(eigs, rho);
      } else if (e_d > config.mu * e_p) {
        rho /= 2.0;
        u *= 2.0;
        weights = hadamard_weights(eigs, rho);
      }
    }
  }
  report.final_rho = rho;

  BlockMatrix raw(std::move(w), m, p);
  BlockMatrix sym = symmetrize(raw);
  EdgeSet edges = edges_from_delta(sym);
  return {std::move(raw), std::move(sym), std::move(edges), lambda, std::move(report)};
}

}  // namespace madiff::admm
