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

#include "madiff/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "madiff/errors.hpp"

namespace madiff::oracle {
namespace {

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Eigen::VectorXd vec(const Eigen::MatrixXd& a) {
  return Eigen::Map<const Eigen::VectorXd>(a.data(), a.size());
}

// Column-major vec positions of every penalty group.
std::vector<std::vector<Eigen::Index>> group_indices(Eigen::Index side, int g) {
  std::vector<std::vector<Eigen::Index>> groups;
  for (Eigen::Index bl = 0; bl < side / g; ++bl) {
    for (Eigen::Index bk = 0; bk < side / g; ++bk) {
      std::vector<Eigen::Index> idx;
      for (Eigen::Index c = bl * g; c < (bl + 1) * g; ++c)
        for (Eigen::Index r = bk * g; r < (bk + 1) * g; ++r) idx.push_back(c * side + r);
      groups.push_back(std::move(idx));
    }
  }
  return groups;
}

struct VecProblem {
  Eigen::MatrixXd hessian;
  Eigen::VectorXd linear;
  std::vector<std::vector<Eigen::Index>> groups;
  double lambda;

  double objective(const Eigen::VectorXd& x) const {
    double pen = 0.0;
    for (const auto& grp : groups) {
      double s = 0.0;
      for (auto i : grp) s += x(i) * x(i);
      pen += std::sqrt(s);
    }
    return 0.5 * x.dot(hessian * x) - linear.dot(x) + lambda * pen;
  }

  Eigen::VectorXd prox(const Eigen::VectorXd& v, double step) const {
    Eigen::VectorXd out = v;
    const double kappa = lambda * step;
    for (const auto& grp : groups) {
      double s = 0.0;
      for (auto i : grp) s += v(i) * v(i);
      const double norm = std::sqrt(s);
      const double scale = norm > kappa ? 1.0 - kappa / norm : 0.0;
      for (auto i : grp) out(i) = scale * v(i);
    }
    return out;
  }

  double kkt(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd grad = hessian * x - linear;
    double worst = 0.0;
    for (const auto& grp : groups) {
      double xs = 0.0;
      double gs = 0.0;
      for (auto i : grp) {
        xs += x(i) * x(i);
        gs += grad(i) * grad(i);
      }
      if (xs > 0.0) {
        const double xn = std::sqrt(xs);
        double r = 0.0;
        for (auto i : grp) {
          const double v = grad(i) + lambda * x(i) / xn;
          r += v * v;
        }
        worst = std::max(worst, std::sqrt(r));
      } else {
        worst = std::max(worst, std::sqrt(gs) - lambda);
      }
    }
    return worst;
  }
};

Eigen::VectorXd fista(const VecProblem& prob, Eigen::VectorXd x, double step) {
  constexpr int kMaxIter = 200000;
  Eigen::VectorXd y = x;
  double t = 1.0;
  double f_prev = prob.objective(x);
  for (int it = 0; it < kMaxIter; ++it) {
    const Eigen::VectorXd x_next =
        prob.prox(y - step * (prob.hessian * y - prob.linear), step);
    const double f_next = prob.objective(x_next);
    if (f_next > f_prev) {
      // Adaptive restart: drop momentum when the objective goes up.
      t = 1.0;
      y = x;
      continue;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = x_next + ((t - 1.0) / t_next) * (x_next - x);
    x = x_next;
    t = t_next;
    f_prev = f_next;
    if (it % 64 == 0 && prob.kkt(x) <= 1e-9 * prob.lambda) break;
  }
  return x;
}

}  // namespace

BlockMatrix direct_delta_update(const BlockMatrix& sigma_x, const BlockMatrix& sigma_y,
                                const BlockMatrix& w, const BlockMatrix& u, double rho) {
  if (sigma_x.side() > 16) {
    throw ArgumentError("direct_delta_update is limited to m*p <= 16, got " +
                        std::to_string(sigma_x.side()));
  }
  if (!(rho > 0.0)) throw ArgumentError("rho must be positive");
  const Eigen::Index side = sigma_x.side();
  Eigen::MatrixXd system = kron(sigma_y.data(), sigma_x.data());
  system.diagonal().array() += rho;
  const Eigen::VectorXd rhs =
      vec(sigma_x.data() - sigma_y.data() + rho * (w.data() - u.data()));
  const Eigen::VectorXd sol = system.partialPivLu().solve(rhs);
  return BlockMatrix(Eigen::Map<const Eigen::MatrixXd>(sol.data(), side, side),
                     sigma_x.m(), sigma_x.p());
}

KktReport kkt_residual(const BlockMatrix& delta, const BlockMatrix& sigma_x,
                       const BlockMatrix& sigma_y, double lambda, GroupMode mode) {
  if (!(lambda > 0.0)) throw ArgumentError("KKT check needs lambda > 0");
  const Eigen::MatrixXd grad = sigma_x.data() * delta.data() * sigma_y.data() -
                               (sigma_x.data() - sigma_y.data());
  const int g = group_size(mode, delta.m());
  const Eigen::Index groups = delta.side() / g;
  KktReport report;
  for (Eigen::Index l = 0; l < groups; ++l) {
    for (Eigen::Index k = 0; k < groups; ++k) {
      const Eigen::MatrixXd d = delta.data().block(k * g, l * g, g, g);
      const Eigen::MatrixXd gb = grad.block(k * g, l * g, g, g);
      if ((d.array() != 0.0).any()) {
        ++report.active_groups;
        const double v = (gb + lambda * d / d.norm()).norm();
        report.max_active_violation = std::max(report.max_active_violation, v);
      } else {
        report.max_inactive_violation =
            std::max(report.max_inactive_violation, gb.norm() - lambda);
      }
    }
  }
  return report;
}

BlockMatrix brute_force_minimize(const BlockMatrix& sigma_x, const BlockMatrix& sigma_y,
                                 double lambda, GroupMode mode) {
  const Eigen::Index side = sigma_x.side();
  if (side > 6) {
    throw ArgumentError("brute_force_minimize is limited to m*p <= 6, got " +
                        std::to_string(side));
  }
  if (!(lambda > 0.0)) throw ArgumentError("brute force minimizer needs lambda > 0");

  VecProblem prob{kron(sigma_y.data(), sigma_x.data()),
                  vec(sigma_x.data() - sigma_y.data()),
                  group_indices(side, group_size(mode, sigma_x.m())), lambda};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(prob.hessian, Eigen::EigenvaluesOnly);
  const double lipschitz = std::max(es.eigenvalues().maxCoeff(), 1e-12);
  const double step = 1.0 / lipschitz;

  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal;
  const Eigen::Index dim = side * side;
  Eigen::VectorXd best = fista(prob, Eigen::VectorXd::Zero(dim), step);
  double best_obj = prob.objective(best);
  for (int restart = 0; restart < 3; ++restart) {
    Eigen::VectorXd start(dim);
    for (Eigen::Index i = 0; i < dim; ++i) start(i) = normal(rng);
    Eigen::VectorXd cand = fista(prob, std::move(start), step);
    const double obj = prob.objective(cand);
    if (obj < best_obj) {
      best_obj = obj;
      best = std::move(cand);
    }
  }
  return BlockMatrix(Eigen::Map<const Eigen::MatrixXd>(best.data(), side, side),
                     sigma_x.m(), sigma_x.p());
}

}  // namespace madiff::oracle
