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

#include "madiff/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "madiff/errors.hpp"
#include "madiff/parallel.hpp"

namespace madiff {

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 1) {
    throw ArgumentError("log_spaced needs 0 < lo <= hi and count >= 1");
  }
  if (count == 1) return {lo};
  std::vector<double> out(count);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < count; ++i) out[i] = std::exp(a + (b - a) * i / (count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

LambdaGrid make_lambda_grid(double lambda_sm, int grid_size) {
  if (grid_size < 2) throw ArgumentError("grid_size must be at least 2");
  if (!(lambda_sm > 0.0)) throw ArgumentError("lambda_sm must be positive");
  const double upper = lambda_sm / 2.0;
  return {log_spaced(upper / 10.0, upper, grid_size), lambda_sm};
}

double bic_score(const EstimateResult& result, const BlockMatrix& sigma_x,
                 const BlockMatrix& sigma_y, std::size_t n_x, std::size_t n_y) {
  if (n_x == 0 || n_y == 0) throw ArgumentError("BIC needs n_x, n_y >= 1");
  const Eigen::MatrixXd& delta = result.delta_sym.data();
  if (!result.delta_sym.same_shape(sigma_x) || !sigma_x.same_shape(sigma_y)) {
    throw ArgumentError("BIC: dimension mismatch");
  }
  const Eigen::VectorXd diag = sigma_x.data().diagonal();
  if ((diag.array() <= 0.0).any()) {
    throw DegenerateInputError("BIC rescaling needs a positive diagonal in sigma_x");
  }
  const Eigen::ArrayXd inv_root = diag.array().rsqrt();
  const Eigen::ArrayXd root = diag.array().sqrt();

  auto scale = [](const Eigen::MatrixXd& s, const Eigen::ArrayXd& v) {
    return Eigen::MatrixXd((v.matrix().asDiagonal() * s) * v.matrix().asDiagonal());
  };
  const Eigen::MatrixXd sx = scale(sigma_x.data(), inv_root);
  const Eigen::MatrixXd sy = scale(sigma_y.data(), inv_root);
  const Eigen::MatrixXd d = scale(delta, root);

  const double n = static_cast<double>(n_x + n_y);
  const double residual = (sx * d * sy - (sx - sy)).norm();
  const auto nonzeros = static_cast<double>((delta.array() != 0.0).count());
  return n * residual + std::log(n) * nonzeros;
}

LambdaSearch find_lambda_sm(const BlockMatrix& sigma_x, const BlockMatrix& sigma_y,
                            const SolverConfig& solver) {
  const double upper = lambda_max(sigma_x, sigma_y);
  LambdaSearch search;
  if (!(upper > 0.0)) {
    // Sx == Sy: every positive penalty gives the empty graph.
    search.lambda_sm =
        1e-12 * std::max(1.0, sigma_x.data().cwiseAbs().maxCoeff());
    return search;
  }
  auto empty_at = [&](double lambda) {
    ++search.solves;
    return solve(sigma_x, sigma_y, lambda, solver).edges.empty();
  };

  // Zero is optimal exactly when lambda >= upper, so the transition sits just
  // below upper. Eight geometric halvings of [upper/10, upper] reach 1% width.
  double lo = upper / 10.0;
  double hi = upper;
  while (hi > lo / 0.99) {
    const double mid = std::sqrt(lo * hi);
    if (empty_at(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  search.lambda_sm = hi;
  return search;
}

Selection select_lambda(const BlockMatrix& sigma_x, const BlockMatrix& sigma_y,
                        std::size_t n_x, std::size_t n_y, int grid_size,
                        const SolverConfig& solver, int jobs) {
  Selection sel;
  const LambdaSearch search = find_lambda_sm(sigma_x, sigma_y, solver);
  sel.search_solves = search.solves;
  sel.grid = make_lambda_grid(search.lambda_sm, grid_size);

  const auto& values = sel.grid.values;
  sel.table.rows = parallel_map(values.size(), jobs, [&](std::size_t i) {
    EstimateResult fit = solve(sigma_x, sigma_y, values[i], solver);
    const double bic = bic_score(fit, sigma_x, sigma_y, n_x, n_y);
    const auto nonzeros =
        static_cast<std::size_t>((fit.delta_sym.data().array() != 0.0).count());
    return BicRow{values[i], bic, nonzeros, std::move(fit)};
  });
  sel.grid_solves = static_cast<int>(values.size());

  // Grid is increasing, so `<=` keeps the largest lambda among ties.
  std::size_t best = 0;
  for (std::size_t i = 1; i < sel.table.rows.size(); ++i)
    if (sel.table.rows[i].bic <= sel.table.rows[best].bic) best = i;
  sel.lambda = sel.table.rows[best].lambda;
  return sel;
}

}  // namespace madiff
