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

#include <limits>
#include <optional>
#include <variant>
#include <vector>

#include "madiff/block_matrix.hpp"
#include "madiff/loss.hpp"

namespace madiff {

/// Per-iteration diagnostics. All sequences have one entry per iteration,
/// except `objective_trace`, which is empty when objective recording is off.
///
/// ADMM fills the residuals with e_p = ||Delta - W||_F and
/// e_d = rho ||W_new - W_old||_F together with the tolerances they were
/// compared against. PGD reports the step norm ||Delta_new - Delta_old||_F as
/// the primal residual, the guarded relative objective change as the dual
/// residual, and 1/eta as `final_rho`; its tolerance sequences stay empty.
struct SolverReport {
  int iterations = 0;
  bool converged = false;
  std::vector<double> primal_residuals;
  std::vector<double> dual_residuals;
  std::vector<double> primal_tolerances;
  std::vector<double> dual_tolerances;
  double final_rho = 0.0;
  std::vector<double> objective_trace;
};

struct EstimateResult {
  /// Unsymmetrized minimizer iterate (W for ADMM, Delta for PGD).
  BlockMatrix delta;
  BlockMatrix delta_sym;
  EdgeSet edges;
  double lambda = 0.0;
  SolverReport report;
};

struct AdmmConfig {
  double rho0 = 2.0;
  double mu = 10.0;
  double tol_abs = 1e-4;
  double tol_rel = 1e-4;
  int max_iter = 1000;
  /// Iteration count after which rho stays fixed; max_iter / 2 when unset.
  std::optional<int> rho_freeze_iter;
  GroupMode mode = GroupMode::kMultiAttribute;
  bool record_objective = true;

  /// Throws ArgumentError on nonpositive tolerances, rho0 or max_iter, or mu <= 1.
  void validate() const;
  int freeze_iter() const { return rho_freeze_iter.value_or(max_iter / 2); }
};

struct PgdConfig {
  double eps = 1e-3;
  int max_iter = 5000;
  GroupMode mode = GroupMode::kMultiAttribute;

  void validate() const;
};

using SolverConfig = std::variant<AdmmConfig, PgdConfig>;

/// Dispatches to admm::solve or pgd::solve.
EstimateResult solve(const BlockMatrix& sigma_x, const BlockMatrix& sigma_y,
                     double lambda, const SolverConfig& config);

/// Shared input validation for both solvers: conforming shapes, symmetric and
/// positive semidefinite covariances (up to roundoff), lambda > 0.
void check_solver_inputs(const BlockMatrix& sigma_x, const BlockMatrix& sigma_y,
                         double lambda);

/// Largest block Frobenius norm of Sx - Sy over all blocks. The zero matrix is
/// optimal for every lambda at or above this value.
double lambda_max(const BlockMatrix& sigma_x, const BlockMatrix& sigma_y);

/// Largest group norm of Sx - Sy for the given grouping; the entrywise maximum
/// in single-attribute mode.
double lambda_max(const BlockMatrix& sigma_x, const BlockMatrix& sigma_y, GroupMode mode);

/// Relative slack under which a group norm counts as tied with its threshold.
inline constexpr double kThresholdTieSlack = 8.0 * std::numeric_limits<double>::epsilon();

/// True when Delta = 0 satisfies the optimality conditions for this grouping:
/// every group of Sx - Sy has Frobenius norm <= lambda (up to the tie slack).
bool zero_is_optimal(const BlockMatrix& sigma_x, const BlockMatrix& sigma_y,
                     double lambda, GroupMode mode);

/// Converged zero estimate after zero iterations.
EstimateResult zero_estimate(int m, int p, double lambda);

}  // namespace madiff
