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
#include <string>
#include <vector>

#include "madiff/block_matrix.hpp"
#include "madiff/solver.hpp"

namespace madiff {

/// `count` logarithmically spaced values from `lo` to `hi`, increasing.
/// Throws ArgumentError unless 0 < lo <= hi and count >= 1.
std::vector<double> log_spaced(double lo, double hi, int count);

/// Penalty values searched by BIC, within [lambda_sm / 20, lambda_sm / 2].
struct LambdaGrid {
  std::vector<double> values;
  double lambda_sm = 0.0;
};

LambdaGrid make_lambda_grid(double lambda_sm, int grid_size);

struct BicRow {
  double lambda = 0.0;
  double bic = 0.0;
  std::size_t nonzero_count = 0;
  EstimateResult result;
};

struct BicTable {
  std::vector<BicRow> rows;
  /// How covariances were rescaled before scoring; recorded for audit.
  std::string scaling = "symmetric D^-1/2 S D^-1/2, D = diag(sigma_x)";
};

/// (nx + ny) ||Sx~ D~ Sy~ - (Sx~ - Sy~)||_F + ln(nx + ny) |D|_0 where
/// S~ = D^-1/2 S D^-1/2, D~ = D^1/2 Delta_sym D^1/2 and D = diag(Sx).
/// The nonzero count is taken on the unscaled symmetric estimate.
/// Throws DegenerateInputError if diag(Sx) has a nonpositive entry.
double bic_score(const EstimateResult& result, const BlockMatrix& sigma_x,
                 const BlockMatrix& sigma_y, std::size_t n_x, std::size_t n_y);

struct LambdaSearch {
  double lambda_sm = 0.0;
  int solves = 0;
};

/// Smallest penalty yielding an empty edge set, bracketed by geometric
/// bisection on [lambda_max / 10, lambda_max] down to 1% relative width
/// (eight solves). Returns the upper end of the final bracket, which is either
/// lambda_max or a penalty the solver verified empty.
LambdaSearch find_lambda_sm(const BlockMatrix& sigma_x, const BlockMatrix& sigma_y,
                            const SolverConfig& solver);

inline double lambda_sm(const BlockMatrix& sigma_x, const BlockMatrix& sigma_y,
                        const SolverConfig& solver) {
  return find_lambda_sm(sigma_x, sigma_y, solver).lambda_sm;
}

struct Selection {
  double lambda = 0.0;
  LambdaGrid grid;
  BicTable table;
  int search_solves = 0;
  int grid_solves = 0;
};

/// Fits every grid value and returns the BIC minimizer; ties go to the larger
/// lambda. Rows are in grid order regardless of `jobs`.
Selection select_lambda(const BlockMatrix& sigma_x, const BlockMatrix& sigma_y,
                        std::size_t n_x, std::size_t n_y, int grid_size,
                        const SolverConfig& solver, int jobs = 1);

}  // namespace madiff
