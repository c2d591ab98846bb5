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

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "madiff/covariance.hpp"

/// Preprocessing for real multi-attribute time series: one T x m matrix per
/// node (rows are time steps, columns are attribute sites).
namespace madiff::pipeline {

struct RawFeatureSeries {
  Eigen::MatrixXd values;
  /// Added to exact zeros before taking logarithms.
  double positivity_floor = 1e-6;
};

/// Row t is ln(values(t+1) / values(t)) after flooring exact zeros. Throws
/// DomainError naming the (row, column) of the first nonpositive value.
Eigen::MatrixXd log_ratio(const RawFeatureSeries& series);

/// Subtracts each column's least-squares line a + b t, t = 0..T-1. Throws
/// ArgumentError for T < 2.
Eigen::MatrixXd detrend_linear(const Eigen::MatrixXd& series);

/// Divides each column by its root mean square. Throws DegenerateInputError
/// on an all-zero column.
Eigen::MatrixXd scale_unit_ms(const Eigen::MatrixXd& series);

/// Optional affine map x -> scale * x + offset applied before the log step,
/// e.g. Celsius to Kelvin.
struct AffineMap {
  double scale = 1.0;
  double offset = 0.0;
};

/// log_ratio, detrend_linear and scale_unit_ms in sequence. A column whose
/// detrended norm is below 1e-12 of its log-ratio norm raises
/// DegenerateInputError. Errors are rethrown with `name` prefixed.
Eigen::MatrixXd process_feature(const std::string& name, const Eigen::MatrixXd& raw,
                                const AffineMap& premap, double positivity_floor);

/// Stacks per-node matrices into node-major columns. All inputs must share
/// T and m.
MultiAttributeDataset assemble(const std::vector<Eigen::MatrixXd>& features);

}  // namespace madiff::pipeline
