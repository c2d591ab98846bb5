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

#include "madiff/covariance.hpp"

#include <string>

#include "madiff/errors.hpp"

namespace madiff {

MultiAttributeDataset::MultiAttributeDataset(Eigen::MatrixXd samples, int m, int p)
    : samples_(std::move(samples)), m_(m), p_(p) {
  if (m <= 0 || p <= 0) throw ArgumentError("dataset needs positive m and p");
  if (samples_.cols() != static_cast<Eigen::Index>(m) * p) {
    throw ArgumentError("dataset has " + std::to_string(samples_.cols()) +
                        " columns, expected m*p = " + std::to_string(m * p));
  }
}

BlockMatrix sample_covariance(const MultiAttributeDataset& data) {
  if (data.n() == 0) throw ArgumentError("sample covariance of an empty dataset");
  const Eigen::Index side = data.samples().cols();
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(side, side);
  cov.selfadjointView<Eigen::Lower>().rankUpdate(data.samples().transpose());
  cov = cov.selfadjointView<Eigen::Lower>();
  cov /= static_cast<double>(data.n());
  return symmetrize(BlockMatrix(std::move(cov), data.m(), data.p()));
}

}  // namespace madiff
