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

#include "madiff/pipeline_real.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "madiff/errors.hpp"

namespace madiff::pipeline {

Eigen::MatrixXd log_ratio(const RawFeatureSeries& series) {
  Eigen::MatrixXd v = series.values;
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    for (Eigen::Index t = 0; t < v.rows(); ++t) {
      if (v(t, c) == 0.0) v(t, c) = series.positivity_floor;
      if (!(v(t, c) > 0.0)) {
        throw DomainError("log-ratio needs positive values; found " +
                          std::to_string(v(t, c)) + " at row " + std::to_string(t) +
                          ", column " + std::to_string(c));
      }
    }
  }
  if (v.rows() < 1) return Eigen::MatrixXd(0, v.cols());
  const Eigen::Index steps = v.rows() - 1;
  return (v.bottomRows(steps).array() / v.topRows(steps).array()).log().matrix();
}

Eigen::MatrixXd detrend_linear(const Eigen::MatrixXd& series) {
  const Eigen::Index T = series.rows();
  if (T < 2) throw ArgumentError("detrending needs at least two time steps");
  const Eigen::ArrayXd t = Eigen::ArrayXd::LinSpaced(T, 0.0, static_cast<double>(T - 1));
  const Eigen::ArrayXd tc = t - t.mean();
  const double stt = tc.square().sum();
  Eigen::MatrixXd out(series.rows(), series.cols());
  for (Eigen::Index c = 0; c < series.cols(); ++c) {
    const Eigen::ArrayXd y = series.col(c).array();
    const double y_mean = y.mean();
    const double slope = (tc * (y - y_mean)).sum() / stt;
    out.col(c) = (y - y_mean - slope * tc).matrix();
  }
  return out;
}

Eigen::MatrixXd scale_unit_ms(const Eigen::MatrixXd& series) {
  Eigen::MatrixXd out = series;
  for (Eigen::Index c = 0; c < series.cols(); ++c) {
    if ((series.col(c).array() == 0.0).all()) {
      throw DegenerateInputError("column " + std::to_string(c) +
                                 " is all zero and cannot be scaled to unit mean square");
    }
    const double rms = std::sqrt(series.col(c).squaredNorm() / static_cast<double>(series.rows()));
    out.col(c) /= rms;
  }
  return out;
}

Eigen::MatrixXd process_feature(const std::string& name, const Eigen::MatrixXd& raw,
                                const AffineMap& premap, double positivity_floor) {
  try {
    RawFeatureSeries series{(raw.array() * premap.scale + premap.offset).matrix(),
                            positivity_floor};
    const Eigen::MatrixXd ratios = log_ratio(series);
    const Eigen::MatrixXd detrended = detrend_linear(ratios);
    for (Eigen::Index c = 0; c < detrended.cols(); ++c) {
      // Roundoff residue of an exactly affine column.
      if (detrended.col(c).norm() <= 1e-12 * std::max(1.0, ratios.col(c).norm())) {
        throw DegenerateInputError("column " + std::to_string(c) +
                                   " has no variation left after detrending");
      }
    }
    return scale_unit_ms(detrended);
  } catch (const DomainError& e) {
    throw DomainError("feature '" + name + "': " + e.what());
  } catch (const DegenerateInputError& e) {
    throw DegenerateInputError("feature '" + name + "': " + e.what());
  } catch (const ArgumentError& e) {
    throw ArgumentError("feature '" + name + "': " + e.what());
  }
}

MultiAttributeDataset assemble(const std::vector<Eigen::MatrixXd>& features) {
  if (features.empty()) throw ArgumentError("assemble needs at least one feature");
  const Eigen::Index T = features.front().rows();
  const Eigen::Index m = features.front().cols();
  if (m < 1) throw ArgumentError("features need at least one attribute column");
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].rows() != T || features[i].cols() != m) {
      throw ArgumentError("feature " + std::to_string(i) + " is " +
                          std::to_string(features[i].rows()) + "x" +
                          std::to_string(features[i].cols()) + ", expected " +
                          std::to_string(T) + "x" + std::to_string(m));
    }
  }
  const auto p = static_cast<Eigen::Index>(features.size());
  Eigen::MatrixXd samples(T, m * p);
  for (Eigen::Index i = 0; i < p; ++i) samples.middleCols(i * m, m) = features[i];
  return MultiAttributeDataset(std::move(samples), static_cast<int>(m), static_cast<int>(p));
}

}  // namespace madiff::pipeline
