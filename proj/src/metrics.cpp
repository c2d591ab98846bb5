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

#include "madiff/metrics.hpp"

#include <algorithm>
#include <functional>
#include <utility>

#include "madiff/errors.hpp"
#include "madiff/parallel.hpp"

namespace madiff {

double Confusion::tpr() const {
  const std::size_t pos = tp + fn;
  return pos == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(pos);
}

double Confusion::tnr() const {
  const std::size_t neg = tn + fp;
  return neg == 0 ? 1.0 : static_cast<double>(tn) / static_cast<double>(neg);
}

Confusion confusion(const EdgeSet& estimate, const EdgeSet& truth, int p) {
  Confusion c;
  for (const auto& [k, l] : estimate) {
    if (l >= p) throw ArgumentError("estimated edge outside the node range");
    if (truth.contains(k, l)) {
      ++c.tp;
    } else {
      ++c.fp;
    }
  }
  for (const auto& [k, l] : truth) {
    if (l >= p) throw ArgumentError("true edge outside the node range");
    if (!estimate.contains(k, l)) ++c.fn;
  }
  c.tn = pair_count(p) - c.tp - c.fp - c.fn;
  return c;
}

double f1(const Confusion& c) {
  const std::size_t denom = 2 * c.tp + c.fp + c.fn;
  return denom == 0 ? 0.0 : 2.0 * static_cast<double>(c.tp) / static_cast<double>(denom);
}

RocCurve roc_sweep(const BlockMatrix& sigma_x, const BlockMatrix& sigma_y,
                   const EdgeSet& truth, std::vector<double> lambdas,
                   const SolverConfig& solver, int jobs) {
  if (lambdas.empty()) throw ArgumentError("ROC sweep needs at least one lambda");
  for (double l : lambdas)
    if (!(l > 0.0)) throw ArgumentError("ROC sweep lambdas must be positive");
  std::stable_sort(lambdas.begin(), lambdas.end(), std::greater<>());

  const int p = sigma_x.p();
  RocCurve curve;
  curve.points = parallel_map(lambdas.size(), jobs, [&](std::size_t i) {
    const EstimateResult fit = solve(sigma_x, sigma_y, lambdas[i], solver);
    const Confusion c = confusion(fit.edges, truth, p);
    return RocPoint{lambdas[i], c.tpr(), c.fpr(), f1(c)};
  });
  return curve;
}

double roc_auc(const RocCurve& curve) {
  std::vector<std::pair<double, double>> pts{{0.0, 0.0}, {1.0, 1.0}};
  for (const auto& pt : curve.points) pts.emplace_back(pt.fpr, pt.tpr);
  std::sort(pts.begin(), pts.end());
  double area = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i)
    area += (pts[i].first - pts[i - 1].first) * 0.5 * (pts[i].second + pts[i - 1].second);
  return area;
}

}  // namespace madiff
