// Copyright 2026 The capwit Authors
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

#include "capwit/optimize.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace capwit {

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f, std::vector<double> start,
                             const NelderMeadOptions& options) {
  const std::size_t n = start.size();
  NelderMeadResult result;
  if (n == 0) {
    result.value = f(start);
    result.evaluations = 1;
    return result;
  }

  std::vector<std::vector<double>> pts(n + 1, start);
  std::vector<double> vals(n + 1);
  int evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    return f(x);
  };
  vals[0] = eval(pts[0]);
  for (std::size_t k = 0; k < n; ++k) {
    pts[k + 1][k] += options.initial_step;
    vals[k + 1] = eval(pts[k + 1]);
  }

  std::vector<std::size_t> order(n + 1);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    // Stable on ties so the incumbent (lowest index) stays best.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    std::vector<std::vector<double>> p2;
    std::vector<double> v2;
    for (auto k : order) {
      p2.push_back(pts[k]);
      v2.push_back(vals[k]);
    }
    pts = std::move(p2);
    vals = std::move(v2);
  };

  auto point = [&](const std::vector<double>& centroid, double t) {
    std::vector<double> x(n);
    for (std::size_t k = 0; k < n; ++k) {
      x[k] = centroid[k] + t * (pts[n][k] - centroid[k]);
    }
    return x;
  };

  while (evals < options.max_evaluations) {
    sort_simplex();
    double diameter = 0;
    for (std::size_t v = 1; v <= n; ++v) {
      for (std::size_t k = 0; k < n; ++k) {
        diameter = std::max(diameter, std::abs(pts[v][k] - pts[0][k]));
      }
    }
    if (vals[n] - vals[0] <= options.f_tolerance && diameter <= options.x_tolerance) {
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t k = 0; k < n; ++k) {
        centroid[k] += pts[v][k] / static_cast<double>(n);
      }
    }

    const auto xr = point(centroid, -1.0);
    const double fr = eval(xr);
    if (fr < vals[0]) {
      const auto xe = point(centroid, -2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[n] = xe;
        vals[n] = fe;
      } else {
        pts[n] = xr;
        vals[n] = fr;
      }
      continue;
    }
    if (fr < vals[n - 1]) {
      pts[n] = xr;
      vals[n] = fr;
      continue;
    }
    const bool outside = fr < vals[n];
    const auto xc = point(centroid, outside ? -0.5 : 0.5);
    const double fc = eval(xc);
    if (fc < (outside ? fr : vals[n])) {
      pts[n] = xc;
      vals[n] = fc;
      continue;
    }
    for (std::size_t v = 1; v <= n; ++v) {
      for (std::size_t k = 0; k < n; ++k) {
        pts[v][k] = pts[0][k] + 0.5 * (pts[v][k] - pts[0][k]);
      }
      vals[v] = eval(pts[v]);
    }
  }
  sort_simplex();
  result.x = pts[0];
  result.value = vals[0];
  result.evaluations = evals;
  return result;
}

}  // namespace capwit
