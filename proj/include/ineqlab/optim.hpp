#pragma once

// Derivative-free minimizers: golden-section for unimodal scalar functions and
// a Nelder-Mead simplex for small dense problems.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

namespace ineqlab::optim {

struct ScalarMinimum {
  double x = 0.0;
  double fx = 0.0;
  int evaluations = 0;
};

/// Golden-section search on [lo, hi] until the bracket is narrower than `width`.
/// Ties keep the left sub-bracket, so equal values resolve toward smaller x.
template <class F>
ScalarMinimum golden_section_minimize(F&& f, double lo, double hi, double width = 1e-10,
                                      int max_iterations = 400) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int evals = 2;
  for (int it = 0; it < max_iterations && (b - a) > width; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++evals;
  }
  ScalarMinimum best = fc <= fd ? ScalarMinimum{c, fc, evals} : ScalarMinimum{d, fd, evals};
  const double mid = 0.5 * (a + b);
  const double fmid = f(mid);
  ++evals;
  if (fmid < best.fx) best = {mid, fmid, evals};
  best.evaluations = evals;
  return best;
}

struct SimplexOptions {
  int max_iterations = 2000;
  double tolerance = 1e-10;  ///< spread of function values across the simplex
  double initial_step = 1.0;
};

struct SimplexResult {
  std::vector<double> x;
  double fx = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Classic Nelder-Mead (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
template <class F>
SimplexResult nelder_mead_minimize(F&& f, std::vector<double> start, const SimplexOptions& opt = {}) {
  const std::size_t n = start.size();
  SimplexResult out;
  if (n == 0) {
    out.fx = f(start);
    out.evaluations = 1;
    out.converged = true;
    return out;
  }

  std::vector<std::vector<double>> pts(n + 1, start);
  std::vector<double> vals(n + 1);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += opt.initial_step;
  for (std::size_t i = 0; i <= n; ++i) vals[i] = f(pts[i]);
  int evals = static_cast<int>(n + 1);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);

  auto along = [&](const std::vector<double>& from, double coef, std::vector<double>& dst) {
    for (std::size_t j = 0; j < n; ++j) dst[j] = centroid[j] + coef * (from[j] - centroid[j]);
  };

  int it = 0;
  bool converged = false;
  for (; it < opt.max_iterations; ++it) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t l, std::size_t r) { return vals[l] < vals[r]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[n - 1];

    if (std::abs(vals[worst] - vals[best]) <= opt.tolerance * (1.0 + std::abs(vals[best]))) {
      converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    along(pts[worst], -1.0, trial);
    const double f_reflect = f(trial);
    ++evals;

    if (f_reflect < vals[best]) {
      along(pts[worst], -2.0, trial2);
      const double f_expand = f(trial2);
      ++evals;
      if (f_expand < f_reflect) {
        pts[worst] = trial2;
        vals[worst] = f_expand;
      } else {
        pts[worst] = trial;
        vals[worst] = f_reflect;
      }
      continue;
    }
    if (f_reflect < vals[second]) {
      pts[worst] = trial;
      vals[worst] = f_reflect;
      continue;
    }

    // Contraction: outside if the reflection improved on the worst point.
    const bool outside = f_reflect < vals[worst];
    along(pts[worst], outside ? -0.5 : 0.5, trial2);
    const double f_contract = f(trial2);
    ++evals;
    if (f_contract < (outside ? f_reflect : vals[worst])) {
      pts[worst] = trial2;
      vals[worst] = f_contract;
      continue;
    }

    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < n; ++j) pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
      vals[i] = f(pts[i]);
      ++evals;
    }
  }

  const auto best_it = std::min_element(vals.begin(), vals.end());
  const auto bi = static_cast<std::size_t>(best_it - vals.begin());
  out.x = pts[bi];
  out.fx = vals[bi];
  out.iterations = it;
  out.evaluations = evals;
  out.converged = converged;
  return out;
}

}  // namespace ineqlab::optim
