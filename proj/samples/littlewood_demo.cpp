// Evaluates Littlewood's instance on a few sequences and compares the ratios
// with the classical constant 4 and the improved constant sqrt(6).

#include <cmath>
#include <cstdio>
#include <vector>

#include "ineqlab/ineqlab.hpp"

int main() {
  using namespace ineqlab;
  const ParamTriple littlewood{1.0, 2.0, 2.0};
  const double improved = best_bound(littlewood).value;
  std::printf("bounds: classical %.12g, improved %.12g\n", bennett_bound(littlewood).value, improved);

  std::vector<Sequence> samples = {{1.0}, {1.0, 1.0}, {3.0, 2.0, 1.0}};
  std::vector<double> harmonic;
  for (int n = 1; n <= 32; ++n) harmonic.push_back(1.0 / n);
  samples.emplace_back(harmonic);

  for (const auto& a : samples) {
    const auto ev = evaluate_littlewood(a);
    std::printf("N=%2zu  lhs=%-14.8g rhs=%-14.8g ratio=%.10f\n", a.size(), ev.lhs, ev.rhs, ev.ratio);
  }

  SearchConfig cfg;
  cfg.n = 8;
  cfg.restarts = 8;
  const auto found = search_lower_bound(littlewood, cfg);
  std::printf("search (n=8): best ratio %.10f <= %.10f\n", found.best_ratio, improved);
  return 0;
}
