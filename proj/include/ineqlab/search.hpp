#pragma once

// Numerical lower bounds on K(p,q,r): maximize the ratio lhs/rhs of the main
// inequality over finite sequences with a seeded multi-start simplex search.
//
// Sequences are parameterized as a_i = exp(t_i - max t) with t in [-30, 30]^n
// and rescaled to unit sum; the ratio is homogeneous of degree 0 so the scale
// carries no information. Terms below 1e-13 of the largest are set to zero,
// which lets spike-like optima be represented exactly.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "ineqlab/numeric.hpp"
#include "ineqlab/optim.hpp"
#include "ineqlab/sequence.hpp"

namespace ineqlab {

inline constexpr double kLogBox = 30.0;
inline constexpr double kZeroThreshold = 1e-13;
inline constexpr std::size_t kMaxSearchLength = 64;

struct SearchConfig {
  std::size_t n = 16;
  std::size_t restarts = 32;
  int max_iters = 2000;
  std::uint64_t seed = 0;
  double tol = 1e-10;
  int refine_steps = 25;
  unsigned threads = 0;  ///< 0 runs restarts sequentially on the calling thread
  /// Extra start points (zero-padded or truncated to n), run after the seeded restarts.
  std::vector<Sequence> warm_starts;

  void validate() const {
    if (n < 1 || n > kMaxSearchLength) throw DomainError("search length must be in [1, 64]");
    if (restarts < 1) throw DomainError("restarts must be >= 1");
    if (max_iters < 1) throw DomainError("max_iters must be >= 1");
    if (!(tol > 0.0)) throw DomainError("tol must be > 0");
  }
};

struct SearchOutcome {
  double best_ratio = 0.0;
  Sequence best_sequence;
  std::size_t best_restart = 0;
  std::size_t restarts_run = 0;
  std::uint64_t evaluations = 0;
  std::vector<bool> converged;
  std::vector<double> restart_ratios;
  std::size_t n = 0;
};

namespace detail {

/// Maps log-coordinates to a unit-sum sequence.
inline Sequence decode_log_terms(const std::vector<double>& t) {
  double tmax = -kLogBox;
  for (double x : t) tmax = std::max(tmax, std::clamp(x, -kLogBox, kLogBox));
  std::vector<double> a(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double v = std::exp(std::clamp(t[i], -kLogBox, kLogBox) - tmax);
    a[i] = v < kZeroThreshold ? 0.0 : v;
  }
  return Sequence(std::move(a)).normalized();
}

inline std::vector<double> encode_log_terms(const Sequence& a, std::size_t n) {
  const double amax = a.max_term();
  std::vector<double> t(n, -kLogBox);
  for (std::size_t i = 0; i < std::min(n, a.size()); ++i) {
    if (a[i] > 0.0) t[i] = std::max(std::log(a[i] / amax), -kLogBox);
  }
  return t;
}

inline double safe_ratio(const Sequence& a, const ParamTriple& params) {
  const double r = evaluate_main(a, params).ratio;
  return std::isfinite(r) ? r : 0.0;
}

struct RefineResult {
  Sequence sequence;
  double ratio = 0.0;
  std::uint64_t evaluations = 0;
};

inline RefineResult refine(const Sequence& start, const ParamTriple& params, int steps) {
  std::vector<double> a = start.normalized().values();
  double current = safe_ratio(Sequence(a), params);
  std::uint64_t evals = 1;
  for (int s = 0; s < steps; ++s) {
    bool improved = false;
    for (int k = 1; k <= 6; ++k) {
      const double step = std::pow(10.0, -k);
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(a[i] > 0.0)) continue;
        for (double factor : {1.0 + step, 1.0 - step}) {
          const double saved = a[i];
          a[i] = saved * factor;
          const double r = safe_ratio(Sequence(a), params);
          ++evals;
          if (r > current) {
            current = r;
            improved = true;
          } else {
            a[i] = saved;
          }
        }
      }
    }
    if (!improved) break;
  }
  Sequence out = Sequence(std::move(a)).normalized();
  return {out, current, evals};
}

struct RestartResult {
  Sequence sequence;
  double ratio = 0.0;
  std::uint64_t evaluations = 0;
  bool converged = false;
};

inline std::vector<double> seeded_start(std::size_t n, std::uint64_t stream) {
  std::mt19937_64 rng(stream);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> t(n);
  const double slope = 2.0 * unit(rng);
  const int family = static_cast<int>(stream % 3);
  for (std::size_t j = 0; j < n; ++j) {
    const double noise = 4.0 * unit(rng) - 2.0;
    const double x = static_cast<double>(j);
    switch (family) {
      case 0: t[j] = noise; break;
      case 1: t[j] = -slope * x + 0.5 * noise; break;
      default: t[j] = -slope * std::log1p(x) + 0.5 * noise; break;
    }
  }
  return t;
}

inline RestartResult run_restart(const std::vector<double>& start, const ParamTriple& params,
                                 const SearchConfig& cfg) {
  std::uint64_t evals = 0;
  auto objective = [&](const std::vector<double>& t) {
    ++evals;
    return -safe_ratio(decode_log_terms(t), params);
  };
  optim::SimplexOptions opt;
  opt.max_iterations = cfg.max_iters;
  opt.tolerance = cfg.tol;
  const auto nm = optim::nelder_mead_minimize(objective, start, opt);

  // The simplex may end on a worse point than it started from when the
  // start is a vertex of a flat region; keep the better of the two.
  Sequence candidate = decode_log_terms(nm.x);
  const Sequence initial = decode_log_terms(start);
  if (safe_ratio(initial, params) > safe_ratio(candidate, params)) candidate = initial;
  evals += 2;

  auto refined = refine(candidate, params, cfg.refine_steps);
  return {std::move(refined.sequence), refined.ratio, evals + refined.evaluations, nm.converged};
}

}  // namespace detail

/// Coordinate-wise multiplicative hill-climb with factors 1 +- 10^-k, k = 1..6.
/// The returned sequence is normalized to unit sum and never has a lower ratio
/// than the input.
inline Sequence local_refine(const Sequence& a, const ParamTriple& params, int steps) {
  const auto pr = ParamTriple::make(params.p, params.q, params.r);
  detail::require_positive(a);
  return detail::refine(a, pr, steps).sequence;
}

inline SearchOutcome search_lower_bound(const ParamTriple& params, const SearchConfig& cfg) {
  const auto pr = ParamTriple::make(params.p, params.q, params.r);
  cfg.validate();

  std::vector<std::vector<double>> starts;
  starts.reserve(cfg.restarts + cfg.warm_starts.size());
  for (std::size_t i = 0; i < cfg.restarts; ++i) {
    if (i == 0) {
      std::vector<double> spike(cfg.n, -kLogBox);
      spike[0] = 0.0;
      starts.push_back(std::move(spike));
    } else {
      starts.push_back(detail::seeded_start(cfg.n, cfg.seed ^ static_cast<std::uint64_t>(i)));
    }
  }
  for (const auto& w : cfg.warm_starts) {
    detail::require_positive(w);
    starts.push_back(detail::encode_log_terms(w, cfg.n));
  }

  std::vector<detail::RestartResult> results(starts.size());
  if (cfg.threads <= 1) {
    for (std::size_t i = 0; i < starts.size(); ++i) results[i] = detail::run_restart(starts[i], pr, cfg);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < starts.size(); i = next++) {
        results[i] = detail::run_restart(starts[i], pr, cfg);
      }
    };
    std::vector<std::jthread> pool;
    const unsigned count = std::min<unsigned>(cfg.threads, static_cast<unsigned>(starts.size()));
    for (unsigned k = 0; k < count; ++k) pool.emplace_back(worker);
  }

  // The spike a = (1, 0, ..., 0) has ratio exactly 1 and is always a candidate.
  std::vector<double> spike_terms(cfg.n, 0.0);
  spike_terms[0] = 1.0;
  SearchOutcome out;
  out.n = cfg.n;
  out.best_sequence = Sequence(spike_terms);
  out.best_ratio = detail::safe_ratio(out.best_sequence, pr);
  out.evaluations = 1;
  out.restarts_run = results.size();
  bool have_best = false;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    out.evaluations += r.evaluations;
    out.converged.push_back(r.converged);
    out.restart_ratios.push_back(r.ratio);
    if (r.ratio > out.best_ratio || (!have_best && r.ratio >= out.best_ratio)) {
      out.best_ratio = r.ratio;
      out.best_sequence = r.sequence;
      out.best_restart = i;
      have_best = true;
    }
  }
  return out;
}

}  // namespace ineqlab
