#pragma once

// Finite-instance checks of the auxiliary inequalities (Copson's inequality,
// its tail-sum dual, and the negative-power tail bounds) plus randomized
// suites over them and over the main inequality family.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "ineqlab/bounds.hpp"
#include "ineqlab/numeric.hpp"
#include "ineqlab/sequence.hpp"

namespace ineqlab {

inline constexpr double kHoldsTolerance = 1e-9;

struct Witness {
  std::vector<double> a;  ///< primary sequence (a or lambda)
  std::vector<double> x;  ///< secondary sequence, when present
  std::map<std::string, double> scalars;
};

struct CheckReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool holds = true;
  Witness witness;
};

namespace detail {

inline CheckReport make_report(double lhs, double rhs, Witness w) {
  return {lhs, rhs, rhs - lhs, lhs <= rhs * (1.0 + kHoldsTolerance), std::move(w)};
}

inline void require_copson_exponents(double c, double d) {
  if (!(c > 1.0)) throw DomainError("Copson check requires c > 1");
  if (!(d >= c)) throw DomainError("Copson check requires d >= c");
}

}  // namespace detail

/// sum_n l_n L_n^-c (sum_{k<=n} l_k x_k)^d <= (d/(c-1))^d sum_n l_n L_n^(d-c) x_n^d,
/// L_n the prefix sums of lambda.
inline CheckReport check_copson(const Sequence& lambda, const Sequence& x, double c, double d) {
  detail::require_copson_exponents(c, d);
  if (lambda.size() != x.size()) throw DomainError("lambda and x must have equal length");
  if (!(lambda[0] > 0.0)) throw DegenerateInputError("Copson check requires lambda_1 > 0");
  const auto l = lambda.terms();
  const auto xs = x.terms();
  CompensatedSum big_l;
  CompensatedSum weighted;
  CompensatedSum lhs;
  CompensatedSum rhs;
  for (std::size_t n = 0; n < l.size(); ++n) {
    big_l += l[n];
    weighted += l[n] * xs[n];
    if (!(l[n] > 0.0)) continue;
    const double L = big_l.value();
    const double s = weighted.value();
    if (s > 0.0) lhs += power_product({l[n], L, s}, {1.0, -c, d});
    if (xs[n] > 0.0) rhs += power_product({l[n], L, xs[n]}, {1.0, d - c, d});
  }
  const double constant = std::pow(d / (c - 1.0), d);
  return detail::make_report(lhs.value(), constant * rhs.value(),
                             {lambda.values(), x.values(), {{"c", c}, {"d", d}}});
}

/// Tail-sum form: L*_n = sum_{k>=n} l_k and the inner sum runs over k >= n.
inline CheckReport check_copson_dual(const Sequence& lambda, const Sequence& x, double c, double d) {
  detail::require_copson_exponents(c, d);
  if (lambda.size() != x.size()) throw DomainError("lambda and x must have equal length");
  const auto l = lambda.terms();
  const auto xs = x.terms();
  if (std::any_of(l.begin(), l.end(), [](double v) { return !(v > 0.0); })) {
    throw DomainError("dual Copson check requires a strictly positive lambda");
  }
  CompensatedSum big_l;
  CompensatedSum weighted;
  CompensatedSum lhs;
  CompensatedSum rhs;
  for (std::size_t n = l.size(); n-- > 0;) {
    big_l += l[n];
    weighted += l[n] * xs[n];
    const double L = big_l.value();
    const double s = weighted.value();
    if (s > 0.0) lhs += power_product({l[n], L, s}, {1.0, -c, d});
    if (xs[n] > 0.0) rhs += power_product({l[n], L, xs[n]}, {1.0, d - c, d});
  }
  const double constant = std::pow(d / (c - 1.0), d);
  return detail::make_report(lhs.value(), constant * rhs.value(),
                             {lambda.values(), x.values(), {{"c", c}, {"d", d}}});
}

/// sum_{k=n}^N a_k A_k^(p-1) <= (1 - 1/p) A_n^p for p < 0; n is 1-based.
/// Truncating the infinite sum only lowers the left side.
inline CheckReport check_tail_bound(const Sequence& a, double p_neg, std::size_t n) {
  if (!(p_neg < 0.0)) throw DomainError("tail bound requires p < 0");
  if (!(a[0] > 0.0)) throw DegenerateInputError("tail bound requires a_1 > 0");
  if (n < 1 || n > a.size()) throw DomainError("index n must satisfy 1 <= n <= N");
  const auto prefix = partial_sums(a).prefix;
  CompensatedSum lhs;
  for (std::size_t k = n - 1; k < a.size(); ++k) {
    if (a[k] > 0.0) lhs += a[k] * std::pow(prefix[k], p_neg - 1.0);
  }
  const double rhs = (1.0 - 1.0 / p_neg) * std::pow(prefix[n - 1], p_neg);
  return detail::make_report(lhs.value(), rhs,
                             {a.values(), {}, {{"p", p_neg}, {"n", static_cast<double>(n)}}});
}

/// sum_{k=1}^N a_k A_{k,M}^(p-1) <= (1 - 1/p) A_{N,M}^p, A_{k,M} = a_k + ... + a_M.
inline CheckReport check_tail_bound_finite(const Sequence& a, double p_neg, std::size_t n_cap,
                                           std::size_t m_cap) {
  if (!(p_neg < 0.0)) throw DomainError("tail bound requires p < 0");
  if (n_cap < 1 || m_cap < n_cap) throw DomainError("indices must satisfy M >= N >= 1");
  if (a.size() < m_cap) throw DomainError("sequence shorter than M");
  const auto t = a.terms();
  if (std::any_of(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(m_cap),
                  [](double v) { return !(v > 0.0); })) {
    throw DomainError("finite tail bound requires positive terms a_1..a_M");
  }
  std::vector<double> tail(m_cap);
  CompensatedSum acc;
  for (std::size_t k = m_cap; k-- > 0;) {
    acc += t[k];
    tail[k] = acc.value();
  }
  CompensatedSum lhs;
  for (std::size_t k = 0; k < n_cap; ++k) lhs += t[k] * std::pow(tail[k], p_neg - 1.0);
  const double rhs = (1.0 - 1.0 / p_neg) * std::pow(tail[n_cap - 1], p_neg);
  return detail::make_report(lhs.value(), rhs,
                             {a.values(),
                              {},
                              {{"p", p_neg},
                               {"N", static_cast<double>(n_cap)},
                               {"M", static_cast<double>(m_cap)}}});
}

// ---------------------------------------------------------------------------
// Randomized suites

enum class Suite { Copson, CopsonDual, Tail, TailFinite, Eq2Dominance, Eq3, Eq4, Duality };

inline constexpr std::string_view kSuiteNames[] = {
    "copson", "copson-dual", "tail", "tail-finite", "eq2-dominance", "eq3", "eq4", "duality"};

inline std::string_view suite_name(Suite s) { return kSuiteNames[static_cast<int>(s)]; }

inline Suite parse_suite(std::string_view name) {
  for (int i = 0; i < static_cast<int>(std::size(kSuiteNames)); ++i) {
    if (kSuiteNames[i] == name) return static_cast<Suite>(i);
  }
  throw std::invalid_argument("unknown suite: " + std::string(name));
}

/// Grid of exponent triples used by the dominance and duality suites.
inline std::vector<ParamTriple> reference_grid() {
  std::vector<ParamTriple> out;
  for (double p : {1.0, 1.5, 2.0, 3.0, 6.0, 10.0}) {
    for (double q : {0.5, 1.0, 2.0, 6.0, 10.0}) {
      for (double r : {1.0, 1.5, 2.0, 3.0, 5.0}) {
        if (ParamTriple::violation(p, q, r).empty()) out.push_back({p, q, r});
      }
    }
  }
  return out;
}

struct TrialOutcome {
  CheckReport report;
  /// Normalized margin (rhs - lhs)/max(|lhs|,|rhs|); for the duality suite
  /// it is the negated relative discrepancy.
  double rel_slack = 0.0;
  bool violated = false;
};

struct SuiteSummary {
  std::string suite;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t violations = 0;
  double worst_slack = 0.0;        ///< smallest rel_slack seen
  std::size_t worst_trial = 0;     ///< reproducible from (suite, seed, trial index)
  CheckReport worst;
  double max_rel_discrepancy = 0.0;  ///< duality suite only
  [[nodiscard]] bool passed() const noexcept { return violations == 0; }
};

inline constexpr double kDualityTolerance = 1e-12;

namespace detail {

struct TrialRng {
  explicit TrialRng(std::uint64_t seed, std::size_t trial)
      : rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(trial) + 0x5bd1e995ULL))) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  std::size_t length(std::size_t max_len) {
    return std::uniform_int_distribution<std::size_t>(1, max_len)(rng);
  }
  std::vector<double> magnitudes(std::size_t n) {
    std::vector<double> out(n);
    for (double& v : out) v = log_uniform(1e-3, 1e3);
    return out;
  }
  std::pair<double, double> copson_exponents() {
    double c = uniform(1.05, 8.0);
    double d = uniform(1.05, 8.0);
    if (d < c) std::swap(c, d);
    return {c, d};
  }

  std::mt19937_64 rng;
};

inline constexpr std::size_t kMaxTrialLength = 32;

inline TrialOutcome finish(CheckReport rep) {
  TrialOutcome out;
  const double scale = std::max(std::abs(rep.lhs), std::abs(rep.rhs));
  out.rel_slack = scale > 0.0 ? rep.slack / scale : 0.0;
  out.violated = !rep.holds;
  out.report = std::move(rep);
  return out;
}

/// Ratio check against a constant: holds when ratio <= bound within tolerance.
inline TrialOutcome bound_trial(const RatioEval& ev, double bound, Witness w) {
  return finish(make_report(ev.lhs, bound * ev.rhs, std::move(w)));
}

class TrialRunner {
 public:
  TrialRunner() : grid_(reference_grid()) {}

  TrialOutcome run(Suite suite, std::uint64_t seed, std::size_t trial) {
    TrialRng g(seed, trial);
    switch (suite) {
      case Suite::Copson: {
        const auto n = g.length(kMaxTrialLength);
        const auto [c, d] = g.copson_exponents();
        return finish(check_copson(Sequence(g.magnitudes(n)), Sequence(g.magnitudes(n)), c, d));
      }
      case Suite::CopsonDual: {
        const auto n = g.length(kMaxTrialLength);
        const auto [c, d] = g.copson_exponents();
        return finish(check_copson_dual(Sequence(g.magnitudes(n)), Sequence(g.magnitudes(n)), c, d));
      }
      case Suite::Tail: {
        const auto n = g.length(kMaxTrialLength);
        const double p = -g.uniform(0.1, 10.0);
        Sequence a(g.magnitudes(n));
        const auto idx = std::uniform_int_distribution<std::size_t>(1, n)(g.rng);
        return finish(check_tail_bound(a, p, idx));
      }
      case Suite::TailFinite: {
        const auto len = g.length(kMaxTrialLength);
        const double p = -g.uniform(0.1, 10.0);
        Sequence a(g.magnitudes(len));
        const auto m = std::uniform_int_distribution<std::size_t>(1, len)(g.rng);
        const auto n = std::uniform_int_distribution<std::size_t>(1, m)(g.rng);
        return finish(check_tail_bound_finite(a, p, n, m));
      }
      case Suite::Eq2Dominance: {
        const auto& pr = grid_[std::uniform_int_distribution<std::size_t>(0, grid_.size() - 1)(g.rng)];
        Sequence a = random_shape(g);
        const double bound = bound_for(pr);
        auto out = bound_trial(evaluate_main(a, pr), bound,
                               {a.values(), {}, {{"p", pr.p}, {"q", pr.q}, {"r", pr.r}, {"bound", bound}}});
        return out;
      }
      case Suite::Eq3: {
        Sequence a = random_shape(g);
        return bound_trial(evaluate_interchanged(a), std::cbrt(2.0), {a.values(), {}, {}});
      }
      case Suite::Eq4: {
        Sequence a = random_shape(g);
        // The right side already carries the constant 2^delta.
        return bound_trial(evaluate_prefix_power(a, 3.0, 2.0, 1.0), 1.0,
                           {a.values(), {}, {{"p", 3.0}, {"q", 2.0}, {"r", 1.0}}});
      }
      case Suite::Duality: {
        const auto& pr = grid_[std::uniform_int_distribution<std::size_t>(0, grid_.size() - 1)(g.rng)];
        Sequence a = random_shape(g);
        const auto dual = evaluate_dual(a, pr);
        const auto main = evaluate_main(a.reversed(), pr);
        const double disc = std::max({relative_difference(dual.lhs, main.lhs),
                                      relative_difference(dual.rhs, main.rhs),
                                      relative_difference(dual.ratio, main.ratio)});
        TrialOutcome out;
        out.report = {dual.lhs, main.lhs, -disc, disc <= kDualityTolerance,
                      {a.values(), {}, {{"p", pr.p}, {"q", pr.q}, {"r", pr.r}, {"discrepancy", disc}}}};
        out.rel_slack = -disc;
        out.violated = disc > kDualityTolerance;
        return out;
      }
    }
    throw std::logic_error("unhandled suite");
  }

 private:
  /// Log-uniform magnitudes on [1e-3, 1e3] rescaled to max 1, optionally
  /// reshaped toward a monotone profile. Rescaling keeps high powers finite;
  /// every ratio involved is scale invariant.
  static Sequence random_shape(TrialRng& g) {
    const auto n = g.length(kMaxTrialLength);
    auto m = g.magnitudes(n);
    const int shape = std::uniform_int_distribution<int>(0, 3)(g.rng);
    if (shape == 1) std::sort(m.begin(), m.end(), std::greater<>());
    if (shape == 2) std::sort(m.begin(), m.end());
    if (shape == 3) {
      const double s = g.uniform(0.0, 3.0);
      for (std::size_t i = 0; i < n; ++i) m[i] = std::pow(static_cast<double>(i + 1), -s);
    }
    const double mx = *std::max_element(m.begin(), m.end());
    for (double& v : m) v /= mx;
    return Sequence(std::move(m));
  }

  double bound_for(const ParamTriple& pr) {
    const auto key = std::make_tuple(pr.p, pr.q, pr.r);
    if (auto it = bounds_.find(key); it != bounds_.end()) return it->second;
    const double v = engine_.best_bound(pr).value;
    bounds_.emplace(key, v);
    return v;
  }

  std::vector<ParamTriple> grid_;
  BoundEngine engine_;
  std::map<std::tuple<double, double, double>, double> bounds_;
};

}  // namespace detail

/// Runs a single trial of a suite; reproduces the witness of any trial index.
inline TrialOutcome run_trial(Suite suite, std::uint64_t seed, std::size_t trial) {
  return detail::TrialRunner{}.run(suite, seed, trial);
}

/// Runs `trials` seeded instances. Trial i draws from a generator derived from
/// (seed, i), so results do not depend on `threads` (0 or 1 = sequential).
inline SuiteSummary run_suite(Suite suite, std::size_t trials, std::uint64_t seed, unsigned threads = 0) {
  std::vector<TrialOutcome> outcomes(trials);
  if (threads <= 1) {
    detail::TrialRunner runner;
    for (std::size_t i = 0; i < trials; ++i) outcomes[i] = runner.run(suite, seed, i);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      detail::TrialRunner runner;
      for (std::size_t i = next++; i < trials; i = next++) outcomes[i] = runner.run(suite, seed, i);
    };
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }

  SuiteSummary s;
  s.suite = std::string(suite_name(suite));
  s.trials = trials;
  s.seed = seed;
  for (std::size_t i = 0; i < trials; ++i) {
    const auto& o = outcomes[i];
    if (o.violated) ++s.violations;
    if (i == 0 || o.rel_slack < s.worst_slack) {
      s.worst_slack = o.rel_slack;
      s.worst_trial = i;
      s.worst = o.report;
    }
    if (suite == Suite::Duality) s.max_rel_discrepancy = std::max(s.max_rel_discrepancy, -o.rel_slack);
  }
  return s;
}

inline SuiteSummary run_suite(std::string_view suite, std::size_t trials, std::uint64_t seed,
                              unsigned threads = 0) {
  return run_suite(parse_suite(suite), trials, seed, threads);
}

}  // namespace ineqlab
