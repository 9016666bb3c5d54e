#pragma once

// Closed-form upper bounds on the best constant K(p,q,r).
//
// Every bound is returned as a BoundValue: the number, the rule that produced
// it and the sub-derivations it was built from. best_bound() evaluates every
// rule that applies to a triple and keeps the smallest.
//
// Rules:
//   Bennett           ((p(q+r)-q)/p)^r, valid on the whole parameter domain.
//   ThreeTermMin      r = 1: min of the Bennett term, C(p,q,lo) = p^lo and C(p,q,1).
//   DeltaMin          r = 1: min of the Bennett term and min over delta in [lo,1] of C(p,q,delta).
//   CompositeRegimeA  r >= 1, q+r-q/p >= 2: K1 * B^(r-1).
//   CompositeRegimeB  r >= 1, 1 <= q+r-q/p <= 2: K1^(r-e2) * B^e2.
//   ReductionSmallR   0 < r <= 1: K1^r.
//   CaseP1            p = 1, r >= 1: r^(r-1) K1 or r K1^(r-1).
//   ExactOne          p = 1, r = 1: the constant is exactly 1.
// where K1 bounds K(p(1+(r-1)/q), q+r-1, 1) and B = (p(q+r)-q)/p.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "ineqlab/numeric.hpp"
#include "ineqlab/optim.hpp"
#include "ineqlab/sequence.hpp"

namespace ineqlab {

enum class Rule {
  Bennett,
  ThreeTermMin,
  DeltaMin,
  CompositeRegimeA,
  CompositeRegimeB,
  ReductionSmallR,
  CaseP1,
  ExactOne,
};

inline std::string_view rule_name(Rule r) noexcept {
  switch (r) {
    case Rule::Bennett: return "Bennett";
    case Rule::ThreeTermMin: return "ThreeTermMin";
    case Rule::DeltaMin: return "DeltaMin";
    case Rule::CompositeRegimeA: return "CompositeRegimeA";
    case Rule::CompositeRegimeB: return "CompositeRegimeB";
    case Rule::ReductionSmallR: return "ReductionSmallR";
    case Rule::CaseP1: return "CaseP1";
    case Rule::ExactOne: return "ExactOne";
  }
  return "?";
}

struct BoundValue {
  double value = std::numeric_limits<double>::infinity();
  Rule rule = Rule::Bennett;
  std::vector<BoundValue> children;
  std::map<std::string, double> detail;
};

/// Admissible delta range [q(p-1)/(p(q+1)-q), 1].
struct DeltaInterval {
  double lo = 0.0;
  double hi = 1.0;

  [[nodiscard]] static DeltaInterval for_params(double p, double q) {
    return {q * (p - 1.0) / (p * (q + 1.0) - q), 1.0};
  }
};

struct DeltaMinimum {
  double delta_star = 0.0;
  double c_star = 0.0;
  DeltaInterval interval;
  int evaluations = 0;
};

struct ReductionExponents {
  double e1 = 0.0;
  double e2 = 0.0;
};

inline constexpr int kDeltaGridPoints = 256;
inline constexpr double kDeltaRefineWidth = 1e-10;

namespace detail {

inline void require_r1_domain(double p, double q) {
  if (!(std::isfinite(p) && p >= 1.0)) throw DomainError("invalid exponents: constraint p >= 1 violated");
  if (!(std::isfinite(q) && q > 0.0)) throw DomainError("invalid exponents: constraint q > 0 violated");
}

inline void require_c_domain(double p, double q) {
  if (!(std::isfinite(p) && p > 1.0)) {
    throw SingularityError("C(p,q,delta) requires p > 1 (singular at p = 1)");
  }
  if (!(std::isfinite(q) && q > 0.0)) throw DomainError("invalid exponents: constraint q > 0 violated");
}

/// C(p,q,delta) without domain checks.
inline double c_delta_raw(double p, double q, double delta) {
  const double m = 1.0 + p / (q * (p - 1.0));
  const double inner = 1.0 / (p - 1.0) + delta * m - 1.0;
  return std::pow(delta * m * (1.0 + 1.0 / inner), delta);
}

inline std::int64_t round_key(double x) { return std::llround(x * 1e12); }

}  // namespace detail

/// ((p(q+r)-q)/p)^r.
inline BoundValue bennett_bound(const ParamTriple& params) {
  const auto pr = ParamTriple::make(params.p, params.q, params.r);
  BoundValue out;
  out.rule = Rule::Bennett;
  out.value = pow0(pr.bennett_base(), pr.r);
  out.detail["base"] = pr.bennett_base();
  return out;
}

inline double c_delta(double p, double q, double delta) {
  detail::require_c_domain(p, q);
  const auto iv = DeltaInterval::for_params(p, q);
  const double slack = 1e-12 * std::max(1.0, std::abs(iv.lo));
  if (!(delta >= iv.lo - slack && delta <= iv.hi + slack)) {
    throw DomainError("delta outside [q(p-1)/(p(q+1)-q), 1]");
  }
  return detail::c_delta_raw(p, q, std::clamp(delta, iv.lo, iv.hi));
}

/// Minimum of C(p,q,.) over the admissible interval: a 256-point scan followed
/// by golden-section refinement around the best grid point. Ties resolve to
/// the smallest delta.
inline DeltaMinimum minimize_c_delta(double p, double q) {
  detail::require_c_domain(p, q);
  const auto iv = DeltaInterval::for_params(p, q);
  const auto at = [&](int i) {
    if (i == 0) return iv.lo;
    if (i == kDeltaGridPoints - 1) return iv.hi;
    return iv.lo + (iv.hi - iv.lo) * static_cast<double>(i) / (kDeltaGridPoints - 1);
  };

  int best_i = 0;
  double best_c = detail::c_delta_raw(p, q, at(0));
  for (int i = 1; i < kDeltaGridPoints; ++i) {
    const double c = detail::c_delta_raw(p, q, at(i));
    if (c < best_c) {
      best_c = c;
      best_i = i;
    }
  }

  DeltaMinimum out{at(best_i), best_c, iv, kDeltaGridPoints};
  const double left = at(std::max(best_i - 1, 0));
  const double right = at(std::min(best_i + 1, kDeltaGridPoints - 1));
  const auto refined = optim::golden_section_minimize(
      [&](double d) { return detail::c_delta_raw(p, q, d); }, left, right, kDeltaRefineWidth);
  out.evaluations += refined.evaluations;
  if (refined.fx < out.c_star) {
    out.c_star = refined.fx;
    out.delta_star = refined.x;
  }
  return out;
}

/// Three-term minimum: Bennett term, p^lo, and (1+(p-1)q/(p+q))(1+p/(q(p-1))).
inline BoundValue three_term_bound(double p, double q) {
  detail::require_r1_domain(p, q);
  BoundValue out;
  out.rule = Rule::ThreeTermMin;
  const double t1 = (p * (q + 1.0) - q) / p;
  out.detail["term1"] = t1;
  out.value = t1;
  out.detail["winning_term"] = 1;
  if (p > 1.0) {
    const double t2 = std::pow(p, (p - 1.0) * q / ((p - 1.0) * q + p));
    const double t3 = (1.0 + (p - 1.0) * q / (p + q)) * (1.0 + p / (q * (p - 1.0)));
    out.detail["term2"] = t2;
    out.detail["term3"] = t3;
    if (t2 < out.value) {
      out.value = t2;
      out.detail["winning_term"] = 2;
    }
    if (t3 < out.value) {
      out.value = t3;
      out.detail["winning_term"] = 3;
    }
  }
  return out;
}

/// Hoelder split exponents (e1, e2) with e1 + e2 = 1.
inline ReductionExponents reduction_exponents(double p, double q, double r) {
  if (!(p >= 1.0 && q > 0.0 && r >= 1.0)) {
    throw DomainError("reduction exponents require p >= 1, q > 0, r >= 1");
  }
  const double denom = q * (p - 1.0) + p * (r - 1.0);
  if (!(denom > 0.0)) throw DegenerateInputError("reduction exponents undefined at p = r = 1");
  return {q * (p - 1.0) / denom, p * (r - 1.0) / denom};
}

/// p = 1 rule given an upper bound k_base for K(1+(r-1)/q, q+r-1, 1).
inline double case_p1_bound(double q, double r, double k_base) {
  if (!(q > 0.0)) throw DomainError("invalid exponents: constraint q > 0 violated");
  if (!(r >= 1.0)) throw DomainError("invalid exponents: constraint r >= 1 violated");
  if (r >= 2.0) return std::pow(r, r - 1.0) * k_base;
  return r * std::pow(k_base, r - 1.0);
}

/// Evaluation context for the composite rules. Owns a private cache of the
/// r = 1 base bounds; not safe for concurrent use, create one per thread.
class BoundEngine {
 public:
  /// Upper bound on K(p,q,1).
  BoundValue k_r1_bound(double p, double q) {
    detail::require_r1_domain(p, q);
    const auto key = std::make_tuple(static_cast<int>(Rule::DeltaMin), detail::round_key(p),
                                     detail::round_key(q));
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;

    BoundValue out;
    if (p == 1.0) {
      out.rule = Rule::ExactOne;
      out.value = 1.0;
    } else {
      const auto bennett = bennett_bound(ParamTriple{p, q, 1.0});
      const auto dm = minimize_c_delta(p, q);
      out.rule = Rule::DeltaMin;
      out.value = std::min(bennett.value, dm.c_star);
      out.detail["delta_star"] = dm.delta_star;
      out.detail["c_star"] = dm.c_star;
      out.detail["delta_lo"] = dm.interval.lo;
      out.detail["delta_hi"] = dm.interval.hi;
      out.children.push_back(bennett);
    }
    out.detail["p"] = p;
    out.detail["q"] = q;
    cache_.emplace(key, out);
    return out;
  }

  /// Composite bound for r >= 1, (p,r) != (1,1); both regime formulas are
  /// evaluated where they apply and the smaller is kept.
  BoundValue composite_bound(const ParamTriple& params) {
    const auto pr = ParamTriple::make(params.p, params.q, params.r);
    if (!(pr.r >= 1.0)) throw DomainError("invalid exponents: constraint r >= 1 violated");
    if (pr.p == 1.0 && pr.r == 1.0) {
      throw DegenerateInputError("composite bound requires p and r not both equal to 1");
    }
    const double indicator = pr.q + pr.r - pr.q / pr.p;
    if (indicator < 1.0 - 1e-12) throw DomainError("q+r-q/p < 1: no composite regime applies");

    const auto base = k_r1_bound(pr.p * (1.0 + (pr.r - 1.0) / pr.q), pr.q + pr.r - 1.0);
    const double k1 = base.value;
    const double b = pr.bennett_base();

    BoundValue out;
    out.children.push_back(base);
    out.detail["indicator"] = indicator;
    out.detail["bennett_base"] = b;
    out.detail["k_base"] = k1;

    if (indicator >= 2.0) {
      const double a = k1 * std::pow(b, pr.r - 1.0);
      out.detail["regime_a"] = a;
      out.value = a;
      out.rule = Rule::CompositeRegimeA;
    }
    if (indicator <= 2.0) {
      const double e2 = reduction_exponents(pr.p, pr.q, pr.r).e2;
      const double bb = std::pow(k1, pr.r - e2) * std::pow(b, e2);
      out.detail["regime_b"] = bb;
      out.detail["e2"] = e2;
      if (bb < out.value) {
        out.value = bb;
        out.rule = Rule::CompositeRegimeB;
      }
    }
    return out;
  }

  /// K(p,q,r) <= K1^r for 0 < r <= 1.
  BoundValue reduction_small_r(const ParamTriple& params) {
    const auto pr = ParamTriple::make(params.p, params.q, params.r);
    if (pr.r > 1.0) throw DomainError("invalid exponents: constraint r <= 1 violated");
    const double bp = pr.p * (1.0 + (pr.r - 1.0) / pr.q);
    const double bq = pr.q + pr.r - 1.0;
    if (!(bq > 0.0)) throw DomainError("reduced exponent q+r-1 must be positive");
    if (!(bp >= 1.0 - 1e-12)) throw DomainError("reduced exponent p(1+(r-1)/q) must be >= 1");
    const auto base = k_r1_bound(std::max(bp, 1.0), bq);
    BoundValue out;
    out.rule = Rule::ReductionSmallR;
    out.value = std::pow(base.value, pr.r);
    out.detail["k_base"] = base.value;
    out.children.push_back(base);
    return out;
  }

  BoundValue case_p1(const ParamTriple& params) {
    const auto pr = ParamTriple::make(params.p, params.q, params.r);
    if (pr.p != 1.0) throw DomainError("invalid exponents: constraint p = 1 violated");
    const auto base = k_r1_bound(1.0 + (pr.r - 1.0) / pr.q, pr.q + pr.r - 1.0);
    BoundValue out;
    out.rule = Rule::CaseP1;
    out.value = case_p1_bound(pr.q, pr.r, base.value);
    out.detail["k_base"] = base.value;
    out.children.push_back(base);
    return out;
  }

  /// Smallest bound over every applicable rule. The winner's derivation is
  /// returned; every candidate value is recorded under "candidate.<rule>".
  BoundValue best_bound(const ParamTriple& params) {
    const auto pr = ParamTriple::make(params.p, params.q, params.r);
    // Ties keep the earlier candidate, so the classical bound is listed last.
    // At r = 1 the composite bound reduces to the r = 1 bound, which is listed first.
    std::vector<BoundValue> candidates;
    if (pr.r == 1.0) candidates.push_back(k_r1_bound(pr.p, pr.q));
    if (pr.r >= 1.0 && !(pr.p == 1.0 && pr.r == 1.0)) candidates.push_back(composite_bound(pr));
    if (pr.r <= 1.0) {
      try {
        candidates.push_back(reduction_small_r(pr));
      } catch (const DomainError&) {
        // base parameters outside the domain: rule does not apply
      }
    }
    if (pr.p == 1.0 && pr.r > 1.0) candidates.push_back(case_p1(pr));
    candidates.push_back(bennett_bound(pr));

    std::size_t win = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i) {
      if (candidates[i].value < candidates[win].value) win = i;
    }
    BoundValue out = candidates[win];
    for (const auto& c : candidates) {
      auto& slot = out.detail["candidate." + std::string(rule_name(c.rule))];
      slot = c.value;
    }
    return out;
  }

  [[nodiscard]] std::size_t cache_size() const noexcept { return cache_.size(); }

 private:
  std::map<std::tuple<int, std::int64_t, std::int64_t>, BoundValue> cache_;
};

inline BoundValue k_r1_bound(double p, double q) { return BoundEngine{}.k_r1_bound(p, q); }
inline BoundValue composite_bound(const ParamTriple& pr) { return BoundEngine{}.composite_bound(pr); }
inline BoundValue reduction_small_r(const ParamTriple& pr) { return BoundEngine{}.reduction_small_r(pr); }
inline BoundValue best_bound(const ParamTriple& pr) { return BoundEngine{}.best_bound(pr); }

}  // namespace ineqlab
