#pragma once

// Finite nonnegative sequences and exact evaluation of the series inequality
//
//   sum_n a_n^p A_n^q (sum_{k>=n} a_k^{1+p/q})^r  <=  K(p,q,r) sum_n (a_n^p A_n^q)^{1+r/q}
//
// together with its reversed (tail-sum) form and the related special cases.
// Infinite series are represented by their finite support; nothing is
// extrapolated past the last stored term.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ineqlab/numeric.hpp"

namespace ineqlab {

class Sequence {
 public:
  Sequence() = default;

  explicit Sequence(std::vector<double> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) throw DegenerateInputError("sequence must have at least one term");
    for (double t : terms_) {
      if (!std::isfinite(t) || t < 0.0) {
        throw DomainError("sequence terms must be finite and nonnegative");
      }
    }
  }

  Sequence(std::initializer_list<double> terms) : Sequence(std::vector<double>(terms)) {}

  [[nodiscard]] std::span<const double> terms() const noexcept { return terms_; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return terms_; }
  [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return terms_[i]; }

  [[nodiscard]] bool has_positive() const noexcept {
    return std::any_of(terms_.begin(), terms_.end(), [](double t) { return t > 0.0; });
  }

  [[nodiscard]] double max_term() const noexcept {
    return terms_.empty() ? 0.0 : *std::max_element(terms_.begin(), terms_.end());
  }

  [[nodiscard]] Sequence reversed() const {
    return Sequence(std::vector<double>(terms_.rbegin(), terms_.rend()));
  }

  [[nodiscard]] Sequence scaled(double lambda) const {
    std::vector<double> out(terms_);
    for (double& t : out) t *= lambda;
    return Sequence(std::move(out));
  }

  /// Appends zeros up to length n (no-op when already at least n long).
  [[nodiscard]] Sequence padded(std::size_t n) const {
    std::vector<double> out(terms_);
    if (out.size() < n) out.resize(n, 0.0);
    return Sequence(std::move(out));
  }

  /// Rescaled to unit sum. Requires a positive term.
  [[nodiscard]] Sequence normalized() const {
    const double total = compensated_sum(terms_);
    if (!(total > 0.0)) throw DegenerateInputError("cannot normalize an all-zero sequence");
    return scaled(1.0 / total);
  }

  friend bool operator==(const Sequence&, const Sequence&) = default;

 private:
  std::vector<double> terms_;
};

/// Exponent triple (p, q, r) with p >= 1, q > 0, r > 0 and (p(q+r)-q)/p >= 1.
struct ParamTriple {
  double p = 1.0;
  double q = 1.0;
  double r = 1.0;

  /// Returns an empty string when valid, otherwise the violated constraint.
  [[nodiscard]] static std::string violation(double p, double q, double r) {
    if (!(std::isfinite(p) && std::isfinite(q) && std::isfinite(r))) return "p, q, r finite";
    if (!(p >= 1.0)) return "p >= 1";
    if (!(q > 0.0)) return "q > 0";
    if (!(r > 0.0)) return "r > 0";
    if (!((p * (q + r) - q) / p >= 1.0 - 1e-12)) return "(p(q+r)-q)/p >= 1";
    return {};
  }

  [[nodiscard]] static ParamTriple make(double p, double q, double r) {
    if (auto v = violation(p, q, r); !v.empty()) {
      throw DomainError("invalid exponents: constraint " + v + " violated");
    }
    return ParamTriple{p, q, r};
  }

  /// (p(q+r)-q)/p, the base of the classical constant.
  [[nodiscard]] double bennett_base() const noexcept { return (p * (q + r) - q) / p; }

  friend bool operator==(const ParamTriple&, const ParamTriple&) = default;
};

struct RatioEval {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;

  friend bool operator==(const RatioEval&, const RatioEval&) = default;
};

struct PartialSums {
  std::vector<double> prefix;  ///< prefix[n] = a_1 + ... + a_{n+1}
  std::vector<double> tail;    ///< tail[n]   = a_{n+1} + ... + a_N
};

namespace detail {

inline RatioEval make_ratio(double lhs, double rhs) {
  RatioEval out{lhs, rhs, 0.0};
  if (rhs > 0.0) {
    out.ratio = lhs / rhs;
  } else if (lhs > 0.0) {
    out.ratio = std::numeric_limits<double>::infinity();
  }
  return out;
}

inline void require_positive(const Sequence& a) {
  if (!a.has_positive()) throw DegenerateInputError("sequence has no positive term");
}

/// Running sums of f(a_k), forward (k <= n) or backward (k >= n), compensated.
template <class F>
std::vector<double> forward_sums(std::span<const double> a, F&& f) {
  std::vector<double> out(a.size());
  CompensatedSum acc;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > 0.0) acc += f(a[i]);
    out[i] = acc.value();
  }
  return out;
}

template <class F>
std::vector<double> backward_sums(std::span<const double> a, F&& f) {
  std::vector<double> out(a.size());
  CompensatedSum acc;
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] > 0.0) acc += f(a[i]);
    out[i] = acc.value();
  }
  return out;
}

inline constexpr auto identity = [](double x) { return x; };

/// Shared kernel of the forward and reversed forms: `weight` is A_n (or the
/// tail A_{n,N}) and `inner` the power sum raised to r.
inline RatioEval evaluate_kernel(std::span<const double> a, std::span<const double> weight,
                                 std::span<const double> inner, const ParamTriple& pr) {
  const double boost = 1.0 + pr.r / pr.q;
  CompensatedSum lhs;
  CompensatedSum rhs;
  for (std::size_t n = 0; n < a.size(); ++n) {
    if (!(a[n] > 0.0)) continue;
    lhs += power_product({a[n], weight[n], inner[n]}, {pr.p, pr.q, pr.r});
    rhs += power_product({a[n], weight[n]}, {pr.p * boost, pr.q * boost});
  }
  return make_ratio(lhs.value(), rhs.value());
}

/// Both sides are homogeneous of the same degree, so when either side
/// overflows or underflows the ratio is recomputed on a copy scaled to max 1.
/// lhs and rhs keep their raw (possibly non-finite) values.
template <class Eval>
RatioEval with_rescue(const Sequence& a, Eval eval) {
  RatioEval out = eval(a);
  const bool sane = std::isfinite(out.lhs) && std::isfinite(out.rhs) && out.lhs > 0.0 && out.rhs > 0.0;
  if (!sane && a.max_term() != 1.0) out.ratio = eval(a.scaled(1.0 / a.max_term())).ratio;
  return out;
}

}  // namespace detail

inline PartialSums partial_sums(const Sequence& a) {
  return {detail::forward_sums(a.terms(), detail::identity),
          detail::backward_sums(a.terms(), detail::identity)};
}

/// Both sides of the main inequality (without the constant).
inline RatioEval evaluate_main(const Sequence& a, const ParamTriple& params) {
  const auto pr = ParamTriple::make(params.p, params.q, params.r);
  detail::require_positive(a);
  return detail::with_rescue(a, [&pr](const Sequence& b) {
    const double s = 1.0 + pr.p / pr.q;
    const auto prefix = detail::forward_sums(b.terms(), detail::identity);
    const auto tail_pow = detail::backward_sums(b.terms(), [s](double x) { return std::pow(x, s); });
    return detail::evaluate_kernel(b.terms(), prefix, tail_pow, pr);
  });
}

/// Reversed form: A_n replaced by the tail A_{n,N}, the inner tail power sum
/// by the prefix power sum. Equals evaluate_main on the reversed sequence.
inline RatioEval evaluate_dual(const Sequence& a, const ParamTriple& params) {
  const auto pr = ParamTriple::make(params.p, params.q, params.r);
  detail::require_positive(a);
  return detail::with_rescue(a, [&pr](const Sequence& b) {
    const double s = 1.0 + pr.p / pr.q;
    const auto tail = detail::backward_sums(b.terms(), detail::identity);
    const auto prefix_pow = detail::forward_sums(b.terms(), [s](double x) { return std::pow(x, s); });
    return detail::evaluate_kernel(b.terms(), tail, prefix_pow, pr);
  });
}

/// Littlewood's original instance, (p,q,r) = (1,2,2).
inline RatioEval evaluate_littlewood(const Sequence& a) {
  return evaluate_main(a, ParamTriple{1.0, 2.0, 2.0});
}

/// sum_n a_n^3 sum_{k<=n} a_k^2 A_k  against  sum_n a_n^4 A_n^2, no constant applied.
/// This is the (2,1,1) instance with the order of summation interchanged.
inline RatioEval evaluate_interchanged(const Sequence& a) {
  detail::require_positive(a);
  const auto t = a.terms();
  const auto prefix = detail::forward_sums(t, detail::identity);
  CompensatedSum inner;
  CompensatedSum lhs;
  CompensatedSum rhs;
  for (std::size_t n = 0; n < t.size(); ++n) {
    if (!(t[n] > 0.0)) continue;
    inner += power_product({t[n], prefix[n]}, {2.0, 1.0});
    lhs += std::pow(t[n], 3.0) * inner.value();
    rhs += power_product({t[n], prefix[n]}, {4.0, 2.0});
  }
  return detail::make_ratio(lhs.value(), rhs.value());
}

struct PrefixPowerExponents {
  double alpha = 0.0;
  double beta = 0.0;
  double delta = 0.0;
};

inline std::string prefix_power_violation(double p, double q, double r) {
  if (!(std::isfinite(p) && std::isfinite(q) && std::isfinite(r))) return "p, q, r finite";
  if (!(p >= 1.0)) return "p >= 1";
  if (!(q >= 1.0)) return "q >= 1";
  if (!(r > 0.0)) return "r > 0";
  if (!(r * (p - 1.0) <= 2.0 * (q - 1.0))) return "r(p-1) <= 2(q-1)";
  return {};
}

inline PrefixPowerExponents prefix_power_exponents(double p, double q, double r) {
  if (auto v = prefix_power_violation(p, q, r); !v.empty()) {
    throw DomainError("invalid exponents: constraint " + v + " violated");
  }
  return {((p - 1.0) * (q + r) + p * p + 1.0) / (p + 1.0),
          (2.0 * q + 2.0 * r + p - 1.0) / (p + 1.0),
          (q + r - 1.0) / (p + q + r)};
}

/// sum_n a_n^p sum_{k<=n} a_k^q A_k^r  against  2^delta sum_n a_n^alpha A_n^beta.
/// The rhs already includes the constant, so the inequality reads ratio <= 1.
inline RatioEval evaluate_prefix_power(const Sequence& a, double p, double q, double r) {
  const auto ex = prefix_power_exponents(p, q, r);
  detail::require_positive(a);
  const auto t = a.terms();
  const auto prefix = detail::forward_sums(t, detail::identity);
  CompensatedSum inner;
  CompensatedSum lhs;
  CompensatedSum rhs;
  for (std::size_t n = 0; n < t.size(); ++n) {
    if (!(t[n] > 0.0)) continue;
    inner += power_product({t[n], prefix[n]}, {q, r});
    lhs += std::pow(t[n], p) * inner.value();
    rhs += power_product({t[n], prefix[n]}, {ex.alpha, ex.beta});
  }
  return detail::make_ratio(lhs.value(), std::pow(2.0, ex.delta) * rhs.value());
}

}  // namespace ineqlab
