#pragma once

// Small numeric helpers shared by the evaluators and the bound engine.

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>

namespace ineqlab {

/// Exponent or parameter outside the region where a statement applies.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Input sequence that carries no information (all zero, leading zero, ...).
class DegenerateInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Formula evaluated at a removable or genuine singularity (p = 1 in C(p,q,delta)).
class SingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  CompensatedSum& operator+=(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) noexcept {
  CompensatedSum acc;
  for (double x : xs) acc += x;
  return acc.value();
}

/// x^y for x >= 0 with the convention 0^y = 0 for y > 0 and 0^0 = 1.
/// Negative exponents of zero are rejected: callers skip zero terms first.
inline double pow0(double x, double y) {
  if (x > 0.0) return std::pow(x, y);
  if (x == 0.0) {
    if (y > 0.0) return 0.0;
    if (y == 0.0) return 1.0;
    throw DomainError("pow0: zero raised to a negative power");
  }
  throw DomainError("pow0: negative base");
}

inline constexpr double kDirectUpper = 1e100;
inline constexpr double kDirectLower = 1e-100;

/// Product of powers  prod_i base_i^exp_i  over strictly positive bases.
/// Multiplies directly while every factor stays in [1e-100, 1e100], otherwise
/// falls back to exp(sum exp_i * ln base_i).
template <std::size_t K>
double power_product(const double (&bases)[K], const double (&exps)[K]) {
  double factors[K];
  bool direct = true;
  for (std::size_t i = 0; i < K; ++i) {
    factors[i] = std::pow(bases[i], exps[i]);
    if (!(factors[i] <= kDirectUpper && factors[i] >= kDirectLower)) direct = false;
  }
  if (direct) {
    double prod = 1.0;
    for (double f : factors) prod *= f;
    return prod;
  }
  double log_sum = 0.0;
  for (std::size_t i = 0; i < K; ++i) log_sum += exps[i] * std::log(bases[i]);
  return std::exp(log_sum);
}

inline double relative_difference(double a, double b) noexcept {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) return 0.0;
  return std::abs(a - b) / scale;
}

/// SplitMix64 step; used to derive independent per-trial and per-restart seeds.
inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace ineqlab
