// Core numeric kit shared by every evaluator: two-float (double-double)
// phase reduction, compensated complex accumulation, and the SumValue
// record (value, term count, rounding budget) returned by all sum kernels.
//
// Phase reduction: exponential-sum phases are alpha*m with m an integer
// that can exceed 2^53, so frac(alpha*m) is computed from exact two_prod
// splittings of alpha against the 32-bit halves of m. The result carries
// ~1e-15 absolute error, far below the 1e-10 per-term target.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>

namespace cubexp {

inline constexpr double kTwoPi = 6.2831853071795864769;
inline constexpr double kEps = std::numeric_limits<double>::epsilon();

struct TwoFloat {
  double hi = 0.0;
  double lo = 0.0;
};

inline TwoFloat two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline TwoFloat two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

// Fractional part of a double, exact (mantissa suffix extraction).
inline double frac_exact(double x) {
  if (std::abs(x) >= 9007199254740992.0) return 0.0;  // 2^53: already integral
  const double f = x - std::floor(x);
  return f < 1.0 ? f : 0.0;
}

// frac(hi + lo) in [0,1) for an exact two-float pair.
inline double frac_two(TwoFloat t) {
  double r = frac_exact(t.hi) + frac_exact(t.lo);
  r -= std::floor(r);
  return r < 1.0 ? r : 0.0;
}

// frac(alpha * m) for a signed 64-bit integer m.
inline double frac_mul_int(double alpha, std::int64_t m) {
  const bool neg = m < 0;
  std::uint64_t um = neg ? static_cast<std::uint64_t>(-(m + 1)) + 1 : static_cast<std::uint64_t>(m);
  const double m_hi = static_cast<double>(um >> 32);
  const double m_lo = static_cast<double>(um & 0xffffffffULL);
  TwoFloat t1 = two_prod(alpha, m_hi);
  t1.hi *= 4294967296.0;  // exact: power-of-two scale
  t1.lo *= 4294967296.0;
  const TwoFloat t0 = two_prod(alpha, m_lo);
  double r = frac_two(t1) + frac_two(t0);
  r -= std::floor(r);
  if (neg && r != 0.0) r = 1.0 - r;
  return r < 1.0 ? r : 0.0;
}

// e(t) = exp(2*pi*i*t) for t given as a fraction of a turn.
inline std::complex<double> unit_phase(double turns) {
  const double th = kTwoPi * turns;
  return {std::cos(th), std::sin(th)};
}

// Neumaier-compensated scalar sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class ComplexSum {
 public:
  void add(std::complex<double> z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_, im_;
};

// Value of an exponential sum together with its size and an accumulated
// floating-error budget (4 * eps * terms * sum of summand magnitudes,
// plus any per-term phase slop contributed by rotor evaluation).
struct SumValue {
  std::complex<double> value{0.0, 0.0};
  std::uint64_t terms = 0;
  double err_budget = 0.0;
};

// Accumulates unit-magnitude (or bounded-magnitude) summands.
class SumAccumulator {
 public:
  explicit SumAccumulator(double per_term_phase_slop = 0.0)
      : phase_slop_(per_term_phase_slop) {}

  void add(std::complex<double> z, double magnitude = 1.0) {
    acc_.add(z);
    ++terms_;
    mag_sum_ += magnitude;
  }

  SumValue finish() const {
    SumValue s;
    s.value = acc_.value();
    s.terms = terms_;
    s.err_budget = 4.0 * kEps * static_cast<double>(terms_) * mag_sum_ +
                   phase_slop_ * static_cast<double>(terms_);
    return s;
  }

 private:
  ComplexSum acc_;
  std::uint64_t terms_ = 0;
  double mag_sum_ = 0.0;
  double phase_slop_ = 0.0;
};

// out += coeff * in, propagating term counts and error budgets.
inline void add_scaled(SumValue& out, double coeff, const SumValue& in) {
  out.value += coeff * in.value;
  out.terms += in.terms;
  out.err_budget += std::abs(coeff) * in.err_budget +
                    4.0 * kEps * std::abs(out.value);
}

// Deterministic uniform [0,1) from a raw 64-bit generator draw; avoids
// distribution objects whose outputs vary across standard libraries.
template <class Gen>
inline double uniform01(Gen& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

template <class Gen>
inline std::uint64_t uniform_below(Gen& g, std::uint64_t n) {
  // Lemire-style rejection-free enough for test sampling; exact bounds
  // do not matter, determinism does.
  return static_cast<std::uint64_t>(uniform01(g) * static_cast<double>(n)) % n;
}

}  // namespace cubexp
