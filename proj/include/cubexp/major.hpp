// The major-arc approximation chain. For alpha = a/q + beta on an arc,
// with D(alpha,w) = { d | w : d <= H, d |beta| <= (48 P^2)^{-1} }:
//
//   F*_w(alpha) = sum_{d in D} mu(d)/(q d) sum_{h <= H/d} e(alpha d^3 h^3)
//                 S(q, 3 a d^3 h^2, 3 a d^3 h) J(3 h^2 d^2 beta, 3 h d beta; P)
//
//   main term   = S0(alpha, w) K(beta)
//
// together with envelope reports for |F_w| against
//   H P log(P) Upsilon_w(alpha) + P^{1+eps}
// and the quadratic-sum comparison
//   f(alpha1, alpha2) ~ q^{-1} S(q,a1,a2) I(beta1, beta2)
// whose error is measured against (q,a2)^{1/2}(q + q X^2 |beta2|)^{1/2} log q.
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "cubexp/arcs.hpp"
#include "cubexp/ntheory.hpp"

namespace cubexp::major {

struct MajorDecomposition {
  arcs::RationalApproximant approximant;
  std::vector<std::uint64_t> d_set;
  std::complex<double> f_star{0.0, 0.0};
  std::complex<double> main_term{0.0, 0.0};
  std::complex<double> f_true{0.0, 0.0};
  std::complex<double> residual{0.0, 0.0};  // f_true - main_term
};

// Both reject minor-arc alpha.
std::complex<double> f_star(double alpha, double P, const nt::SquarefreeModulus& w);
std::complex<double> main_term(double alpha, double P, const nt::SquarefreeModulus& w);

// Full decomposition at one alpha; f_true through the Moebius identity.
MajorDecomposition decompose(double alpha, double P, const nt::SquarefreeModulus& w,
                             int threads = 1);

struct Theorem12Row {
  double alpha = 0.0;
  std::uint64_t q = 0;  // 0 on minor arcs
  std::uint64_t a = 0;
  double abs_f = 0.0;
  double envelope = 0.0;
  double ratio = 0.0;
};

struct SampleSpec {
  int minor_samples = 200;
  int points_per_fraction = 8;  // geometric beta ladder per (q,a)
  std::uint64_t q_limit = 0;    // 0: q <= P^{1/4}
  std::uint64_t seed = 1;
  double epsilon = 0.1;
};

struct Theorem12Report {
  std::vector<Theorem12Row> rows;
  double max_ratio = 0.0;
};

Theorem12Report theorem12_report(double P, const nt::SquarefreeModulus& w,
                                 const SampleSpec& spec, int threads = 0);

struct QuadWeylCheck {
  double lhs = 0.0;  // |f - q^{-1} S I|
  double rhs = 0.0;  // (q,a2)^{1/2} (q + q X^2 |b2|)^{1/2} max(log q, 1)
};

// Rejects |b1| > 1/(2q).
QuadWeylCheck quadweyl_check(std::uint64_t q, std::int64_t a1, std::int64_t a2,
                             double b1, double b2, double X);

// sum_{h <= H} (r,h)/(1 + K h), gcds exact, compensated accumulation.
double gcd_weighted_sum(std::uint64_t r, double K, std::uint64_t H);

// Least-squares slope of log(y) against log(x); the stability statistic
// for fitted-constant envelope tests.
double log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace cubexp::major
