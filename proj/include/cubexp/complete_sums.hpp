// Complete exponential sums over a modulus q and the local objects built
// from them:
//
//   S(q,a1,a2)  = sum_{x=1}^{q} e((a1 x + a2 x^2)/q)         quadratic
//   U(q,a,b)    = sum_{z=1}^{q} e((a z^3 + b z)/q)           cubic + twist
//   U*(r,b)     = sum_{x<=r, (x,r)=1} e(b x^3 / r)           restricted
//   W(r,b)      = sum_{x,y<=r, (x,y,r)=1} e(b (x^3-y^3)/r)   paired
//   T(q,a,b)    = sum_{k,z<=q} e((a(k^3+3zk^2+3z^2k)+bk)/q)  = |U(q,a,b)|^2
//
// plus the multiplicative envelope kappa_w and the local-factor series
//   S(a/q,w)    = sum_{d|w} mu(d)/(q^2 d^2) |U(q, a d^3)|^2
//   S0(alpha,w) = same sum restricted to d <= H with d|beta| <= 1/(48 P^2).
//
// Each sum has a direct evaluation (used as oracle in tests) and a fast
// path that splits q by CRT into prime powers:
//   S(q1 q2, a1, a2) = S(q1, a1, a2 q2) S(q2, a1, a2 q1)
//   U(q1 q2, c, b)   = U(q1, c q2^2, b) U(q2, c q1^2, b)
// valid for coprime q1, q2.
#pragma once

#include <cstdint>

#include "cubexp/base.hpp"
#include "cubexp/ntheory.hpp"

namespace cubexp::sums {

using nt::SquarefreeModulus;

// Fast path kicks in above this modulus.
inline constexpr std::uint64_t kDirectThreshold = 10'000;

SumValue gauss_quad(std::uint64_t q, std::int64_t a1, std::int64_t a2);
SumValue gauss_quad_direct(std::uint64_t q, std::int64_t a1, std::int64_t a2);

SumValue hua_sum(std::uint64_t q, std::int64_t a, std::int64_t b);
SumValue hua_sum_direct(std::uint64_t q, std::int64_t a, std::int64_t b);

SumValue restricted_cubic_sum(std::uint64_t r, std::int64_t b);

SumValue paired_sum_W(std::uint64_t r, std::int64_t b);          // divisor formula
SumValue paired_sum_W_direct(std::uint64_t r, std::int64_t b);   // O(r^2) double sum

SumValue hua_T(std::uint64_t q, std::int64_t a, std::int64_t b);         // |U|^2
SumValue hua_T_direct(std::uint64_t q, std::int64_t a, std::int64_t b);  // O(q^2)

// kappa_w(q): multiplicative over prime powers p^l of q.
//   p not dividing w:  kappa(p)=2 p^{-1/2}, kappa(p^2)=p^{-1},
//                      kappa(p^{l+3}) = p^{-1} kappa(p^l)
//   p | w, p != 3:     kappa(p)=2 p^{-1/2}, kappa(p^l)=0 for l >= 2
//   p = 3 | w:         kappa(3)=2, kappa(9)=1, kappa(3^l)=0 for l >= 3
double kappa(std::uint64_t q, const SquarefreeModulus& w);

// kappa_w(q)^2 as an exact rational (it is 4^s * product p^{-t}), with
// zero encoded as num = 0. Used for exact envelope comparisons.
struct KappaSquared {
  unsigned __int128 num = 1;
  unsigned __int128 den = 1;
  bool zero = false;
};
KappaSquared kappa_sq_exact(std::uint64_t q, const SquarefreeModulus& w);
// Same, reusing an existing factorization of q (bulk scans).
KappaSquared kappa_sq_exact_from(const nt::Factorization& fact,
                                 const SquarefreeModulus& w);

// S(a/q, w): evaluated through the coprime factorization
//   S(a/q,w) = q0^{-2} W(q0, a q1^2) * |U(q1, a q0^2)|^2 q1^{-2}
//              * prod_{p | w, p coprime to q} (1 - p^{-2})
// where q0 is the part of q composed of primes of w. Rejects (a,q) != 1.
double local_series(std::int64_t a, std::uint64_t q, const SquarefreeModulus& w);
// Literal divisor-sum evaluation (enumerates d | w); cross-check path.
double local_series_literal(std::int64_t a, std::uint64_t q,
                            const SquarefreeModulus& w);
// S0(alpha, w) with alpha = a/q + beta: divisors restricted to
// D(alpha,w) = { d | w : d <= H, d |beta| <= (48 P^2)^{-1} }, H = sqrt(P).
double local_series_D(std::int64_t a, std::uint64_t q, double beta, double P,
                      const SquarefreeModulus& w);

// Reduce a modulo q into [0, q).
std::uint64_t reduce_mod(std::int64_t a, std::uint64_t q);
// a * d^3 mod q without overflow.
std::uint64_t cube_twist_mod(std::int64_t a, std::uint64_t d, std::uint64_t q);

}  // namespace cubexp::sums
