// Farey dissection of [0,1]. With H = sqrt(P):
//
//   M(q,a) = { alpha : |q alpha - a| <= (6HP)^{-1} },  0 <= a <= q <= P, (a,q)=1
//   N(q,a) = { alpha : |q alpha - a| <= P^{-7/4} },    q <= Q = P^{3/4}
//
// and the envelope functions
//
//   Upsilon_w(alpha) = kappa_w(q)^2 (1 + H P^2 |alpha - a/q|)^{-1}  on M(q,a)
//   Xi(alpha)        = 4^{omega(q)} (q + H P^2 |q alpha - a|)^{-1}  on N(q,a)
//
// both zero off their arcs. The M(q,a) are pairwise disjoint, so the
// classification of alpha is unique; it is found through the smallest-
// denominator continued-fraction convergent within the Dirichlet bound.
// Alphas given as exact rationals are classified with exact integer
// comparisons; doubles get a 4-ulp guard band and a boundary-ambiguous
// flag instead of a silent guess.
#pragma once

#include <cstdint>
#include <optional>

#include "cubexp/ntheory.hpp"

namespace cubexp::arcs {

struct Rational {
  std::int64_t num = 0;
  std::uint64_t den = 1;

  static Rational make(std::int64_t num, std::uint64_t den);  // reduces
  double to_double() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }
};

struct RationalApproximant {
  std::uint64_t a = 0;
  std::uint64_t q = 1;
  double beta = 0.0;  // alpha - a/q
};

enum class ArcKind { MajorM, MajorN, Minor };

struct ArcLabel {
  ArcKind kind = ArcKind::Minor;
  std::optional<RationalApproximant> approximant;
  double upsilon = 0.0;
  double xi = 0.0;
  bool boundary_ambiguous = false;
};

// Smallest q <= Q with (a,q)=1 and |q alpha - a| <= 1/floor(Q), by
// continued fractions. alpha in [0,1].
RationalApproximant dirichlet_approx(double alpha, double Q);

ArcLabel classify(double alpha, double P, const nt::SquarefreeModulus& w);
ArcLabel classify(const Rational& alpha, double P, const nt::SquarefreeModulus& w);

double upsilon(double alpha, double P, const nt::SquarefreeModulus& w);
double xi(double alpha, double P);

// Total length of the union of the M(q,a):
// (2/(6HP)) * (1 + sum_{2<=q<=P} phi(q)/q); the q=1 arcs at 0 and 1 are
// clipped halves that join to one full arc.
double major_arc_measure(double P);

}  // namespace cubexp::arcs
