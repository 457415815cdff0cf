// Incomplete oscillatory sums:
//
//   f(a1,a2;X)     = sum_{x <= X}      e(a1 x + a2 x^2)
//   g(a1,a2;X)     = sum_{X < x <= 2X} e(a1 x + a2 x^2)
//   G(alpha;X,Y)   = sum_{h <= Y} sum_{X < x <= 2X} e(alpha h(3x^2+3xh+h^2))
//   F_w(alpha)     = sum_{h <= H} sum_{P < x <= 2P, (x,h,w)=1} e(alpha h(3x^2+3xh+h^2))
//
// with H = sqrt(P). F_w is evaluated either literally (the oracle path,
// with the coprimality constraint applied term by term) or through
//   F_w(alpha) = sum_{d | w} mu(d) G(alpha d^3; P/d, H/d),
// where divisors d > H contribute nothing.
//
// Inner loops use a quadratic-phase rotor (two complex multiplications
// per term), re-anchored to a directly reduced exponential every 2^10
// steps; anchors reduce alpha*m mod 1 in two-float arithmetic once the
// integer phase m exceeds 2^40. Evaluation over h is split into fixed
// blocks combined in index order, so results do not depend on the thread
// count.
#pragma once

#include <cstdint>

#include "cubexp/base.hpp"
#include "cubexp/ntheory.hpp"

namespace cubexp::weyl {

struct WeylParams {
  double P = 0.0;
  double H = 0.0;  // sqrt(P)
  nt::SquarefreeModulus w;

  static WeylParams make(double P, nt::SquarefreeModulus w);
};

SumValue quad_f(double a1, double a2, double X);
SumValue quad_g(double a1, double a2, double X);

// hypothesis_ok, when given, reports whether 1 <= Y <= X (the range in
// which the Weyl-differencing envelope applies); evaluation proceeds
// regardless.
SumValue cubic_G(double alpha, double X, double Y, int threads = 1,
                 bool* hypothesis_ok = nullptr);

SumValue f_w_direct(double alpha, const WeylParams& params);
SumValue f_w_mobius(double alpha, const WeylParams& params, int threads = 1);

}  // namespace cubexp::weyl
