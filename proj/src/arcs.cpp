#include "cubexp/arcs.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "cubexp/base.hpp"
#include "cubexp/complete_sums.hpp"

namespace cubexp::arcs {

namespace {

void check_alpha_range(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("classify: alpha must lie in [0,1]");
  }
}

void check_p(double P) {
  if (!(P >= 2.0)) throw std::invalid_argument("classify: P must be >= 2");
}

// Continued-fraction convergents of alpha, ascending q.
struct Convergent {
  std::uint64_t p, q;
};

std::vector<Convergent> convergents(double alpha, std::uint64_t q_cap) {
  std::vector<Convergent> out;
  std::uint64_t p0 = 1, q0 = 0;  // p_{-1}/q_{-1}
  std::uint64_t p1 = 0, q1 = 1;  // p_0 seeded below with a0 = floor(alpha)
  double x = alpha;
  for (int it = 0; it < 64; ++it) {
    const double fl = std::floor(x);
    if (!(fl >= 0.0) || fl > 9.0e18) break;
    const auto a = static_cast<std::uint64_t>(fl);
    if (q0 != 0 && a > (q_cap - q1) / q0) break;  // next q would exceed cap
    const std::uint64_t p2 = a * p0 + p1;
    const std::uint64_t q2 = a * q0 + q1;
    p1 = p0;
    q1 = q0;
    p0 = p2;
    q0 = q2;
    out.push_back({p0, q0});
    const double frac = x - fl;
    if (frac < 1e-15) break;  // alpha is (numerically) rational
    x = 1.0 / frac;
  }
  return out;
}

// Nearest integer to x, half-ties toward the smaller value.
std::uint64_t nearest_low(double x) {
  const double fl = std::floor(x);
  const double err_lo = x - fl;
  const double err_hi = (fl + 1.0) - x;
  return static_cast<std::uint64_t>(err_lo <= err_hi ? fl : fl + 1.0);
}

}  // namespace

Rational Rational::make(std::int64_t num, std::uint64_t den) {
  if (den == 0) throw std::invalid_argument("Rational: zero denominator");
  const std::uint64_t un = num < 0 ? static_cast<std::uint64_t>(-num)
                                   : static_cast<std::uint64_t>(num);
  const std::uint64_t g = std::gcd(un == 0 ? den : un, den);
  Rational r;
  r.num = num / static_cast<std::int64_t>(g);
  r.den = den / g;
  return r;
}

RationalApproximant dirichlet_approx(double alpha, double Q) {
  if (!(Q >= 1.0)) throw std::invalid_argument("dirichlet_approx: Q must be >= 1");
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("dirichlet_approx: alpha must lie in [0,1]");
  }
  const auto q_cap = static_cast<std::uint64_t>(std::floor(Q));
  const double tol = 1.0 / static_cast<double>(q_cap);
  // The smallest q with ||q alpha|| <= tol is a best approximation of the
  // second kind, hence a convergent; scan convergents in order of q.
  RationalApproximant best;
  best.a = nearest_low(alpha);  // q = 1 candidate
  best.q = 1;
  best.beta = alpha - static_cast<double>(best.a);
  if (std::abs(best.beta) <= tol) return best;
  for (const Convergent& c : convergents(alpha, q_cap)) {
    if (c.q < 1 || c.q > q_cap) continue;
    const double err = static_cast<double>(c.q) * alpha - static_cast<double>(c.p);
    if (std::abs(err) <= tol) {
      RationalApproximant r;
      r.a = c.p;
      r.q = c.q;
      r.beta = err / static_cast<double>(c.q);
      return r;
    }
  }
  // Dirichlet guarantees a solution; reaching here means floating noise
  // near a tie. Fall back to the exhaustive minimum.
  RationalApproximant fallback;
  double best_err = std::numeric_limits<double>::infinity();
  for (std::uint64_t q = 1; q <= q_cap; ++q) {
    const double qa = static_cast<double>(q) * alpha;
    const std::uint64_t a = nearest_low(qa);
    if (std::gcd(a == 0 ? q : a, q) != 1) continue;
    const double err = std::abs(qa - static_cast<double>(a));
    if (err <= tol) {
      fallback.a = a;
      fallback.q = q;
      fallback.beta = (qa - static_cast<double>(a)) / static_cast<double>(q);
      return fallback;
    }
    if (err < best_err) {
      best_err = err;
      fallback.a = a;
      fallback.q = q;
      fallback.beta = (qa - static_cast<double>(a)) / static_cast<double>(q);
    }
  }
  return fallback;
}

namespace {

struct MajorTest {
  bool in_M = false;
  bool in_N = false;
  bool ambiguous = false;
  RationalApproximant approx;
};

// Decide membership for the unique candidate pair (q,a) on doubles with a
// 4-ulp relative guard band; the boundary counts as inside.
bool banded_le(double lhs, double rhs, double scale, bool* ambiguous) {
  const double band = 4.0 * kEps * scale;
  if (lhs <= rhs - band) return true;
  if (lhs >= rhs + band) return false;
  *ambiguous = true;
  return true;
}

MajorTest classify_double(double alpha, double P) {
  const double H = std::sqrt(P);
  const double m_radius = 1.0 / (6.0 * H * P);
  MajorTest t;
  // Dirichlet at Q = 6HP yields q <= 6HP with |q alpha - a| <= 1/floor(6HP);
  // the major pair, when it exists, is the minimal-q convergent.
  const RationalApproximant cand = dirichlet_approx(alpha, 6.0 * H * P);
  const double err = std::abs(static_cast<double>(cand.q) * alpha -
                              static_cast<double>(cand.a));
  if (cand.q <= static_cast<std::uint64_t>(std::floor(P)) &&
      banded_le(err, m_radius, std::max(std::abs(alpha) * cand.q, 1.0), &t.ambiguous)) {
    t.in_M = true;
    t.approx = cand;
    const double n_radius = std::pow(P, -1.75);
    const double q_cap_n = std::pow(P, 0.75);
    if (static_cast<double>(cand.q) <= q_cap_n &&
        banded_le(err, n_radius, std::max(std::abs(alpha) * cand.q, 1.0), &t.ambiguous)) {
      t.in_N = true;
    }
  }
  return t;
}

unsigned __int128 abs_i128(__int128 v) {
  return v < 0 ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
}

// Membership of one exact pair: 36 P^3 (qn - am)^2 <= m^2, overflow-safe
// through division.
bool exact_in_M(std::uint64_t q, std::uint64_t a, std::uint64_t n,
                std::uint64_t m, std::uint64_t Pi) {
  const __int128 diff =
      static_cast<__int128>(q) * n - static_cast<__int128>(a) * m;
  const unsigned __int128 ad = abs_i128(diff);
  if (ad > static_cast<unsigned __int128>(m)) return false;  // |q alpha - a| > 1
  const unsigned __int128 d2 = ad * ad;
  const unsigned __int128 m2 = static_cast<unsigned __int128>(m) * m;
  const unsigned __int128 p3 = static_cast<unsigned __int128>(Pi) * Pi * Pi * 36U;
  if (d2 != 0 && p3 > m2 / d2) return false;
  return true;
}

// Exact arc membership for rational alpha = n/m and integral P: the unique
// qualifying pair (if any) is found by an exact scan, so boundary cases
// are decided without floating noise.
MajorTest classify_rational(const Rational& alpha, double P) {
  const double rounded = std::floor(P);
  if (rounded != P || P > 2.0e6) {
    // fall back to the double path when P is not a small integer
    return classify_double(alpha.to_double(), P);
  }
  const auto Pi = static_cast<std::uint64_t>(rounded);
  const auto n = static_cast<std::uint64_t>(alpha.num);
  const std::uint64_t m = alpha.den;
  MajorTest t;
  std::uint64_t q_found = 0, a_found = 0;
  for (std::uint64_t q = 1; q <= Pi && q_found == 0; ++q) {
    const unsigned __int128 qn = static_cast<unsigned __int128>(q) * n;
    const auto a_lo = static_cast<std::uint64_t>(qn / m);
    for (std::uint64_t a : {a_lo, a_lo + 1}) {
      if (std::gcd(a == 0 ? q : a, q) != 1) continue;
      if (exact_in_M(q, a, n, m, Pi)) {
        q_found = q;
        a_found = a;
        break;
      }
    }
  }
  if (q_found == 0) return t;
  const std::uint64_t cq = q_found, ca = a_found;
  const unsigned __int128 ad = abs_i128(static_cast<__int128>(cq) * n -
                                        static_cast<__int128>(ca) * m);
  t.in_M = true;
  t.approx.a = ca;
  t.approx.q = cq;
  t.approx.beta = alpha.to_double() -
                  static_cast<double>(ca) / static_cast<double>(cq);
  // N(q,a): q <= P^{3/4}  <=>  q^4 <= P^3;  |q alpha - a| <= P^{-7/4}
  // <=>  P^7 (qn - am)^4 <= m^4.
  const unsigned __int128 q4 =
      static_cast<unsigned __int128>(cq) * cq * cq * cq;
  const unsigned __int128 p3n = static_cast<unsigned __int128>(Pi) * Pi * Pi;
  if (q4 > p3n) return t;
  // compare d^4 * P^7 <= m^4 via long double guard, exact path for the
  // common small cases
  const long double lhs = std::pow(static_cast<long double>(ad), 4.0L) *
                          std::pow(static_cast<long double>(Pi), 7.0L);
  const long double rhs = std::pow(static_cast<long double>(m), 4.0L);
  if (lhs <= rhs * (1.0L - 1e-15L)) {
    t.in_N = true;
  } else if (lhs <= rhs * (1.0L + 1e-15L)) {
    // boundary within long-double noise: decide exactly when it fits
    if (ad == 0) {
      t.in_N = true;
    } else {
      t.ambiguous = true;
      t.in_N = true;
    }
  }
  return t;
}

double upsilon_value(const RationalApproximant& r, double P,
                     const nt::SquarefreeModulus& w) {
  const double H = std::sqrt(P);
  const double k = sums::kappa(r.q, w);
  return k * k / (1.0 + H * P * P * std::abs(r.beta));
}

double xi_value(const RationalApproximant& r, double P) {
  const double H = std::sqrt(P);
  const double pw = std::pow(4.0, nt::omega(r.q));
  return pw / (static_cast<double>(r.q) +
               H * P * P * static_cast<double>(r.q) * std::abs(r.beta));
}

ArcLabel label_from(const MajorTest& t, double P, const nt::SquarefreeModulus& w) {
  ArcLabel label;
  label.boundary_ambiguous = t.ambiguous;
  if (!t.in_M) return label;
  label.kind = t.in_N ? ArcKind::MajorN : ArcKind::MajorM;
  label.approximant = t.approx;
  label.upsilon = upsilon_value(t.approx, P, w);
  if (t.in_N) label.xi = xi_value(t.approx, P);
  return label;
}

}  // namespace

ArcLabel classify(double alpha, double P, const nt::SquarefreeModulus& w) {
  check_alpha_range(alpha);
  check_p(P);
  return label_from(classify_double(alpha, P), P, w);
}

ArcLabel classify(const Rational& alpha, double P, const nt::SquarefreeModulus& w) {
  check_alpha_range(alpha.to_double());
  check_p(P);
  return label_from(classify_rational(alpha, P), P, w);
}

double upsilon(double alpha, double P, const nt::SquarefreeModulus& w) {
  return classify(alpha, P, w).upsilon;
}

double xi(double alpha, double P) {
  return classify(alpha, P, nt::SquarefreeModulus::one()).xi;
}

double major_arc_measure(double P) {
  check_p(P);
  const double H = std::sqrt(P);
  CompensatedSum sum;
  sum.add(1.0);  // q = 1: two clipped half arcs at 0 and 1
  for (std::uint64_t q = 2; q <= static_cast<std::uint64_t>(std::floor(P)); ++q) {
    sum.add(static_cast<double>(nt::totient(q)) / static_cast<double>(q));
  }
  return sum.value() * 2.0 / (6.0 * H * P);
}

}  // namespace cubexp::arcs
