#include "cubexp/oscillatory.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "cubexp/base.hpp"

namespace cubexp::osc {

namespace {

constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------
// 15-point Gauss-Legendre rule on [-1,1], nodes by Newton iteration.
// ---------------------------------------------------------------------
struct GaussRule {
  double node[15];
  double weight[15];
};

GaussRule make_gl15() {
  GaussRule r{};
  const int n = 15;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // Legendre recurrence for P_n(x) and P'_n(x).
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.node[i] = -x;
    r.weight[i] = w;
    r.node[n - 1 - i] = x;
    r.weight[n - 1 - i] = w;
  }
  return r;
}

const GaussRule& gl15() {
  static const GaussRule r = make_gl15();
  return r;
}

// ---------------------------------------------------------------------
// Double-double helpers for phase evaluation mod 1.
// ---------------------------------------------------------------------
TwoFloat dd_mul(TwoFloat a, double b) {
  TwoFloat p = two_prod(a.hi, b);
  p.lo = std::fma(a.lo, b, p.lo);
  return p;
}

TwoFloat dd_div(TwoFloat a, double b) {
  const double q1 = a.hi / b;
  const double r = std::fma(-q1, b, a.hi) + a.lo;
  return {q1, r / b};
}

// turns(u) = frac(b1 u + b2 u^2), accurate for phases up to ~1e15 turns.
double quad_phase_turns(double b1, double b2, double u) {
  const TwoFloat lin = two_prod(b1, u);
  const TwoFloat usq = two_prod(u, u);
  TwoFloat quad = dd_mul(usq, b2);
  // frac of each part, then of the total
  double t = frac_two(lin) + frac_two(quad);
  t -= std::floor(t);
  return t;
}

std::complex<double> quad_phase_point(double b1, double b2, double u) {
  return unit_phase(quad_phase_turns(b1, b2, u));
}

std::complex<double> gl_panel(double b1, double b2, double a, double b) {
  const GaussRule& r = gl15();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::complex<double> acc{0.0, 0.0};
  for (int i = 0; i < 15; ++i) {
    acc += r.weight[i] * quad_phase_point(b1, b2, mid + half * r.node[i]);
  }
  return acc * half;
}

struct PanelAccum {
  ComplexSum value;
  CompensatedSum err;
  std::uint64_t panels = 0;
};

void integrate_panel(double b1, double b2, double a, double b, PanelAccum& out) {
  const std::complex<double> full = gl_panel(b1, b2, a, b);
  const double m = 0.5 * (a + b);
  const std::complex<double> halves = gl_panel(b1, b2, a, m) + gl_panel(b1, b2, m, b);
  out.value.add(halves);
  out.err.add(std::abs(full - halves));
  ++out.panels;
}

// Monotone-phase piece: boundaries at equal phase increments.
void integrate_monotone(double b1, double b2, double a, double b,
                        double cycles_per_panel, PanelAccum& out) {
  if (!(b > a)) return;
  const auto phase = [&](double u) { return b1 * u + b2 * u * u; };
  const double pa = phase(a), pb = phase(b);
  const double total = std::abs(pb - pa);
  auto n = static_cast<std::uint64_t>(std::ceil(total / cycles_per_panel));
  if (n < 1) n = 1;
  if (n > 50'000'000) {
    throw std::invalid_argument(
        "quadratic_phase_integral: panel count over 5e7; use the closed form");
  }
  if (n == 1) {
    integrate_panel(b1, b2, a, b, out);
    return;
  }
  // invert phi(u) = s on the monotone piece
  const double c = (b2 != 0.0) ? b1 / (2.0 * b2) : 0.0;
  const double sgn = (a + c) + (b + c) >= 0.0 ? 1.0 : -1.0;
  double prev = a;
  for (std::uint64_t k = 1; k < n; ++k) {
    const double s = pa + (pb - pa) * (static_cast<double>(k) / static_cast<double>(n));
    double u;
    if (b2 == 0.0) {
      u = s / b1;
    } else {
      const double rad = (s + b2 * c * c) / b2;
      u = -c + sgn * std::sqrt(std::max(rad, 0.0));
    }
    if (!(u > prev && u < b)) u = a + (b - a) * (static_cast<double>(k) / static_cast<double>(n));
    integrate_panel(b1, b2, prev, u, out);
    prev = u;
  }
  integrate_panel(b1, b2, prev, b, out);
}

// ---------------------------------------------------------------------
// Fresnel integrals.
// ---------------------------------------------------------------------

// C(x) + i S(x) for 0 <= x <= 2 by Taylor series.
std::complex<double> fresnel_taylor(double x) {
  const double x4 = x * x * x * x;
  double c = 0.0, s = 0.0;
  // C: sum (-1)^k (pi/2)^{2k} x^{4k+1} / ((2k)! (4k+1))
  double term = x;  // k = 0 numerator piece x^{4k+1} (pi/2)^{2k} / (2k)!
  for (int k = 0; k < 40; ++k) {
    c += term / (4 * k + 1);
    term *= -(kPi / 2.0) * (kPi / 2.0) * x4 / ((2 * k + 1) * (2 * k + 2));
    if (std::abs(term) < 1e-18) break;
  }
  term = (kPi / 2.0) * x * x * x;  // k = 0 for S
  for (int k = 0; k < 40; ++k) {
    s += term / (4 * k + 3);
    term *= -(kPi / 2.0) * (kPi / 2.0) * x4 / ((2 * k + 2) * (2 * k + 3));
    if (std::abs(term) < 1e-18) break;
  }
  return {c, s};
}

// Auxiliary asymptotic series, x >= 4.5:
//   C = 1/2 + f sin(pi x^2/2) - g cos(pi x^2/2)
//   S = 1/2 - f cos(pi x^2/2) - g sin(pi x^2/2)
// with f ~ (pi x)^{-1} sum (-1)^m (4m-1)!! y^m, y = (pi^2 x^4)^{-1},
//      g ~ (pi^2 x^3)^{-1} sum (-1)^m (4m+1)!! y^m.
std::complex<double> fresnel_asymptotic(double x) {
  const double y = 1.0 / (kPi * kPi * x * x * x * x);
  double f = 0.0, g = 0.0;
  double tf = 1.0, tg = 1.0;
  double prev_f = 1e300;
  for (int m = 0; m < 40; ++m) {
    if (std::abs(tf) > prev_f) break;  // divergence onset
    f += tf;
    g += tg;
    prev_f = std::abs(tf);
    const double mf = -(4.0 * m + 1.0) * (4.0 * m + 3.0) * y;
    const double mg = -(4.0 * m + 3.0) * (4.0 * m + 5.0) * y;
    tf *= mf;
    tg *= mg;
    if (std::abs(tf) < 1e-18 && std::abs(tg) < 1e-18) {
      f += tf;
      g += tg;
      break;
    }
  }
  f /= kPi * x;
  g /= kPi * kPi * x * x * x;
  // pi x^2 / 2 mod 2 pi via exact two-float frac of x^2/4 turns
  TwoFloat xsq = two_prod(x, x);
  xsq.hi *= 0.25;
  xsq.lo *= 0.25;
  const double turns = frac_two(xsq);
  const double si = std::sin(kTwoPi * turns);
  const double co = std::cos(kTwoPi * turns);
  return {0.5 + f * si - g * co, 0.5 - f * co - g * si};
}

// Between the Taylor and asymptotic regimes, C + iS is read from a dense
// cumulative table on [2, 4.5] plus one Gauss panel for the remainder;
// each sub-step carries < 0.01 cycles of phase, so both the table and the
// correction are accurate at machine level.
constexpr double kGapLo = 2.0;
constexpr double kGapHi = 4.5;
constexpr int kGapSteps = 2500;

const std::vector<std::complex<double>>& fresnel_gap_table() {
  static const std::vector<std::complex<double>> table = [] {
    std::vector<std::complex<double>> t(kGapSteps + 1);
    ComplexSum acc;
    acc.add(fresnel_taylor(kGapLo));
    t[0] = acc.value();
    const double step = (kGapHi - kGapLo) / kGapSteps;
    for (int i = 0; i < kGapSteps; ++i) {
      acc.add(gl_panel(0.0, 0.25, kGapLo + i * step, kGapLo + (i + 1) * step));
      t[i + 1] = acc.value();
    }
    return t;
  }();
  return table;
}

std::complex<double> fresnel_cs(double x) {
  if (x < 0.0) return -fresnel_cs(-x);
  if (x <= kGapLo) return fresnel_taylor(x);
  if (x < kGapHi) {
    const double step = (kGapHi - kGapLo) / kGapSteps;
    const int idx = std::min(static_cast<int>((x - kGapLo) / step), kGapSteps - 1);
    const double base_x = kGapLo + idx * step;
    return fresnel_gap_table()[idx] + gl_panel(0.0, 0.25, base_x, x);
  }
  return fresnel_asymptotic(x);
}

// E(y) = int_0^y e(b2 t^2) dt via Fresnel, b2 != 0.
std::complex<double> fresnel_E(double b2, double y) {
  const double root = 2.0 * std::sqrt(std::abs(b2));
  const std::complex<double> cs = fresnel_cs(root * y);  // odd in y
  const std::complex<double> v{cs.real(), (b2 > 0 ? 1.0 : -1.0) * cs.imag()};
  return v / root;
}

// e(-b2 c^2) with c = b1/(2 b2): the phase can be enormous, reduce in dd.
std::complex<double> completion_phase(double b1, double b2) {
  TwoFloat t = two_prod(b1, b1);
  t = dd_div(t, -4.0 * b2);
  return unit_phase(frac_two(t));
}

QuadratureResult closed_form_linear(double b1, double A, double B) {
  // int e(b1 u) du = (e(b1 B) - e(b1 A)) / (2 pi i b1)
  QuadratureResult r;
  if (b1 == 0.0) {
    r.value = {B - A, 0.0};
    r.abs_error_estimate = kEps * std::abs(B - A);
    return r;
  }
  const std::complex<double> num =
      quad_phase_point(b1, 0.0, B) - quad_phase_point(b1, 0.0, A);
  r.value = num / (std::complex<double>{0.0, kTwoPi * b1});
  r.abs_error_estimate = 4.0 * kEps * (std::abs(r.value) + std::abs(B - A));
  return r;
}

QuadratureResult fresnel_integral(double b1, double b2, double A, double B) {
  const double c = b1 / (2.0 * b2);
  const std::complex<double> rot = completion_phase(b1, b2);
  const std::complex<double> val = rot * (fresnel_E(b2, B + c) - fresnel_E(b2, A + c));
  QuadratureResult r;
  r.value = val;
  r.panels = 1;
  r.abs_error_estimate =
      2e-13 / std::sqrt(std::abs(b2)) + 16.0 * kEps * std::abs(B - A);
  return r;
}

double quad_cycles(double b1, double b2, double A, double B) {
  // Total phase variation over [A,B] in turns, stationary point included.
  const auto phase = [&](double u) { return b1 * u + b2 * u * u; };
  if (b2 == 0.0) return std::abs(phase(B) - phase(A));
  const double star = -b1 / (2.0 * b2);
  if (star > A && star < B) {
    return std::abs(phase(star) - phase(A)) + std::abs(phase(B) - phase(star));
  }
  return std::abs(phase(B) - phase(A));
}

}  // namespace

QuadratureResult quadratic_phase_integral(double b1, double b2, double A,
                                          double B, const QuadratureOptions& opt) {
  if (!(B >= A)) throw std::invalid_argument("quadratic_phase_integral: B < A");
  if (A == B) return {};
  const double cycles = quad_cycles(b1, b2, A, B);
  if (!opt.force_quadrature && cycles > opt.closed_form_threshold) {
    if (b2 == 0.0) return closed_form_linear(b1, A, B);
    return fresnel_integral(b1, b2, A, B);
  }
  PanelAccum acc;
  if (b2 != 0.0) {
    const double star = -b1 / (2.0 * b2);
    if (star > A && star < B) {
      integrate_monotone(b1, b2, A, star, opt.cycles_per_panel, acc);
      integrate_monotone(b1, b2, star, B, opt.cycles_per_panel, acc);
    } else {
      integrate_monotone(b1, b2, A, B, opt.cycles_per_panel, acc);
    }
  } else {
    integrate_monotone(b1, b2, A, B, opt.cycles_per_panel, acc);
  }
  QuadratureResult r;
  r.value = acc.value.value();
  r.abs_error_estimate = acc.err.value();
  r.panels = std::max<std::uint64_t>(acc.panels, 1);
  return r;
}

QuadratureResult integral_I(double b1, double b2, double X,
                            const QuadratureOptions& opt) {
  if (!(X > 0.0)) throw std::invalid_argument("integral_I: X must be positive");
  return quadratic_phase_integral(b1, b2, 0.0, X, opt);
}

QuadratureResult integral_J(double b1, double b2, double X,
                            const QuadratureOptions& opt) {
  if (!(X > 0.0)) throw std::invalid_argument("integral_J: X must be positive");
  return quadratic_phase_integral(b1, b2, X, 2.0 * X, opt);
}

double fresnel_C(double x) { return fresnel_cs(x).real(); }
double fresnel_S(double x) { return fresnel_cs(x).imag(); }

QuadratureResult integral_K(double beta, double H, double P,
                            const QuadratureOptions& opt) {
  if (!(H > 0.0) || !(P > 0.0)) {
    throw std::invalid_argument("integral_K: H, P must be positive");
  }
  QuadratureResult out;
  if (beta == 0.0) {
    out.value = {H * P, 0.0};
    out.abs_error_estimate = 4.0 * kEps * H * P;
    return out;
  }

  // Inner factor, cached on the exact outer nodes.
  std::unordered_map<std::uint64_t, std::complex<double>> cache;
  CompensatedSum inner_err;
  std::uint64_t inner_evals = 0;
  const auto inner = [&](double v) -> std::complex<double> {
    std::uint64_t key;
    static_assert(sizeof(key) == sizeof(v));
    std::memcpy(&key, &v, sizeof(key));
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    const QuadratureResult j = integral_J(3.0 * beta * v * v, 3.0 * beta * v, P, opt);
    // e(beta v^3): v^3 can be large; reduce with two-float products
    TwoFloat vsq = two_prod(v, v);
    TwoFloat v3b = dd_mul(vsq, v);
    v3b = dd_mul(v3b, beta);
    const std::complex<double> val = unit_phase(frac_two(v3b)) * j.value;
    inner_err.add(j.abs_error_estimate);
    ++inner_evals;
    cache.emplace(key, val);
    return val;
  };

  // Outer panels: |d/dv phase| <= 3|beta|(v+2P)^2, split at equal
  // increments of the cumulative majorant M(v) = |beta|((v+2P)^3-(2P)^3).
  const double ab = std::abs(beta);
  const double base = 2.0 * P;
  const double m_total = ab * ((H + base) * (H + base) * (H + base) - base * base * base);
  auto n = static_cast<std::uint64_t>(std::ceil(m_total / opt.cycles_per_panel));
  n = std::max<std::uint64_t>(n, 1);
  if (n > 20'000'000) {
    throw std::invalid_argument("integral_K: beta too large for panel budget");
  }

  const GaussRule& r = gl15();
  ComplexSum total;
  CompensatedSum err;
  double prev = 0.0;
  for (std::uint64_t k = 1; k <= n; ++k) {
    double v_hi;
    if (k == n) {
      v_hi = H;
    } else {
      const double m_k = m_total * (static_cast<double>(k) / static_cast<double>(n));
      v_hi = std::cbrt(base * base * base + m_k / ab) - base;
      v_hi = std::clamp(v_hi, prev, H);
    }
    const auto panel = [&](double a, double b) {
      const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
      std::complex<double> acc{0.0, 0.0};
      for (int i = 0; i < 15; ++i) acc += r.weight[i] * inner(mid + half * r.node[i]);
      return acc * half;
    };
    const std::complex<double> full = panel(prev, v_hi);
    const double mid = 0.5 * (prev + v_hi);
    const std::complex<double> halves = panel(prev, mid) + panel(mid, v_hi);
    total.add(halves);
    err.add(std::abs(full - halves));
    prev = v_hi;
  }
  out.value = total.value();
  out.panels = n;
  // add the propagated inner-quadrature error as an average over [0,H]
  const double inner_avg =
      inner_evals ? inner_err.value() / static_cast<double>(inner_evals) : 0.0;
  out.abs_error_estimate = err.value() + inner_avg * H;
  return out;
}

}  // namespace cubexp::osc
