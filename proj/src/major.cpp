#include "cubexp/major.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "cubexp/base.hpp"
#include "cubexp/complete_sums.hpp"
#include "cubexp/oscillatory.hpp"
#include "cubexp/parallel.hpp"
#include "cubexp/weyl.hpp"

namespace cubexp::major {

namespace {

arcs::RationalApproximant require_major(double alpha, double P,
                                        const nt::SquarefreeModulus& w) {
  const arcs::ArcLabel label = arcs::classify(alpha, P, w);
  if (label.kind == arcs::ArcKind::Minor || !label.approximant) {
    throw std::invalid_argument("major-arc operation given a minor-arc alpha");
  }
  return *label.approximant;
}

std::vector<std::uint64_t> build_d_set(double beta, double P,
                                       const nt::SquarefreeModulus& w) {
  const double H = std::sqrt(P);
  double dmax = H;
  if (beta != 0.0) dmax = std::min(dmax, 1.0 / (48.0 * P * P * std::abs(beta)));
  std::vector<std::uint64_t> ds;
  if (dmax < 1.0) return ds;
  w.for_each_divisor_up_to(static_cast<std::uint64_t>(std::floor(dmax)),
                           [&](std::uint64_t d, int) { ds.push_back(d); });
  return ds;
}

}  // namespace

std::complex<double> f_star(double alpha, double P, const nt::SquarefreeModulus& w) {
  const arcs::RationalApproximant r = require_major(alpha, P, w);
  const double beta = r.beta;
  const double H = std::sqrt(P);
  const auto q = r.q;
  const auto a = static_cast<std::int64_t>(r.a);

  ComplexSum total;
  for (std::uint64_t d : build_d_set(beta, P, w)) {
    const int mu = nt::mobius(d);
    const double dd = static_cast<double>(d);
    const auto h_max = static_cast<std::uint64_t>(std::floor(H / dd));
    const std::uint64_t ad3 = sums::cube_twist_mod(a, d, q);
    ComplexSum inner;
    for (std::uint64_t h = 1; h <= h_max; ++h) {
      const double hd = static_cast<double>(h);
      // S(q, 3 a d^3 h^2, 3 a d^3 h): arguments reduced mod q exactly
      const std::uint64_t hm = h % q;
      const std::uint64_t h2m = nt::mulmod(hm, hm, q);
      const std::uint64_t s1 = nt::mulmod(3 * ad3 % q, h2m, q);
      const std::uint64_t s2 = nt::mulmod(3 * ad3 % q, hm, q);
      const SumValue s = sums::gauss_quad(q, static_cast<std::int64_t>(s1),
                                          static_cast<std::int64_t>(s2));
      const osc::QuadratureResult j =
          osc::integral_J(3.0 * hd * hd * dd * dd * beta, 3.0 * hd * dd * beta, P);
      // e(alpha d^3 h^3); d^3 h^3 <= H^3 is an exact integer
      const auto d3h3 = static_cast<std::int64_t>(dd * dd * dd * hd * hd * hd);
      const std::complex<double> rot = unit_phase(frac_mul_int(alpha, d3h3));
      inner.add(rot * s.value * j.value);
    }
    total.add(static_cast<double>(mu) / (static_cast<double>(q) * dd) *
              inner.value());
  }
  return total.value();
}

std::complex<double> main_term(double alpha, double P,
                               const nt::SquarefreeModulus& w) {
  const arcs::RationalApproximant r = require_major(alpha, P, w);
  const double s0 = sums::local_series_D(static_cast<std::int64_t>(r.a), r.q,
                                         r.beta, P, w);
  const osc::QuadratureResult k = osc::integral_K(r.beta, std::sqrt(P), P);
  return s0 * k.value;
}

MajorDecomposition decompose(double alpha, double P,
                             const nt::SquarefreeModulus& w, int threads) {
  MajorDecomposition out;
  out.approximant = require_major(alpha, P, w);
  out.d_set = build_d_set(out.approximant.beta, P, w);
  out.f_star = f_star(alpha, P, w);
  out.main_term = main_term(alpha, P, w);
  out.f_true = weyl::f_w_mobius(alpha, weyl::WeylParams::make(P, w), threads).value;
  out.residual = out.f_true - out.main_term;
  return out;
}

Theorem12Report theorem12_report(double P, const nt::SquarefreeModulus& w,
                                 const SampleSpec& spec, int threads) {
  const double H = std::sqrt(P);
  const weyl::WeylParams params = weyl::WeylParams::make(P, w);
  const double floor_term = std::pow(P, 1.0 + spec.epsilon);
  const double logp = std::max(std::log(P), 1.0);

  // Sample points: uniform minor-arc candidates plus geometric beta
  // ladders around each fraction a/q.
  std::vector<double> alphas;
  std::mt19937_64 gen(spec.seed);
  for (int i = 0; i < spec.minor_samples; ++i) alphas.push_back(uniform01(gen));
  const std::uint64_t q_limit =
      spec.q_limit ? spec.q_limit
                   : std::max<std::uint64_t>(
                         1, static_cast<std::uint64_t>(std::floor(std::pow(P, 0.25))));
  for (std::uint64_t q = 1; q <= q_limit; ++q) {
    for (std::uint64_t a = (q == 1 ? 0 : 1); a <= (q == 1 ? 1 : q - 1); ++a) {
      if (std::gcd(a == 0 ? q : a, q) != 1) continue;
      const double base = static_cast<double>(a) / static_cast<double>(q);
      const double beta_lo = 1e-2 / (H * P * P);
      const double beta_hi = 1.0 / (6.0 * static_cast<double>(q) * H * P);
      for (int j = 0; j < spec.points_per_fraction; ++j) {
        const double t = spec.points_per_fraction == 1
                             ? 0.0
                             : static_cast<double>(j) /
                                   static_cast<double>(spec.points_per_fraction - 1);
        const double beta = beta_lo * std::pow(beta_hi / beta_lo, t);
        const double up = base + beta;
        const double dn = base - beta;
        if (up <= 1.0) alphas.push_back(up);
        if (dn >= 0.0) alphas.push_back(dn);
      }
    }
  }

  Theorem12Report report;
  report.rows.resize(alphas.size());
  parallel_for_index(
      alphas.size(),
      [&](std::size_t i) {
        const double alpha = alphas[i];
        Theorem12Row row;
        row.alpha = alpha;
        const arcs::ArcLabel label = arcs::classify(alpha, P, w);
        if (label.approximant) {
          row.q = label.approximant->q;
          row.a = label.approximant->a;
        }
        const SumValue f = weyl::f_w_mobius(alpha, params, 1);
        row.abs_f = std::abs(f.value);
        row.envelope = H * P * logp * label.upsilon + floor_term;
        row.ratio = row.abs_f / row.envelope;
        report.rows[i] = row;
      },
      threads);
  for (const auto& row : report.rows) {
    report.max_ratio = std::max(report.max_ratio, row.ratio);
  }
  return report;
}

QuadWeylCheck quadweyl_check(std::uint64_t q, std::int64_t a1, std::int64_t a2,
                             double b1, double b2, double X) {
  if (q == 0) throw std::invalid_argument("quadweyl_check: q must be positive");
  if (!(std::abs(b1) <= 1.0 / (2.0 * static_cast<double>(q)))) {
    throw std::invalid_argument("quadweyl_check: requires |b1| <= 1/(2q)");
  }
  const double qd = static_cast<double>(q);
  const double alpha1 = static_cast<double>(a1) / qd + b1;
  const double alpha2 = static_cast<double>(a2) / qd + b2;
  const SumValue f = weyl::quad_f(alpha1, alpha2, X);
  const SumValue s = sums::gauss_quad(q, a1, a2);
  const osc::QuadratureResult i = osc::integral_I(b1, b2, X);
  QuadWeylCheck out;
  out.lhs = std::abs(f.value - s.value * i.value / qd);
  const auto g2 = static_cast<double>(
      std::gcd(sums::reduce_mod(a2, q) == 0 ? q : sums::reduce_mod(a2, q), q));
  out.rhs = std::sqrt(g2) * std::sqrt(qd + qd * X * X * std::abs(b2)) *
            std::max(std::log(qd), 1.0);
  return out;
}

double gcd_weighted_sum(std::uint64_t r, double K, std::uint64_t H) {
  if (r == 0) throw std::invalid_argument("gcd_weighted_sum: r must be positive");
  CompensatedSum sum;
  for (std::uint64_t h = 1; h <= H; ++h) {
    const auto g = static_cast<double>(std::gcd(r, h));
    sum.add(g / (1.0 + K * static_cast<double>(h)));
  }
  return sum.value();
}

double log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("log_slope: need matching inputs, length >= 2");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(std::max(y[i], 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace cubexp::major
