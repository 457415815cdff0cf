#include "cubexp/complete_sums.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace cubexp::sums {

namespace {

// e(k/q) for k = 0..q-1. Worth building for repeated indexed access.
std::vector<std::complex<double>> phase_table(std::uint64_t q) {
  std::vector<std::complex<double>> t(q);
  for (std::uint64_t k = 0; k < q; ++k) {
    t[k] = unit_phase(static_cast<double>(k) / static_cast<double>(q));
  }
  return t;
}

constexpr std::uint64_t kTableLimit = 1'000'000;

void require_positive(std::uint64_t q, const char* who) {
  if (q == 0) throw std::invalid_argument(std::string(who) + ": modulus must be positive");
}

// Split q into pairwise coprime prime-power moduli.
std::vector<std::uint64_t> prime_power_split(std::uint64_t q) {
  std::vector<std::uint64_t> parts;
  const nt::Factorization fact = nt::factorize(q);
  for (const auto& pf : fact.factors()) {
    std::uint64_t pe = 1;
    for (int i = 0; i < pf.exponent; ++i) pe *= pf.prime;
    parts.push_back(pe);
  }
  return parts;
}

SumValue combine_product(const std::vector<SumValue>& factors, std::uint64_t q) {
  SumValue out;
  out.terms = q;
  std::complex<double> v{1.0, 0.0};
  for (const auto& f : factors) v *= f.value;
  out.value = v;
  double err = 0.0;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    double rest = 1.0;
    for (std::size_t j = 0; j < factors.size(); ++j) {
      if (j != i) rest *= std::abs(factors[j].value);
    }
    err += factors[i].err_budget * rest;
  }
  out.err_budget = err + 8.0 * kEps * std::abs(v) * static_cast<double>(factors.size() + 1);
  return out;
}

}  // namespace

std::uint64_t reduce_mod(std::int64_t a, std::uint64_t q) {
  require_positive(q, "reduce_mod");
  const auto qi = static_cast<std::int64_t>(q);
  std::int64_t r = a % qi;
  if (r < 0) r += qi;
  return static_cast<std::uint64_t>(r);
}

std::uint64_t cube_twist_mod(std::int64_t a, std::uint64_t d, std::uint64_t q) {
  const std::uint64_t am = reduce_mod(a, q);
  const std::uint64_t dm = d % q;
  std::uint64_t t = nt::mulmod(dm, dm, q);
  t = nt::mulmod(t, dm, q);
  return nt::mulmod(am, t, q);
}

SumValue gauss_quad_direct(std::uint64_t q, std::int64_t a1, std::int64_t a2) {
  require_positive(q, "gauss_quad");
  const std::uint64_t b1 = reduce_mod(a1, q);
  const std::uint64_t b2 = reduce_mod(a2, q);
  SumAccumulator acc(4.0 * kEps);
  // Index recurrence: idx(x) = (b1 x + b2 x^2) mod q advances by
  // d1 = b1 + b2(2x+1), and d1 advances by 2 b2.
  std::uint64_t idx = (b1 + b2) % q;         // x = 1
  std::uint64_t d1 = (b1 + 3 * b2 % q) % q;  // idx(2) - idx(1)
  const std::uint64_t d2 = (2 * b2) % q;
  if (q <= kTableLimit) {
    const auto table = phase_table(q);
    for (std::uint64_t x = 1; x <= q; ++x) {
      acc.add(table[idx]);
      idx += d1;
      if (idx >= q) idx -= q;
      d1 += d2;
      if (d1 >= q) d1 -= q;
    }
  } else {
    const double inv_q = 1.0 / static_cast<double>(q);
    for (std::uint64_t x = 1; x <= q; ++x) {
      acc.add(unit_phase(static_cast<double>(idx) * inv_q));
      idx += d1;
      if (idx >= q) idx -= q;
      d1 += d2;
      if (d1 >= q) d1 -= q;
    }
  }
  return acc.finish();
}

SumValue gauss_quad(std::uint64_t q, std::int64_t a1, std::int64_t a2) {
  require_positive(q, "gauss_quad");
  if (q <= kDirectThreshold) return gauss_quad_direct(q, a1, a2);
  const auto parts = prime_power_split(q);
  if (parts.size() == 1) return gauss_quad_direct(q, a1, a2);
  std::vector<SumValue> factors;
  factors.reserve(parts.size());
  const std::uint64_t b2 = reduce_mod(a2, q);
  for (std::uint64_t m : parts) {
    const std::uint64_t rest = q / m;  // coprime to m
    const std::uint64_t a2m = nt::mulmod(b2 % m, rest % m, m);
    factors.push_back(gauss_quad_direct(m, a1, static_cast<std::int64_t>(a2m)));
  }
  return combine_product(factors, q);
}

SumValue hua_sum_direct(std::uint64_t q, std::int64_t a, std::int64_t b) {
  require_positive(q, "hua_sum");
  const std::uint64_t am = reduce_mod(a, q);
  const std::uint64_t bm = reduce_mod(b, q);
  SumAccumulator acc(4.0 * kEps);
  // idx(z) = (a z^3 + b z) mod q; third difference of z^3 is constant 6.
  std::uint64_t idx = (am + bm) % q;                    // z = 1
  std::uint64_t d1 = (7 * (am % q) % q + bm) % q;       // idx(2) - idx(1)
  std::uint64_t d2 = (12 * (am % q)) % q;               // second difference at z=1
  const std::uint64_t d3 = (6 * (am % q)) % q;
  if (q <= kTableLimit) {
    const auto table = phase_table(q);
    for (std::uint64_t z = 1; z <= q; ++z) {
      acc.add(table[idx]);
      idx += d1;
      if (idx >= q) idx -= q;
      d1 += d2;
      if (d1 >= q) d1 -= q;
      d2 += d3;
      if (d2 >= q) d2 -= q;
    }
  } else {
    const double inv_q = 1.0 / static_cast<double>(q);
    for (std::uint64_t z = 1; z <= q; ++z) {
      acc.add(unit_phase(static_cast<double>(idx) * inv_q));
      idx += d1;
      if (idx >= q) idx -= q;
      d1 += d2;
      if (d1 >= q) d1 -= q;
      d2 += d3;
      if (d2 >= q) d2 -= q;
    }
  }
  return acc.finish();
}

SumValue hua_sum(std::uint64_t q, std::int64_t a, std::int64_t b) {
  require_positive(q, "hua_sum");
  if (q <= kDirectThreshold) return hua_sum_direct(q, a, b);
  const auto parts = prime_power_split(q);
  if (parts.size() == 1) return hua_sum_direct(q, a, b);
  std::vector<SumValue> factors;
  factors.reserve(parts.size());
  const std::uint64_t am = reduce_mod(a, q);
  for (std::uint64_t m : parts) {
    const std::uint64_t rest = (q / m) % m;
    const std::uint64_t cm = nt::mulmod(am % m, nt::mulmod(rest, rest, m), m);
    factors.push_back(hua_sum_direct(m, static_cast<std::int64_t>(cm), b));
  }
  return combine_product(factors, q);
}

SumValue restricted_cubic_sum(std::uint64_t r, std::int64_t b) {
  require_positive(r, "restricted_cubic_sum");
  const std::uint64_t bm = reduce_mod(b, r);
  SumAccumulator acc(4.0 * kEps);
  std::uint64_t idx = bm % r;
  std::uint64_t d1 = (7 * bm) % r;
  std::uint64_t d2 = (12 * bm) % r;
  const std::uint64_t d3 = (6 * bm) % r;
  const bool use_table = r <= kTableLimit;
  const auto table = use_table ? phase_table(r) : std::vector<std::complex<double>>{};
  const double inv_r = 1.0 / static_cast<double>(r);
  for (std::uint64_t x = 1; x <= r; ++x) {
    if (std::gcd(x, r) == 1) {
      acc.add(use_table ? table[idx]
                        : unit_phase(static_cast<double>(idx) * inv_r));
    }
    idx += d1;
    if (idx >= r) idx -= r;
    d1 += d2;
    if (d1 >= r) d1 -= r;
    d2 += d3;
    if (d2 >= r) d2 -= r;
  }
  return acc.finish();
}

SumValue paired_sum_W(std::uint64_t r, std::int64_t b) {
  require_positive(r, "paired_sum_W");
  // W(r,b) = sum_{d|r} mu(d)/d^2 |U(r, b d^3)|^2.
  CompensatedSum total;
  double err = 0.0;
  for (std::uint64_t d : nt::divisors(r)) {
    const int mu = nt::mobius(d);
    if (mu == 0) continue;
    const std::uint64_t twisted = cube_twist_mod(b, d, r);
    const SumValue u = hua_sum(r, static_cast<std::int64_t>(twisted), 0);
    const double mag = std::abs(u.value);
    const double dd = static_cast<double>(d) * static_cast<double>(d);
    total.add(mu * mag * mag / dd);
    err += 2.0 * mag * u.err_budget / dd;
  }
  SumValue out;
  out.value = {total.value(), 0.0};
  out.terms = r * r;
  out.err_budget = err + 8.0 * kEps * std::abs(total.value());
  return out;
}

SumValue paired_sum_W_direct(std::uint64_t r, std::int64_t b) {
  require_positive(r, "paired_sum_W");
  const std::uint64_t bm = reduce_mod(b, r);
  std::vector<std::uint64_t> cube(r + 1);
  std::vector<std::uint64_t> grc(r + 1);
  for (std::uint64_t x = 1; x <= r; ++x) {
    std::uint64_t x3 = nt::mulmod(nt::mulmod(x, x, r), x, r);
    cube[x] = nt::mulmod(bm, x3, r);
    grc[x] = std::gcd(x, r);
  }
  const auto table = phase_table(r);
  SumAccumulator acc(4.0 * kEps);
  for (std::uint64_t x = 1; x <= r; ++x) {
    for (std::uint64_t y = 1; y <= r; ++y) {
      if (std::gcd(grc[x], grc[y]) != 1) continue;
      const std::uint64_t idx = (cube[x] + r - cube[y]) % r;
      acc.add(table[idx]);
    }
  }
  return acc.finish();
}

SumValue hua_T(std::uint64_t q, std::int64_t a, std::int64_t b) {
  require_positive(q, "hua_T");
  const SumValue u = hua_sum(q, a, b);
  const double mag = std::abs(u.value);
  SumValue out;
  out.value = {mag * mag, 0.0};
  out.terms = q * q;
  out.err_budget = 2.0 * mag * u.err_budget + 8.0 * kEps * mag * mag;
  return out;
}

SumValue hua_T_direct(std::uint64_t q, std::int64_t a, std::int64_t b) {
  require_positive(q, "hua_T");
  const std::uint64_t am = reduce_mod(a, q);
  const std::uint64_t bm = reduce_mod(b, q);
  const auto table = phase_table(q);
  SumAccumulator acc(4.0 * kEps);
  for (std::uint64_t k = 1; k <= q; ++k) {
    // For fixed k the z-sum has phase (3ak) z^2 + (3ak^2) z + (ak^3 + bk).
    const std::uint64_t k2 = nt::mulmod(k, k, q);
    const std::uint64_t k3 = nt::mulmod(k2, k, q);
    const std::uint64_t c2 = nt::mulmod(3 * (am % q) % q, k, q);
    const std::uint64_t c1 = nt::mulmod(3 * (am % q) % q, k2, q);
    const std::uint64_t c0 = (nt::mulmod(am, k3, q) + nt::mulmod(bm, k, q)) % q;
    std::uint64_t idx = (c0 + c1 + c2) % q;       // z = 1
    std::uint64_t d1 = (c1 + 3 * c2 % q) % q;
    const std::uint64_t d2 = (2 * c2) % q;
    for (std::uint64_t z = 1; z <= q; ++z) {
      acc.add(table[idx]);
      idx += d1;
      if (idx >= q) idx -= q;
      d1 += d2;
      if (d1 >= q) d1 -= q;
    }
  }
  return acc.finish();
}

double kappa(std::uint64_t q, const SquarefreeModulus& w) {
  if (q == 0) throw std::invalid_argument("kappa: q must be positive");
  double result = 1.0;
  const nt::Factorization fact = nt::factorize(q);
  for (const auto& pf : fact.factors()) {
    const double p = static_cast<double>(pf.prime);
    const int l = pf.exponent;
    if (w.has_prime(pf.prime)) {
      if (pf.prime == 3) {
        if (l == 1) {
          result *= 2.0;
        } else if (l == 2) {
          result *= 1.0;
        } else {
          return 0.0;
        }
      } else {
        if (l == 1) {
          result *= 2.0 / std::sqrt(p);
        } else {
          return 0.0;
        }
      }
    } else {
      const int drops = l / 3;  // kappa(p^{l+3}) = kappa(p^l)/p
      const int rem = l % 3;
      double v = std::pow(p, -static_cast<double>(drops));
      if (rem == 1) v *= 2.0 / std::sqrt(p);
      if (rem == 2) v /= p;
      result *= v;
    }
  }
  return result;
}

KappaSquared kappa_sq_exact(std::uint64_t q, const SquarefreeModulus& w) {
  return kappa_sq_exact_from(nt::factorize(q), w);
}

KappaSquared kappa_sq_exact_from(const nt::Factorization& fact,
                                 const SquarefreeModulus& w) {
  KappaSquared out;
  for (const auto& pf : fact.factors()) {
    const std::uint64_t p = pf.prime;
    const int l = pf.exponent;
    int pow4 = 0;    // factors of 4 in kappa^2
    int pexp = 0;    // exponent of p in the denominator of kappa^2
    if (w.has_prime(p)) {
      if (p == 3) {
        if (l == 1) {
          pow4 = 1;
        } else if (l == 2) {
          // kappa = 1
        } else {
          out.zero = true;
          return out;
        }
      } else {
        if (l == 1) {
          pow4 = 1;
          pexp = 1;
        } else {
          out.zero = true;
          return out;
        }
      }
    } else {
      const int drops = l / 3;
      const int rem = l % 3;
      pexp = 2 * drops + (rem == 1 ? 1 : rem == 2 ? 2 : 0);
      pow4 = (rem == 1) ? 1 : 0;
    }
    for (int i = 0; i < pow4; ++i) out.num *= 4;
    for (int i = 0; i < pexp; ++i) out.den *= p;
  }
  return out;
}

namespace {

double u_mag_sq(std::uint64_t q, std::uint64_t c) {
  const SumValue u = hua_sum(q, static_cast<std::int64_t>(c), 0);
  const double m = std::abs(u.value);
  return m * m;
}

void require_reduced(std::int64_t a, std::uint64_t q) {
  const std::uint64_t am = reduce_mod(a, q);
  if (std::gcd(am == 0 ? q : am, q) != 1) {
    throw std::invalid_argument("local_series: (a, q) must be 1");
  }
}

}  // namespace

double local_series(std::int64_t a, std::uint64_t q, const SquarefreeModulus& w) {
  require_positive(q, "local_series");
  require_reduced(a, q);
  // q0: part of q built from primes of w; q1 = q / q0 coprime to w.
  std::uint64_t q0 = 1;
  std::uint64_t q1 = q;
  for (std::uint64_t p : w.shared_primes(q)) {
    while (q1 % p == 0) {
      q1 /= p;
      q0 *= p;
    }
  }
  const std::uint64_t am = reduce_mod(a, q);
  // W(q0, a q1^2) / q0^2
  const std::uint64_t c0 = nt::mulmod(am % q0, nt::mulmod(q1 % q0, q1 % q0, q0), q0);
  const SumValue wv = paired_sum_W(q0, static_cast<std::int64_t>(c0));
  const double w_part = wv.value.real() /
                        (static_cast<double>(q0) * static_cast<double>(q0));
  // |U(q1, a q0^2)|^2 / q1^2
  const std::uint64_t c1 = nt::mulmod(am % q1, nt::mulmod(q0 % q1, q0 % q1, q1), q1);
  const double u_part = u_mag_sq(q1, c1) /
                        (static_cast<double>(q1) * static_cast<double>(q1));
  // primes of w coprime to q contribute prod (1 - p^-2)
  double tail = 1.0;
  for (std::uint64_t p : w.primes()) {
    if (q % p != 0) {
      const double pd = static_cast<double>(p);
      tail *= 1.0 - 1.0 / (pd * pd);
    }
  }
  return w_part * u_part * tail;
}

double local_series_literal(std::int64_t a, std::uint64_t q,
                            const SquarefreeModulus& w) {
  require_positive(q, "local_series");
  require_reduced(a, q);
  if (w.primes().size() > 24) {
    throw std::invalid_argument("local_series_literal: w has too many primes");
  }
  CompensatedSum total;
  const double q2 = static_cast<double>(q) * static_cast<double>(q);
  w.for_each_divisor_up_to(UINT64_MAX, [&](std::uint64_t d, int mu) {
    const std::uint64_t c = cube_twist_mod(a, d, q);
    const double dd = static_cast<double>(d) * static_cast<double>(d);
    total.add(mu * u_mag_sq(q, c) / (q2 * dd));
  });
  return total.value();
}

double local_series_D(std::int64_t a, std::uint64_t q, double beta, double P,
                      const SquarefreeModulus& w) {
  require_positive(q, "local_series_D");
  require_reduced(a, q);
  const double H = std::sqrt(P);
  double dmax_real = H;
  if (beta != 0.0) {
    dmax_real = std::min(dmax_real, 1.0 / (48.0 * P * P * std::abs(beta)));
  }
  if (dmax_real < 1.0) return 0.0;
  const auto dmax = static_cast<std::uint64_t>(std::floor(dmax_real));

  // Split each divisor as d0 d1 with d0 from primes shared with q; the
  // |U| value depends only on d0.
  const auto shared = w.shared_primes(q);
  std::vector<std::uint64_t> w1_primes;
  for (std::uint64_t p : w.primes()) {
    if (q % p != 0) w1_primes.push_back(p);
  }
  const SquarefreeModulus w1 = SquarefreeModulus::from_primes(w1_primes);

  const double q2 = static_cast<double>(q) * static_cast<double>(q);
  CompensatedSum total;
  std::function<void(std::size_t, std::uint64_t, int)> rec =
      [&](std::size_t idx, std::uint64_t d0, int mu0) {
        const std::uint64_t c = cube_twist_mod(a, d0, q);
        const double head =
            mu0 * u_mag_sq(q, c) /
            (q2 * static_cast<double>(d0) * static_cast<double>(d0));
        CompensatedSum inner;
        w1.for_each_divisor_up_to(dmax / d0, [&](std::uint64_t d1, int mu1) {
          inner.add(mu1 / (static_cast<double>(d1) * static_cast<double>(d1)));
        });
        total.add(head * inner.value());
        for (std::size_t i = idx; i < shared.size(); ++i) {
          if (shared[i] > dmax / d0) break;
          rec(i + 1, d0 * shared[i], -mu0);
        }
      };
  rec(0, 1, 1);
  return total.value();
}

}  // namespace cubexp::sums
