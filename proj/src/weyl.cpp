#include "cubexp/weyl.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cubexp/parallel.hpp"

namespace cubexp::weyl {

namespace {

constexpr std::uint64_t kAnchorStride = 1024;
constexpr double kRotorSlop = 6.3e-12;  // per-term phase error allowance

// Cubic phase m(h,x) = h(3x^2 + 3xh + h^2) as an exact integer.
std::int64_t cubic_m(std::int64_t h, std::int64_t x) {
  return h * (3 * x * x + 3 * x * h + h * h);
}

// Sum over X < x <= 2X of e(alpha scale h(3x^2+3xh+h^2)) for one h, by
// rotor. The integer factor scale (a divisor cubed, in the Moebius route)
// stays inside the exact integer phase instead of being folded into the
// floating alpha. Phase in x is quadratic with second difference
// 6 alpha scale h.
void inner_sum_h(double alpha, std::int64_t scale, std::int64_t h,
                 std::int64_t x_lo, std::int64_t x_hi, SumAccumulator& acc,
                 const std::uint64_t* skip_primes, std::size_t n_skip) {
  if (x_hi <= x_lo) return;
  const std::complex<double> c = unit_phase(frac_mul_int(alpha, 6 * scale * h));
  std::complex<double> z{0.0, 0.0}, r{0.0, 0.0};
  std::uint64_t since_anchor = kAnchorStride;  // force anchor on entry
  for (std::int64_t x = x_lo + 1; x <= x_hi; ++x) {
    if (since_anchor >= kAnchorStride) {
      z = unit_phase(frac_mul_int(alpha, scale * cubic_m(h, x)));
      const std::int64_t dm = cubic_m(h, x + 1) - cubic_m(h, x);
      r = unit_phase(frac_mul_int(alpha, scale * dm));
      since_anchor = 0;
    }
    bool keep = true;
    for (std::size_t i = 0; i < n_skip; ++i) {
      if (static_cast<std::uint64_t>(x) % skip_primes[i] == 0) {
        keep = false;
        break;
      }
    }
    if (keep) acc.add(z);
    z *= r;
    r *= c;
    ++since_anchor;
  }
}

void check_phase_range(double alpha, double X, double Y, double scale) {
  // scale * cubic_m must stay within int64; 12 Y X^2 scale bounds it.
  const double peak = 12.0 * std::max(Y, 1.0) * std::max(X, 1.0) * std::max(X, 1.0) * scale;
  if (!(std::abs(alpha) < 1e18) || peak > 9.0e17) {
    throw std::invalid_argument("cubic sum: parameters exceed the 64-bit phase range");
  }
}

}  // namespace

WeylParams WeylParams::make(double P, nt::SquarefreeModulus w) {
  if (!(P >= 1.0)) throw std::invalid_argument("WeylParams: P must be >= 1");
  WeylParams p;
  p.P = P;
  p.H = std::sqrt(P);
  p.w = std::move(w);
  return p;
}

namespace {

// Sum of e(a1 x + a2 x^2) over x_lo < x <= x_hi by the same rotor scheme.
// Both phases are reduced mod 1 up front, so integer shifts of either
// argument reproduce results exactly.
SumValue quad_partial_sum(double a1, double a2, std::int64_t x_lo,
                          std::int64_t x_hi) {
  a1 = frac_exact(a1);
  a2 = frac_exact(a2);
  SumAccumulator acc(kRotorSlop);
  const std::complex<double> c = unit_phase(frac_exact(2.0 * a2));
  std::complex<double> z{0.0, 0.0}, r{0.0, 0.0};
  std::uint64_t since_anchor = kAnchorStride;
  for (std::int64_t x = x_lo + 1; x <= x_hi; ++x) {
    if (since_anchor >= kAnchorStride) {
      const double xd = static_cast<double>(x);
      double t = frac_two(two_prod(a1, xd)) + frac_two(two_prod(a2, xd * xd));
      t -= std::floor(t);
      z = unit_phase(t);
      // delta(x) = a1 + a2 (2x+1)
      double dt = frac_exact(a1) + frac_two(two_prod(a2, 2.0 * xd + 1.0));
      dt -= std::floor(dt);
      r = unit_phase(dt);
      since_anchor = 0;
    }
    acc.add(z);
    z *= r;
    r *= c;
    ++since_anchor;
  }
  return acc.finish();
}

}  // namespace

SumValue quad_f(double a1, double a2, double X) {
  if (!(X >= 0.0)) throw std::invalid_argument("quad_f: X must be nonnegative");
  if (X >= 9.0e7) throw std::invalid_argument("quad_f: X exceeds the exact-square range");
  return quad_partial_sum(a1, a2, 0, static_cast<std::int64_t>(std::floor(X)));
}

SumValue quad_g(double a1, double a2, double X) {
  if (!(X >= 1.0)) throw std::invalid_argument("quad_g: X must be >= 1");
  if (X >= 9.0e7) throw std::invalid_argument("quad_g: X exceeds the exact-square range");
  return quad_partial_sum(a1, a2, static_cast<std::int64_t>(std::floor(X)),
                          static_cast<std::int64_t>(std::floor(2.0 * X)));
}

namespace {

// Shared engine for G and F_w: sum over h blocks in fixed order.
SumValue cubic_double_sum(double alpha, std::int64_t scale, double X, double Y,
                          const nt::SquarefreeModulus* w, int threads) {
  check_phase_range(alpha, X, Y, static_cast<double>(scale));
  alpha = frac_exact(alpha);  // integer shifts drop out exactly
  const auto y_max = static_cast<std::int64_t>(std::floor(Y));
  const auto x_lo = static_cast<std::int64_t>(std::floor(X));
  const auto x_hi = static_cast<std::int64_t>(std::floor(2.0 * X));
  if (y_max < 1 || x_hi <= x_lo) return {};

  constexpr std::int64_t kBlock = 16;
  const std::size_t blocks = static_cast<std::size_t>((y_max + kBlock - 1) / kBlock);
  std::vector<SumValue> partial(blocks);

  parallel_for_index(
      blocks,
      [&](std::size_t bi) {
        SumAccumulator acc(kRotorSlop);
        const std::int64_t h_lo = static_cast<std::int64_t>(bi) * kBlock + 1;
        const std::int64_t h_hi = std::min<std::int64_t>(h_lo + kBlock - 1, y_max);
        std::vector<std::uint64_t> skip;
        for (std::int64_t h = h_lo; h <= h_hi; ++h) {
          skip.clear();
          if (w != nullptr) {
            // primes of w dividing h; only these constrain x
            for (std::uint64_t p : w->primes()) {
              if (p > static_cast<std::uint64_t>(h)) break;
              if (static_cast<std::uint64_t>(h) % p == 0) skip.push_back(p);
            }
          }
          inner_sum_h(alpha, scale, h, x_lo, x_hi, acc,
                      skip.empty() ? nullptr : skip.data(), skip.size());
        }
        partial[bi] = acc.finish();
      },
      threads);

  SumValue out;
  for (const SumValue& p : partial) add_scaled(out, 1.0, p);
  return out;
}

}  // namespace

SumValue cubic_G(double alpha, double X, double Y, int threads, bool* hypothesis_ok) {
  if (!(X >= 1.0) || !(Y >= 0.0)) {
    throw std::invalid_argument("cubic_G: need X >= 1 and Y >= 0");
  }
  if (hypothesis_ok != nullptr) *hypothesis_ok = (Y >= 1.0 && Y <= X);
  return cubic_double_sum(alpha, 1, X, Y, nullptr, threads);
}

SumValue f_w_direct(double alpha, const WeylParams& params) {
  return cubic_double_sum(alpha, 1, params.P, params.H, &params.w, 1);
}

SumValue f_w_mobius(double alpha, const WeylParams& params, int threads) {
  const auto h_limit = static_cast<std::uint64_t>(std::floor(params.H));
  SumValue out;
  params.w.for_each_divisor_up_to(h_limit, [&](std::uint64_t d, int mu) {
    const double dd = static_cast<double>(d);
    const auto di = static_cast<std::int64_t>(d);
    const SumValue g = cubic_double_sum(alpha, di * di * di, params.P / dd,
                                        params.H / dd, nullptr, threads);
    add_scaled(out, static_cast<double>(mu), g);
  });
  return out;
}

}  // namespace cubexp::weyl
