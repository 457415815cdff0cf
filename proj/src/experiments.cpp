#include "cubexp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>

#include "cubexp/arcs.hpp"
#include "cubexp/base.hpp"
#include "cubexp/complete_sums.hpp"
#include "cubexp/major.hpp"
#include "cubexp/ntheory.hpp"
#include "cubexp/oscillatory.hpp"
#include "cubexp/parallel.hpp"
#include "cubexp/sumset.hpp"
#include "cubexp/weyl.hpp"

namespace cubexp::experiments {

namespace {

using report::CheckRecord;
using report::RunReport;

void add_le(RunReport& rep, const Config& cfg, const std::string& name,
            double observed, double threshold, const std::string& note = "") {
  CheckRecord rec;
  rec.name = name;
  rec.observed = observed;
  rec.threshold = threshold * cfg.tolerance_scale;
  rec.pass = std::isfinite(observed) && observed <= rec.threshold;
  rec.note = note;
  rep.add_check(std::move(rec));
}

// max-ratio finiteness + least-squares log-slope across a size grid
void add_envelope(RunReport& rep, const Config& cfg, const std::string& name,
                  const std::vector<double>& sizes,
                  const std::vector<double>& fitted, double slope_cap = 0.15) {
  double max_fit = 0.0;
  for (double f : fitted) max_fit = std::max(max_fit, f);
  std::string values;
  for (std::size_t i = 0; i < fitted.size(); ++i) {
    if (i) values += ' ';
    values += report::format_double(fitted[i]);
  }
  CheckRecord fin;
  fin.name = name + ".max_ratio";
  fin.observed = max_fit;
  fin.threshold = 1e9;
  fin.pass = std::isfinite(max_fit) && max_fit < fin.threshold && max_fit > 0.0;
  fin.note = "per-size fitted constants: " + values;
  rep.add_check(std::move(fin));
  add_le(rep, cfg, name + ".log_slope", major::log_slope(sizes, fitted), slope_cap);
}

nt::SquarefreeModulus make_w(const WChoice& choice, double P) {
  if (choice.primorial) {
    return nt::SquarefreeModulus::primorial(std::pow(P, 0.25));
  }
  return nt::SquarefreeModulus::integer(choice.value);
}

std::vector<double> default_grid(const Config& cfg, std::vector<double> fallback) {
  return cfg.p_grid.empty() ? fallback : cfg.p_grid;
}

void emit_csv(const Config& cfg, const std::string& stem,
              const report::CsvWriter& csv, const std::string& title) {
  if (cfg.out_dir.empty()) return;
  csv.write(cfg.out_dir + "/" + stem + ".csv");
  csv.write_plot_stub(cfg.out_dir + "/" + stem + ".plot.txt", title);
}

double frac01(std::mt19937_64& gen) { return uniform01(gen); }

}  // namespace

WChoice parse_w(const std::string& text) {
  WChoice c;
  c.name = text;
  if (text == "primorial" || text == "varpi") {
    c.primorial = true;
    return c;
  }
  c.value = std::stoull(text);
  return c;
}

// ---------------------------------------------------------------------
// Criterion 1: exact identities.
// ---------------------------------------------------------------------
report::RunReport verify_identities(const Config& cfg) {
  RunReport rep("verify-identities");
  rep.add_config("seed", cfg.seed);
  rep.add_config("tolerance_scale", cfg.tolerance_scale);

  // (318): T(q,a,b) = |U(q,a,b)|^2, all q <= 200, 1e4 samples overall.
  {
    std::vector<double> devs(200, 0.0);
    parallel_for_index(
        200,
        [&](std::size_t qi) {
          const std::uint64_t q = qi + 1;
          std::mt19937_64 gen(cfg.seed * 1000003 + q);
          double worst = 0.0;
          for (int s = 0; s < 50; ++s) {
            const auto a = static_cast<std::int64_t>(uniform_below(gen, q));
            const auto b = static_cast<std::int64_t>(uniform_below(gen, q));
            const auto t = sums::hua_T_direct(q, a, b);
            const auto u = sums::hua_sum(q, a, b);
            const double mag = std::abs(u.value);
            worst = std::max(worst, std::abs(t.value.real() - mag * mag) +
                                        std::abs(t.value.imag()));
          }
          devs[qi] = worst / (static_cast<double>(q) * static_cast<double>(q));
        },
        cfg.threads);
    add_le(rep, cfg, "eq318.T_equals_U_squared",
           *std::max_element(devs.begin(), devs.end()), 1e-8,
           "max over q <= 200 of dev / q^2, 50 samples per q");
  }

  // (H0)/(331): U multiplicativity for coprime q1, q2 <= 60.
  {
    std::mt19937_64 gen(cfg.seed + 1);
    double worst = 0.0;
    int done = 0;
    while (done < 10000) {
      const std::uint64_t q1 = 1 + uniform_below(gen, 60);
      const std::uint64_t q2 = 1 + uniform_below(gen, 60);
      if (std::gcd(q1, q2) != 1) continue;
      ++done;
      const auto c = static_cast<std::int64_t>(uniform_below(gen, q1 * q2));
      const auto b = static_cast<std::int64_t>(uniform_below(gen, q1 * q2));
      const auto lhs = sums::hua_sum(q1 * q2, c, b).value;
      const auto rhs = sums::hua_sum(q1, c * static_cast<std::int64_t>(q2 * q2), b).value *
                       sums::hua_sum(q2, c * static_cast<std::int64_t>(q1 * q1), b).value;
      worst = std::max(worst, std::abs(lhs - rhs) / static_cast<double>(q1 * q2));
    }
    add_le(rep, cfg, "eqH0.U_multiplicative", worst, 1e-8,
           "1e4 coprime pairs q1,q2 <= 60, dev / (q1 q2)");
  }

  // (337): W multiplicativity for coprime r1, r2 <= 40.
  {
    std::mt19937_64 gen(cfg.seed + 2);
    double worst = 0.0;
    for (std::uint64_t r1 = 1; r1 <= 40; ++r1) {
      for (std::uint64_t r2 = 1; r2 <= 40; ++r2) {
        if (std::gcd(r1, r2) != 1) continue;
        const auto b = static_cast<std::int64_t>(1 + uniform_below(gen, r1 * r2));
        const double lhs = sums::paired_sum_W(r1 * r2, b).value.real();
        const double rhs =
            sums::paired_sum_W(r1, b * static_cast<std::int64_t>(r2 * r2)).value.real() *
            sums::paired_sum_W(r2, b * static_cast<std::int64_t>(r1 * r1)).value.real();
        const double sz = static_cast<double>(r1 * r2);
        worst = std::max(worst, std::abs(lhs - rhs) / (sz * sz));
      }
    }
    add_le(rep, cfg, "eq337.W_multiplicative", worst, 1e-8,
           "all coprime pairs r1,r2 <= 40, dev / (r1 r2)^2");
  }

  // (24): q^{-1} S is invariant under cancelling (a1,a2,q).
  {
    std::mt19937_64 gen(cfg.seed + 3);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const std::uint64_t d = 2 + uniform_below(gen, 8);
      const std::uint64_t q1 = 1 + uniform_below(gen, 120);
      const auto a1 = static_cast<std::int64_t>(d * (1 + uniform_below(gen, 500)));
      const auto a2 = static_cast<std::int64_t>(d * (1 + uniform_below(gen, 500)));
      const auto full = sums::gauss_quad(d * q1, a1, a2);
      const auto red = sums::gauss_quad(q1, a1 / static_cast<std::int64_t>(d),
                                        a2 / static_cast<std::int64_t>(d));
      worst = std::max(worst, std::abs(full.value / static_cast<double>(d * q1) -
                                       red.value / static_cast<double>(q1)));
    }
    add_le(rep, cfg, "eq24.gauss_reduction", worst, 1e-8, "1e3 cases, dev of q^{-1}S");
  }

  // (36): Moebius identity for F_w at P in {400, 2500, 1e4}.
  {
    const std::vector<double> ps = default_grid(cfg, {400.0, 2500.0, 10000.0});
    double worst = 0.0;
    for (double P : ps) {
      const double HP = std::sqrt(P) * P;
      std::vector<nt::SquarefreeModulus> ws;
      for (std::uint64_t wv : {1ULL, 2ULL, 6ULL, 30ULL, 210ULL, 2310ULL}) {
        ws.push_back(nt::SquarefreeModulus::integer(wv));
      }
      ws.push_back(nt::SquarefreeModulus::primorial(std::pow(P, 0.25)));
      std::vector<double> devs(100, 0.0);
      parallel_for_index(
          100,
          [&](std::size_t i) {
            std::mt19937_64 gen(cfg.seed * 77 + static_cast<std::uint64_t>(P) + i);
            const double alpha = frac01(gen);
            const auto& w = ws[i % ws.size()];
            const auto params = weyl::WeylParams::make(P, w);
            const auto direct = weyl::f_w_direct(alpha, params);
            const auto mob = weyl::f_w_mobius(alpha, params);
            devs[i] = std::abs(direct.value - mob.value) / HP;
          },
          cfg.threads);
      worst = std::max(worst, *std::max_element(devs.begin(), devs.end()));
    }
    add_le(rep, cfg, "eq36.moebius_identity", worst, 1e-8,
           "100 (alpha, w) samples per P, dev / (H P)");
  }

  // (38): h-expansion rearrangement, 50 samples.
  {
    std::vector<double> devs(50, 0.0);
    parallel_for_index(
        50,
        [&](std::size_t i) {
          std::mt19937_64 gen(cfg.seed * 131 + i);
          const double P = (i % 2 == 0) ? 400.0 : 900.0;
          const double H = std::sqrt(P);
          const std::uint64_t wv = std::array<std::uint64_t, 3>{1, 6, 30}[i % 3];
          const auto w = nt::SquarefreeModulus::integer(wv);
          const double alpha = frac01(gen);
          ComplexSum expansion;
          w.for_each_divisor_up_to(static_cast<std::uint64_t>(H),
                                   [&](std::uint64_t d, int mu) {
            const double dd = static_cast<double>(d);
            const auto di = static_cast<std::int64_t>(d);
            ComplexSum inner;
            for (std::int64_t h = 1; h <= static_cast<std::int64_t>(H / dd); ++h) {
              const auto g = weyl::quad_g(3.0 * alpha * dd * dd * dd * h * h,
                                          3.0 * alpha * dd * dd * dd * h, P / dd);
              inner.add(unit_phase(frac_mul_int(alpha, di * di * di * h * h * h)) *
                        g.value);
            }
            expansion.add(static_cast<double>(mu) * inner.value());
          });
          const auto params = weyl::WeylParams::make(P, w);
          const auto direct = weyl::f_w_direct(alpha, params);
          devs[i] = std::abs(expansion.value() - direct.value) / (H * P);
        },
        cfg.threads);
    add_le(rep, cfg, "eq38.h_expansion", *std::max_element(devs.begin(), devs.end()),
           1e-8, "50 samples at P in {400, 900}, dev / (H P)");
  }

  return rep;
}

// ---------------------------------------------------------------------
// Criterion 2: exact vanishing and exact bounds.
// ---------------------------------------------------------------------
report::RunReport verify_vanishing(const Config& cfg) {
  RunReport rep("verify-vanishing");
  rep.add_config("seed", cfg.seed);
  rep.add_config("tolerance_scale", cfg.tolerance_scale);

  // Lemma 2.3: S(q,a1,a2) = 0 when (a1,a2,q) = 1 and (q,a2) > 1.
  {
    std::vector<double> devs(150, 0.0);
    parallel_for_index(
        150,
        [&](std::size_t qi) {
          const std::uint64_t q = qi + 1;
          double worst = 0.0;
          for (std::uint64_t a1 = 0; a1 < q; ++a1) {
            for (std::uint64_t a2 = 0; a2 < q; ++a2) {
              const std::uint64_t g3 =
                  std::gcd(std::gcd(a1 == 0 ? q : a1, a2 == 0 ? q : a2), q);
              const std::uint64_t g2 = std::gcd(a2 == 0 ? q : a2, q);
              if (g3 == 1 && g2 > 1) {
                const auto s = sums::gauss_quad_direct(
                    q, static_cast<std::int64_t>(a1), static_cast<std::int64_t>(a2));
                worst = std::max(worst, std::abs(s.value) / static_cast<double>(q));
              }
            }
          }
          devs[qi] = worst;
        },
        cfg.threads);
    add_le(rep, cfg, "lemma23.vanishing", *std::max_element(devs.begin(), devs.end()),
           1e-6, "all qualifying (a1,a2), q <= 150, |S|/q");
  }

  // W(p^l, b) vanishing table and |W(p,b)| <= 4p.
  {
    double worst = 0.0;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
      for (int l = 2; l <= 3; ++l) {
        if (p == 3 && l == 2) continue;  // W(9,b) does not vanish
        std::uint64_t pl = 1;
        for (int i = 0; i < l; ++i) pl *= p;
        for (std::int64_t b = 1; b <= 20; ++b) {
          if (b % static_cast<std::int64_t>(p) == 0) continue;
          const double w = std::abs(sums::paired_sum_W(pl, b).value.real());
          worst = std::max(worst, w / (static_cast<double>(pl) * static_cast<double>(pl)));
        }
      }
    }
    add_le(rep, cfg, "sec5.W_prime_power_vanishing", worst, 1e-6,
           "p <= 13, (p != 3, l in {2,3}) or (p = 3, l = 3), p not dividing b");

    double worst4p = 0.0;
    for (std::uint64_t p : nt::primes_up_to(500)) {
      for (std::uint64_t b = 1; b < p; ++b) {
        const double w = std::abs(
            sums::paired_sum_W(p, static_cast<std::int64_t>(b)).value.real());
        worst4p = std::max(worst4p, w / (4.0 * static_cast<double>(p)));
      }
    }
    add_le(rep, cfg, "sec5.W_prime_bound_4p", worst4p, 1.0 + 1e-9,
           "|W(p,b)| / (4p) over p <= 500, all b");
  }

  // (kapp): kappa_w(q) <= 2^18 q^{-1/3} for q <= 1e6, five w choices,
  // exact arithmetic: num^3 q^2 <= 2^108 den^3 in 128-bit integers.
  {
    const auto le_shift = [](unsigned __int128 lhs, unsigned __int128 rhs, int s) {
      if (s >= 128 || (rhs >> (128 - s)) != 0) return true;  // rhs << s overflows
      return lhs <= (rhs << s);
    };
    std::vector<nt::SquarefreeModulus> ws{
        nt::SquarefreeModulus::one(), nt::SquarefreeModulus::integer(2),
        nt::SquarefreeModulus::integer(3), nt::SquarefreeModulus::integer(30),
        nt::SquarefreeModulus::primorial(31.0)};
    constexpr std::size_t kBlocks = 64;
    std::vector<std::uint8_t> ok(kBlocks, 1);
    parallel_for_index(
        kBlocks,
        [&](std::size_t blk) {
          const std::uint64_t lo = blk * (1'000'000 / kBlocks) + 1;
          const std::uint64_t hi =
              (blk + 1 == kBlocks) ? 1'000'000 : (blk + 1) * (1'000'000 / kBlocks);
          for (std::uint64_t q = lo; q <= hi; ++q) {
            const nt::Factorization fact = nt::factorize(q);
            for (const auto& w : ws) {
              const auto k2 = sums::kappa_sq_exact_from(fact, w);
              if (k2.zero) continue;
              const unsigned __int128 lhs = k2.num * k2.num * k2.num *
                                            static_cast<unsigned __int128>(q) * q;
              const unsigned __int128 den3 = k2.den * k2.den * k2.den;
              if (!le_shift(lhs, den3, 108)) {
                ok[blk] = 0;
                return;
              }
            }
          }
        },
        cfg.threads);
    const bool all_ok = std::all_of(ok.begin(), ok.end(), [](auto v) { return v == 1; });
    add_le(rep, cfg, "kapp.exact_envelope", all_ok ? 0.0 : 1.0, 0.5,
           "kappa_w(q)^6 q^2 <= 2^108 exactly, q <= 1e6, w in {1,2,3,30,primorial(31)}");
  }

  return rep;
}

// ---------------------------------------------------------------------
// Criterion 3: envelope stability with fitted constants.
// ---------------------------------------------------------------------
report::RunReport verify_envelopes(const Config& cfg) {
  RunReport rep("verify-envelopes");
  rep.add_config("seed", cfg.seed);
  rep.add_config("epsilon", cfg.epsilon);
  rep.add_config("tolerance_scale", cfg.tolerance_scale);

  // Theorem 2.1 ratio across X = 2^10 .. 2^16.
  {
    std::vector<double> xs, fitted;
    for (int e = 10; e <= 16; ++e) xs.push_back(std::pow(2.0, e));
    for (double X : xs) {
      std::vector<double> worst(200, 0.0);
      parallel_for_index(
          200,
          [&](std::size_t i) {
            std::mt19937_64 gen(cfg.seed * 17 + static_cast<std::uint64_t>(X) + i);
            const std::uint64_t q = 1 + uniform_below(gen, 100);
            const auto a1 = static_cast<std::int64_t>(uniform_below(gen, q));
            const auto a2 = static_cast<std::int64_t>(uniform_below(gen, q));
            const double b1 = (frac01(gen) - 0.5) / static_cast<double>(q);
            const double b2 =
                (frac01(gen) - 0.5) * std::pow(10.0, -3.0 - 6.0 * frac01(gen));
            const auto chk = major::quadweyl_check(q, a1, a2, b1, b2, X);
            worst[i] = chk.lhs / chk.rhs;
          },
          cfg.threads);
      fitted.push_back(*std::max_element(worst.begin(), worst.end()));
    }
    add_envelope(rep, cfg, "thm21.quadweyl", xs, fitted);
  }

  // Lemma 2.4 over q buckets; also the pilot constant C <= 2.
  {
    std::vector<double> sizes{66.0, 133.0, 200.0};
    std::vector<double> fitted(3, 0.0);
    std::vector<double> per_q(200, 0.0);
    parallel_for_index(
        200,
        [&](std::size_t qi) {
          const std::uint64_t q = qi + 1;
          double worst = 0.0;
          for (std::uint64_t a1 = 0; a1 < q; ++a1) {
            for (std::uint64_t a2 = 0; a2 < q; ++a2) {
              const auto s = sums::gauss_quad_direct(
                  q, static_cast<std::int64_t>(a1), static_cast<std::int64_t>(a2));
              const std::uint64_t g =
                  std::gcd(std::gcd(a1 == 0 ? q : a1, a2 == 0 ? q : a2), q);
              worst = std::max(worst, std::abs(s.value) /
                                          std::sqrt(static_cast<double>(q) *
                                                    static_cast<double>(g)));
            }
          }
          per_q[qi] = worst;
        },
        cfg.threads);
    for (std::size_t qi = 0; qi < 200; ++qi) {
      const std::size_t bucket = qi < 66 ? 0 : qi < 133 ? 1 : 2;
      fitted[bucket] = std::max(fitted[bucket], per_q[qi]);
    }
    add_envelope(rep, cfg, "lemma24.gauss_bound", sizes, fitted);
    add_le(rep, cfg, "lemma24.pilot_constant",
           *std::max_element(per_q.begin(), per_q.end()), 2.0,
           "|S| / sqrt(q (q,a1,a2)), all q <= 200");
  }

  // Lemma Huasum: |U(q, a d^3, b)| <= C q^{0.5+eps} (q,b)^{1/2}.
  {
    std::vector<double> sizes{100.0, 200.0, 300.0};
    std::vector<double> fitted;
    std::mt19937_64 gen(cfg.seed + 5);
    for (double cap : sizes) {
      double worst = 0.0;
      for (int i = 0; i < 3000; ++i) {
        const auto q =
            static_cast<std::uint64_t>(cap) - uniform_below(gen, 100);
        std::uint64_t a = 1 + uniform_below(gen, q);
        while (std::gcd(a, q) != 1) a = 1 + uniform_below(gen, q);
        const std::uint64_t d = 1 + uniform_below(gen, 10);
        if (nt::mobius(d) == 0) continue;
        const auto b = static_cast<std::int64_t>(uniform_below(gen, q));
        const std::uint64_t c = sums::cube_twist_mod(static_cast<std::int64_t>(a), d, q);
        const double mag =
            std::abs(sums::hua_sum(q, static_cast<std::int64_t>(c), b).value);
        const auto bg = std::gcd(sums::reduce_mod(b, q) == 0
                                     ? q
                                     : sums::reduce_mod(b, q), q);
        const double env = std::pow(static_cast<double>(q), 0.5 + cfg.epsilon) *
                           std::sqrt(static_cast<double>(bg));
        worst = std::max(worst, mag / env);
      }
      fitted.push_back(worst);
    }
    add_envelope(rep, cfg, "huasum.twisted_bound", sizes, fitted);
  }

  // Lemma LJ + eq (310) + Lemma 3.8 integral envelopes over a P grid.
  {
    const std::vector<double> ps = default_grid(cfg, {400.0, 1600.0, 6400.0});
    std::vector<double> lj, e310, l38;
    for (double P : ps) {
      std::mt19937_64 gen(cfg.seed * 29 + static_cast<std::uint64_t>(P));
      double worst = 0.0;
      for (int i = 0; i < 1000; ++i) {
        const double b1 = frac01(gen) * 5.0;
        const double b2 = std::pow(10.0, -7.0 + 7.0 * frac01(gen));
        worst = std::max(worst, std::abs(osc::integral_J(b1, b2, P).value) * P * b2);
      }
      lj.push_back(worst);

      worst = 0.0;
      for (int i = 0; i < 1000; ++i) {
        const double h = 1.0 + std::floor(frac01(gen) * 20.0);
        const double d = 1.0 + std::floor(frac01(gen) * 5.0);
        double beta = std::pow(10.0, -10.0 + 8.0 * frac01(gen));
        if (frac01(gen) < 0.5) beta = -beta;
        const auto j =
            osc::integral_J(3.0 * h * h * d * d * beta, 3.0 * h * d * beta, P);
        worst = std::max(worst, std::abs(j.value) *
                                    (1.0 + P * P * h * d * std::abs(beta)) / P);
      }
      e310.push_back(worst);

      const double H = std::sqrt(P);
      std::vector<double> kr(24, 0.0);
      parallel_for_index(
          24,
          [&](std::size_t i) {
            const double top = 1.0 / (6.0 * H * P);
            const double bot = 1e-3 / (H * P * P);
            const double beta = bot * std::pow(top / bot, static_cast<double>(i) / 23.0);
            const auto k = osc::integral_K(beta, H, P);
            const double env =
                H * P / (1.0 + H * P * P * beta) * std::max(std::log(P), 1.0);
            kr[i] = std::abs(k.value) / env;
          },
          cfg.threads);
      l38.push_back(*std::max_element(kr.begin(), kr.end()));
    }
    add_envelope(rep, cfg, "lemmaLJ.inverse_decay", ps, lj);
    add_envelope(rep, cfg, "eq310.J_envelope", ps, e310);
    add_envelope(rep, cfg, "lemma38.K_envelope", ps, l38);
  }

  // Lemma 6.1: Weyl envelope for G over X = 2^10 .. 2^14.
  {
    std::vector<double> xs, fitted;
    for (int e = 10; e <= 14; ++e) xs.push_back(std::pow(2.0, e));
    for (double X : xs) {
      const double Y = std::floor(std::sqrt(X));
      std::vector<double> worst(1000, 0.0);
      parallel_for_index(
          1000,
          [&](std::size_t i) {
            std::mt19937_64 gen(cfg.seed * 37 + static_cast<std::uint64_t>(X) + i);
            const std::uint64_t q =
                2 + uniform_below(gen, static_cast<std::uint64_t>(X));
            std::uint64_t a = 1 + uniform_below(gen, q);
            while (std::gcd(a, q) != 1) a = 1 + uniform_below(gen, q);
            const double theta =
                (frac01(gen) * 2.0 - 1.0) / (static_cast<double>(q) * q);
            double alpha = static_cast<double>(a) / static_cast<double>(q) + theta;
            alpha -= std::floor(alpha);
            const auto g = weyl::cubic_G(alpha, X, Y);
            const double qd = static_cast<double>(q);
            const double env =
                (X * Y / std::sqrt(qd) + std::sqrt(X) * Y + std::sqrt(Y * qd)) *
                std::pow(qd * X, cfg.epsilon);
            worst[i] = std::abs(g.value) / env;
          },
          cfg.threads);
      fitted.push_back(*std::max_element(worst.begin(), worst.end()));
    }
    add_envelope(rep, cfg, "lemma61.weyl_envelope", xs, fitted);
  }

  // Lemma 6.2: gcd-weighted sums, exact integer gcds.
  {
    std::vector<double> sizes{100.0, 300.0, 500.0};
    std::vector<double> fitted(3, 0.0);
    for (std::uint64_t r = 1; r <= 500; ++r) {
      const std::size_t bucket = r <= 100 ? 0 : r <= 300 ? 1 : 2;
      for (double K : {0.0, 1e-3, 1.0, 1e3}) {
        for (std::uint64_t H : {100ULL, 1000ULL, 10000ULL}) {
          const double lhs = major::gcd_weighted_sum(r, K, H);
          const double Hd = static_cast<double>(H);
          const double rhs = static_cast<double>(nt::tau(r)) *
                             (1.0 + std::log(Hd)) * Hd / (1.0 + K * Hd);
          fitted[bucket] = std::max(fitted[bucket], lhs / rhs);
        }
      }
    }
    add_envelope(rep, cfg, "lemma62.gcd_sum", sizes, fitted);
  }

  return rep;
}

// ---------------------------------------------------------------------
// Criterion 4: major-arc residual |F_w - S(a/q,w) K(beta)| <= C P^{1+eps}.
// ---------------------------------------------------------------------
report::RunReport major_arc_residual(const Config& cfg) {
  RunReport rep("major-approx.residual");
  rep.add_config("epsilon", cfg.epsilon);
  rep.add_config("tolerance_scale", cfg.tolerance_scale);

  const std::vector<double> ps = default_grid(cfg, {1000.0, 4000.0, 16000.0});
  const std::vector<std::string> w_names{"1", "6", "primorial"};
  report::CsvWriter csv({"P", "w", "q", "a", "beta", "abs_residual", "floor"});

  std::vector<double> fitted;
  for (double P : ps) {
    const double H = std::sqrt(P);
    const double floor_term = std::pow(P, 1.0 + cfg.epsilon);
    const auto q_max = std::max<std::uint64_t>(
        1, static_cast<std::uint64_t>(std::floor(std::pow(P, 0.25))));

    // distinct K values cached per |beta|
    struct Sample {
      std::string w_name;
      std::uint64_t q, a;
      double beta;
    };
    std::vector<Sample> samples;
    for (const auto& wn : w_names) {
      for (std::uint64_t q = 1; q <= q_max; ++q) {
        for (std::uint64_t a = (q == 1 ? 0 : 1); a <= (q == 1 ? 0 : q - 1); ++a) {
          if (std::gcd(a == 0 ? q : a, q) != 1) continue;
          const double blo = 1e-2 / (H * P * P);
          const double bhi = 0.98 / (6.0 * static_cast<double>(q) * H * P);
          samples.push_back({wn, q, a, 0.0});
          for (int j = 0; j < 8; ++j) {
            const double b = blo * std::pow(bhi / blo, j / 7.0);
            samples.push_back({wn, q, a, b});
            samples.push_back({wn, q, a, -b});
          }
        }
      }
    }

    std::map<double, std::complex<double>> k_cache;
    for (const auto& s : samples) k_cache[std::abs(s.beta)] = {0.0, 0.0};
    {
      std::vector<double> betas;
      betas.reserve(k_cache.size());
      for (const auto& [b, v] : k_cache) betas.push_back(b);
      std::vector<std::complex<double>> kv(betas.size());
      parallel_for_index(
          betas.size(),
          [&](std::size_t i) { kv[i] = osc::integral_K(betas[i], H, P).value; },
          cfg.threads);
      for (std::size_t i = 0; i < betas.size(); ++i) k_cache[betas[i]] = kv[i];
    }

    std::vector<double> resid(samples.size(), 0.0);
    parallel_for_index(
        samples.size(),
        [&](std::size_t i) {
          const Sample& s = samples[i];
          const auto w = make_w(parse_w(s.w_name), P);
          const double alpha =
              static_cast<double>(s.a) / static_cast<double>(s.q) + s.beta;
          const auto params = weyl::WeylParams::make(P, w);
          const auto f = weyl::f_w_mobius(alpha, params, 1);
          const double series =
              sums::local_series(static_cast<std::int64_t>(s.a), s.q, w);
          std::complex<double> k = k_cache.at(std::abs(s.beta));
          if (s.beta < 0.0) k = std::conj(k);
          resid[i] = std::abs(f.value - series * k);
        },
        cfg.threads);

    double worst = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      worst = std::max(worst, resid[i] / floor_term);
      csv.add_row({report::format_double(P), samples[i].w_name,
                   std::to_string(samples[i].q), std::to_string(samples[i].a),
                   report::format_double(samples[i].beta),
                   report::format_double(resid[i]),
                   report::format_double(floor_term)});
    }
    fitted.push_back(worst);
  }
  add_envelope(rep, cfg, "sec5.residual", ps, fitted);
  add_le(rep, cfg, "sec5.residual.fitted_at_base", fitted.front(), 10.0,
         "C fitted at the smallest P; the slope check carries the content");
  emit_csv(cfg, "major_residual", csv, "major-arc residual vs the P^{1+eps} floor");
  return rep;
}

// ---------------------------------------------------------------------
// Criterion 5: Theorem 1.2 / 1.3 envelope reports.
// ---------------------------------------------------------------------
report::RunReport theorem_envelope_report(const Config& cfg) {
  RunReport rep("major-approx.theorem-envelopes");
  rep.add_config("epsilon", cfg.epsilon);
  rep.add_config("seed", cfg.seed);
  rep.add_config("tolerance_scale", cfg.tolerance_scale);

  const std::vector<double> ps = default_grid(cfg, {1000.0, 4000.0, 16000.0});
  report::CsvWriter csv({"P", "w", "alpha", "q", "a", "abs_F", "envelope", "ratio"});

  std::vector<double> fit_main, fit_q27, fit_q27_plain;
  for (double P : ps) {
    const double H = std::sqrt(P);
    const double logp = std::max(std::log(P), 1.0);
    const double floor_term = std::pow(P, 1.0 + cfg.epsilon);

    for (const char* wn : {"1", "primorial"}) {
      const auto w = make_w(parse_w(wn), P);
      const auto params = weyl::WeylParams::make(P, w);

      // 1e3 minor-arc samples + 1e3 near-rational samples
      std::vector<double> alphas;
      std::mt19937_64 gen(cfg.seed * 101 + static_cast<std::uint64_t>(P));
      for (int i = 0; i < 1000; ++i) alphas.push_back(frac01(gen));
      while (alphas.size() < 2000) {
        const std::uint64_t q = 1 + uniform_below(gen, static_cast<std::uint64_t>(
                                                           std::sqrt(P)));
        std::uint64_t a = uniform_below(gen, q + 1);
        if (std::gcd(a == 0 ? q : a, q) != 1) continue;
        const double base = static_cast<double>(a) / static_cast<double>(q);
        const double blo = 1e-2 / (H * P * P);
        const double bhi = 1.0 / (6.0 * static_cast<double>(q) * H * P);
        for (int j = 0; j < 8 && alphas.size() < 2000; ++j) {
          const double b = blo * std::pow(bhi / blo, j / 7.0);
          const double up = base + b;
          if (up <= 1.0) alphas.push_back(up);
          const double dn = base - b;
          if (dn >= 0.0 && alphas.size() < 2000) alphas.push_back(dn);
        }
      }

      std::vector<double> ratios(alphas.size(), 0.0);
      std::vector<std::array<double, 4>> details(alphas.size());
      parallel_for_index(
          alphas.size(),
          [&](std::size_t i) {
            const double alpha = alphas[i];
            const auto label = arcs::classify(alpha, P, w);
            const auto f = weyl::f_w_mobius(alpha, params, 1);
            const double envelope = H * P * logp * label.upsilon + floor_term;
            ratios[i] = std::abs(f.value) / envelope;
            details[i] = {alpha,
                          label.approximant ? static_cast<double>(label.approximant->q) : 0.0,
                          label.approximant ? static_cast<double>(label.approximant->a) : 0.0,
                          std::abs(f.value)};
          },
          cfg.threads);
      double worst = 0.0;
      for (std::size_t i = 0; i < ratios.size(); ++i) {
        worst = std::max(worst, ratios[i]);
        if (i % 50 == 0) {
          csv.add_row({report::format_double(P), wn,
                       report::format_double(details[i][0]),
                       std::to_string(static_cast<std::uint64_t>(details[i][1])),
                       std::to_string(static_cast<std::uint64_t>(details[i][2])),
                       report::format_double(details[i][3]),
                       report::format_double(details[i][3] / std::max(ratios[i], 1e-300)),
                       report::format_double(ratios[i])});
        }
      }
      if (std::string(wn) == "primorial") {
        fit_main.push_back(worst);
      }
    }

    // cubic-modulus suppression: q = 27, w = primorial (kappa = 0 exactly)
    {
      const auto w = make_w(parse_w("primorial"), P);
      if (sums::kappa(27, w) != 0.0) {
        add_le(rep, cfg, "thm13.kappa27_zero", 1.0, 0.5, "kappa_varpi(27) must be 0");
      }
      const auto params = weyl::WeylParams::make(P, w);
      const auto params_plain = weyl::WeylParams::make(P, nt::SquarefreeModulus::one());
      std::vector<double> alphas;
      for (std::uint64_t a : {1ULL, 4ULL, 13ULL, 26ULL}) {
        const double base = static_cast<double>(a) / 27.0;
        for (int j = 0; j < 5; ++j) {
          alphas.push_back(base + static_cast<double>(j) * 0.19 /
                                      (6.0 * 27.0 * H * P));
        }
      }
      std::vector<double> r27(alphas.size(), 0.0), r27p(alphas.size(), 0.0);
      parallel_for_index(
          alphas.size(),
          [&](std::size_t i) {
            r27[i] =
                std::abs(weyl::f_w_mobius(alphas[i], params, 1).value) / floor_term;
            r27p[i] = std::abs(weyl::f_w_mobius(alphas[i], params_plain, 1).value) /
                      floor_term;
          },
          cfg.threads);
      fit_q27.push_back(*std::max_element(r27.begin(), r27.end()));
      fit_q27_plain.push_back(*std::max_element(r27p.begin(), r27p.end()));
    }
  }

  add_envelope(rep, cfg, "thm12.envelope_ratio", ps, fit_main);
  add_envelope(rep, cfg, "thm13.q27_suppression", ps, fit_q27);
  {
    // contrast: without the coprimality constraint the q = 27 peak grows
    // like P^{1/2 - eps} against the same floor (reported, not gated)
    CheckRecord rec;
    rec.name = "thm13.q27_contrast_w1";
    rec.observed = major::log_slope(ps, fit_q27_plain);
    rec.threshold = 0.0;
    rec.pass = true;
    std::string values;
    for (double v : fit_q27_plain) values += report::format_double(v) + " ";
    rec.note = "informational: w=1 ratios " + values + "grow; primorial w flattens them";
    rep.add_check(std::move(rec));
  }
  emit_csv(cfg, "theorem_envelopes", csv, "F_w against the Upsilon envelope");
  return rep;
}

// ---------------------------------------------------------------------
// Criterion 6: expander experiment.
// ---------------------------------------------------------------------
namespace {

sets::IntegerSet build_set(const ExpanderSpec& spec, const Config& cfg,
                           std::uint64_t N) {
  if (spec.kind == "random") {
    return sets::generate_random_density(spec.delta, cfg.seed, N);
  }
  if (spec.kind == "two-cubes") return sets::generate_two_cubes(N);
  if (spec.kind.rfind("kth:", 0) == 0) {
    return sets::generate_kth_powers(std::stoi(spec.kind.substr(4)), N);
  }
  if (spec.kind == "kth") return sets::generate_kth_powers(spec.k, N);
  if (spec.kind == "explicit") {
    std::vector<std::uint64_t> kept;
    for (std::uint64_t v : spec.elements) {
      if (v >= 1 && v <= N) kept.push_back(v);
    }
    return sets::generate_explicit(std::move(kept), N);
  }
  throw std::invalid_argument("unknown set kind: " + spec.kind);
}

}  // namespace

report::RunReport expander_experiment(const ExpanderSpec& spec, const Config& cfg) {
  RunReport rep("expander");
  rep.add_config("N", static_cast<std::uint64_t>(spec.N));
  rep.add_config("kind", spec.kind);
  rep.add_config("delta", spec.delta);
  rep.add_config("seed", cfg.seed);

  const auto z = build_set(spec, cfg, spec.N);
  const auto mom = sets::run_expander(z, spec.N);
  rep.add_config("P", mom.P);
  rep.add_config("Z", mom.Z);

  add_le(rep, cfg, "expander.M1_identity",
         mom.M1 == mom.Z * mom.prime_count ? 0.0 : 1.0, 0.5,
         "M1 = Z * pi((P,2P]) exactly; M1 = " + std::to_string(mom.M1));
  const unsigned __int128 lhs = static_cast<unsigned __int128>(mom.Theta) * mom.M2;
  const unsigned __int128 rhs = static_cast<unsigned __int128>(mom.M1) * mom.M1;
  add_le(rep, cfg, "expander.cauchy", lhs >= rhs ? 0.0 : 1.0, 0.5,
         "Theta * M2 >= M1^2 in exact integers");
  add_le(rep, cfg, "expander.M2_at_least_M1", mom.M2 >= mom.M1 ? 0.0 : 1.0, 0.5, "");

  // histogram vs equation count on an oracle-sized instance
  {
    const std::uint64_t n_small = std::min<std::uint64_t>(spec.N, 100000);
    const auto zs = build_set(spec, cfg, n_small);
    const auto rc = sets::rho_counts(zs, n_small);
    const auto eqc = sets::m2_equation_count(zs, n_small);
    add_le(rep, cfg, "expander.M2_histogram_equals_equation_count",
           rc.M2 == eqc ? 0.0 : 1.0, 0.5,
           "N = " + std::to_string(n_small) + ", M2 = " + std::to_string(rc.M2));
  }

  // bound-table paper rows
  {
    const auto rows = sets::bound_table({2.0 / 3.0, 0.8});
    add_le(rep, cfg, "bounds.davenport_at_two_thirds",
           std::abs(rows[0].davenport - 13.0 / 15.0), 1e-15, "");
    add_le(rep, cfg, "bounds.new_at_two_thirds",
           std::abs(rows[0].new_bound - 8.0 / 9.0), 1e-15, "");
    add_le(rep, cfg, "bounds.new_at_four_fifths",
           std::abs(rows[1].new_bound - 1.0), 0.0, "exact 1 at delta = 4/5");
  }

  // moment summary + rho histogram
  if (!cfg.out_dir.empty()) {
    report::CsvWriter csv({"n", "rho"});
    const auto rc = sets::rho_counts(z, spec.N);
    for (const auto& [n, c] : rc.counts) {
      csv.add_row({std::to_string(n), std::to_string(c)});
    }
    emit_csv(cfg, "expander_rho", csv, "representation counts rho(n, N)");
  }
  rep.add_config("M1", mom.M1);
  rep.add_config("M2", mom.M2);
  rep.add_config("Theta", mom.Theta);
  rep.add_config("cauchy_lb", mom.cauchy_lb);
  return rep;
}

report::RunReport bound_table_grid(const std::vector<double>& deltas,
                                   const Config& cfg) {
  RunReport rep("bound-table");
  report::CsvWriter csv({"delta", "davenport", "davenport_in_range", "new_bound"});
  const auto rows = sets::bound_table(deltas);
  for (const auto& row : rows) {
    csv.add_row({report::format_double(row.delta),
                 report::format_double(row.davenport),
                 row.davenport_in_range ? "1" : "0",
                 report::format_double(row.new_bound)});
  }
  emit_csv(cfg, "bound_table", csv, "density lower bounds");
  for (const auto& row : rows) {
    if (std::abs(row.delta - 0.8) < 1e-12) {
      add_le(rep, cfg, "bounds.row_0.80_new_is_one", std::abs(row.new_bound - 1.0),
             0.0, "");
    }
  }
  rep.add_config("rows", static_cast<std::uint64_t>(rows.size()));
  return rep;
}

// ---------------------------------------------------------------------
// sum-eval
// ---------------------------------------------------------------------
std::vector<std::pair<std::string, std::string>> sum_eval(const SumEvalRequest& req) {
  using Cells = std::vector<std::pair<std::string, std::string>>;
  const auto complex_cells = [](const char* tag, std::complex<double> v,
                                std::uint64_t terms) {
    Cells c;
    c.emplace_back("sum", tag);
    c.emplace_back("re", report::format_double(v.real()));
    c.emplace_back("im", report::format_double(v.imag()));
    c.emplace_back("terms", std::to_string(terms));
    return c;
  };
  const auto w = make_w(parse_w(req.w), req.p);
  if (req.sum == "S") {
    const auto s = sums::gauss_quad(req.q, req.a, req.a2);
    return complex_cells("S", s.value, s.terms);
  }
  if (req.sum == "U") {
    const auto s = sums::hua_sum(req.q, req.a, req.b);
    return complex_cells("U", s.value, s.terms);
  }
  if (req.sum == "Ustar") {
    const auto s = sums::restricted_cubic_sum(req.q, req.b);
    return complex_cells("Ustar", s.value, s.terms);
  }
  if (req.sum == "W") {
    const auto s = sums::paired_sum_W(req.q, req.b);
    return complex_cells("W", s.value, s.terms);
  }
  if (req.sum == "T") {
    const auto s = sums::hua_T(req.q, req.a, req.b);
    return complex_cells("T", s.value, s.terms);
  }
  if (req.sum == "kappa") {
    Cells c;
    c.emplace_back("sum", "kappa");
    c.emplace_back("value", report::format_double(sums::kappa(req.q, w)));
    return c;
  }
  if (req.sum == "local-series") {
    Cells c;
    c.emplace_back("sum", "local-series");
    c.emplace_back("value",
                   report::format_double(sums::local_series(req.a, req.q, w)));
    return c;
  }
  if (req.sum == "f") {
    const auto s = weyl::quad_f(req.alpha, req.alpha2, req.x);
    return complex_cells("f", s.value, s.terms);
  }
  if (req.sum == "g") {
    const auto s = weyl::quad_g(req.alpha, req.alpha2, req.x);
    return complex_cells("g", s.value, s.terms);
  }
  if (req.sum == "G") {
    const auto s = weyl::cubic_G(req.alpha, req.x, req.y, req.threads);
    return complex_cells("G", s.value, s.terms);
  }
  if (req.sum == "Fw" || req.sum == "Fw-direct") {
    const auto params = weyl::WeylParams::make(req.p, w);
    const auto s = req.sum == "Fw" ? weyl::f_w_mobius(req.alpha, params, req.threads)
                                   : weyl::f_w_direct(req.alpha, params);
    Cells c;
    c.emplace_back("alpha", report::format_double(req.alpha));
    c.emplace_back("re", report::format_double(s.value.real()));
    c.emplace_back("im", report::format_double(s.value.imag()));
    c.emplace_back("terms", std::to_string(s.terms));
    return c;
  }
  if (req.sum == "I" || req.sum == "J") {
    const auto r = req.sum == "I" ? osc::integral_I(req.beta1, req.beta2, req.x)
                                  : osc::integral_J(req.beta1, req.beta2, req.x);
    Cells c;
    c.emplace_back("sum", req.sum);
    c.emplace_back("re", report::format_double(r.value.real()));
    c.emplace_back("im", report::format_double(r.value.imag()));
    c.emplace_back("abs_error_estimate", report::format_double(r.abs_error_estimate));
    c.emplace_back("panels", std::to_string(r.panels));
    return c;
  }
  if (req.sum == "K") {
    const auto r = osc::integral_K(req.beta1, std::sqrt(req.p), req.p);
    Cells c;
    c.emplace_back("sum", "K");
    c.emplace_back("re", report::format_double(r.value.real()));
    c.emplace_back("im", report::format_double(r.value.imag()));
    c.emplace_back("abs_error_estimate", report::format_double(r.abs_error_estimate));
    c.emplace_back("panels", std::to_string(r.panels));
    return c;
  }
  throw std::invalid_argument("unknown sum: " + req.sum);
}

}  // namespace cubexp::experiments
