#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numeric>
#include <random>

#include "cubexp/base.hpp"
#include "cubexp/major.hpp"
#include "cubexp/weyl.hpp"

using namespace cubexp;
using std::complex;

namespace {

const double PI2 = 6.283185307179586476925286766559;

// Naive long-double oracles, one transcendental call per term.
complex<double> oracle_f(double a1, double a2, double X) {
  complex<double> s{0.0, 0.0};
  for (std::int64_t x = 1; x <= static_cast<std::int64_t>(std::floor(X)); ++x) {
    const long double ph = static_cast<long double>(a1) * x +
                           static_cast<long double>(a2) * x * x;
    s += std::polar(1.0, static_cast<double>(PI2 * (ph - std::floor(ph))));
  }
  return s;
}

complex<double> oracle_G(double alpha, double X, double Y) {
  complex<double> s{0.0, 0.0};
  for (std::int64_t h = 1; h <= static_cast<std::int64_t>(std::floor(Y)); ++h) {
    for (std::int64_t x = static_cast<std::int64_t>(std::floor(X)) + 1;
         x <= static_cast<std::int64_t>(std::floor(2.0 * X)); ++x) {
      const long double m = static_cast<long double>(h) *
                            (3.0L * x * x + 3.0L * x * h + static_cast<long double>(h) * h);
      const long double ph = static_cast<long double>(alpha) * m;
      s += std::polar(1.0, static_cast<double>(PI2 * (ph - std::floor(ph))));
    }
  }
  return s;
}

complex<double> oracle_Fw(double alpha, double P, const std::vector<std::uint64_t>& wp) {
  const double H = std::sqrt(P);
  complex<double> s{0.0, 0.0};
  for (std::int64_t h = 1; h <= static_cast<std::int64_t>(std::floor(H)); ++h) {
    for (std::int64_t x = static_cast<std::int64_t>(std::floor(P)) + 1;
         x <= static_cast<std::int64_t>(std::floor(2.0 * P)); ++x) {
      const std::uint64_t g = std::gcd<std::uint64_t>(x, h);
      bool coprime = true;
      for (std::uint64_t p : wp) {
        if (g % p == 0) {
          coprime = false;
          break;
        }
      }
      if (!coprime) continue;
      const long double m = static_cast<long double>(h) *
                            (3.0L * x * x + 3.0L * x * h + static_cast<long double>(h) * h);
      const long double ph = static_cast<long double>(alpha) * m;
      s += std::polar(1.0, static_cast<double>(PI2 * (ph - std::floor(ph))));
    }
  }
  return s;
}

}  // namespace

TEST_CASE("quad_f examples") {
  CHECK(weyl::quad_f(0.0, 0.0, 10.5).value.real() == doctest::Approx(10.0));
  CHECK(std::abs(weyl::quad_f(0.5, 0.0, 4.0).value) < 1e-12);
  const auto v = weyl::quad_f(1.0 / 3.0, 1.0 / 7.0, 100.0);
  CHECK(std::abs(v.value - oracle_f(1.0 / 3.0, 1.0 / 7.0, 100.0)) < 1e-10);
  CHECK(std::abs(v.value) <= 100.0);
  CHECK(v.terms == 100);
}

TEST_CASE("quad_g examples and relation to quad_f") {
  CHECK(weyl::quad_g(0.0, 0.0, 10.0).value.real() == doctest::Approx(10.0));
  CHECK(std::abs(weyl::quad_g(0.5, 0.0, 10.0).value) < 1e-12);
  std::mt19937_64 gen(3);
  for (int i = 0; i < 50; ++i) {
    const double a1 = uniform01(gen), a2 = uniform01(gen);
    const double X = 1.0 + 500.0 * uniform01(gen);
    const auto g = weyl::quad_g(a1, a2, X);
    const auto f2 = weyl::quad_f(a1, a2, 2.0 * X);
    const auto f1 = weyl::quad_f(a1, a2, X);
    REQUIRE(std::abs(g.value - (f2.value - f1.value)) <= 1e-9 * X);
  }
  const auto v = weyl::quad_g(0.1, 0.01, 50.0);
  CHECK(std::abs(v.value - (oracle_f(0.1, 0.01, 100.0) - oracle_f(0.1, 0.01, 50.0))) < 1e-10);
}

TEST_CASE("rotor matches per-term oracle at full accuracy") {
  std::mt19937_64 gen(5);
  for (int i = 0; i < 30; ++i) {
    const double a1 = uniform01(gen) * 3.0 - 1.5;
    const double a2 = uniform01(gen) * 3.0 - 1.5;
    const double X = 2000.0 + 3000.0 * uniform01(gen);
    const auto v = weyl::quad_f(a1, a2, X);
    REQUIRE(std::abs(v.value - oracle_f(a1, a2, X)) < 1e-8);
  }
}

TEST_CASE("cubic_G examples") {
  CHECK(weyl::cubic_G(0.0, 100.0, 10.0).value.real() == doctest::Approx(1000.0));
  // integer alpha: all phases integral
  CHECK(weyl::cubic_G(1.0, 100.0, 10.0).value.real() == doctest::Approx(1000.0));
  const auto v = weyl::cubic_G(1.0 / 7.0, 20.0, 4.0);
  CHECK(std::abs(v.value - oracle_G(1.0 / 7.0, 20.0, 4.0)) < 1e-10);
  CHECK(v.terms == 80);
  CHECK(std::abs(v.value) <= 80.0 + 1e-9);
  bool ok = true;
  weyl::cubic_G(0.5, 10.0, 25.0, 1, &ok);
  CHECK_FALSE(ok);  // Y > X flagged, evaluation still returned
  weyl::cubic_G(0.5, 25.0, 10.0, 1, &ok);
  CHECK(ok);
}

TEST_CASE("cubic_G agrees with oracle on large phases (two-float anchors)") {
  std::mt19937_64 gen(7);
  for (int i = 0; i < 8; ++i) {
    const double alpha = uniform01(gen);
    const auto g = weyl::cubic_G(alpha, 3000.0, 54.0);
    const auto want = oracle_G(alpha, 3000.0, 54.0);
    // phases reach ~5e12 turns; the long-double oracle keeps ~1e-6 turn
    REQUIRE(std::abs(g.value - want) < 1e-3);
  }
}

TEST_CASE("cubic_G is bit-identical across thread counts") {
  const double alpha = 0.1234567890123;
  const auto a = weyl::cubic_G(alpha, 2000.0, 44.0, 1);
  const auto b = weyl::cubic_G(alpha, 2000.0, 44.0, 4);
  const auto c = weyl::cubic_G(alpha, 2000.0, 44.0, 7);
  CHECK(a.value.real() == b.value.real());
  CHECK(a.value.imag() == b.value.imag());
  CHECK(a.value.real() == c.value.real());
  CHECK(a.value.imag() == c.value.imag());
}

TEST_CASE("F_w counting examples at alpha = 0") {
  const auto w1 = weyl::WeylParams::make(100.0, nt::SquarefreeModulus::one());
  CHECK(weyl::f_w_direct(0.0, w1).value.real() == doctest::Approx(1000.0));
  const auto w2 = weyl::WeylParams::make(100.0, nt::SquarefreeModulus::integer(2));
  CHECK(weyl::f_w_direct(0.0, w2).value.real() == doctest::Approx(750.0));
  CHECK(weyl::f_w_mobius(0.0, w2).value.real() == doctest::Approx(750.0));
}

TEST_CASE("F_w with w = 1 equals cubic_G") {
  const auto params = weyl::WeylParams::make(400.0, nt::SquarefreeModulus::one());
  for (double alpha : {0.17, 0.3141, 0.9231}) {
    const auto lhs = weyl::f_w_mobius(alpha, params);
    const auto rhs = weyl::cubic_G(alpha, 400.0, 20.0);
    CHECK(lhs.value.real() == rhs.value.real());
    CHECK(lhs.value.imag() == rhs.value.imag());
  }
}

TEST_CASE("Moebius identity: F_w_direct equals F_w_mobius") {
  std::mt19937_64 gen(9);
  for (double P : {400.0, 2500.0}) {
    const double HP = std::sqrt(P) * P;
    for (std::uint64_t wv : {1ULL, 2ULL, 6ULL, 30ULL, 210ULL}) {
      const auto params = weyl::WeylParams::make(P, nt::SquarefreeModulus::integer(wv));
      for (int i = 0; i < 6; ++i) {
        const double alpha = uniform01(gen);
        const auto direct = weyl::f_w_direct(alpha, params);
        const auto mob = weyl::f_w_mobius(alpha, params);
        REQUIRE(std::abs(direct.value - mob.value) <= 1e-8 * HP);
      }
    }
    // primorial w as well
    const auto params = weyl::WeylParams::make(P, nt::SquarefreeModulus::primorial(11.0));
    for (int i = 0; i < 4; ++i) {
      const double alpha = uniform01(gen);
      REQUIRE(std::abs(weyl::f_w_direct(alpha, params).value -
                       weyl::f_w_mobius(alpha, params).value) <= 1e-8 * HP);
    }
  }
  // direct double-loop oracle at P = 400, w = 30
  const auto p400 = weyl::WeylParams::make(400.0, nt::SquarefreeModulus::integer(30));
  const auto got = weyl::f_w_direct(0.123, p400);
  CHECK(std::abs(got.value - oracle_Fw(0.123, 400.0, {2, 3, 5})) < 1e-9);
}

TEST_CASE("conjugation and periodicity of F_w") {
  const auto params = weyl::WeylParams::make(900.0, nt::SquarefreeModulus::integer(6));
  const double HP = 30.0 * 900.0;
  std::mt19937_64 gen(11);
  for (int i = 0; i < 10; ++i) {
    const double alpha = uniform01(gen);
    const auto plus = weyl::f_w_direct(alpha, params);
    const auto minus = weyl::f_w_direct(-alpha, params);
    REQUIRE(std::abs(minus.value - std::conj(plus.value)) <= 1e-9 * HP);
  }
  // exact periodicity on dyadic alphas (alpha + 1 representable exactly)
  for (int k = 1; k < 8; ++k) {
    const double alpha = static_cast<double>(k) / 16.0;
    const auto base = weyl::f_w_direct(alpha, params);
    const auto shifted = weyl::f_w_direct(alpha + 1.0, params);
    REQUIRE(base.value.real() == shifted.value.real());
    REQUIRE(base.value.imag() == shifted.value.imag());
  }
}

TEST_CASE("Lemma 6.1 envelope: fitted constant stable across X (small pilot)") {
  std::mt19937_64 gen(13);
  std::vector<double> xs{1024.0, 4096.0};
  std::vector<double> fitted;
  for (double X : xs) {
    const double Y = std::floor(std::sqrt(X));
    double worst = 0.0;
    for (int i = 0; i < 60; ++i) {
      const std::uint64_t q = 2 + uniform_below(gen, static_cast<std::uint64_t>(X));
      std::uint64_t a = 1 + uniform_below(gen, q);
      while (std::gcd(a, q) != 1) a = 1 + uniform_below(gen, q);
      const double theta = (uniform01(gen) * 2.0 - 1.0) / (static_cast<double>(q) * q);
      double alpha = static_cast<double>(a) / static_cast<double>(q) + theta;
      alpha -= std::floor(alpha);
      const auto g = weyl::cubic_G(alpha, X, Y);
      const double qd = static_cast<double>(q);
      const double env = (X * Y / std::sqrt(qd) + std::sqrt(X) * Y +
                          std::sqrt(Y * qd)) *
                         std::pow(qd * X, 0.1);
      worst = std::max(worst, std::abs(g.value) / env);
    }
    fitted.push_back(worst);
  }
  MESSAGE("Lemma 6.1 pilot constants: ", fitted[0], " ", fitted[1]);
  CHECK(major::log_slope(xs, fitted) < 0.15);
  CHECK(fitted[0] < 2.0);
  CHECK(fitted[1] < 2.0);
}

TEST_CASE("WeylParams validates") {
  CHECK_THROWS_AS(weyl::WeylParams::make(0.5, nt::SquarefreeModulus::one()),
                  std::invalid_argument);
  const auto p = weyl::WeylParams::make(256.0, nt::SquarefreeModulus::one());
  CHECK(p.H == 16.0);
}
