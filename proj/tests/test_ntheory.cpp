#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "cubexp/base.hpp"
#include "cubexp/ntheory.hpp"

using namespace cubexp;

namespace {

// Independent trial-division oracle.
std::vector<std::pair<std::uint64_t, int>> naive_factor(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, int>> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::vector<std::uint64_t> naive_primes(std::uint64_t bound) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 2; n <= bound; ++n) {
    bool prime = true;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
      if (n % d == 0) {
        prime = false;
        break;
      }
    }
    if (prime) out.push_back(n);
  }
  return out;
}

}  // namespace

TEST_CASE("factorize basic examples") {
  CHECK(nt::factorize(1).factors().empty());
  const auto f12 = nt::factorize(12).factors();
  REQUIRE(f12.size() == 2);
  CHECK(f12[0].prime == 2);
  CHECK(f12[0].exponent == 2);
  CHECK(f12[1].prime == 3);
  CHECK(f12[1].exponent == 1);
  const auto f97 = nt::factorize(97).factors();
  REQUIRE(f97.size() == 1);
  CHECK(f97[0].prime == 97);
  CHECK(f97[0].exponent == 1);
  CHECK_THROWS_AS(nt::factorize(0), std::invalid_argument);
}

TEST_CASE("factorize agrees with trial division, invariants hold") {
  std::mt19937_64 gen(7);
  for (int i = 0; i < 300; ++i) {
    const std::uint64_t n = 1 + uniform_below(gen, 5'000'000);
    const auto got = nt::factorize(n);
    const auto want = naive_factor(n);
    REQUIRE(got.factors().size() == want.size());
    std::uint64_t prod = 1;
    std::uint64_t prev = 0;
    for (std::size_t k = 0; k < want.size(); ++k) {
      CHECK(got.factors()[k].prime == want[k].first);
      CHECK(got.factors()[k].exponent == want[k].second);
      CHECK(got.factors()[k].prime > prev);
      prev = got.factors()[k].prime;
      for (int e = 0; e < got.factors()[k].exponent; ++e) prod *= got.factors()[k].prime;
    }
    CHECK(prod == n);
  }
}

TEST_CASE("factorize handles 63-bit semiprimes") {
  // 2^31-1 and 2^61-1 are Mersenne primes
  const std::uint64_t p = 2147483647ULL;
  const auto f = nt::factorize(p * p);
  REQUIRE(f.factors().size() == 1);
  CHECK(f.factors()[0].prime == p);
  CHECK(f.factors()[0].exponent == 2);
  CHECK(nt::is_prime(2305843009213693951ULL));
}

TEST_CASE("mobius examples and divisor-sum identity") {
  CHECK(nt::mobius(1) == 1);
  CHECK(nt::mobius(6) == 1);
  CHECK(nt::mobius(12) == 0);
  CHECK_THROWS_AS(nt::mobius(0), std::invalid_argument);
  // sum_{d | n} mu(d) = [n == 1] for all n <= 1e5
  for (std::uint64_t n = 1; n <= 100'000; ++n) {
    int s = 0;
    for (std::uint64_t d : nt::divisors(n)) s += nt::mobius(d);
    REQUIRE(s == (n == 1 ? 1 : 0));
  }
}

TEST_CASE("divisors examples") {
  CHECK(nt::divisors(1) == std::vector<std::uint64_t>{1});
  CHECK(nt::divisors(12) == std::vector<std::uint64_t>{1, 2, 3, 4, 6, 12});
  CHECK(nt::divisors(49) == std::vector<std::uint64_t>{1, 7, 49});
  // brute-force scan oracle
  for (std::uint64_t n : {30ULL, 360ULL, 97ULL, 1024ULL}) {
    std::vector<std::uint64_t> want;
    for (std::uint64_t d = 1; d <= n; ++d) {
      if (n % d == 0) want.push_back(d);
    }
    CHECK(nt::divisors(n) == want);
  }
}

TEST_CASE("primes_up_to matches naive sieve") {
  CHECK(nt::primes_up_to(1).empty());
  CHECK(nt::primes_up_to(10) == std::vector<std::uint64_t>{2, 3, 5, 7});
  CHECK(nt::primes_up_to(30) ==
        std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
  CHECK(nt::primes_up_to(5000) == naive_primes(5000));
  CHECK(nt::primes_up_to(0.5).empty());
}

TEST_CASE("multiplicativity of mu, tau, omega, phi on coprime pairs") {
  std::mt19937_64 gen(11);
  int done = 0;
  while (done < 1000) {
    const std::uint64_t a = 1 + uniform_below(gen, 1'000'000);
    const std::uint64_t b = 1 + uniform_below(gen, 1'000'000);
    if (std::gcd(a, b) != 1) continue;
    ++done;
    REQUIRE(nt::mobius(a * b) == nt::mobius(a) * nt::mobius(b));
    REQUIRE(nt::tau(a * b) == nt::tau(a) * nt::tau(b));
    REQUIRE(nt::omega(a * b) == nt::omega(a) + nt::omega(b));
    REQUIRE(nt::totient(a * b) == nt::totient(a) * nt::totient(b));
  }
}

TEST_CASE("coprime_to_primorial examples") {
  const auto spec5 = nt::PrimorialSpec::up_to(5);
  CHECK_FALSE(nt::coprime_to_primorial(6, 10, spec5));  // 2 divides both
  CHECK(nt::coprime_to_primorial(6, 35, spec5));
  // gcd(22,33) = 11 has no prime factor <= 7
  const auto spec7 = nt::PrimorialSpec::up_to(7);
  CHECK(nt::coprime_to_primorial(22, 33, spec7));
}

TEST_CASE("coprime_to_primorial agrees with the literal gcd against prod p") {
  // For B <= 50 the primorial fits in 64 bits, so the literal test
  // gcd(gcd(x,h), prod_{p<=B} p) == 1 is computable directly.
  std::mt19937_64 gen(13);
  for (double bound : {2.0, 11.0, 29.0, 50.0}) {
    const auto spec = nt::PrimorialSpec::up_to(bound);
    unsigned __int128 prod = 1;
    for (std::uint64_t p : spec.primes) prod *= p;
    REQUIRE(prod <= static_cast<unsigned __int128>(UINT64_MAX));
    const auto varpi = static_cast<std::uint64_t>(prod);
    for (int i = 0; i < 2000; ++i) {
      const std::uint64_t x = 1 + uniform_below(gen, 10'000);
      const std::uint64_t h = 1 + uniform_below(gen, 10'000);
      const bool literal = std::gcd(std::gcd(x, h), varpi) == 1;
      REQUIRE(nt::coprime_to_primorial(x, h, spec) == literal);
    }
  }
}

TEST_CASE("squarefree modulus divisor walk") {
  const auto w = nt::SquarefreeModulus::integer(30);
  std::vector<std::pair<std::uint64_t, int>> seen;
  w.for_each_divisor_up_to(30, [&](std::uint64_t d, int mu) {
    seen.emplace_back(d, mu);
  });
  CHECK(seen.size() == 8);
  for (const auto& [d, mu] : seen) CHECK(mu == nt::mobius(d));

  // bounded walk prunes
  std::vector<std::uint64_t> small;
  w.for_each_divisor_up_to(6, [&](std::uint64_t d, int) { small.push_back(d); });
  std::sort(small.begin(), small.end());
  CHECK(small == std::vector<std::uint64_t>{1, 2, 3, 5, 6});

  CHECK_THROWS_AS(nt::SquarefreeModulus::integer(12), std::invalid_argument);
  CHECK(nt::SquarefreeModulus::primorial(11).primes() ==
        std::vector<std::uint64_t>{2, 3, 5, 7, 11});
}

namespace {

// Exact oracle: write alpha = s * 2^{-e} with integer s, reduce s*m mod 2^e
// in 128-bit arithmetic. Valid whenever e < 128.
double exact_frac_mul(double alpha, std::uint64_t m) {
  int exp2 = 0;
  const double f = std::frexp(alpha, &exp2);  // alpha = f * 2^exp2
  const auto s = static_cast<unsigned __int128>(std::ldexp(f, 53));
  const int e = 53 - exp2;
  REQUIRE(e > 0);
  REQUIRE(e < 128);
  const unsigned __int128 sm = s * m;
  const unsigned __int128 mask = (static_cast<unsigned __int128>(1) << e) - 1;
  const unsigned __int128 r = sm & mask;
  return static_cast<double>(static_cast<long double>(r) *
                             std::pow(2.0L, -static_cast<long double>(e)));
}

}  // namespace

TEST_CASE("frac_mul_int reduces giant phases correctly") {
  std::mt19937_64 gen(17);
  for (int i = 0; i < 5000; ++i) {
    const double alpha = std::max(uniform01(gen), 1e-6);
    const auto mu = uniform_below(gen, 1ULL << 62);
    const auto m = static_cast<std::int64_t>(mu);
    const double got = frac_mul_int(alpha, m);
    const double want = exact_frac_mul(alpha, mu);
    double diff = std::abs(got - want);
    diff = std::min(diff, 1.0 - diff);  // circular distance mod 1
    REQUIRE(diff < 1e-12);
    REQUIRE(got >= 0.0);
    REQUIRE(got < 1.0);
  }
  // exactness on integers
  CHECK(frac_mul_int(0.5, 4) == 0.0);
  CHECK(frac_mul_int(0.5, 3) == 0.5);
  CHECK(frac_mul_int(0.25, -3) == 0.25);
}
