#include "cubexp/ntheory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cubexp::nt {

namespace {

constexpr std::uint64_t kTrialLimit = 1'000'000;  // trial division cutoff

std::uint64_t addmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  a %= m;
  b %= m;
  const std::uint64_t r = a + b;
  return (r >= m || r < a) ? r - m : r;
}

// Brent-cycle Pollard rho; deterministic (fixed start, increasing offset).
std::uint64_t pollard_rho(std::uint64_t n) {
  if (n % 2 == 0) return 2;
  for (std::uint64_t c = 1;; ++c) {
    std::uint64_t x = 2, y = 2, d = 1;
    std::uint64_t power = 1, lam = 1;
    while (d == 1) {
      if (power == lam) {
        x = y;
        power *= 2;
        lam = 0;
      }
      y = addmod(mulmod(y, y, n), c, n);
      ++lam;
      const std::uint64_t diff = x > y ? x - y : y - x;
      d = std::gcd(diff, n);
    }
    if (d != n) return d;
  }
}

void factor_into(std::uint64_t n, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  const std::uint64_t d = pollard_rho(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(
      static_cast<unsigned __int128>(a % m) * (b % m) % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL,
                          19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  // Deterministic Miller-Rabin for 64-bit inputs with the first twelve
  // prime bases.
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL,
                          19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 0; i + 1 < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

Factorization Factorization::of(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("factorize: n must be positive");
  Factorization f;
  f.value_ = n;
  std::vector<std::uint64_t> primes;
  for (std::uint64_t p = 2; p <= kTrialLimit && p * p <= n; p += (p == 2 ? 1 : 2)) {
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  }
  if (n > 1) factor_into(n, primes);
  std::sort(primes.begin(), primes.end());
  for (std::uint64_t p : primes) {
    if (!f.factors_.empty() && f.factors_.back().prime == p) {
      ++f.factors_.back().exponent;
    } else {
      f.factors_.push_back({p, 1});
    }
  }
  return f;
}

Factorization factorize(std::uint64_t n) { return Factorization::of(n); }

bool Factorization::squarefree() const {
  for (const auto& pf : factors_) {
    if (pf.exponent > 1) return false;
  }
  return true;
}

std::uint64_t Factorization::tau() const {
  std::uint64_t t = 1;
  for (const auto& pf : factors_) t *= static_cast<std::uint64_t>(pf.exponent) + 1;
  return t;
}

std::uint64_t Factorization::phi() const {
  std::uint64_t r = 1;
  for (const auto& pf : factors_) {
    std::uint64_t pe = 1;
    for (int i = 1; i < pf.exponent; ++i) pe *= pf.prime;
    r *= pe * (pf.prime - 1);
  }
  return r;
}

std::vector<std::uint64_t> primes_up_to(double bound) {
  std::vector<std::uint64_t> out;
  if (!(bound >= 2.0)) return out;
  const auto n = static_cast<std::uint64_t>(std::floor(bound));
  std::vector<bool> composite(n + 1, false);
  for (std::uint64_t p = 2; p <= n; ++p) {
    if (composite[p]) continue;
    out.push_back(p);
    for (std::uint64_t m = p * p; m <= n; m += p) composite[m] = true;
  }
  return out;
}

int mobius(std::uint64_t n) {
  const Factorization f = Factorization::of(n);
  if (!f.squarefree()) return 0;
  return (f.omega() % 2 == 0) ? 1 : -1;
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
  const Factorization f = Factorization::of(n);
  std::vector<std::uint64_t> out{1};
  for (const auto& pf : f.factors()) {
    const std::size_t sz = out.size();
    std::uint64_t pe = 1;
    for (int e = 1; e <= pf.exponent; ++e) {
      pe *= pf.prime;
      for (std::size_t i = 0; i < sz; ++i) out.push_back(out[i] * pe);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t totient(std::uint64_t n) { return Factorization::of(n).phi(); }
std::uint64_t tau(std::uint64_t n) { return Factorization::of(n).tau(); }
int omega(std::uint64_t n) { return Factorization::of(n).omega(); }

PrimorialSpec PrimorialSpec::up_to(double bound) {
  PrimorialSpec s;
  s.bound = bound;
  s.primes = primes_up_to(bound);
  return s;
}

bool coprime_to_primorial(std::uint64_t x, std::uint64_t h,
                          const PrimorialSpec& spec) {
  if (x == 0 || h == 0) throw std::invalid_argument("coprime_to_primorial: x, h >= 1");
  const std::uint64_t g = std::gcd(x, h);
  if (g == 1) return true;
  for (std::uint64_t p : spec.primes) {
    if (p > g) break;
    if (g % p == 0) return false;
  }
  return true;
}

SquarefreeModulus SquarefreeModulus::integer(std::uint64_t w) {
  if (w == 0) throw std::invalid_argument("SquarefreeModulus: w must be positive");
  const Factorization f = Factorization::of(w);
  if (!f.squarefree()) {
    throw std::invalid_argument("SquarefreeModulus: w must be squarefree");
  }
  SquarefreeModulus m;
  for (const auto& pf : f.factors()) m.primes_.push_back(pf.prime);
  return m;
}

SquarefreeModulus SquarefreeModulus::primorial(double bound) {
  SquarefreeModulus m;
  m.primes_ = primes_up_to(bound);
  return m;
}

SquarefreeModulus SquarefreeModulus::from_spec(const PrimorialSpec& spec) {
  SquarefreeModulus m;
  m.primes_ = spec.primes;
  return m;
}

SquarefreeModulus SquarefreeModulus::from_primes(std::vector<std::uint64_t> primes) {
  std::sort(primes.begin(), primes.end());
  SquarefreeModulus m;
  m.primes_ = std::move(primes);
  return m;
}

bool SquarefreeModulus::has_prime(std::uint64_t p) const {
  return std::binary_search(primes_.begin(), primes_.end(), p);
}

std::uint64_t SquarefreeModulus::value_if_small() const {
  unsigned __int128 v = 1;
  for (std::uint64_t p : primes_) {
    v *= p;
    if (v > static_cast<unsigned __int128>(UINT64_MAX)) return 0;
  }
  return static_cast<std::uint64_t>(v);
}

std::vector<std::uint64_t> SquarefreeModulus::shared_primes(std::uint64_t q) const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p : primes_) {
    if (p > q) break;
    if (q % p == 0) out.push_back(p);
  }
  return out;
}

std::uint64_t SquarefreeModulus::constraining_part(std::uint64_t h) const {
  std::uint64_t g = 1;
  for (std::uint64_t p : primes_) {
    if (p > h) break;
    if (h % p == 0) {
      if (g > UINT64_MAX / p) return 0;
      g *= p;
    }
  }
  return g;
}

void SquarefreeModulus::for_each_divisor_up_to(
    std::uint64_t limit,
    const std::function<void(std::uint64_t, int)>& visit) const {
  if (limit == 0) return;
  // DFS over prime subsets; primes are sorted so once p > limit/d the
  // subtree is dead.
  std::function<void(std::size_t, std::uint64_t, int)> rec =
      [&](std::size_t idx, std::uint64_t d, int mu) {
        visit(d, mu);
        for (std::size_t i = idx; i < primes_.size(); ++i) {
          const std::uint64_t p = primes_[i];
          if (p > limit / d) break;
          rec(i + 1, d * p, -mu);
        }
      };
  rec(0, 1, 1);
}

std::string SquarefreeModulus::describe() const {
  if (primes_.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    if (i) s += '*';
    s += std::to_string(primes_[i]);
  }
  return s;
}

}  // namespace cubexp::nt
