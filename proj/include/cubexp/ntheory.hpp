// Exact integer arithmetic: factorization (trial division + Pollard rho
// with deterministic Miller-Rabin), multiplicative functions, divisor
// enumeration, prime sieving, and primorial coprimality tests. All
// operations are pure and exact; no floating point enters this module.
#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace cubexp::nt {

struct PrimeFactor {
  std::uint64_t prime;
  int exponent;
};

// Prime-power decomposition: factors sorted by prime, product equals value.
class Factorization {
 public:
  static Factorization of(std::uint64_t n);  // rejects n = 0

  std::uint64_t value() const { return value_; }
  const std::vector<PrimeFactor>& factors() const { return factors_; }

  int omega() const { return static_cast<int>(factors_.size()); }
  bool squarefree() const;
  std::uint64_t tau() const;
  std::uint64_t phi() const;

 private:
  std::uint64_t value_ = 1;
  std::vector<PrimeFactor> factors_;
};

Factorization factorize(std::uint64_t n);

bool is_prime(std::uint64_t n);

// All primes p <= floor(bound); empty for bound < 2.
std::vector<std::uint64_t> primes_up_to(double bound);

int mobius(std::uint64_t n);                       // rejects n = 0
std::vector<std::uint64_t> divisors(std::uint64_t n);  // ascending, rejects 0
std::uint64_t totient(std::uint64_t n);
std::uint64_t tau(std::uint64_t n);
int omega(std::uint64_t n);

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m);

// The primorial of all primes <= bound, stored as its prime list; the
// integer product is never materialized.
struct PrimorialSpec {
  double bound = 0.0;
  std::vector<std::uint64_t> primes;

  static PrimorialSpec up_to(double bound);
};

// True iff no prime p <= spec.bound divides both x and h.
bool coprime_to_primorial(std::uint64_t x, std::uint64_t h,
                          const PrimorialSpec& spec);

// A squarefree modulus w held as its sorted prime list. Covers both a
// concrete squarefree integer and a primorial (product of all primes up
// to a bound) without ever forming the product, which overflows early.
class SquarefreeModulus {
 public:
  SquarefreeModulus() = default;  // w = 1

  static SquarefreeModulus one() { return SquarefreeModulus(); }
  static SquarefreeModulus integer(std::uint64_t w);  // rejects non-squarefree
  static SquarefreeModulus primorial(double bound);
  static SquarefreeModulus from_spec(const PrimorialSpec& spec);
  static SquarefreeModulus from_primes(std::vector<std::uint64_t> primes);

  bool is_one() const { return primes_.empty(); }
  const std::vector<std::uint64_t>& primes() const { return primes_; }
  bool has_prime(std::uint64_t p) const;
  // Product of the primes, or 0 if it does not fit in 64 bits.
  std::uint64_t value_if_small() const;
  // Primes of w that divide q.
  std::vector<std::uint64_t> shared_primes(std::uint64_t q) const;
  // Product of primes of w dividing h (the part of w that constrains x
  // when testing (x,h,w)=1); 0 if it overflows, which desk scale never hits.
  std::uint64_t constraining_part(std::uint64_t h) const;

  // Visit every squarefree divisor d | w with d <= limit as (d, mu(d)).
  // DFS over the prime list with pruning, so a primorial with many primes
  // costs only what its small divisors cost.
  void for_each_divisor_up_to(
      std::uint64_t limit,
      const std::function<void(std::uint64_t d, int mu)>& visit) const;

  std::string describe() const;

 private:
  std::vector<std::uint64_t> primes_;  // sorted ascending
};

}  // namespace cubexp::nt
