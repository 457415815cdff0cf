#include "cubexp/sumset.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "cubexp/base.hpp"
#include "cubexp/ntheory.hpp"

namespace cubexp::sets {

namespace {

void check_n(std::uint64_t N) {
  if (N < 2) throw std::invalid_argument("IntegerSet: N must be >= 2");
}

void finalize(IntegerSet& s) {
  std::sort(s.elements.begin(), s.elements.end());
  s.elements.erase(std::unique(s.elements.begin(), s.elements.end()),
                   s.elements.end());
}

bool pow_leq(std::uint64_t base, int k, unsigned __int128 cap) {
  unsigned __int128 v = 1;
  for (int i = 0; i < k; ++i) {
    v *= base;
    if (v > cap) return false;
  }
  return v <= cap;
}

}  // namespace

std::uint64_t integer_root(std::uint64_t n, int k) {
  if (k < 1) throw std::invalid_argument("integer_root: k must be >= 1");
  if (n == 0) return 0;
  auto r = static_cast<std::uint64_t>(std::pow(static_cast<double>(n),
                                               1.0 / static_cast<double>(k)));
  while (r > 0 && !pow_leq(r, k, n)) --r;
  while (pow_leq(r + 1, k, n)) ++r;
  return r;
}

std::uint64_t cube_parameter(std::uint64_t N) {
  // largest P with P^5 <= N^2
  const unsigned __int128 n2 = static_cast<unsigned __int128>(N) * N;
  auto P = static_cast<std::uint64_t>(std::pow(static_cast<double>(N), 0.4));
  while (P > 0 && !pow_leq(P, 5, n2)) --P;
  while (pow_leq(P + 1, 5, n2)) ++P;
  return P;
}

std::vector<std::uint64_t> prime_window(std::uint64_t P) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p : nt::primes_up_to(static_cast<double>(2 * P))) {
    if (p > P) out.push_back(p);
  }
  return out;
}

IntegerSet generate_kth_powers(int k, std::uint64_t N) {
  check_n(N);
  if (k < 2) throw std::invalid_argument("generate_kth_powers: k must be >= 2");
  IntegerSet s;
  s.N = N;
  s.label = "powers_k" + std::to_string(k);
  for (std::uint64_t x = 1; x <= integer_root(N, k); ++x) {
    unsigned __int128 v = 1;
    for (int i = 0; i < k; ++i) v *= x;
    s.elements.push_back(static_cast<std::uint64_t>(v));
  }
  return s;
}

IntegerSet generate_two_cubes(std::uint64_t N) {
  check_n(N);
  IntegerSet s;
  s.N = N;
  s.label = "two_cubes";
  const std::uint64_t xmax = integer_root(N, 3);
  for (std::uint64_t x = 1; x <= xmax; ++x) {
    const std::uint64_t x3 = x * x * x;
    for (std::uint64_t y = x; y <= xmax; ++y) {
      const std::uint64_t v = x3 + y * y * y;
      if (v > N) break;
      s.elements.push_back(v);
    }
  }
  finalize(s);
  return s;
}

IntegerSet generate_random_density(double delta, std::uint64_t seed,
                                   std::uint64_t N) {
  check_n(N);
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw std::invalid_argument("generate_random_density: delta must be in (0,1]");
  }
  IntegerSet s;
  s.N = N;
  s.label = "random_density";
  std::mt19937_64 gen(seed);
  // Bernoulli with p(n) = min(1, delta n^{delta-1}); expected count ~ N^delta.
  for (std::uint64_t n = 1; n <= N; ++n) {
    const double p = std::min(
        1.0, delta * std::pow(static_cast<double>(n), delta - 1.0));
    if (uniform01(gen) < p) s.elements.push_back(n);
  }
  return s;
}

IntegerSet generate_explicit(std::vector<std::uint64_t> values, std::uint64_t N) {
  check_n(N);
  IntegerSet s;
  s.N = N;
  s.label = "explicit";
  for (std::uint64_t v : values) {
    if (v == 0 || v > N) {
      throw std::invalid_argument("generate_explicit: elements must lie in [1,N]");
    }
  }
  s.elements = std::move(values);
  finalize(s);
  return s;
}

RhoCounts rho_counts(const IntegerSet& Z, std::uint64_t N) {
  check_n(N);
  RhoCounts rc;
  rc.P = cube_parameter(N);
  const auto primes = prime_window(rc.P);
  rc.prime_count = primes.size();
  for (std::uint64_t p : primes) {
    const std::uint64_t p3 = p * p * p;
    for (std::uint64_t z : Z.elements) ++rc.counts[p3 + z];
  }
  for (const auto& [n, c] : rc.counts) {
    rc.M1 += c;
    rc.M2 += c * c;
  }
  return rc;
}

std::uint64_t theta_count(const IntegerSet& Z, std::uint64_t N) {
  check_n(N);
  const std::uint64_t P = cube_parameter(N);
  std::vector<std::uint64_t> values;
  values.reserve(Z.elements.size() * static_cast<std::size_t>(P + 1));
  for (std::uint64_t x = P + 1; x <= 2 * P; ++x) {
    const std::uint64_t x3 = x * x * x;
    for (std::uint64_t z : Z.elements) values.push_back(x3 + z);
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values.size();
}

std::uint64_t m2_equation_count(const IntegerSet& Z, std::uint64_t N) {
  check_n(N);
  const std::uint64_t P = cube_parameter(N);
  const auto primes = prime_window(P);
  // histogram of z1 - z2 (signed)
  std::unordered_map<std::int64_t, std::uint64_t> zdiff;
  for (std::uint64_t z1 : Z.elements) {
    for (std::uint64_t z2 : Z.elements) {
      ++zdiff[static_cast<std::int64_t>(z1) - static_cast<std::int64_t>(z2)];
    }
  }
  std::uint64_t count = 0;
  for (std::uint64_t p1 : primes) {
    for (std::uint64_t p2 : primes) {
      const std::int64_t d = static_cast<std::int64_t>(p1 * p1 * p1) -
                             static_cast<std::int64_t>(p2 * p2 * p2);
      if (auto it = zdiff.find(d); it != zdiff.end()) count += it->second;
    }
  }
  return count;
}

MomentReport run_expander(const IntegerSet& Z, std::uint64_t N) {
  const RhoCounts rc = rho_counts(Z, N);
  MomentReport r;
  r.N = N;
  r.P = rc.P;
  r.Z = Z.elements.size();
  r.prime_count = rc.prime_count;
  r.M1 = rc.M1;
  r.M2 = rc.M2;
  r.Theta = theta_count(Z, N);
  r.cauchy_lb = rc.M2 ? static_cast<double>(rc.M1) * static_cast<double>(rc.M1) /
                            static_cast<double>(rc.M2)
                      : 0.0;
  return r;
}

std::map<std::uint64_t, std::uint64_t> r_counts(const IntegerSet& A,
                                                std::uint64_t N, int k) {
  check_n(N);
  if (k < 2) throw std::invalid_argument("r_counts: k must be >= 2");
  std::map<std::uint64_t, std::uint64_t> out;
  const std::uint64_t xmax = integer_root(N, k);
  for (std::uint64_t x = 1; x <= xmax; ++x) {
    unsigned __int128 xk = 1;
    for (int i = 0; i < k; ++i) xk *= x;
    for (std::uint64_t a : A.elements) {
      if (a > N) break;
      ++out[static_cast<std::uint64_t>(xk) + a];
    }
  }
  return out;
}

double density_estimate(const IntegerSet& B, std::uint64_t N) {
  check_n(N);
  std::uint64_t count = 0;
  for (std::uint64_t b : B.elements) {
    if (b <= N) ++count;
  }
  if (count == 0) return -std::numeric_limits<double>::infinity();
  return std::log(static_cast<double>(count)) / std::log(static_cast<double>(N));
}

std::vector<BoundRow> bound_table(const std::vector<double>& deltas) {
  std::vector<BoundRow> rows;
  rows.reserve(deltas.size());
  for (double d : deltas) {
    if (!(d >= 0.0 && d <= 1.0)) {
      throw std::invalid_argument("bound_table: delta must lie in [0,1]");
    }
    BoundRow row;
    row.delta = d;
    row.davenport = (1.0 / 3.0) * (1.0 + 4.0 * d / (1.0 + d));
    row.davenport_in_range = (d >= 1.0 / 3.0 && d < 1.0);
    row.new_bound = d >= 0.8 ? 1.0 : 1.0 / 3.0 + 5.0 * d / 6.0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace cubexp::sets
