// The sumset-expansion counting experiment. With P the largest integer
// satisfying P^5 <= N^2 (so P = floor(N^{2/5})) and primes taken from
// (P, 2P]:
//
//   rho(n,N) = #{ (p,z) : p prime in (P,2P], z in Z, p^3 + z = n }
//   M1 = sum rho(n),  M2 = sum rho(n)^2
//   Theta(N) = #distinct values of x^3 + z over integers P < x <= 2P, z in Z
//
// Identities kept exact: M1 = |Z| * pi((P,2P]); Theta * M2 >= M1^2
// (Cauchy); M2 equals the number of solutions of p1^3 - p2^3 = z1 - z2.
//
// r(n,N) = #{ (a,x) : x^k + a = n, a in A, a <= N, x <= N^{1/k} } and the
// density/bound tables compare the Davenport lower bound
// (1/3)(1 + 4 delta/(1+delta)) with min(1, 1/3 + 5 delta / 6).
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace cubexp::sets {

struct IntegerSet {
  std::uint64_t N = 0;
  std::vector<std::uint64_t> elements;  // sorted, unique, all in [1, N]
  std::string label;
};

IntegerSet generate_kth_powers(int k, std::uint64_t N);
IntegerSet generate_two_cubes(std::uint64_t N);  // taxicab collisions deduplicated
IntegerSet generate_random_density(double delta, std::uint64_t seed, std::uint64_t N);
IntegerSet generate_explicit(std::vector<std::uint64_t> values, std::uint64_t N);

// Largest P with P^5 <= N^2, exactly.
std::uint64_t cube_parameter(std::uint64_t N);
// Primes in (P, 2P].
std::vector<std::uint64_t> prime_window(std::uint64_t P);

struct RhoCounts {
  std::uint64_t P = 0;
  std::uint64_t prime_count = 0;
  std::map<std::uint64_t, std::uint64_t> counts;  // n -> rho(n,N)
  std::uint64_t M1 = 0;
  std::uint64_t M2 = 0;
};

RhoCounts rho_counts(const IntegerSet& Z, std::uint64_t N);

std::uint64_t theta_count(const IntegerSet& Z, std::uint64_t N);

// M2 recomputed as the number of solutions of p1^3 - p2^3 = z1 - z2;
// independent route for the histogram identity.
std::uint64_t m2_equation_count(const IntegerSet& Z, std::uint64_t N);

struct MomentReport {
  std::uint64_t N = 0;
  std::uint64_t P = 0;
  std::uint64_t Z = 0;
  std::uint64_t prime_count = 0;
  std::uint64_t M1 = 0;
  std::uint64_t M2 = 0;
  std::uint64_t Theta = 0;
  double cauchy_lb = 0.0;  // M1^2 / M2
};

MomentReport run_expander(const IntegerSet& Z, std::uint64_t N);

std::map<std::uint64_t, std::uint64_t> r_counts(const IntegerSet& A,
                                                std::uint64_t N, int k);

// log(#B cap [1,N]) / log N; -inf for an empty set.
double density_estimate(const IntegerSet& B, std::uint64_t N);

struct BoundRow {
  double delta = 0.0;
  double davenport = 0.0;
  bool davenport_in_range = false;  // stated for 1/3 <= delta < 1
  double new_bound = 0.0;
};

std::vector<BoundRow> bound_table(const std::vector<double>& deltas);

std::uint64_t integer_root(std::uint64_t n, int k);  // floor(n^{1/k}), exact

}  // namespace cubexp::sets
