// Named experiment drivers shared by the command-line tool and the
// acceptance suite. Each driver runs a family of checks over its stated
// grid, records (name, observed, threshold, pass) per check, and emits
// optional CSV grids. All sampling is seeded and all reductions are
// fixed-order, so a rerun with the same configuration reproduces every
// numeric field bit-for-bit.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cubexp/report.hpp"

namespace cubexp::experiments {

struct Config {
  std::vector<double> p_grid;  // empty: per-command default
  double epsilon = 0.1;        // exponent in P^{1+eps} floors
  double tolerance_scale = 1.0;
  std::uint64_t seed = 1;
  int threads = 0;             // 0: hardware concurrency
  std::string out_dir;         // empty: no files written
};

// Exact identities: T = |U|^2, (H0)/(331), (337), (24), the Moebius
// identity (36), and the h-expansion rearrangement (38).
report::RunReport verify_identities(const Config& cfg);

// Exact vanishing and exact bounds: quadratic-sum vanishing, W(p^l, b)
// vanishing table, |W(p,b)| <= 4p, and the kappa envelope in exact
// arithmetic.
report::RunReport verify_vanishing(const Config& cfg);

// Fitted-constant envelope stability: quadratic-sum comparison ratio,
// |S| and |U| bounds, the J/K integral envelopes, the differenced Weyl
// sum envelope, and the gcd-weighted sum bound.
report::RunReport verify_envelopes(const Config& cfg);

// Major-arc residual |F_w - S(a/q,w) K(beta)| against the P^{1+eps}
// floor, over fraction/beta grids with q <= P^{1/4} and w in {1, 6,
// primorial}.
report::RunReport major_arc_residual(const Config& cfg);

// Envelope reports for |F_w| against H P log(P) Upsilon_w + P^{1+eps},
// minor-arc and near-rational samples, plus the cubic-modulus
// suppression case q = 27 with the primorial w.
report::RunReport theorem_envelope_report(const Config& cfg);

struct ExpanderSpec {
  std::uint64_t N = 1'000'000;
  std::string kind = "random";  // random | two-cubes | kth:<k> | explicit
  double delta = 0.5;
  int k = 2;
  std::vector<std::uint64_t> elements;  // for kind = explicit
};

report::RunReport expander_experiment(const ExpanderSpec& spec, const Config& cfg);

report::RunReport bound_table_grid(const std::vector<double>& deltas,
                                   const Config& cfg);

// Single-sum evaluation for the sum-eval command; returns the CSV row
// cells (alpha/arguments, re, im, terms).
struct SumEvalRequest {
  std::string sum;  // S U Ustar W T kappa f g G Fw Fw-direct I J K local-series
  double alpha = 0.0, alpha2 = 0.0;
  double beta1 = 0.0, beta2 = 0.0;
  double x = 0.0, y = 0.0;
  double p = 400.0;
  std::uint64_t q = 1;
  std::int64_t a = 0, a2 = 0, b = 0;
  std::string w = "1";
  int threads = 0;
};
std::vector<std::pair<std::string, std::string>> sum_eval(const SumEvalRequest& req);

// Parse "1", "6", "30", ... or "primorial" (all primes <= P^{1/4}).
struct WChoice {
  std::string name;
  bool primorial = false;
  std::uint64_t value = 1;
};
WChoice parse_w(const std::string& text);

}  // namespace cubexp::experiments
