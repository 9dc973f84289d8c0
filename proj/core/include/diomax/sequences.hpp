#pragma once
// Lacunary sequences and the residue-per-window construction.
//
// validate_lacunary certifies the minimal consecutive ratio c of a strictly
// increasing positive sequence; the sequence is lacunary iff c > 1.
//
// detect_regular_progression scans arithmetic progressions {q t + r} with
// q <= q_scan against a representation-count table and fits the restricted
// ratio r(lambda) / lambda^{n/k-1} along each.  A progression is a candidate
// when its fitted lower constant is positive; the selected progression is the
// shortest q (then smallest r) whose lower constant is within a factor eta of
// the best, so a dense form (spheres in dimension >= 5) selects the full
// integers rather than an incidental subclass with a slightly better minimum.
// The first few values of every progression are skipped: the regular range of
// a form is a tail property and small lambda are dominated by sporadic gaps.
//
// build_counterexample assigns the lexicographically first M residues b of
// (Z/p^J)^n to consecutive dyadic windows [2^{K+i-1}, 2^{K+i}) and picks, in
// window i, the lambda == Q(b^i) mod p^J maximizing the restricted count
// N(lambda; b^i, p^J).  The scan in window i is additionally floored at
// 2 lambda_{i-1} + 1, so the certified lacunarity constant exceeds 2 strictly
// (consecutive windows alone only give ratio > 1).  The window base K is the
// smallest value for which every window's maximizer passes the count bound
//   N(lambda; b) >= c0 * p^{-J(n-1)} * lambda^{n/k-1},
// found by doubling up and then decrementing; no closed formula for the
// threshold is available, so it is located empirically.

#include <cstdint>
#include <vector>

#include "diomax/common.hpp"
#include "diomax/counting.hpp"
#include "diomax/forms.hpp"

namespace diomax {

// ------------------------------------------------------------- lacunarity --

enum class SequenceProvenance { dyadic, user, counterexample };

struct LacunarySequence {
  std::vector<int64_t> terms;
  double c_min = 0.0;      // min consecutive ratio
  bool is_lacunary = false;  // c_min > 1, zero tolerance
  SequenceProvenance provenance = SequenceProvenance::user;
};

/// Certify a user-supplied sequence.  Throws input_error when the terms are
/// not strictly increasing positive integers or fewer than two.
LacunarySequence validate_lacunary(const std::vector<int64_t>& terms);

// -------------------------------------------------- regular-value scanning --

struct ProgressionCandidate {
  int64_t q = 0;
  int64_t r = 0;
  double lower_constant = 0.0;  // min of count / lambda^{n/k-1} over the scan
  double mean_constant = 0.0;
  int64_t samples = 0;
};

struct ProgressionScan {
  int64_t lambda_cap = 0;
  int64_t lambda_min = 0;  // smallest lambda admitted to the fits
  int64_t q_scan = 0;
  double eta = 0.0;
  std::vector<ProgressionCandidate> candidates;  // ordered by (q, r)
  int selected = -1;  // index into candidates, -1 when nothing is positive
};

/// Scan progressions {q t + r}, q <= q_scan, for regular-value behaviour.
/// Only the unit cutoff is supported: weighted counts would need per-lambda
/// enumeration, and the progression is a property of the plain counts.
ProgressionScan detect_regular_progression(const IntegralForm& form,
                                           const CutoffPsi& psi,
                                           int64_t lambda_cap,
                                           int64_t q_scan = 16,
                                           double eta = 0.5,
                                           WorkBudget* budget = nullptr);

// ------------------------------------------------- residue-window planning --

enum class WindowPolicy {
  doubling_search,  // smallest empirically feasible window base
  paper_faithful    // base K + J^2 and the full residue set; desk-infeasible
};

struct ResidueWindow {
  std::vector<int64_t> residue;  // b in [0, p^J)^n
  int window_index = 0;          // i >= 1; window is [2^{K+i-1}, 2^{K+i})
  int64_t lambda = 0;            // chosen lambda(b), == Q(b) mod p^J
  uint64_t count = 0;            // N(lambda; b, p^J)
  double ratio = 0.0;            // count / (p^{-J(n-1)} lambda^{n/k-1})
};

struct CounterexamplePlan {
  int64_t p = 0;
  int level = 0;       // J
  int64_t modulus = 0;  // p^J
  int prefix = 0;      // M, number of covered residues
  int window_base = 0;  // K
  double c0 = 0.0;
  double min_ratio = 0.0;         // min over residues of ResidueWindow::ratio
  double covered_fraction = 0.0;  // M / p^{Jn}
  std::vector<ResidueWindow> residues;
  LacunarySequence sequence;  // certified, c_min > 2
};

/// Build the residue-per-window plan.  window_base_override = 0 searches for
/// the base; a positive value pins it.  Throws budget_error when the windows
/// cannot fit below 2^62 (always the case for the paper_faithful policy at
/// interesting sizes), reporting the maximal feasible prefix length.
CounterexamplePlan build_counterexample(
    const IntegralForm& form, int64_t p, int level, int prefix,
    int window_base_override = 0,
    WindowPolicy policy = WindowPolicy::doubling_search, double c0 = 0.05,
    WorkBudget* budget = nullptr);

}  // namespace diomax
