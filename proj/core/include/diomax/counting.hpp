#pragma once
// Representation counting on the level sets {x in Z^n : Q(x) = lambda}.
//
//   r(lambda)            = #{Q(x) = lambda}                (psi == 1)
//   r_psi(lambda)        = sum_{Q(x)=lambda} psi(x/lambda^{1/k})
//   N(lambda; b, q)      = #{Q(x) = lambda, x == b mod q}
//   |V_lambda(d)|        = #{s in (Z/d)^n : Q(s) == lambda mod d}
//   ball(R; b, q)        = #{0 <= Q(x) <= R, x == b mod q}
//
// Two backends sit behind every count.  Brute force enumerates lattice
// points inside an exact coercivity box and is the trust anchor.  The
// convolution backend (diagonal forms) builds one array per coordinate,
//   h_i[m] = #{s == b_i mod q : c_i s^k = m},  0 <= m <= lambda_cap,
// and convolves the n arrays truncated at lambda_cap; it turns desk-scale
// window scans (lambda_cap ~ 2^20) into a few million integer operations.
// The unit tests cross-validate the two paths exactly.

#include <vector>

#include "diomax/common.hpp"
#include "diomax/forms.hpp"

namespace diomax {

/// Congruence restriction x == residues (mod modulus); modulus 1 = none.
struct Congruence {
  int64_t modulus = 1;
  std::vector<int64_t> residues;  // empty means all zero

  static Congruence none() { return {}; }
  static Congruence fix(int64_t q, std::vector<int64_t> b) {
    return {q, std::move(b)};
  }
  bool trivial() const { return modulus == 1; }
  int64_t residue(int i) const {
    return residues.empty() ? 0 : residues[size_t(i)];
  }
};

enum class CountBackend { automatic, brute_force, convolution };

/// Table of counts for lambda = 0..lambda_cap under a fixed congruence.
struct RepCountTable {
  int n = 0;
  int k = 0;
  Congruence congruence;
  int64_t lambda_cap = 0;
  CountBackend backend_used = CountBackend::automatic;
  std::vector<uint64_t> counts;  // index lambda

  uint64_t at(int64_t lambda) const {
    if (lambda < 0 || lambda > lambda_cap)
      throw input_error("RepCountTable: lambda out of range");
    return counts[size_t(lambda)];
  }
  /// sum of counts over 0 <= lambda <= R.
  uint64_t cumulative(int64_t R) const;
};

RepCountTable build_rep_table(const IntegralForm& form, int64_t lambda_cap,
                              const Congruence& congruence = Congruence::none(),
                              CountBackend backend = CountBackend::automatic,
                              WorkBudget* budget = nullptr);

/// Exact r(lambda) (integer) when psi is the unit cutoff; otherwise the
/// psi-weighted count over the enumerated solution set.
double count_representations(const IntegralForm& form, const CutoffPsi& psi,
                             int64_t lambda, WorkBudget* budget = nullptr);

/// All lattice solutions of Q(x) = lambda (points, not weights).  For forms
/// whose level sets are infinite (odd degree with sign changes) the cutoff
/// must confine the search: psi == positive_orthant restricts to x_i >= 0.
std::vector<std::vector<int64_t>> enumerate_solutions(
    const IntegralForm& form, int64_t lambda, const CutoffPsi& psi,
    WorkBudget* budget = nullptr);

/// |V_lambda(d)| = #{s in (Z/d)^n : Q(s) == lambda (mod d)}.
uint64_t count_mod(const IntegralForm& form, int64_t d, int64_t lambda,
                   WorkBudget* budget = nullptr);

/// All residue counts at once: entry r holds |V_r(d)| for r in [0, d).
/// The identity suite consumes whole rows, so this avoids d repeated sweeps.
std::vector<uint64_t> count_mod_all(const IntegralForm& form, int64_t d,
                                    WorkBudget* budget = nullptr);

/// #{x == b mod q : 0 <= Q(x) <= R}.
uint64_t count_ball(const IntegralForm& form, int64_t R,
                    const Congruence& congruence = Congruence::none(),
                    WorkBudget* budget = nullptr);

/// Phase-weighted level sum  sum_{Q(x)=lambda} psi(x/lambda^{1/k}) e(-x.xi).
/// This is r_psi(lambda) * omegahat_lambda(xi); the diagonal fast path runs
/// the counting convolution with complex per-coordinate weights.
cplx level_phase_sum(const IntegralForm& form, const CutoffPsi& psi,
                     int64_t lambda, const std::vector<double>& xi,
                     WorkBudget* budget = nullptr);

// --------------------------------------------------- asymptotic-count fits --

/// Fit of ball counts against C * R^{n/k} with a one-term error model:
/// leading coefficient from a two-term linear least squares (C, D) against
/// (R^{n/k}, R^{n/k-1}), then error exponent beta from the log-log fit of
/// |count - C R^{n/k}|.
struct LipschitzFit {
  double leading = 0.0;         // estimated C
  double error_exponent = 0.0;  // beta
  double error_correlation = 0.0;
  std::vector<int64_t> radii;
  std::vector<uint64_t> counts;
};

LipschitzFit lipschitz_fit(const IntegralForm& form,
                           const std::vector<int64_t>& radii,
                           const Congruence& congruence = Congruence::none(),
                           WorkBudget* budget = nullptr);

// ------------------------------------------------------- window maximizer --

/// Maximizer of N(lambda; b, p^J) over the dyadic window lambda in [R, 2R)
/// intersected with the forced class lambda == Q(b) mod p^J.  The certificate
/// compares the count against c0 * p^{-J(n-1)} * lambda^{n/k-1}.
struct WindowMaximizer {
  int64_t lambda = 0;
  uint64_t count = 0;
  double ratio = 0.0;  // count / (p^{-J(n-1)} lambda^{n/k-1})
  bool pass = false;   // ratio >= c0
};

WindowMaximizer window_count_maximizer(const IntegralForm& form, int64_t p,
                                       int J, const std::vector<int64_t>& b,
                                       int64_t R, double c0,
                                       WorkBudget* budget = nullptr);

}  // namespace diomax
