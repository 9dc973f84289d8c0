#pragma once
// Normalized complete exponential (Weyl) sums attached to a form Q:
//
//   F_q(a, avec) = q^{-n} sum_{s in (Z/q)^n} e( (a*Q(s) + s.avec) / q )
//
// and the generalized variant with one denominator per linear coordinate,
//
//   F(a, q, avec, qvec) = L^{-n} sum_{s in (Z/L)^n}
//                             e( a*Q(s)/q + sum_i s_i * a_i / q_i ),
//   L = lcm(q, q_1, ..., q_n),
//
// which collapses to F_q when every q_i = q.  Phases are reduced exactly in
// integer arithmetic (numerator mod L) before the root-of-unity lookup, so
// the only floating-point error is the compensated accumulation itself.
//
// The decay data for a form is the per-modulus supremum
//
//   s(q) = sup_{a in U_q, avec in (Z/q)^n} |F_q(a, avec)|,
//
// whose envelope s(q) ~ q^{-alpha} defines the exponent estimated here.  For
// diagonal forms the supremum is exact: with a fixed, |F_q| factors into n
// one-dimensional sums and each factor is maximized over its own a_i by one
// length-q DFT.  (Only the sup over avec factors; a is shared, so the outer
// max still runs over all of U_q.)

#include <vector>

#include "diomax/common.hpp"
#include "diomax/forms.hpp"

namespace diomax {

/// F_q(a, avec), |value| <= 1, F_q(0,0) = 1.  Convention: U_1 = Z_1 = {0}.
cplx weyl_sum(const IntegralForm& form, int64_t q, int64_t a,
              const std::vector<int64_t>& avec, WorkBudget* budget = nullptr);

/// Generalized sum with per-coordinate denominators qvec; normalized by
/// L^{-n} with L = lcm(q, qvec).  Equals weyl_sum when qvec == (q,...,q).
cplx generalized_weyl_sum(const IntegralForm& form, int64_t a, int64_t q,
                          const std::vector<int64_t>& avec,
                          const std::vector<int64_t>& qvec,
                          WorkBudget* budget = nullptr);

/// s(q) = sup over a in U_q, avec in (Z/q)^n of |F_q(a, avec)|.
/// Exact for diagonal forms (per-coordinate DFT at fixed a).  For generic
/// forms the avec range is sampled once it exceeds sample_cap; *sampled is
/// set accordingly so reports can flag the value as a lower bound.
double weyl_sup(const IntegralForm& form, int64_t q,
                WorkBudget* budget = nullptr, bool* sampled = nullptr,
                uint64_t seed = 0, int64_t sample_cap = 4096);

// ------------------------------------------------------------- alpha fit --

enum class ModulusFilter { squarefree, odd_squarefree, all, prime_powers };

/// Least-squares envelope fit of log s(q) = intercept - alpha * log q over
/// the filtered moduli 2..q_max.  pointwise_min is the most conservative
/// single-q exponent -log s(q) / log q over odd filtered q with s(q) < 1
/// (even q can have s(q) = 1, which carries no slope information).
struct AlphaEstimate {
  int64_t q_max = 0;
  ModulusFilter filter = ModulusFilter::squarefree;
  std::vector<int64_t> moduli;
  std::vector<double> suprema;  // s(q), same order as moduli
  double alpha_hat = 0.0;
  double alpha_stderr = 0.0;
  double correlation = 0.0;
  double intercept = 0.0;
  bool sampled = false;         // any supremum came from a sampled sweep
  double pointwise_min = 0.0;
  int64_t pointwise_argmin = 0;
};

AlphaEstimate estimate_alpha(const IntegralForm& form, int64_t q_max,
                             ModulusFilter filter = ModulusFilter::squarefree,
                             WorkBudget* budget = nullptr, uint64_t seed = 0);

// -------------------------------------------------------- identity checks --

/// Moebius-completed residue identity, q >= 2: both
///   sum_{d|q} mu(q/d) d^{1-n} |V_lambda(d)|            and
///   sum_{d|q} mu(q/d) (d^{1-n} |V_lambda(d)| - 1)
/// must equal sum_{a in U_q} F_q(a,0) e(-lambda a / q).  (The two left sides
/// agree because sum_{d|q} mu(q/d) = 0 for q > 1; at q = 1 they differ by 1,
/// which is why the check requires q >= 2.)  Returns the max discrepancy.
double residue_identity_check(const IntegralForm& form, int64_t q,
                              int64_t lambda, WorkBudget* budget = nullptr);

/// Divisor decomposition of the normalized residue count, q >= 1:
///   q^{1-n} |V_lambda(q)| = sum_{d|q} sum_{a in U_d} F_d(a,0) e(-lambda a/d).
/// Returns the absolute discrepancy.
double divisor_identity_check(const IntegralForm& form, int64_t q,
                              int64_t lambda, WorkBudget* budget = nullptr);

/// Uniform-residue bound and the unit-sum majorization at one modulus q >= 2:
///   density_max  = max over lambda in Z_q of q^{1-n} |V_lambda(q)|
///   majorant     = sup over r in Z_q of
///                    |sum_{d|q} mu(q/d) (d^{1-n} |V_r(d)| - 1)|
///   unit_sum_max = max over t in U_q of |F_q(t, 0)|
/// The Fourier-inversion argument gives unit_sum_max <= majorant with
/// constant exactly one; slack = majorant - unit_sum_max.
struct ResidueBoundReport {
  double density_max = 0.0;
  double majorant = 0.0;
  double unit_sum_max = 0.0;
  double slack = 0.0;
};
ResidueBoundReport residue_bound_check(const IntegralForm& form, int64_t q,
                                       WorkBudget* budget = nullptr);

}  // namespace diomax
