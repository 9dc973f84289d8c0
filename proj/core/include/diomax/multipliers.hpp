#pragma once
// Torus multipliers built from Weyl sums and the surface measure of
// {Q(x) = 1}.  The cast:
//
//   omegahat_lambda(xi) = r_psi(lambda)^{-1} sum_{Q(x)=lambda}
//                             psi(x/lambda^{1/k}) e(x.xi)
//
//   m_{lambda,j,q}(xi)  = sum_{a in U_q} sum_{avec in (Z/q)^n} F_q(a, avec)
//                           e(-a lambda / q) zeta(10^j (xi - avec/q))
//                           dsigma_ft(lambda^{1/k} (xi - avec/q))
//     for q in I_j = [2^{j-1}, 2^j); m_{lambda,j} sums over q in I_j.
//
//   Omega_{lambda,j,d}  = the same with a running over all of Z_d.
//
// Moebius inversion over divisors ties them together exactly:
//   m_{lambda,j,q} = sum_{d|q} mu(q/d) Omega_{lambda,j,d}, and summing over
//   q in I_j,  m_{lambda,j} = sum_d C_j(d) Omega_{lambda,j,d}  with
//   C_j(d) = sum_h mu(h) 1_{I_j}(dh).
// The identity is arithmetic: it cancels fraction classes via the vanishing
// of non-reduced generalized Weyl sums, so it holds for ANY radial factor in
// place of dsigma_ft — the checks exploit that with a stand-in profile when
// no surface transform is available.
//
// Sign convention: surface-side transforms use e(+x.xi), matching the
// stationary-phase expansion of omegahat above (whose own sign is fixed by
// the e(x.xi) in its definition).  For the symmetric (even-degree) level
// sets exercised by the experiments both signs coincide.

#include <vector>

#include "diomax/common.hpp"
#include "diomax/counting.hpp"
#include "diomax/forms.hpp"

namespace diomax {

// ------------------------------------------------------------- zeta bump --

/// Smooth even plateau bump: 1 on [-1/10, 1/10], 0 outside (-1/5, 1/5),
/// zeta(t) = smooth_step((1/5 - |t|) / (1/10)) in between.
double zeta_bump(double t);

/// Product bump on R^n: prod_i zeta(v_i); support is the sup-norm box 1/5.
double zeta_bump(const std::vector<double>& v);

/// Fourier transform of the 1-D bump, Zhat(u) = int zeta(t) e(-u t) dt
/// (real and even); the plateau contributes sin(2 pi u / 10)/(pi u) exactly
/// and the two ramps are integrated by fixed composite Simpson quadrature.
double zeta_profile_ft(double u);

// ---------------------------------------------------- surface measure FT --

/// Fourier transform of dsigma = psi dmu / |grad Q| on {Q = 1}, evaluated as
/// dsigma_ft(xi) = int e(+x.xi) dsigma(x).  Backends:
///
///   closed_form   degree-2 positive definite forms only: substituting
///                 x = A^{-1/2} u maps the ellipsoid to the unit sphere and
///                 gives det(A)^{-1/2} * pi * r^{-nu} J_nu(2 pi r) with
///                 r = |A^{-1/2} xi| and nu = (n-2)/2 (psi == 1).
///   monte_carlo   radial parametrization x = rho(u) u, rho = Q(u)^{-1/k}:
///                 (1/k) * Avg_{u in S^{n-1}}[ Q(u)^{-n/k} psi(rho u)
///                 e(rho u . xi) ] * area(S^{n-1}), sampled with a
///                 counter-based stream keyed to (seed, xi) so repeated
///                 evaluation at one argument is bit-identical.
///   standin       a smooth positive decaying radial profile 1/(1+|v|^2);
///                 not a surface transform — used to exercise the purely
///                 arithmetic multiplier identities for forms without an
///                 implemented transform.
class SurfaceFT {
 public:
  enum class Backend { closed_form, monte_carlo, standin };

  static SurfaceFT closed_form(const IntegralForm& form);
  static SurfaceFT monte_carlo(const IntegralForm& form, const CutoffPsi& psi,
                               uint64_t seed, int64_t samples = 40000);
  static SurfaceFT standin(int dimension);

  cplx operator()(const std::vector<double>& xi) const;
  /// Monte-Carlo standard error at this argument (0 for exact backends).
  double standard_error(const std::vector<double>& xi) const;
  double mass() const;  // value at xi = 0 (real for the supported measures)
  Backend backend() const { return backend_; }
  int dimension() const { return n_; }

 private:
  SurfaceFT() = default;
  void mc_evaluate(const std::vector<double>& xi, cplx* value, double* se) const;

  Backend backend_ = Backend::standin;
  int n_ = 0;
  // closed form (ellipsoid): Gram eigendecomposition for A^{-1/2}
  std::vector<double> eigvecs_;  // row-major, columns = eigenvectors
  std::vector<double> eigvals_;
  double det_factor_ = 1.0;
  // monte carlo
  IntegralForm form_ = IntegralForm::diagonal(2, {1});
  CutoffPsi psi_ = CutoffPsi::unit();
  uint64_t seed_ = 0;
  int64_t samples_ = 0;
};

/// Guaranteed surface-transform decay exponent from the rank data:
/// K = ((B(Q) - (k-1) 2^{k-1}) / 2^k - 1) / 2.  Positive only when the rank
/// comfortably beats the degree; definite quadratics additionally satisfy the
/// sharp (n-1)/2, which the experiments check as a separate bound.
double surface_decay_exponent(const IntegralForm& form);

/// Log-log fit of the decay of |dsigma_ft| along random rays.  For each ray
/// direction and each target radius the magnitude is maximized over a small
/// jitter window (the transform oscillates, so raw samples hit zeros; the
/// envelope is the meaningful decaying quantity).
struct RayDecayFit {
  double exponent = 0.0;     // fitted decay power (positive = decaying)
  double correlation = 0.0;  // of the log-log fit
  double r_min = 0.0, r_max = 0.0;
  int rays = 0;
};
RayDecayFit ray_decay_fit(const SurfaceFT& sft, double r_min, double r_max,
                          int n_radii, int n_rays, uint64_t seed);

// ------------------------------------------------------------ multipliers --

/// omegahat_lambda(xi); throws input_error when r_psi(lambda) = 0.
cplx omega_hat(const IntegralForm& form, const CutoffPsi& psi, int64_t lambda,
               const std::vector<double>& xi, WorkBudget* budget = nullptr);

/// m_{lambda,j,q}(xi).  Requires q in I_j = [2^{j-1}, 2^j).  The zeta
/// localization admits at most one active rational avec/q per coordinate
/// (window 2/(5*10^j) is narrower than the grid spacing 1/q), so the double
/// sum costs one Weyl-sum pass when the bump is live and nothing otherwise.
cplx main_term(const IntegralForm& form, int64_t lambda, int j, int64_t q,
               const std::vector<double>& xi, const SurfaceFT& radial,
               WorkBudget* budget = nullptr);

/// Omega_{lambda,j,d}(xi): the completed variant, a over all of Z_d; d need
/// not lie in I_j.
cplx completed_term(const IntegralForm& form, int64_t lambda, int j, int64_t d,
                    const std::vector<double>& xi, const SurfaceFT& radial,
                    WorkBudget* budget = nullptr);

/// m_{lambda,j}(xi) = sum over q in I_j of main_term.
cplx main_term_level(const IntegralForm& form, int64_t lambda, int j,
                     const std::vector<double>& xi, const SurfaceFT& radial,
                     WorkBudget* budget = nullptr);

/// Raw truncation sum_{1 <= j <= j_cap} m_{lambda,j}(xi).  The approximation
/// to omegahat carries the normalization lambda^{n/k-1} / r_psi(lambda).
cplx truncated_main(const IntegralForm& form, int64_t lambda, int j_cap,
                    const std::vector<double>& xi, const SurfaceFT& radial,
                    WorkBudget* budget = nullptr);

/// C_j(d) = sum_{h >= 1} mu(h) 1_{I_j}(d h); zero for d >= 2^j.
int64_t divisor_constant(int j, int64_t d);

/// Max residual over the sampled frequencies of BOTH completion identities:
///   per-q:   m_{lambda,j,q} - sum_{d|q} mu(q/d) Omega_{lambda,j,d}
///   summed:  m_{lambda,j}   - sum_{d < 2^j} C_j(d) Omega_{lambda,j,d}
double mobius_completion_check(const IntegralForm& form, int64_t lambda, int j,
                               int64_t q, const std::vector<std::vector<double>>& xis,
                               const SurfaceFT& radial,
                               WorkBudget* budget = nullptr);

// ------------------------------------------------------------ error decay --

/// For each lambda: ehat(lambda) = max over sampled xi of
/// |omegahat_lambda(xi) - (lambda^{n/k-1}/r_psi(lambda)) *
///  truncated_main(lambda, j_cap, xi)|, then the log-log fit
/// ehat ~ lambda^{-delta_hat}.  at_zero records the xi = 0 error separately
/// (omegahat(0) = 1 exactly).  tail_estimate bounds the dropped j > j_cap
/// levels by sum_q phi(q) s(q) * dsigma_ft(0) * normalization at the largest
/// lambda, for the next three levels.
struct ErrorDecayReport {
  std::vector<int64_t> lambdas;
  std::vector<double> errors;   // ehat(lambda)
  std::vector<double> at_zero;  // |1 - normalized truncated_main(0)|
  double delta_hat = 0.0;
  double correlation = 0.0;
  double tail_estimate = 0.0;
  int j_cap = 0;
  int xi_samples = 0;
  uint64_t seed = 0;
};
ErrorDecayReport error_term_decay(const IntegralForm& form, const CutoffPsi& psi,
                                  const std::vector<int64_t>& lambdas, int j_cap,
                                  int xi_samples, uint64_t seed,
                                  const SurfaceFT& radial,
                                  WorkBudget* budget = nullptr);

// ----------------------------------------------------- convolution kernel --

/// Kernel of the completed multiplier at scale d with residue target t:
///   V_{t,d}(x) = d * 1_{Q(x) == t mod d} * prod_i (1/d) Zhat(x_i / d).
double kernel_vtd(const IntegralForm& form, int64_t d, int64_t t,
                  const std::vector<int64_t>& x);

/// Fitted envelope constant: max over sampled x of
///   |V_{t,d}(x)| * d^{n-1} * (sqrt(n) + 1 + |x|/d)^{n+1},
/// i.e. the smallest C with |V| <= C d^{1-n} (sqrt(n)+1+|x|/d)^{-(n+1)} on
/// the sample.  Finite small values certify the rapid decay numerically.
double kernel_envelope_constant(const IntegralForm& form, int64_t d, int64_t t,
                                int samples, uint64_t seed);

}  // namespace diomax
