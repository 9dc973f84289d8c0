#pragma once
// Integral forms Q: Z^n -> Z, homogeneous of degree k, together with the
// smooth cutoffs psi used to weight their level sets {Q(x) = lambda}.
//
// Three concrete shapes cover the laboratory:
//   * diagonal   Q(x) = sum_i c_i x_i^k          (fast paths everywhere)
//   * quadratic  Q(x) = x^T A x, A symmetric     (Gram data, k = 2)
//   * generic    explicit degree-k monomial list (reference/brute paths)
//
// Evaluation is exact: the i64 fast path checks every multiply/add for
// overflow and falls back to arbitrary-precision integers; a value that does
// not fit in 64 bits raises overflow_error instead of wrapping.
//
// The Birch rank B(Q) = codim of the singular locus {grad Q = 0} controls
// which forms are "regular" for the surface machinery via the inequality
// B(Q) > (k-1) * 2^k.  It is computed exactly for diagonal and quadratic
// kinds and must be declared for generic ones.

#include <optional>
#include <string>
#include <vector>

#include "diomax/common.hpp"

namespace diomax {

enum class FormKind { diagonal, quadratic, generic };

/// One monomial c * x^e of a generic form; |e| must equal the degree.
struct Monomial {
  std::vector<int> exponents;
  int64_t coefficient = 0;
};

struct BirchRank {
  enum class Status { verified, declared, assumed };
  int value = 0;
  Status status = Status::assumed;
  bool regular = false;  // B(Q) > (k-1) * 2^k
};

class IntegralForm {
 public:
  static IntegralForm diagonal(int degree, std::vector<int64_t> coeffs);
  /// Symmetric Gram matrix, row-major n*n; Q(x) = x^T A x (degree 2).
  static IntegralForm quadratic(std::vector<int64_t> gram, int n);
  static IntegralForm generic(int n, int degree, std::vector<Monomial> monomials,
                              std::optional<int> declared_birch_rank);

  FormKind kind() const { return kind_; }
  int dimension() const { return n_; }
  int degree() const { return k_; }
  const std::vector<int64_t>& diagonal_coeffs() const { return coeffs_; }
  const std::vector<int64_t>& gram() const { return gram_; }
  const std::vector<Monomial>& monomials() const { return monomials_; }

  /// Exact Q(x); throws overflow_error if the value exceeds 64 bits.
  int64_t eval(const std::vector<int64_t>& x) const;
  /// Q(x) mod q in [0, q); never overflows (modular arithmetic throughout).
  int64_t eval_mod(const std::vector<int64_t>& x, int64_t q) const;
  /// Real-argument evaluation (used by surface parametrizations).
  double eval_real(const std::vector<double>& x) const;
  /// Exact gradient (d/dx_i Q)(x); same overflow contract as eval().
  std::vector<int64_t> gradient(const std::vector<int64_t>& x) const;
  std::vector<double> gradient_real(const std::vector<double>& x) const;

  /// Positive definiteness: exact for quadratic kinds (eigenvalues of A),
  /// coefficient signs for diagonal even degree, sampled for generic.
  bool positive_definite() const;

  /// Birch rank with provenance and the regularity inequality verdict.
  BirchRank birch_rank() const;

  /// Smallest eigenvalue-style constant mu with Q(x) >= mu*|x|_2^k for the
  /// positive-definite kinds (exact for quadratic/diagonal, sampled for
  /// generic); used to bound solution enumeration boxes.
  double coercivity_bound() const;

  std::string describe() const;

 private:
  IntegralForm() = default;
  void validate() const;

  FormKind kind_ = FormKind::diagonal;
  int n_ = 0;
  int k_ = 0;
  std::vector<int64_t> coeffs_;     // diagonal
  std::vector<int64_t> gram_;      // quadratic, row-major symmetric
  std::vector<Monomial> monomials_;  // generic
  std::optional<int> declared_birch_;
};

// ------------------------------------------------------------------ cutoff --

enum class PsiKind { unit, positive_orthant, custom_radial };

/// Smooth cutoff psi with values in [0,1].  The level-set weight attached to
/// a solution x of Q(x) = lambda is psi(x / lambda^{1/k}).
///
///   unit              psi == 1 (default for positive definite forms)
///   positive_orthant  smoothed indicator of the open positive orthant:
///                     psi(x) = prod_i step(x_i) with step == 0 below 1/20
///                     and == 1 above 3/20 (C^infinity ramp between)
///   custom_radial     psi(x) = rho(|x|_2) with rho linearly interpolated
///                     from declared (radius, value) samples
class CutoffPsi {
 public:
  static CutoffPsi unit();
  static CutoffPsi positive_orthant();
  /// Samples must be sorted by radius, values in [0,1]; rho == 0 beyond the
  /// last radius and constant below the first.
  static CutoffPsi custom_radial(std::vector<std::pair<double, double>> profile);

  PsiKind kind() const { return kind_; }
  double operator()(const std::vector<double>& x) const;
  /// Per-coordinate factor for product-shaped kinds (unit/positive_orthant);
  /// throws for custom_radial, which does not factor.
  double coordinate_factor(double t) const;
  bool factors_per_coordinate() const { return kind_ != PsiKind::custom_radial; }

  /// Smallest closed box [-B, B]^n (in the psi argument scale) containing
  /// the support; infinity for unit and positive_orthant kinds.
  double support_box() const;

  std::string describe() const;

 private:
  PsiKind kind_ = PsiKind::unit;
  std::vector<std::pair<double, double>> profile_;
};

/// C^infinity ramp: 0 for s <= 0, 1 for s >= 1, strictly increasing between.
/// Shared by CutoffPsi and the frequency bump in the multiplier module.
double smooth_step(double s);

}  // namespace diomax
