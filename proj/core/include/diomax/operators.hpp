#pragma once
// Discrete averaging and multiplier operators acting on functions over
// finite lattice windows:
//
//   (A_lambda f)(y) = r_psi(lambda)^{-1} sum_{Q(x)=lambda}
//                         psi(x/lambda^{1/k}) f(y - x)
//
// realized either on a compactly supported box [-T, T]^n (output grows by
// the solution-set radius so no translate is clipped) or on the torus
// (Z/N)^n with declared wraparound.  Multiplier operators act on the torus
// through the any-length FFT: f -> IDFT( symbol(m/N) * DFT(f) ).
//
// Norm machinery reports lower bounds only: a maximal-function value on any
// concrete input certifies "operator norm >= ratio" and nothing more.

#include <functional>
#include <vector>

#include "diomax/common.hpp"
#include "diomax/counting.hpp"
#include "diomax/forms.hpp"

namespace diomax {

enum class GridKind { box, torus };

/// Complex-valued function on a box [-T,T]^n (compact support) or on the
/// torus (Z/N)^n, stored densely in row-major order.
class GridFunction {
 public:
  static GridFunction box(int dimension, int64_t T);
  static GridFunction torus(int dimension, int64_t N);

  GridKind kind() const { return kind_; }
  int dimension() const { return n_; }
  /// Points per axis: 2T+1 for a box, N for a torus.
  int64_t side() const { return side_; }
  /// Box half-width T (boxes only).
  int64_t half_width() const;
  int64_t cells() const { return int64_t(values_.size()); }

  /// Element access by lattice coordinates: signed coordinates in [-T, T]
  /// for boxes (out of range throws), any integers for the torus (wrapped).
  cplx& at(const std::vector<int64_t>& x);
  const cplx& at(const std::vector<int64_t>& x) const;
  /// Box read that returns 0 outside the stored window instead of throwing.
  cplx value_or_zero(const std::vector<int64_t>& x) const;

  std::vector<cplx>& values() { return values_; }
  const std::vector<cplx>& values() const { return values_; }
  /// Decode a flat storage index back to lattice coordinates.
  std::vector<int64_t> coordinates(int64_t flat) const;

  double norm(double p) const;  // p in (0, inf]; p = inf -> sup norm
  cplx total() const;           // sum of all values (compensated)

 private:
  GridKind kind_ = GridKind::box;
  int n_ = 0;
  int64_t side_ = 0;
  int64_t T_ = 0;
  std::vector<cplx> values_;
};

/// Solution list with psi weights; weight_total = r_psi(lambda).
struct WeightedSolutions {
  int64_t lambda = 0;
  std::vector<std::vector<int64_t>> points;
  std::vector<double> weights;
  double weight_total = 0.0;
  int64_t radius = 0;  // max |x|_inf over the points
};

WeightedSolutions weighted_solutions(const IntegralForm& form,
                                     const CutoffPsi& psi, int64_t lambda,
                                     WorkBudget* budget = nullptr);

/// A_lambda f.  Box inputs produce a box padded by the solution radius;
/// torus inputs stay on the same torus (wraparound).
GridFunction apply_average(const IntegralForm& form, const CutoffPsi& psi,
                           int64_t lambda, const GridFunction& f,
                           WorkBudget* budget = nullptr);

/// Same average driven by a precomputed solution list (shared across inputs).
GridFunction apply_average(const WeightedSolutions& sols, const GridFunction& f,
                           WorkBudget* budget = nullptr);

/// Torus multiplier operator: transform, multiply by symbol(xi) at the grid
/// frequencies xi = m/N folded to [-1/2, 1/2)^n, transform back.
GridFunction apply_multiplier(
    const std::function<cplx(const std::vector<double>&)>& symbol,
    const GridFunction& f, WorkBudget* budget = nullptr);

/// Pointwise sup over the listed lambdas of |A_lambda f| (real values).
GridFunction maximal_apply(const IntegralForm& form, const CutoffPsi& psi,
                           const std::vector<int64_t>& lambdas,
                           const GridFunction& f, WorkBudget* budget = nullptr);

/// ||g||_p / ||f||_p; any value is a certified operator-norm lower bound.
double norm_ratio(const GridFunction& g, const GridFunction& f, double p);

/// Empirical lower bound on the maximal multiplier operator at one dyadic
/// level j: sup over the lambda list of |multiplier operator with symbol
/// m_{lambda,j}|, probed on a fixed trial family (delta, congruence
/// indicators, seeded random signs) on the torus (Z/N)^n.
struct MaximalProbe {
  int j = 0;
  double p = 0.0;
  double best = 0.0;               // largest ratio seen
  std::vector<double> per_trial;   // ratio per trial function
};
MaximalProbe probe_maximal_level(
    const IntegralForm& form, const std::vector<int64_t>& lambdas, int j,
    double p, int64_t N,
    const std::function<cplx(int64_t lambda, const std::vector<double>&)>&
        level_symbol,
    uint64_t seed, WorkBudget* budget = nullptr);

}  // namespace diomax
