#pragma once
// Elementary number-theoretic utilities shared across the laboratory:
// Moebius function, divisor enumeration, gcd/lcm, modular arithmetic and a
// cached table of complex roots of unity.  All evaluation of e(m/L) routes
// through the root tables so that phases are reduced exactly (mod L) in
// integer arithmetic before ever touching floating point.

#include <complex>
#include <cstdint>
#include <vector>

#include "diomax/common.hpp"

namespace diomax {

// ------------------------------------------------------ integer utilities --

int64_t gcd_i64(int64_t a, int64_t b);
int64_t lcm_i64(int64_t a, int64_t b);  // throws overflow_error on overflow

/// Non-negative remainder of a mod m (m > 0), correct for negative a.
inline int64_t mod_i64(int64_t a, int64_t m) {
  int64_t r = a % m;
  return r < 0 ? r + m : r;
}

/// (a * b) mod m without overflow, 0 <= a,b < m < 2^62.
inline int64_t mulmod_i64(int64_t a, int64_t b, int64_t m) {
  return int64_t((__int128)a * b % m);
}

/// (base^e) mod m, e >= 0, m > 0.
int64_t powmod_i64(int64_t base, uint64_t e, int64_t m);

/// Moebius function table mu[0..n] (mu[0] unused, set to 0), via sieve.
std::vector<int> moebius_table(int64_t n);

/// All positive divisors of n > 0, ascending.
std::vector<int64_t> divisors(int64_t n);

/// Units of Z_q.  By convention U_1 = Z_1 = {0}: the trivial modulus keeps
/// the single residue 0 so that sums over U_q never degenerate to empty.
std::vector<int64_t> units_mod(int64_t q);

/// Euler phi(q), q >= 1.
int64_t euler_phi(int64_t q);

bool is_squarefree(int64_t q);

/// Deterministic trial-division primality test (desk-scale moduli only).
bool is_prime_i64(int64_t p);

/// floor(m^{1/k}) for m >= 0, k >= 1, exact (integer Newton + fixup).
int64_t floor_kth_root(int64_t m, int k);

// ------------------------------------------------------------ root tables --

/// Cached table of the L-th roots of unity: root(m) = e(m/L) = exp(2*pi*i*m/L).
/// Indices are reduced mod L, so callers may pass any signed phase numerator.
class RootTable {
 public:
  explicit RootTable(int64_t L);
  cplx operator()(int64_t m) const { return roots_[size_t(mod_i64(m, L_))]; }
  int64_t modulus() const { return L_; }

 private:
  int64_t L_;
  std::vector<cplx> roots_;
};

/// e(x) = exp(2*pi*i*x) for real x; used where phases are not rational.
inline cplx unit_phase(double x) {
  double a = 2.0 * M_PI * x;
  return {std::cos(a), std::sin(a)};
}

// ---------------------------------------------------------- small algebra --

/// Ordinary least squares fit y = a + b*x.  Returns {a, b, pearson_r,
/// stderr_b}.  Used by every log-log decay estimate in the laboratory.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double correlation = 0.0;
  double slope_stderr = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Jacobi eigendecomposition of a small symmetric matrix (row-major n*n).
/// Returns eigenvalues ascending and fills eigenvectors (columns) if asked.
/// Only used for Gram forms (n <= 16), so a fixed-sweep Jacobi suffices.
std::vector<double> symmetric_eigenvalues(const std::vector<double>& a, int n,
                                          std::vector<double>* vectors = nullptr);

}  // namespace diomax
