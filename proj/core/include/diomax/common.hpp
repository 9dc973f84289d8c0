#pragma once
// Shared plumbing for the lattice-surface laboratory: error taxonomy, explicit
// work budgets, and compensated accumulation.  Everything downstream assumes
// deterministic, single-threaded evaluation: identical inputs (plus seed)
// must reproduce identical bytes in every report.

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace diomax {

using std::int64_t;
using std::uint64_t;
using cplx = std::complex<double>;

inline constexpr const char* kVersion = "0.1.0";

// ------------------------------------------------------------------ errors --

/// Malformed mathematical input (dimension mismatch, non-homogeneous form,
/// invalid congruence data, ...).  CLI maps this to the usage/config exit code.
struct input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A computation asked for more work than its explicit operation budget.
/// Budgets are part of the experiment configuration, so exhaustion is a
/// first-class, reportable outcome (CLI exit code 3), not a crash.
struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exact integer evaluation left the representable range even after
/// promotion; callers must treat the value as unavailable, never truncated.
struct overflow_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ------------------------------------------------------------------ budget --

/// Explicit operation-count budget.  Heavy loops call charge() with the
/// number of elementary steps they are about to spend; determinism is why
/// budgets are counts, not wall-clock limits.
class WorkBudget {
 public:
  static constexpr uint64_t kDefaultOps = 4'000'000'000ull;

  explicit WorkBudget(uint64_t ops = kDefaultOps) : remaining_(ops) {}

  void charge(uint64_t ops, const char* what) {
    if (ops > remaining_)
      throw budget_error(std::string("operation budget exhausted in ") + what);
    remaining_ -= ops;
  }
  uint64_t remaining() const { return remaining_; }

 private:
  uint64_t remaining_;
};

// ------------------------------------------------------- compensated sums --

/// Kahan-compensated accumulator for real sums.
class KahanSum {
 public:
  void add(double x) {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0, c_ = 0.0;
};

/// Compensated accumulator for complex sums (componentwise Kahan).  All
/// exponential-sum accumulation routes through this: the identity checks ask
/// for 1e-9 residuals on sums with up to ~1e6 terms.
class KahanCSum {
 public:
  void add(cplx z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  cplx value() const { return {re_.value(), im_.value()}; }

 private:
  KahanSum re_, im_;
};

}  // namespace diomax
