#pragma once
// Named, reproducible experiments: each run_* wires library operations into a
// full check suite over a key=value config and returns an ExperimentReport.
// Sub-checks inside the identity suite trap their own budget exhaustion and
// record it as a failed check; single-operation wrappers let budget_error
// propagate so the caller can map it to a distinct exit code.  Sidecar CSV
// series and plan JSON files land in options.out_dir when it is nonempty.

#include <cstdint>
#include <string>

#include "diomax/config.hpp"
#include "diomax/report.hpp"

namespace diomax {

struct ExperimentOptions {
  uint64_t seed = 1;
  std::string out_dir;  // empty = no sidecar files
  uint64_t budget_ops = 4'000'000'000ull;
  bool include_timestamp = true;
};

/// Moebius completion over q <= 24, the divisor-sum identities over q <= 36,
/// the residue bound with constant 1, and generalized-sum vanishing.
ExperimentReport run_identities(const Config& cfg, const ExperimentOptions& opt);

/// Gauss-point calibration |F_p(a, 0)| = p^{-n/2} over odd primes and a
/// supremum table s(q) for small q.
ExperimentReport run_weyl(const Config& cfg, const ExperimentOptions& opt);

/// Weyl-supremum decay fit: alpha_hat with stderr, a pointwise-min
/// diagnostic, and the derived lacunary/full critical exponents.
ExperimentReport run_alpha(const Config& cfg, const ExperimentOptions& opt);

/// Error-term decay of the truncated multiplier approximation along a
/// lacunary lambda list.
ExperimentReport run_error_decay(const Config& cfg, const ExperimentOptions& opt);

/// Residue-per-window plan, analytic congruence-indicator norm ratios, the
/// matched dyadic control, and growth across levels J.
ExperimentReport run_counterexample(const Config& cfg,
                                    const ExperimentOptions& opt);

/// Ball-count fits against the exact volume constant, optional congruence
/// thinning, and the error-exponent ceiling.
ExperimentReport run_lipschitz(const Config& cfg, const ExperimentOptions& opt);

/// Surface-measure transform: closed form vs Monte Carlo agreement and the
/// ray-decay exponent against the Birch-rank bound.
ExperimentReport run_dsigma(const Config& cfg, const ExperimentOptions& opt);

/// Dispatch by subcommand name ("identities", "weyl", ...).  Unknown names
/// throw input_error.
ExperimentReport run_experiment(const std::string& name, const Config& cfg,
                                const ExperimentOptions& opt);

}  // namespace diomax
