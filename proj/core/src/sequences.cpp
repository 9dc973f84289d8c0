#include "diomax/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "diomax/arith.hpp"

namespace diomax {

LacunarySequence validate_lacunary(const std::vector<int64_t>& terms) {
  if (terms.size() < 2)
    throw input_error("validate_lacunary: need at least two terms");
  if (terms.front() <= 0)
    throw input_error("validate_lacunary: terms must be positive");
  LacunarySequence seq;
  seq.terms = terms;
  seq.c_min = std::numeric_limits<double>::infinity();
  for (size_t i = 1; i < terms.size(); ++i) {
    if (terms[i] <= terms[i - 1])
      throw input_error("validate_lacunary: terms must be strictly increasing");
    seq.c_min = std::min(seq.c_min, double(terms[i]) / double(terms[i - 1]));
  }
  seq.is_lacunary = seq.c_min > 1.0;
  return seq;
}

// -------------------------------------------------- regular-value scanning --

ProgressionScan detect_regular_progression(const IntegralForm& form,
                                           const CutoffPsi& psi,
                                           int64_t lambda_cap, int64_t q_scan,
                                           double eta, WorkBudget* budget) {
  if (lambda_cap < 10)
    throw input_error("detect_regular_progression: table too short");
  if (psi.kind() != PsiKind::unit)
    throw input_error(
        "detect_regular_progression: only the unit cutoff is supported "
        "(weighted counts would need per-lambda enumeration)");
  if (q_scan < 1 || !(eta > 0) || eta > 1)
    throw input_error("detect_regular_progression: bad scan parameters");

  RepCountTable table = build_rep_table(form, lambda_cap, Congruence::none(),
                                        CountBackend::automatic, budget);
  ProgressionScan scan;
  scan.lambda_cap = lambda_cap;
  scan.lambda_min = std::min<int64_t>(16, lambda_cap / 4 + 1);
  scan.q_scan = q_scan;
  scan.eta = eta;

  double growth = double(form.dimension()) / double(form.degree()) - 1.0;
  for (int64_t q = 1; q <= q_scan; ++q) {
    if (budget) budget->charge(uint64_t(lambda_cap), "progression scan");
    for (int64_t r = 0; r < q; ++r) {
      ProgressionCandidate cand;
      cand.q = q;
      cand.r = r;
      cand.lower_constant = std::numeric_limits<double>::infinity();
      KahanSum mean;
      int64_t start = scan.lambda_min + mod_i64(r - scan.lambda_min, q);
      for (int64_t lambda = start; lambda <= lambda_cap; lambda += q) {
        double ratio =
            double(table.at(lambda)) / std::pow(double(lambda), growth);
        cand.lower_constant = std::min(cand.lower_constant, ratio);
        mean.add(ratio);
        ++cand.samples;
      }
      if (cand.samples < 4) continue;  // too short to say anything
      cand.mean_constant = mean.value() / double(cand.samples);
      scan.candidates.push_back(cand);
    }
  }

  double best = 0.0;
  for (const auto& cand : scan.candidates)
    best = std::max(best, cand.lower_constant);
  if (best > 0) {
    for (size_t i = 0; i < scan.candidates.size(); ++i) {
      if (scan.candidates[i].lower_constant >= eta * best) {
        scan.selected = int(i);  // (q, r)-lexicographic: shortest q wins
        break;
      }
    }
  }
  return scan;
}

// ------------------------------------------------- residue-window planning --

namespace {

struct WindowPick {
  bool ok = false;
  int64_t lambda = 0;
  uint64_t count = 0;
  double ratio = 0.0;
};

// Best restricted count over [max(lo, floor), hi) intersected with the class
// lambda == t (mod modulus), read from a congruence-fixed table.
WindowPick scan_window(const RepCountTable& table, int64_t lo, int64_t hi,
                       int64_t floor_lambda, int64_t t, int64_t modulus,
                       double density, double growth, double c0) {
  WindowPick pick;
  lo = std::max(lo, floor_lambda);
  if (lo >= hi) return pick;
  int64_t lambda = lo + mod_i64(t - lo, modulus);
  for (; lambda < hi; lambda += modulus) {
    uint64_t c = table.at(lambda);
    if (c > pick.count) {
      pick.count = c;
      pick.lambda = lambda;
    }
  }
  if (pick.count == 0) return pick;
  pick.ratio = double(pick.count) /
               (density * std::pow(double(pick.lambda), growth));
  pick.ok = pick.ratio >= c0;
  return pick;
}

std::vector<std::vector<int64_t>> lex_residues(int n, int64_t modulus,
                                               int prefix) {
  std::vector<std::vector<int64_t>> out;
  std::vector<int64_t> b(size_t(n), 0);
  out.push_back(b);
  while (int(out.size()) < prefix) {
    int i = n - 1;
    while (i >= 0 && b[size_t(i)] == modulus - 1) b[size_t(i--)] = 0;
    if (i < 0) throw input_error("build_counterexample: prefix exceeds p^{Jn}");
    ++b[size_t(i)];
    out.push_back(b);
  }
  return out;
}

}  // namespace

CounterexamplePlan build_counterexample(const IntegralForm& form, int64_t p,
                                        int level, int prefix,
                                        int window_base_override,
                                        WindowPolicy policy, double c0,
                                        WorkBudget* budget) {
  if (p < 3 || p % 2 == 0 || !is_prime_i64(p))
    throw input_error("build_counterexample: p must be an odd prime");
  if (level < 1) throw input_error("build_counterexample: level must be >= 1");
  if (prefix < 1) throw input_error("build_counterexample: empty plan");
  if (!(c0 > 0)) throw input_error("build_counterexample: c0 must be positive");

  int n = form.dimension();
  int64_t modulus = 1;
  for (int i = 0; i < level; ++i) {
    if (__builtin_mul_overflow(modulus, p, &modulus) || modulus > (1 << 20))
      throw budget_error("build_counterexample: p^J too large");
  }
  long double total_log = (long double)(level) * n * std::log((long double)p);
  if (std::log((long double)prefix) > total_log + 1e-12)
    throw input_error("build_counterexample: prefix exceeds p^{Jn}");

  // Window feasibility against the table cap: the last window reaches
  // 2^{base + M}, and tables are dense arrays, so the exponent must stay
  // far below 62.
  auto check_cap = [&](int base, int windows) {
    if (base + windows > 40) {
      int max_m = std::max(0, 40 - base);
      throw budget_error(
          "build_counterexample: window budget exhausted (final window near "
          "2^" +
          std::to_string(base + windows) + "); maximal feasible prefix M = " +
          std::to_string(max_m));
    }
  };

  int probe_base = window_base_override > 0 ? window_base_override : 10;
  if (policy == WindowPolicy::paper_faithful) {
    if (total_log > 30 * std::log(2.0L))
      throw budget_error(
          "build_counterexample: paper-faithful policy needs p^{Jn} windows; "
          "the residue set alone overflows the table cap");
    int64_t full = 1;
    for (int i = 0; i < level * n; ++i) full *= p;
    if (prefix != full)
      throw input_error(
          "build_counterexample: paper-faithful policy uses the full residue "
          "set (prefix = p^{Jn})");
    check_cap(probe_base + level * level, int(full));
  }

  auto residues = lex_residues(n, modulus, prefix);
  std::vector<int64_t> targets;
  for (const auto& b : residues) targets.push_back(form.eval_mod(b, modulus));

  double density = std::pow(double(modulus), -(n - 1));
  double growth = double(n) / double(form.degree()) - 1.0;

  // Try to realize every window at a given base; tables are built per
  // residue, capped at that residue's own window top.
  auto attempt = [&](int base,
                     std::vector<ResidueWindow>* out) -> bool {
    check_cap(base, prefix);
    out->clear();
    int64_t prev_lambda = 0;
    for (int i = 1; i <= prefix; ++i) {
      int64_t lo = int64_t(1) << (base + i - 1);
      int64_t hi = int64_t(1) << (base + i);
      const auto& b = residues[size_t(i - 1)];
      RepCountTable table =
          build_rep_table(form, hi - 1, Congruence::fix(modulus, b),
                          CountBackend::automatic, budget);
      WindowPick pick =
          scan_window(table, lo, hi, i == 1 ? 0 : 2 * prev_lambda + 1,
                      targets[size_t(i - 1)], modulus, density, growth, c0);
      if (!pick.ok) return false;
      ResidueWindow rw;
      rw.residue = b;
      rw.window_index = i;
      rw.lambda = pick.lambda;
      rw.count = pick.count;
      rw.ratio = pick.ratio;
      out->push_back(rw);
      prev_lambda = pick.lambda;
    }
    return true;
  };

  CounterexamplePlan plan;
  plan.p = p;
  plan.level = level;
  plan.modulus = modulus;
  plan.prefix = prefix;
  plan.c0 = c0;

  std::vector<ResidueWindow> rows;
  int base = 0;
  if (window_base_override > 0) {
    base = window_base_override;
    if (!attempt(base, &rows))
      throw input_error(
          "build_counterexample: pinned window base fails the count bound");
  } else {
    // Double up to a feasible base, then walk down to the edge of
    // feasibility; the bound concentrates as lambda grows, so the feasible
    // set is an upward ray in practice.
    int hi_base = 1;
    while (hi_base <= 32 && !attempt(hi_base, &rows)) hi_base *= 2;
    if (hi_base > 32)
      throw budget_error(
          "build_counterexample: no feasible window base up to 2^32");
    base = hi_base;
    std::vector<ResidueWindow> lower_rows;
    while (base > 1 && attempt(base - 1, &lower_rows)) {
      --base;
      rows.swap(lower_rows);
    }
  }

  plan.window_base = base;
  plan.residues = rows;
  plan.min_ratio = std::numeric_limits<double>::infinity();
  std::vector<int64_t> terms;
  for (const auto& rw : rows) {
    plan.min_ratio = std::min(plan.min_ratio, rw.ratio);
    terms.push_back(rw.lambda);
  }
  plan.covered_fraction =
      double(std::exp(std::log((long double)prefix) - total_log));
  if (terms.size() >= 2) {
    plan.sequence = validate_lacunary(terms);
  } else {
    plan.sequence.terms = terms;
    plan.sequence.c_min = std::numeric_limits<double>::infinity();
    plan.sequence.is_lacunary = true;
  }
  plan.sequence.provenance = SequenceProvenance::counterexample;
  return plan;
}

}  // namespace diomax
