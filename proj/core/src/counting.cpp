#include "diomax/counting.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "diomax/arith.hpp"

namespace diomax {

namespace {

// Budget bookkeeping amortized over tight loops.
struct BudgetTicker {
  WorkBudget* budget;
  const char* what;
  uint64_t pending = 0;
  void tick(uint64_t ops = 1) {
    pending += ops;
    if (pending >= 1 << 16) flush();
  }
  void flush() {
    if (budget && pending) budget->charge(pending, what);
    pending = 0;
  }
};

uint64_t checked_mul_add(uint64_t acc, uint64_t a, uint64_t b) {
  uint64_t prod, sum;
  if (__builtin_mul_overflow(a, b, &prod) || __builtin_add_overflow(acc, prod, &sum))
    throw overflow_error("representation count exceeds 64 bits");
  return sum;
}

// c * s^k for |s| bounded so that the product fits; caller guarantees c > 0.
int64_t monomial_value(int64_t c, int64_t s, int k) {
  __int128 p = c;
  for (int t = 0; t < k; ++t) p *= s;
  return int64_t(p);  // caller bounds |s| via floor_kth_root(cap/c, k)
}

// ------------------------------------------------- per-coordinate tables --
// Sparse list of (value m, multiplicity) with m = c*s^k <= cap over the
// admissible s (full line, or s >= 0 for orthant-confined odd degrees),
// restricted to s == b (mod q).

struct SparseCounts {
  std::vector<std::pair<int64_t, uint64_t>> entries;  // sorted by value
};

SparseCounts coordinate_counts(int64_t c, int k, int64_t cap, int64_t q,
                               int64_t b, bool orthant_only) {
  if (c <= 0) throw input_error("convolution backend: coefficients must be positive");
  if (!orthant_only && k % 2 != 0)
    throw input_error(
        "convolution backend: odd degree has sign-indefinite monomials; "
        "use brute force or an orthant cutoff");
  std::map<int64_t, uint64_t> acc;
  int64_t smax = floor_kth_root(cap / c, k);
  int64_t b0 = mod_i64(b, q);
  int64_t lo = orthant_only ? 0 : -smax;
  // First admissible s >= lo in the congruence class.
  int64_t s0 = lo + mod_i64(b0 - lo, q);
  for (int64_t s = s0; s <= smax; s += q) acc[monomial_value(c, s, k)] += 1;
  SparseCounts out;
  out.entries.assign(acc.begin(), acc.end());
  return out;
}

std::vector<uint64_t> convolve_trunc(const std::vector<uint64_t>& g,
                                     const SparseCounts& h, int64_t cap,
                                     BudgetTicker& ticker) {
  std::vector<uint64_t> out(size_t(cap) + 1, 0);
  for (int64_t m1 = 0; m1 <= cap; ++m1) {
    uint64_t gv = g[size_t(m1)];
    if (!gv) continue;
    for (const auto& [m2, hv] : h.entries) {
      if (m1 + m2 > cap) break;
      out[size_t(m1 + m2)] = checked_mul_add(out[size_t(m1 + m2)], gv, hv);
    }
    ticker.tick(h.entries.size());
  }
  return out;
}

// Complex-weighted variant used by the phase-level sums.
struct SparsePhase {
  std::vector<std::pair<int64_t, cplx>> entries;
};

std::vector<cplx> convolve_trunc_cplx(const std::vector<cplx>& g,
                                      const SparsePhase& h, int64_t cap,
                                      BudgetTicker& ticker) {
  std::vector<cplx> out(size_t(cap) + 1, cplx(0, 0));
  for (int64_t m1 = 0; m1 <= cap; ++m1) {
    cplx gv = g[size_t(m1)];
    if (gv.real() == 0.0 && gv.imag() == 0.0) continue;
    for (const auto& [m2, hv] : h.entries) {
      if (m1 + m2 > cap) break;
      out[size_t(m1 + m2)] += gv * hv;
    }
    ticker.tick(h.entries.size());
  }
  return out;
}

// --------------------------------------------------------- brute walkers --

// Recursive enumeration of {x : sum_i c_i x_i^k <= cap} for diagonal forms
// (all c_i > 0; even k or orthant-only).  Calls leaf(x, value) per point.
template <typename Leaf>
void diagonal_walk(const IntegralForm& form, int64_t cap, const Congruence& cong,
                   bool orthant_only, BudgetTicker& ticker, Leaf&& leaf) {
  int n = form.dimension(), k = form.degree();
  const auto& c = form.diagonal_coeffs();
  std::vector<int64_t> x(size_t(n), 0);
  auto rec = [&](auto&& self, int i, int64_t partial) -> void {
    if (i == n) {
      leaf(x, partial);
      return;
    }
    int64_t head = cap - partial;
    int64_t smax = floor_kth_root(head / c[size_t(i)], k);
    int64_t lo = orthant_only ? 0 : -smax;
    int64_t q = cong.modulus;
    int64_t s0 = lo + mod_i64(cong.residue(i) - lo, q);
    for (int64_t s = s0; s <= smax; s += q) {
      ticker.tick();
      x[size_t(i)] = s;
      self(self, i + 1, partial + monomial_value(c[size_t(i)], s, k));
    }
  };
  rec(rec, 0, 0);
}

// Box odometer for non-diagonal positive definite forms: all x in [-B, B]^n
// with the congruence restriction; leaf(x) decides what to do with Q(x).
template <typename Leaf>
void box_walk(const IntegralForm& form, int64_t B, const Congruence& cong,
              BudgetTicker& ticker, Leaf&& leaf) {
  int n = form.dimension();
  int64_t q = cong.modulus;
  std::vector<std::vector<int64_t>> ranges(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    int64_t s0 = -B + mod_i64(cong.residue(i) + B, q);
    for (int64_t s = s0; s <= B; s += q) ranges[size_t(i)].push_back(s);
    if (ranges[size_t(i)].empty()) return;
  }
  std::vector<size_t> idx(size_t(n), 0);
  std::vector<int64_t> x(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) x[size_t(i)] = ranges[size_t(i)][0];
  for (;;) {
    ticker.tick();
    leaf(x);
    int i = n - 1;
    while (i >= 0) {
      if (++idx[size_t(i)] < ranges[size_t(i)].size()) {
        x[size_t(i)] = ranges[size_t(i)][idx[size_t(i)]];
        break;
      }
      idx[size_t(i)] = 0;
      x[size_t(i)] = ranges[size_t(i)][0];
      --i;
    }
    if (i < 0) break;
  }
}

int64_t enumeration_box(const IntegralForm& form, int64_t cap) {
  // |x|_2^k <= cap / mu  =>  |x|_inf <= (cap/mu)^{1/k}
  double mu = form.coercivity_bound();
  return int64_t(std::floor(std::pow(double(cap) / mu, 1.0 / form.degree()))) + 1;
}

bool diagonal_even_pd(const IntegralForm& form) {
  return form.kind() == FormKind::diagonal && form.degree() % 2 == 0 &&
         form.positive_definite();
}

bool orthant_confined(const IntegralForm& form, const CutoffPsi& psi) {
  if (form.kind() != FormKind::diagonal) return false;
  if (psi.kind() != PsiKind::positive_orthant) return false;
  for (int64_t c : form.diagonal_coeffs())
    if (c <= 0) return false;
  return true;
}

void check_congruence(const IntegralForm& form, const Congruence& cong) {
  if (cong.modulus <= 0) throw input_error("congruence: modulus must be positive");
  if (!cong.residues.empty() && int(cong.residues.size()) != form.dimension())
    throw input_error("congruence: residue arity mismatch");
}

}  // namespace

uint64_t RepCountTable::cumulative(int64_t R) const {
  if (R < 0 || R > lambda_cap) throw input_error("cumulative: radius out of range");
  uint64_t total = 0;
  for (int64_t l = 0; l <= R; ++l)
    if (__builtin_add_overflow(total, counts[size_t(l)], &total))
      throw overflow_error("ball count exceeds 64 bits");
  return total;
}

RepCountTable build_rep_table(const IntegralForm& form, int64_t lambda_cap,
                              const Congruence& congruence, CountBackend backend,
                              WorkBudget* budget) {
  if (lambda_cap < 0) throw input_error("build_rep_table: negative cap");
  check_congruence(form, congruence);
  if (!form.positive_definite())
    throw input_error("build_rep_table: level sets must be finite (positive definite)");

  if (backend == CountBackend::automatic)
    backend = form.kind() == FormKind::diagonal ? CountBackend::convolution
                                                : CountBackend::brute_force;

  RepCountTable table;
  table.n = form.dimension();
  table.k = form.degree();
  table.congruence = congruence;
  table.lambda_cap = lambda_cap;
  table.backend_used = backend;
  BudgetTicker ticker{budget, "build_rep_table"};

  if (backend == CountBackend::convolution) {
    if (form.kind() != FormKind::diagonal)
      throw input_error("convolution backend requires a diagonal form");
    const auto& c = form.diagonal_coeffs();
    auto h0 = coordinate_counts(c[0], form.degree(), lambda_cap,
                                congruence.modulus, congruence.residue(0), false);
    std::vector<uint64_t> g(size_t(lambda_cap) + 1, 0);
    for (const auto& [m, cnt] : h0.entries) g[size_t(m)] = cnt;
    for (int i = 1; i < form.dimension(); ++i) {
      auto hi = coordinate_counts(c[size_t(i)], form.degree(), lambda_cap,
                                  congruence.modulus, congruence.residue(i), false);
      g = convolve_trunc(g, hi, lambda_cap, ticker);
    }
    table.counts = std::move(g);
  } else {
    table.counts.assign(size_t(lambda_cap) + 1, 0);
    auto bump = [&](int64_t v) {
      if (v >= 0 && v <= lambda_cap) {
        if (__builtin_add_overflow(table.counts[size_t(v)], uint64_t(1),
                                   &table.counts[size_t(v)]))
          throw overflow_error("representation count exceeds 64 bits");
      }
    };
    if (form.kind() == FormKind::diagonal) {
      diagonal_walk(form, lambda_cap, congruence, false, ticker,
                    [&](const std::vector<int64_t>&, int64_t v) { bump(v); });
    } else {
      int64_t B = enumeration_box(form, lambda_cap);
      box_walk(form, B, congruence, ticker,
               [&](const std::vector<int64_t>& x) { bump(form.eval(x)); });
    }
  }
  ticker.flush();
  return table;
}

std::vector<std::vector<int64_t>> enumerate_solutions(const IntegralForm& form,
                                                      int64_t lambda,
                                                      const CutoffPsi& psi,
                                                      WorkBudget* budget) {
  if (lambda < 0) throw input_error("enumerate_solutions: negative lambda");
  BudgetTicker ticker{budget, "enumerate_solutions"};
  std::vector<std::vector<int64_t>> out;
  if (form.positive_definite()) {
    if (form.kind() == FormKind::diagonal) {
      diagonal_walk(form, lambda, Congruence::none(), false, ticker,
                    [&](const std::vector<int64_t>& x, int64_t v) {
                      if (v == lambda) out.push_back(x);
                    });
    } else {
      int64_t B = enumeration_box(form, lambda);
      box_walk(form, B, Congruence::none(), ticker,
               [&](const std::vector<int64_t>& x) {
                 if (form.eval(x) == lambda) out.push_back(x);
               });
    }
  } else if (orthant_confined(form, psi)) {
    diagonal_walk(form, lambda, Congruence::none(), true, ticker,
                  [&](const std::vector<int64_t>& x, int64_t v) {
                    if (v == lambda) out.push_back(x);
                  });
  } else {
    throw input_error(
        "enumerate_solutions: level set may be infinite; form must be "
        "positive definite or confined by an orthant cutoff");
  }
  ticker.flush();
  return out;
}

double count_representations(const IntegralForm& form, const CutoffPsi& psi,
                             int64_t lambda, WorkBudget* budget) {
  if (lambda < 0) throw input_error("count_representations: negative lambda");
  if (psi.kind() == PsiKind::unit && diagonal_even_pd(form)) {
    // Exact table path; the table build is the counting convolution.
    auto table = build_rep_table(form, lambda, Congruence::none(),
                                 CountBackend::convolution, budget);
    return double(table.at(lambda));
  }
  if (psi.kind() == PsiKind::unit) {
    return double(enumerate_solutions(form, lambda, psi, budget).size());
  }
  // psi-weighted count over the (finite) enumerated solution set.
  auto sols = enumerate_solutions(form, lambda, psi, budget);
  double scale = lambda > 0 ? std::pow(double(lambda), 1.0 / form.degree()) : 1.0;
  KahanSum acc;
  std::vector<double> y(size_t(form.dimension()));
  for (const auto& x : sols) {
    for (int i = 0; i < form.dimension(); ++i) y[size_t(i)] = double(x[size_t(i)]) / scale;
    acc.add(psi(y));
  }
  return acc.value();
}

std::vector<uint64_t> count_mod_all(const IntegralForm& form, int64_t d,
                                    WorkBudget* budget) {
  if (d <= 0) throw input_error("count_mod: modulus must be positive");
  BudgetTicker ticker{budget, "count_mod"};
  if (form.kind() == FormKind::diagonal) {
    // Per-coordinate value histograms mod d, then cyclic convolution.
    const auto& c = form.diagonal_coeffs();
    std::vector<uint64_t> g(size_t(d), 0);
    g[0] = 1;
    std::vector<uint64_t> hist(static_cast<size_t>(d));
    for (int i = 0; i < form.dimension(); ++i) {
      std::fill(hist.begin(), hist.end(), 0);
      for (int64_t s = 0; s < d; ++s) {
        int64_t v = mulmod_i64(mod_i64(c[size_t(i)], d), powmod_i64(s, uint64_t(form.degree()), d), d);
        hist[size_t(v)] += 1;
      }
      std::vector<uint64_t> next(size_t(d), 0);
      for (int64_t r1 = 0; r1 < d; ++r1) {
        if (!g[size_t(r1)]) continue;
        for (int64_t r2 = 0; r2 < d; ++r2) {
          if (!hist[size_t(r2)]) continue;
          int64_t r = r1 + r2 >= d ? r1 + r2 - d : r1 + r2;
          next[size_t(r)] = checked_mul_add(next[size_t(r)], g[size_t(r1)], hist[size_t(r2)]);
        }
        ticker.tick(size_t(d));
      }
      g = std::move(next);
    }
    ticker.flush();
    return g;
  }
  // Generic: full (Z/d)^n sweep with modular evaluation.
  int n = form.dimension();
  double points = std::pow(double(d), n);
  if (points > 4e18) throw budget_error("count_mod: d^n exceeds any budget");
  std::vector<uint64_t> hist(size_t(d), 0);
  std::vector<int64_t> s(size_t(n), 0);
  for (;;) {
    ticker.tick();
    hist[size_t(form.eval_mod(s, d))] += 1;
    int i = n - 1;
    while (i >= 0 && ++s[size_t(i)] == d) s[size_t(i--)] = 0;
    if (i < 0) break;
  }
  ticker.flush();
  return hist;
}

uint64_t count_mod(const IntegralForm& form, int64_t d, int64_t lambda,
                   WorkBudget* budget) {
  auto all = count_mod_all(form, d, budget);
  return all[size_t(mod_i64(lambda, d))];
}

uint64_t count_ball(const IntegralForm& form, int64_t R, const Congruence& congruence,
                    WorkBudget* budget) {
  if (R < 0) throw input_error("count_ball: negative radius");
  check_congruence(form, congruence);
  if (!form.positive_definite())
    throw input_error("count_ball: requires a positive definite form");
  if (form.kind() == FormKind::diagonal) {
    auto table = build_rep_table(form, R, congruence, CountBackend::convolution, budget);
    return table.cumulative(R);
  }
  BudgetTicker ticker{budget, "count_ball"};
  uint64_t total = 0;
  int64_t B = enumeration_box(form, R);
  box_walk(form, B, congruence, ticker, [&](const std::vector<int64_t>& x) {
    int64_t v = form.eval(x);
    if (v >= 0 && v <= R) ++total;
  });
  ticker.flush();
  return total;
}

cplx level_phase_sum(const IntegralForm& form, const CutoffPsi& psi, int64_t lambda,
                     const std::vector<double>& xi, WorkBudget* budget) {
  if (int(xi.size()) != form.dimension())
    throw input_error("level_phase_sum: frequency arity mismatch");
  if (lambda < 0) throw input_error("level_phase_sum: negative lambda");
  double scale = lambda > 0 ? std::pow(double(lambda), 1.0 / form.degree()) : 1.0;
  bool conv_ok = psi.factors_per_coordinate() &&
                 (diagonal_even_pd(form) || orthant_confined(form, psi));
  if (conv_ok && lambda > 64) {
    // Complex-weighted counting convolution: one array per coordinate with
    // h_i[m] = sum_{c_i s^k = m} psi_i(s/lambda^{1/k}) e(-s xi_i).
    BudgetTicker ticker{budget, "level_phase_sum"};
    bool orthant = !diagonal_even_pd(form);
    const auto& c = form.diagonal_coeffs();
    std::vector<cplx> g(size_t(lambda) + 1, cplx(0, 0));
    bool first = true;
    for (int i = 0; i < form.dimension(); ++i) {
      SparsePhase h;
      int64_t smax = floor_kth_root(lambda / c[size_t(i)], form.degree());
      std::map<int64_t, cplx> acc;
      for (int64_t s = orthant ? 0 : -smax; s <= smax; ++s) {
        double w = psi.coordinate_factor(double(s) / scale);
        if (w == 0.0) continue;
        acc[monomial_value(c[size_t(i)], s, form.degree())] +=
            w * unit_phase(-double(s) * xi[size_t(i)]);
      }
      h.entries.assign(acc.begin(), acc.end());
      if (first) {
        for (const auto& [m, v] : h.entries) g[size_t(m)] = v;
        first = false;
      } else {
        g = convolve_trunc_cplx(g, h, lambda, ticker);
      }
    }
    ticker.flush();
    return g[size_t(lambda)];
  }
  // Reference path: enumerate and sum phases directly.
  auto sols = enumerate_solutions(form, lambda, psi, budget);
  KahanCSum acc;
  std::vector<double> y(size_t(form.dimension()));
  for (const auto& x : sols) {
    double phase = 0, w = 1.0;
    for (int i = 0; i < form.dimension(); ++i) {
      phase -= double(x[size_t(i)]) * xi[size_t(i)];
      y[size_t(i)] = double(x[size_t(i)]) / scale;
    }
    w = psi(y);
    if (w != 0.0) acc.add(w * unit_phase(phase));
  }
  return acc.value();
}

LipschitzFit lipschitz_fit(const IntegralForm& form, const std::vector<int64_t>& radii,
                           const Congruence& congruence, WorkBudget* budget) {
  if (radii.size() < 4)
    throw input_error("lipschitz_fit: need >= 4 radii (two-term fit + residual fit)");
  for (size_t i = 1; i < radii.size(); ++i)
    if (radii[i] <= radii[i - 1])
      throw input_error("lipschitz_fit: radii must be strictly increasing");

  LipschitzFit fit;
  fit.radii = radii;
  if (form.kind() == FormKind::diagonal) {
    auto table = build_rep_table(form, radii.back(), congruence,
                                 CountBackend::convolution, budget);
    for (int64_t R : radii) fit.counts.push_back(table.cumulative(R));
  } else {
    for (int64_t R : radii) fit.counts.push_back(count_ball(form, R, congruence, budget));
  }

  double expo = double(form.dimension()) / double(form.degree());
  // Two-term least squares count ~ C R^e + D R^{e-1}.
  long double s11 = 0, s12 = 0, s22 = 0, b1 = 0, b2 = 0;
  for (size_t i = 0; i < radii.size(); ++i) {
    long double x1 = powl((long double)radii[i], (long double)expo);
    long double x2 = powl((long double)radii[i], (long double)expo - 1);
    long double y = (long double)fit.counts[i];
    s11 += x1 * x1;
    s12 += x1 * x2;
    s22 += x2 * x2;
    b1 += x1 * y;
    b2 += x2 * y;
  }
  long double det = s11 * s22 - s12 * s12;
  if (det == 0) throw input_error("lipschitz_fit: degenerate design matrix");
  fit.leading = double((b1 * s22 - b2 * s12) / det);

  // One-term residuals |count - C R^e| ~ R^beta.
  std::vector<double> lx, ly;
  for (size_t i = 0; i < radii.size(); ++i) {
    double e = std::fabs(double(fit.counts[i]) -
                         fit.leading * std::pow(double(radii[i]), expo));
    lx.push_back(std::log(double(radii[i])));
    ly.push_back(std::log(std::max(e, 1e-9)));
  }
  auto line = fit_line(lx, ly);
  fit.error_exponent = line.slope;
  fit.error_correlation = line.correlation;
  return fit;
}

WindowMaximizer window_count_maximizer(const IntegralForm& form, int64_t p, int J,
                                       const std::vector<int64_t>& b, int64_t R,
                                       double c0, WorkBudget* budget) {
  if (!is_prime_i64(p) || p % 2 == 0)
    throw input_error("window_count_maximizer: p must be an odd prime");
  if (J < 1) throw input_error("window_count_maximizer: J must be >= 1");
  if (R < 1) throw input_error("window_count_maximizer: R must be >= 1");
  if (int(b.size()) != form.dimension())
    throw input_error("window_count_maximizer: residue arity mismatch");
  int64_t pJ = 1;
  for (int t = 0; t < J; ++t) {
    if (__builtin_mul_overflow(pJ, p, &pJ))
      throw overflow_error("window_count_maximizer: p^J overflows");
  }
  std::vector<int64_t> bmod(b);
  for (auto& v : bmod) v = mod_i64(v, pJ);
  int64_t t = form.eval_mod(bmod, pJ);

  auto table = build_rep_table(form, 2 * R - 1, Congruence::fix(pJ, bmod),
                               CountBackend::automatic, budget);
  // First admissible lambda >= R in the forced class lambda == Q(b) mod p^J.
  int64_t first = R + mod_i64(t - R, pJ);
  if (first >= 2 * R)
    throw input_error(
        "window_count_maximizer: window [R,2R) contains no lambda in the "
        "forced congruence class (window shorter than p^J)");
  WindowMaximizer best;
  for (int64_t lambda = first; lambda < 2 * R; lambda += pJ) {
    uint64_t cnt = table.at(lambda);
    if (best.lambda == 0 || cnt > best.count) {
      best.lambda = lambda;
      best.count = cnt;
    }
  }
  double nk = double(form.dimension()) / double(form.degree());
  double scale = std::pow(double(p), -double(J) * (form.dimension() - 1)) *
                 std::pow(double(best.lambda), nk - 1.0);
  best.ratio = double(best.count) / scale;
  best.pass = best.count > 0 && best.ratio >= c0;
  return best;
}

}  // namespace diomax
