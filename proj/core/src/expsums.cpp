#include "diomax/expsums.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "diomax/arith.hpp"
#include "diomax/counting.hpp"
#include "diomax/fft.hpp"
#include "diomax/rng.hpp"

namespace diomax {

namespace {

void check_args(const IntegralForm& form, int64_t q,
                const std::vector<int64_t>& avec) {
  if (q < 1) throw input_error("weyl_sum: modulus must be >= 1");
  if (int(avec.size()) != form.dimension())
    throw input_error("weyl_sum: linear-phase arity mismatch");
}

// One-dimensional complete sum  sum_{s=0}^{L-1} e(num(s)/L)  with
// num(s) = cq * s^k + cl * s  (all residues mod L), Kahan-accumulated.
cplx line_sum(const RootTable& rt, int64_t cq, int64_t cl, int k) {
  int64_t L = rt.modulus();
  KahanCSum acc;
  for (int64_t s = 0; s < L; ++s) {
    int64_t ph = mulmod_i64(cq, powmod_i64(s, uint64_t(k), L), L);
    ph = mod_i64(ph + mulmod_i64(cl, s, L), L);
    acc.add(rt(ph));
  }
  return acc.value();
}

uint64_t pow_u64_checked(int64_t base, int exp, bool* overflow) {
  uint64_t v = 1;
  for (int i = 0; i < exp; ++i) {
    if (__builtin_mul_overflow(v, uint64_t(base), &v)) {
      *overflow = true;
      return 0;
    }
  }
  *overflow = false;
  return v;
}

}  // namespace

cplx weyl_sum(const IntegralForm& form, int64_t q, int64_t a,
              const std::vector<int64_t>& avec, WorkBudget* budget) {
  check_args(form, q, avec);
  if (q == 1) return cplx(1, 0);
  int n = form.dimension(), k = form.degree();
  int64_t am = mod_i64(a, q);
  RootTable rt(q);

  if (form.kind() == FormKind::diagonal) {
    if (budget) budget->charge(uint64_t(n) * uint64_t(q), "weyl_sum");
    cplx prod(1, 0);
    for (int i = 0; i < n; ++i) {
      int64_t cq = mulmod_i64(mod_i64(form.diagonal_coeffs()[size_t(i)], q), am, q);
      prod *= line_sum(rt, cq, mod_i64(avec[size_t(i)], q), k) / double(q);
    }
    return prod;
  }

  bool ovf = false;
  uint64_t points = pow_u64_checked(q, n, &ovf);
  if (ovf) throw budget_error("weyl_sum: q^n exceeds any budget");
  if (budget) budget->charge(points, "weyl_sum");
  KahanCSum acc;
  std::vector<int64_t> s(size_t(n), 0);
  for (;;) {
    int64_t ph = mulmod_i64(am, form.eval_mod(s, q), q);
    for (int i = 0; i < n; ++i)
      ph = mod_i64(ph + mulmod_i64(mod_i64(avec[size_t(i)], q), s[size_t(i)], q), q);
    acc.add(rt(ph));
    int i = n - 1;
    while (i >= 0 && ++s[size_t(i)] == q) s[size_t(i--)] = 0;
    if (i < 0) break;
  }
  return acc.value() / std::pow(double(q), n);
}

cplx generalized_weyl_sum(const IntegralForm& form, int64_t a, int64_t q,
                          const std::vector<int64_t>& avec,
                          const std::vector<int64_t>& qvec,
                          WorkBudget* budget) {
  check_args(form, q, avec);
  if (int(qvec.size()) != form.dimension())
    throw input_error("generalized_weyl_sum: denominator arity mismatch");
  int64_t L = q;
  for (int64_t qi : qvec) {
    if (qi < 1) throw input_error("generalized_weyl_sum: denominators must be >= 1");
    L = lcm_i64(L, qi);
  }
  int n = form.dimension(), k = form.degree();
  RootTable rt(L);
  int64_t am = mod_i64(a, q);

  if (form.kind() == FormKind::diagonal) {
    if (budget) budget->charge(uint64_t(n) * uint64_t(L), "generalized_weyl_sum");
    cplx prod(1, 0);
    for (int i = 0; i < n; ++i) {
      // a*c_i*s^k/q + a_i*s/q_i  ==  (a*c_i*(L/q)*s^k + a_i*(L/q_i)*s) / L
      int64_t cq = mulmod_i64(mod_i64(form.diagonal_coeffs()[size_t(i)], L),
                              mulmod_i64(am, L / q, L), L);
      int64_t cl = mulmod_i64(mod_i64(avec[size_t(i)], L), L / qvec[size_t(i)], L);
      prod *= line_sum(rt, cq, cl, k) / double(L);
    }
    return prod;
  }

  bool ovf = false;
  uint64_t points = pow_u64_checked(L, n, &ovf);
  if (ovf) throw budget_error("generalized_weyl_sum: L^n exceeds any budget");
  if (budget) budget->charge(points, "generalized_weyl_sum");
  KahanCSum acc;
  std::vector<int64_t> s(size_t(n), 0);
  int64_t aq = mulmod_i64(am, L / q, L);
  for (;;) {
    int64_t ph = mulmod_i64(aq, form.eval_mod(s, L), L);
    for (int i = 0; i < n; ++i) {
      int64_t ci = mulmod_i64(mod_i64(avec[size_t(i)], L), L / qvec[size_t(i)], L);
      ph = mod_i64(ph + mulmod_i64(ci, s[size_t(i)], L), L);
    }
    acc.add(rt(ph));
    int i = n - 1;
    while (i >= 0 && ++s[size_t(i)] == L) s[size_t(i--)] = 0;
    if (i < 0) break;
  }
  return acc.value() / std::pow(double(L), n);
}

double weyl_sup(const IntegralForm& form, int64_t q, WorkBudget* budget,
                bool* sampled, uint64_t seed, int64_t sample_cap) {
  if (sampled) *sampled = false;
  if (q < 1) throw input_error("weyl_sup: modulus must be >= 1");
  if (q == 1) return 1.0;
  int n = form.dimension(), k = form.degree();

  if (form.kind() == FormKind::diagonal) {
    // For fixed a the modulus factors: |F_q(a, avec)| = prod_i |g_i(a_i)|/q
    // with g_i(a_i) = sum_s e((c_i a s^k + a_i s)/q); each coordinate factor
    // is maximized over its own a_i, read off one length-q DFT of the pure
    // power-phase vector.  Coordinates sharing c_i mod q share the DFT.
    RootTable rt(q);
    std::map<int64_t, int> classes;  // c_i mod q -> multiplicity
    for (int64_t c : form.diagonal_coeffs()) classes[mod_i64(c, q)] += 1;
    double best = 0.0;
    for (int64_t a : units_mod(q)) {
      if (budget)
        budget->charge(uint64_t(classes.size()) * uint64_t(q) * 16, "weyl_sup");
      double prod = 1.0;
      for (const auto& [cm, mult] : classes) {
        int64_t cq = mulmod_i64(cm, a, q);
        std::vector<cplx> h(static_cast<size_t>(q));
        for (int64_t s = 0; s < q; ++s)
          h[size_t(s)] = std::conj(rt(mulmod_i64(cq, powmod_i64(s, uint64_t(k), q), q)));
        fft_forward(h);  // |DFT(conj h)[m]| = |sum_s e((cq s^k + m s)/q)|
        double m = 0.0;
        for (const cplx& z : h) m = std::max(m, std::abs(z));
        prod *= std::pow(m / double(q), mult);
      }
      best = std::max(best, prod);
    }
    return best;
  }

  bool ovf = false;
  uint64_t points = pow_u64_checked(q, n, &ovf);
  bool exhaustive = !ovf && int64_t(points) <= sample_cap;
  if (sampled) *sampled = !exhaustive;
  RandomStream rng(seed, mix_u64(uint64_t(q)));
  double best = 0.0;
  std::vector<int64_t> avec(size_t(n), 0);
  for (int64_t a : units_mod(q)) {
    if (exhaustive) {
      std::fill(avec.begin(), avec.end(), 0);
      for (;;) {
        best = std::max(best, std::abs(weyl_sum(form, q, a, avec, budget)));
        int i = n - 1;
        while (i >= 0 && ++avec[size_t(i)] == q) avec[size_t(i--)] = 0;
        if (i < 0) break;
      }
    } else {
      std::fill(avec.begin(), avec.end(), 0);
      best = std::max(best, std::abs(weyl_sum(form, q, a, avec, budget)));
      for (int64_t t = 1; t < sample_cap; ++t) {
        for (auto& v : avec) v = int64_t(rng.next_below(uint64_t(q)));
        best = std::max(best, std::abs(weyl_sum(form, q, a, avec, budget)));
      }
    }
  }
  return best;
}

AlphaEstimate estimate_alpha(const IntegralForm& form, int64_t q_max,
                             ModulusFilter filter, WorkBudget* budget,
                             uint64_t seed) {
  if (q_max < 8) throw input_error("estimate_alpha: q_max must be >= 8");
  AlphaEstimate est;
  est.q_max = q_max;
  est.filter = filter;
  for (int64_t q = 2; q <= q_max; ++q) {
    bool keep = false;
    switch (filter) {
      case ModulusFilter::squarefree: keep = is_squarefree(q); break;
      case ModulusFilter::odd_squarefree: keep = q % 2 == 1 && is_squarefree(q); break;
      case ModulusFilter::all: keep = true; break;
      case ModulusFilter::prime_powers: {
        int64_t p = 2;
        while (p * p <= q && q % p != 0) ++p;
        if (q % p != 0) p = q;
        int64_t r = q;
        while (r % p == 0) r /= p;
        keep = r == 1;
        break;
      }
    }
    if (keep) est.moduli.push_back(q);
  }
  if (est.moduli.size() < 3)
    throw input_error("estimate_alpha: filter leaves fewer than 3 moduli");

  std::vector<double> lx, ly;
  for (int64_t q : est.moduli) {
    bool s_flag = false;
    double s = weyl_sup(form, q, budget, &s_flag, seed);
    est.sampled = est.sampled || s_flag;
    est.suprema.push_back(s);
    lx.push_back(std::log(double(q)));
    ly.push_back(std::log(std::max(s, 1e-300)));
  }
  auto line = fit_line(lx, ly);
  est.alpha_hat = -line.slope;
  est.alpha_stderr = line.slope_stderr;
  est.correlation = line.correlation;
  est.intercept = line.intercept;

  bool have = false;
  for (size_t i = 0; i < est.moduli.size(); ++i) {
    if (est.moduli[i] % 2 == 0) continue;
    if (est.suprema[i] >= 1.0 - 1e-12) continue;
    double ratio = -std::log(est.suprema[i]) / std::log(double(est.moduli[i]));
    if (!have || ratio < est.pointwise_min) {
      est.pointwise_min = ratio;
      est.pointwise_argmin = est.moduli[i];
      have = true;
    }
  }
  return est;
}

// ---------------------------------------------------------------- identities

namespace {

// sum_{a in U_q} F_q(a, 0) e(-lambda a / q)
cplx unit_phase_sum(const IntegralForm& form, int64_t q, int64_t lambda,
                    WorkBudget* budget) {
  RootTable rt(q);
  KahanCSum acc;
  std::vector<int64_t> zero(size_t(form.dimension()), 0);
  for (int64_t a : units_mod(q))
    acc.add(weyl_sum(form, q, a, zero, budget) * rt(-mod_i64(lambda * a, q)));
  return acc.value();
}

double density(uint64_t count, int64_t d, int n) {
  return double(count) / std::pow(double(d), n - 1);
}

}  // namespace

double residue_identity_check(const IntegralForm& form, int64_t q,
                              int64_t lambda, WorkBudget* budget) {
  if (q < 2) throw input_error("residue_identity_check: requires q >= 2");
  int n = form.dimension();
  auto mu = moebius_table(q);
  KahanSum lhs_plain, lhs_centered;
  for (int64_t d : divisors(q)) {
    double dens = density(count_mod(form, d, lambda, budget), d, n);
    int m = mu[size_t(q / d)];
    lhs_plain.add(m * dens);
    lhs_centered.add(m * (dens - 1.0));
  }
  cplx rhs = unit_phase_sum(form, q, lambda, budget);
  return std::max(std::abs(cplx(lhs_plain.value(), 0) - rhs),
                  std::abs(cplx(lhs_centered.value(), 0) - rhs));
}

double divisor_identity_check(const IntegralForm& form, int64_t q,
                              int64_t lambda, WorkBudget* budget) {
  if (q < 1) throw input_error("divisor_identity_check: requires q >= 1");
  int n = form.dimension();
  double lhs = density(count_mod(form, q, lambda, budget), q, n);
  KahanCSum rhs;
  for (int64_t d : divisors(q)) rhs.add(unit_phase_sum(form, d, lambda, budget));
  return std::abs(cplx(lhs, 0) - rhs.value());
}

ResidueBoundReport residue_bound_check(const IntegralForm& form, int64_t q,
                                       WorkBudget* budget) {
  if (q < 2) throw input_error("residue_bound_check: requires q >= 2");
  int n = form.dimension();
  auto mu = moebius_table(q);
  auto divs = divisors(q);
  std::vector<std::vector<uint64_t>> rows;
  for (int64_t d : divs) rows.push_back(count_mod_all(form, d, budget));

  ResidueBoundReport rep;
  for (int64_t r = 0; r < q; ++r) {
    KahanSum centered;
    for (size_t t = 0; t < divs.size(); ++t) {
      int64_t d = divs[t];
      centered.add(mu[size_t(q / d)] *
                   (density(rows[t][size_t(mod_i64(r, d))], d, n) - 1.0));
    }
    rep.majorant = std::max(rep.majorant, std::fabs(centered.value()));
    rep.density_max =
        std::max(rep.density_max, density(rows.back()[size_t(r)], q, n));
  }
  std::vector<int64_t> zero(size_t(n), 0);
  for (int64_t t : units_mod(q))
    rep.unit_sum_max =
        std::max(rep.unit_sum_max, std::abs(weyl_sum(form, q, t, zero, budget)));
  rep.slack = rep.majorant - rep.unit_sum_max;
  return rep;
}

}  // namespace diomax
