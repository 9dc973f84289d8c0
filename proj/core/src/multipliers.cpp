#include "diomax/multipliers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "diomax/arith.hpp"
#include "diomax/bessel.hpp"
#include "diomax/expsums.hpp"
#include "diomax/rng.hpp"

namespace diomax {

// ---------------------------------------------------------------- zeta bump

double zeta_bump(double t) { return smooth_step((0.2 - std::fabs(t)) / 0.1); }

double zeta_bump(const std::vector<double>& v) {
  double p = 1.0;
  for (double t : v) {
    p *= zeta_bump(t);
    if (p == 0.0) return 0.0;
  }
  return p;
}

double zeta_profile_ft(double u) {
  // Plateau part: 2 * int_0^{1/10} cos(2 pi u t) dt, exactly.
  double plateau = u == 0.0 ? 0.2 : std::sin(0.2 * M_PI * u) / (M_PI * u);
  // Ramp part: 2 * int_{1/10}^{1/5} zeta(t) cos(2 pi u t) dt by composite
  // Simpson; the integrand is C^infinity so the rule converges like h^4.
  constexpr int kIntervals = 2048;  // even
  const double a = 0.1, b = 0.2, h = (b - a) / kIntervals;
  KahanSum acc;
  for (int i = 0; i <= kIntervals; ++i) {
    double t = a + i * h;
    double w = (i == 0 || i == kIntervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc.add(w * zeta_bump(t) * std::cos(2.0 * M_PI * u * t));
  }
  return plateau + 2.0 * acc.value() * h / 3.0;
}

// ------------------------------------------------------- surface measure FT

namespace {

double sphere_area(int n) {
  return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

SurfaceFT SurfaceFT::closed_form(const IntegralForm& form) {
  if (form.degree() != 2 || !form.positive_definite())
    throw input_error(
        "closed-form surface transform requires a positive definite "
        "quadratic form");
  int n = form.dimension();
  std::vector<double> gram(size_t(n) * size_t(n), 0.0);
  if (form.kind() == FormKind::diagonal) {
    for (int i = 0; i < n; ++i)
      gram[size_t(i) * size_t(n) + size_t(i)] = double(form.diagonal_coeffs()[size_t(i)]);
  } else if (form.kind() == FormKind::quadratic) {
    for (size_t i = 0; i < gram.size(); ++i) gram[i] = double(form.gram()[i]);
  } else {
    throw input_error("closed-form surface transform: unsupported form kind");
  }
  SurfaceFT s;
  s.backend_ = Backend::closed_form;
  s.n_ = n;
  s.eigvals_ = symmetric_eigenvalues(gram, n, &s.eigvecs_);
  s.det_factor_ = 1.0;
  for (double ev : s.eigvals_) {
    if (ev <= 0) throw input_error("closed-form surface transform: Gram not positive");
    s.det_factor_ /= std::sqrt(ev);
  }
  return s;
}

SurfaceFT SurfaceFT::monte_carlo(const IntegralForm& form, const CutoffPsi& psi,
                                 uint64_t seed, int64_t samples) {
  if (samples < 16) throw input_error("surface sampling: too few samples");
  SurfaceFT s;
  s.backend_ = Backend::monte_carlo;
  s.n_ = form.dimension();
  s.form_ = form;
  s.psi_ = psi;
  s.seed_ = seed;
  s.samples_ = samples;
  return s;
}

SurfaceFT SurfaceFT::standin(int dimension) {
  SurfaceFT s;
  s.backend_ = Backend::standin;
  s.n_ = dimension;
  return s;
}

void SurfaceFT::mc_evaluate(const std::vector<double>& xi, cplx* value,
                            double* se) const {
  // Stream keyed to (seed, argument) so the estimate at a frequency is a
  // fixed number, not a draw: evaluating twice gives identical bits.
  uint64_t h = mix_u64(seed_ ^ 0x5u);
  for (double c : xi) h = mix_u64(h ^ std::bit_cast<uint64_t>(c));
  RandomStream rng(seed_, h);

  int n = n_, k = form_.degree();
  double nk = double(n) / double(k);
  std::vector<double> u(static_cast<size_t>(n)), x(static_cast<size_t>(n));
  KahanCSum sum;
  KahanSum sumsq;
  for (int64_t t = 0; t < samples_; ++t) {
    double norm2 = 0;
    do {
      norm2 = 0;
      for (auto& c : u) {
        c = rng.next_gaussian();
        norm2 += c * c;
      }
    } while (norm2 < 1e-12);
    double inv = 1.0 / std::sqrt(norm2);
    for (auto& c : u) c *= inv;
    double qu = form_.eval_real(u);
    cplx w(0, 0);
    if (qu <= 0) {
      // No real point of {Q=1} along this ray.  Tolerable only if psi kills
      // the whole ray; otherwise the measure itself is ill-posed here.
      bool killed = false;
      if (psi_.kind() == PsiKind::positive_orthant) {
        for (double c : u) killed = killed || c <= 0.0;
      }
      if (!killed)
        throw input_error(
            "surface sampling failure: ray without a real point on {Q=1} "
            "inside supp psi");
    } else {
      double rho = std::pow(qu, -1.0 / k);
      for (int i = 0; i < n; ++i) x[size_t(i)] = rho * u[size_t(i)];
      double weight = std::pow(qu, -nk) * psi_(x);
      w = weight * unit_phase(dot(x, xi));
    }
    sum.add(w);
    sumsq.add(std::norm(w));
  }
  double scale = sphere_area(n) / double(k);
  cplx mean = sum.value() / double(samples_);
  double var = std::max(0.0, sumsq.value() / double(samples_) - std::norm(mean));
  *value = scale * mean;
  *se = scale * std::sqrt(var / double(samples_));
}

cplx SurfaceFT::operator()(const std::vector<double>& xi) const {
  if (int(xi.size()) != n_) throw input_error("surface transform: arity mismatch");
  switch (backend_) {
    case Backend::closed_form: {
      // |A^{-1/2} xi|^2 = sum_c <xi, v_c>^2 / eigval_c
      double r2 = 0;
      for (int c = 0; c < n_; ++c) {
        double w = 0;
        for (int r = 0; r < n_; ++r)
          w += eigvecs_[size_t(r) * size_t(n_) + size_t(c)] * xi[size_t(r)];
        r2 += w * w / eigvals_[size_t(c)];
      }
      double r = std::sqrt(r2);
      double nu = 0.5 * (n_ - 2);
      double v = r < 1e-12
                     ? std::pow(M_PI, nu + 1) / std::tgamma(nu + 1)
                     : M_PI * std::pow(r, -nu) * bessel_j(nu, 2.0 * M_PI * r);
      return cplx(det_factor_ * v, 0.0);
    }
    case Backend::monte_carlo: {
      cplx v;
      double se;
      mc_evaluate(xi, &v, &se);
      return v;
    }
    case Backend::standin: {
      double r2 = 0;
      for (double c : xi) r2 += c * c;
      return cplx(1.0 / (1.0 + r2), 0.0);
    }
  }
  return cplx(0, 0);
}

double SurfaceFT::standard_error(const std::vector<double>& xi) const {
  if (backend_ != Backend::monte_carlo) return 0.0;
  cplx v;
  double se;
  mc_evaluate(xi, &v, &se);
  return se;
}

double SurfaceFT::mass() const {
  return (*this)(std::vector<double>(size_t(n_), 0.0)).real();
}

double surface_decay_exponent(const IntegralForm& form) {
  double B = form.birch_rank().value;
  double k = form.degree();
  double pk = std::pow(2.0, k);
  return 0.5 * ((B - (k - 1) * (pk / 2)) / pk - 1.0);
}

RayDecayFit ray_decay_fit(const SurfaceFT& sft, double r_min, double r_max,
                          int n_radii, int n_rays, uint64_t seed) {
  if (!(r_min > 0) || !(r_max > r_min) || n_radii < 2 || n_rays < 1)
    throw input_error("ray_decay_fit: bad sampling plan");
  int n = sft.dimension();
  RandomStream rng(seed, 0xDECA1ull);
  std::vector<double> lx, ly;
  std::vector<double> u(static_cast<size_t>(n)), xi(static_cast<size_t>(n));
  for (int ray = 0; ray < n_rays; ++ray) {
    double norm2 = 0;
    do {
      norm2 = 0;
      for (auto& c : u) {
        c = rng.next_gaussian();
        norm2 += c * c;
      }
    } while (norm2 < 1e-12);
    for (auto& c : u) c /= std::sqrt(norm2);
    for (int m = 0; m < n_radii; ++m) {
      double rho = r_min * std::pow(r_max / r_min, double(m) / (n_radii - 1));
      // The transform oscillates; track the envelope over a jitter window so
      // the fit never lands on a zero of the oscillation.  Fit against the
      // radius where the window maximum is attained, not the window center:
      // the attained point sits on the envelope curve, so this removes the
      // +-15% abscissa slack that otherwise leaks into the slope.
      double env = 0.0;
      double r_star = rho;
      constexpr int kJitter = 64;
      for (int t = 0; t < kJitter; ++t) {
        double r = rho * (0.85 + 0.3 * (t + 0.5) / kJitter);
        for (int i = 0; i < n; ++i) xi[size_t(i)] = r * u[size_t(i)];
        double v = std::abs(sft(xi));
        if (v > env) {
          env = v;
          r_star = r;
        }
      }
      lx.push_back(std::log(r_star));
      ly.push_back(std::log(std::max(env, 1e-300)));
    }
  }
  auto line = fit_line(lx, ly);
  RayDecayFit fit;
  fit.exponent = -line.slope;
  fit.correlation = line.correlation;
  fit.r_min = r_min;
  fit.r_max = r_max;
  fit.rays = n_rays;
  return fit;
}

// --------------------------------------------------------------- multipliers

cplx omega_hat(const IntegralForm& form, const CutoffPsi& psi, int64_t lambda,
               const std::vector<double>& xi, WorkBudget* budget) {
  double r = count_representations(form, psi, lambda, budget);
  if (!(r > 0)) throw input_error("omega_hat: lambda carries no psi-mass");
  // level_phase_sum carries e(-x.xi); psi is real, so conjugating flips it.
  return std::conj(level_phase_sum(form, psi, lambda, xi, budget)) / r;
}

namespace {

struct Localization {
  bool live = false;
  double bump = 0.0;
  std::vector<int64_t> avec;      // nearest numerators (unreduced residues)
  std::vector<double> offset;     // xi - avec/q, per coordinate
};

// Nearest rational grid point avec/q and the bump value there.  The zeta
// window 2/(5*10^j) is narrower than the grid spacing 1/q for every q < 2^j,
// so at most one grid point is live; this is asserted.
Localization localize(const std::vector<double>& xi, int64_t q, int j) {
  Localization loc;
  double tenj = std::pow(10.0, j);
  loc.bump = 1.0;
  loc.avec.resize(xi.size());
  loc.offset.resize(xi.size());
  for (size_t i = 0; i < xi.size(); ++i) {
    int64_t a = int64_t(std::llround(xi[i] * double(q)));
    double off = xi[i] - double(a) / double(q);
    double b = zeta_bump(tenj * off);
    if (b == 0.0) {
      loc.bump = 0.0;
      return loc;
    }
    for (int64_t alt : {a - 1, a + 1}) {
      if (zeta_bump(tenj * (xi[i] - double(alt) / double(q))) != 0.0)
        throw input_error("localization windows overlap; grid spacing too fine");
    }
    loc.avec[i] = a;
    loc.offset[i] = off;
    loc.bump *= b;
  }
  loc.live = true;
  return loc;
}

void check_level(int j, int64_t q) {
  if (j < 1) throw input_error("main_term: level j must be >= 1");
  if (q < (int64_t(1) << (j - 1)) || q >= (int64_t(1) << j))
    throw input_error("main_term: q outside the dyadic level I_j");
}

// Shared core of the raw and completed terms: the bump, the radial factor at
// lambda^{1/k}(xi - avec/q), and sum_{a in A} F_q(a, avec) e(-a lambda / q)
// with A = U_q (raw) or Z_q (completed).
cplx modulated_term(const IntegralForm& form, int64_t lambda, int j, int64_t q,
                    const std::vector<double>& xi, const SurfaceFT& radial,
                    bool complete_residues, WorkBudget* budget) {
  if (int(xi.size()) != form.dimension())
    throw input_error("multiplier: frequency arity mismatch");
  if (q < 1) throw input_error("multiplier: modulus must be >= 1");
  auto loc = localize(xi, q, j);
  if (!loc.live) return cplx(0, 0);

  double scale = lambda > 0 ? std::pow(double(lambda), 1.0 / form.degree()) : 1.0;
  std::vector<double> arg(xi.size());
  for (size_t i = 0; i < xi.size(); ++i) arg[i] = scale * loc.offset[i];
  cplx rad = radial(arg);

  std::vector<int64_t> avec_mod(xi.size());
  for (size_t i = 0; i < xi.size(); ++i) avec_mod[i] = mod_i64(loc.avec[i], q);
  RootTable rt(q);
  int64_t lm = mod_i64(lambda, q);
  KahanCSum wsum;
  if (complete_residues) {
    for (int64_t a = 0; a < q; ++a)
      wsum.add(weyl_sum(form, q, a, avec_mod, budget) * rt(-mulmod_i64(lm, a, q)));
  } else {
    for (int64_t a : units_mod(q))
      wsum.add(weyl_sum(form, q, a, avec_mod, budget) * rt(-mulmod_i64(lm, a, q)));
  }
  return wsum.value() * loc.bump * rad;
}

}  // namespace

cplx main_term(const IntegralForm& form, int64_t lambda, int j, int64_t q,
               const std::vector<double>& xi, const SurfaceFT& radial,
               WorkBudget* budget) {
  check_level(j, q);
  return modulated_term(form, lambda, j, q, xi, radial, false, budget);
}

cplx completed_term(const IntegralForm& form, int64_t lambda, int j, int64_t d,
                    const std::vector<double>& xi, const SurfaceFT& radial,
                    WorkBudget* budget) {
  if (j < 1) throw input_error("completed_term: level j must be >= 1");
  return modulated_term(form, lambda, j, d, xi, radial, true, budget);
}

cplx main_term_level(const IntegralForm& form, int64_t lambda, int j,
                     const std::vector<double>& xi, const SurfaceFT& radial,
                     WorkBudget* budget) {
  if (j < 1) throw input_error("main_term_level: level j must be >= 1");
  KahanCSum acc;
  for (int64_t q = int64_t(1) << (j - 1); q < (int64_t(1) << j); ++q)
    acc.add(modulated_term(form, lambda, j, q, xi, radial, false, budget));
  return acc.value();
}

cplx truncated_main(const IntegralForm& form, int64_t lambda, int j_cap,
                    const std::vector<double>& xi, const SurfaceFT& radial,
                    WorkBudget* budget) {
  KahanCSum acc;
  for (int j = 1; j <= j_cap; ++j)
    acc.add(main_term_level(form, lambda, j, xi, radial, budget));
  return acc.value();
}

int64_t divisor_constant(int j, int64_t d) {
  if (j < 1 || d < 1) throw input_error("divisor_constant: j, d must be >= 1");
  int64_t hi = ((int64_t(1) << j) - 1) / d;
  if (hi < 1) return 0;
  int64_t lo = ((int64_t(1) << (j - 1)) + d - 1) / d;
  auto mu = moebius_table(hi);
  int64_t sum = 0;
  for (int64_t h = std::max<int64_t>(1, lo); h <= hi; ++h) sum += mu[size_t(h)];
  return sum;
}

double mobius_completion_check(const IntegralForm& form, int64_t lambda, int j,
                               int64_t q,
                               const std::vector<std::vector<double>>& xis,
                               const SurfaceFT& radial, WorkBudget* budget) {
  check_level(j, q);
  auto divs = divisors(q);
  auto mu = moebius_table(q);
  double worst = 0.0;
  for (const auto& xi : xis) {
    cplx lhs = main_term(form, lambda, j, q, xi, radial, budget);
    KahanCSum rhs;
    for (int64_t d : divs)
      rhs.add(double(mu[size_t(q / d)]) *
              completed_term(form, lambda, j, d, xi, radial, budget));
    worst = std::max(worst, std::abs(lhs - rhs.value()));

    cplx level = main_term_level(form, lambda, j, xi, radial, budget);
    KahanCSum folded;
    for (int64_t d = 1; d < (int64_t(1) << j); ++d) {
      int64_t c = divisor_constant(j, d);
      if (c != 0)
        folded.add(double(c) *
                   completed_term(form, lambda, j, d, xi, radial, budget));
    }
    worst = std::max(worst, std::abs(level - folded.value()));
  }
  return worst;
}

// -------------------------------------------------------------- error decay

ErrorDecayReport error_term_decay(const IntegralForm& form, const CutoffPsi& psi,
                                  const std::vector<int64_t>& lambdas, int j_cap,
                                  int xi_samples, uint64_t seed,
                                  const SurfaceFT& radial, WorkBudget* budget) {
  if (lambdas.size() < 2)
    throw input_error("error_term_decay: need >= 2 lambdas for the decay fit");
  if (j_cap < 0 || xi_samples < 1)
    throw input_error("error_term_decay: bad truncation or sample plan");
  int n = form.dimension();
  double nk1 = double(n) / double(form.degree()) - 1.0;

  RandomStream rng(seed, 0x0E44ull);
  std::vector<std::vector<double>> xis(static_cast<size_t>(xi_samples));
  for (auto& xi : xis) {
    xi.resize(size_t(n));
    for (auto& c : xi) c = rng.next_double() - 0.5;
  }
  std::vector<double> zero(size_t(n), 0.0);

  ErrorDecayReport rep;
  rep.lambdas = lambdas;
  rep.j_cap = j_cap;
  rep.xi_samples = xi_samples;
  rep.seed = seed;
  std::vector<double> lx, ly;
  for (int64_t lambda : lambdas) {
    double r = count_representations(form, psi, lambda, budget);
    if (!(r > 0)) throw input_error("error_term_decay: unrepresented lambda");
    double normalize = std::pow(double(lambda), nk1) / r;
    double worst = 0.0;
    for (const auto& xi : xis) {
      cplx oh = std::conj(level_phase_sum(form, psi, lambda, xi, budget)) / r;
      cplx mt = truncated_main(form, lambda, j_cap, xi, radial, budget);
      worst = std::max(worst, std::abs(oh - normalize * mt));
    }
    rep.errors.push_back(worst);
    rep.at_zero.push_back(std::abs(
        1.0 - normalize * truncated_main(form, lambda, j_cap, zero, radial, budget)));
    lx.push_back(std::log(double(lambda)));
    ly.push_back(std::log(std::max(worst, 1e-300)));
  }
  auto line = fit_line(lx, ly);
  rep.delta_hat = -line.slope;
  rep.correlation = line.correlation;

  // Dropped-level bound at the largest lambda: the unit bump and |dsigma|
  // <= mass let sum_{q in I_j} phi(q) s(q) * mass majorize each level.
  int64_t lmax = *std::max_element(lambdas.begin(), lambdas.end());
  double rmax = count_representations(form, psi, lmax, budget);
  double normalize = std::pow(double(lmax), nk1) / rmax;
  KahanSum tail;
  for (int j = j_cap + 1; j <= j_cap + 3; ++j) {
    for (int64_t q = int64_t(1) << (j - 1); q < (int64_t(1) << j); ++q)
      tail.add(double(euler_phi(q)) * weyl_sup(form, q, budget));
  }
  rep.tail_estimate = tail.value() * radial.mass() * normalize;
  return rep;
}

// ------------------------------------------------------- convolution kernel

double kernel_vtd(const IntegralForm& form, int64_t d, int64_t t,
                  const std::vector<int64_t>& x) {
  if (d < 1) throw input_error("kernel_vtd: modulus must be >= 1");
  if (int(x.size()) != form.dimension())
    throw input_error("kernel_vtd: arity mismatch");
  if (form.eval_mod(x, d) != mod_i64(t, d)) return 0.0;
  double v = double(d);
  for (int64_t c : x) v *= zeta_profile_ft(double(c) / double(d)) / double(d);
  return v;
}

double kernel_envelope_constant(const IntegralForm& form, int64_t d, int64_t t,
                                int samples, uint64_t seed) {
  if (samples < 1) throw input_error("kernel_envelope_constant: no samples");
  int n = form.dimension();
  RandomStream rng(seed, 0x4E5Dull);
  int64_t box = 5 * d;
  std::vector<int64_t> x(static_cast<size_t>(n));
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    double norm2 = 0;
    for (auto& c : x) {
      c = int64_t(rng.next_below(uint64_t(2 * box + 1))) - box;
      norm2 += double(c) * double(c);
    }
    double v = std::fabs(kernel_vtd(form, d, t, x));
    if (v == 0.0) continue;
    double envelope = std::pow(std::sqrt(double(n)) + 1.0 + std::sqrt(norm2) / double(d),
                               -(n + 1)) *
                      std::pow(double(d), 1 - n);
    best = std::max(best, v / envelope);
  }
  return best;
}

}  // namespace diomax
