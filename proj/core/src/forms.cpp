#include "diomax/forms.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "diomax/arith.hpp"
#include "diomax/rng.hpp"

namespace diomax {

namespace {

// Checked i64 helpers; on overflow we redo the evaluation in mpz.
bool add_ok(int64_t a, int64_t b, int64_t* out) {
  return !__builtin_add_overflow(a, b, out);
}
bool mul_ok(int64_t a, int64_t b, int64_t* out) {
  return !__builtin_mul_overflow(a, b, out);
}

int64_t mpz_to_i64_checked(const mpz_class& z, const char* what) {
  if (!z.fits_slong_p())
    throw overflow_error(std::string(what) + ": value exceeds 64-bit range");
  return int64_t(z.get_si());
}

}  // namespace

// ----------------------------------------------------------- construction --

IntegralForm IntegralForm::diagonal(int degree, std::vector<int64_t> coeffs) {
  IntegralForm f;
  f.kind_ = FormKind::diagonal;
  f.k_ = degree;
  f.n_ = int(coeffs.size());
  f.coeffs_ = std::move(coeffs);
  f.validate();
  return f;
}

IntegralForm IntegralForm::quadratic(std::vector<int64_t> gram, int n) {
  IntegralForm f;
  f.kind_ = FormKind::quadratic;
  f.k_ = 2;
  f.n_ = n;
  f.gram_ = std::move(gram);
  f.validate();
  return f;
}

IntegralForm IntegralForm::generic(int n, int degree, std::vector<Monomial> monomials,
                                   std::optional<int> declared_birch_rank) {
  IntegralForm f;
  f.kind_ = FormKind::generic;
  f.k_ = degree;
  f.n_ = n;
  f.monomials_ = std::move(monomials);
  f.declared_birch_ = declared_birch_rank;
  f.validate();
  return f;
}

void IntegralForm::validate() const {
  if (n_ <= 0) throw input_error("form: dimension must be positive");
  if (k_ <= 0) throw input_error("form: degree must be positive");
  switch (kind_) {
    case FormKind::diagonal:
      for (int64_t c : coeffs_)
        if (c == 0) throw input_error("form: diagonal coefficients must be nonzero");
      break;
    case FormKind::quadratic: {
      if (int64_t(gram_.size()) != int64_t(n_) * n_)
        throw input_error("form: Gram matrix must be n*n");
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
          if (gram_[size_t(i) * n_ + j] != gram_[size_t(j) * n_ + i])
            throw input_error("form: Gram matrix must be symmetric");
      break;
    }
    case FormKind::generic: {
      if (monomials_.empty()) throw input_error("form: no monomials");
      for (const auto& m : monomials_) {
        if (int(m.exponents.size()) != n_)
          throw input_error("form: monomial exponent arity mismatch");
        int total = 0;
        for (int e : m.exponents) {
          if (e < 0) throw input_error("form: negative exponent");
          total += e;
        }
        if (total != k_)
          throw input_error("form: monomials must be homogeneous of the declared degree");
        if (m.coefficient == 0) throw input_error("form: zero monomial coefficient");
      }
      break;
    }
  }
}

// ------------------------------------------------------------- evaluation --

int64_t IntegralForm::eval(const std::vector<int64_t>& x) const {
  if (int(x.size()) != n_) throw input_error("eval: dimension mismatch");
  // Fast path: checked 64-bit arithmetic.
  bool overflowed = false;
  int64_t acc = 0;
  auto term_i64 = [&](int64_t v) {
    if (!add_ok(acc, v, &acc)) overflowed = true;
  };
  switch (kind_) {
    case FormKind::diagonal:
      for (int i = 0; i < n_ && !overflowed; ++i) {
        int64_t p = 1;
        for (int t = 0; t < k_ && !overflowed; ++t)
          if (!mul_ok(p, x[size_t(i)], &p)) overflowed = true;
        int64_t v;
        if (!overflowed && mul_ok(coeffs_[size_t(i)], p, &v))
          term_i64(v);
        else
          overflowed = true;
      }
      break;
    case FormKind::quadratic:
      for (int i = 0; i < n_ && !overflowed; ++i)
        for (int j = 0; j < n_ && !overflowed; ++j) {
          int64_t v;
          if (mul_ok(gram_[size_t(i) * n_ + j], x[size_t(i)], &v) &&
              mul_ok(v, x[size_t(j)], &v))
            term_i64(v);
          else
            overflowed = true;
        }
      break;
    case FormKind::generic:
      for (const auto& m : monomials_) {
        if (overflowed) break;
        int64_t p = m.coefficient;
        for (int i = 0; i < n_ && !overflowed; ++i)
          for (int e = 0; e < m.exponents[size_t(i)] && !overflowed; ++e)
            if (!mul_ok(p, x[size_t(i)], &p)) overflowed = true;
        if (!overflowed) term_i64(p);
      }
      break;
  }
  if (!overflowed) return acc;

  // Promotion path: exact arbitrary-precision evaluation.
  mpz_class big = 0;
  switch (kind_) {
    case FormKind::diagonal:
      for (int i = 0; i < n_; ++i) {
        mpz_class p = 1;
        for (int t = 0; t < k_; ++t) p *= x[size_t(i)];
        big += mpz_class(long(coeffs_[size_t(i)])) * p;
      }
      break;
    case FormKind::quadratic:
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
          big += mpz_class(long(gram_[size_t(i) * n_ + j])) *
                 mpz_class(long(x[size_t(i)])) * mpz_class(long(x[size_t(j)]));
      break;
    case FormKind::generic:
      for (const auto& m : monomials_) {
        mpz_class p = long(m.coefficient);
        for (int i = 0; i < n_; ++i)
          for (int e = 0; e < m.exponents[size_t(i)]; ++e) p *= x[size_t(i)];
        big += p;
      }
      break;
  }
  return mpz_to_i64_checked(big, "form eval");
}

int64_t IntegralForm::eval_mod(const std::vector<int64_t>& x, int64_t q) const {
  if (int(x.size()) != n_) throw input_error("eval_mod: dimension mismatch");
  if (q <= 0) throw input_error("eval_mod: modulus must be positive");
  int64_t acc = 0;
  switch (kind_) {
    case FormKind::diagonal:
      for (int i = 0; i < n_; ++i) {
        int64_t p = powmod_i64(x[size_t(i)], uint64_t(k_), q);
        acc = (acc + mulmod_i64(mod_i64(coeffs_[size_t(i)], q), p, q)) % q;
      }
      break;
    case FormKind::quadratic:
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
          int64_t v = mulmod_i64(mod_i64(gram_[size_t(i) * n_ + j], q),
                                 mod_i64(x[size_t(i)], q), q);
          acc = (acc + mulmod_i64(v, mod_i64(x[size_t(j)], q), q)) % q;
        }
      break;
    case FormKind::generic:
      for (const auto& m : monomials_) {
        int64_t p = mod_i64(m.coefficient, q);
        for (int i = 0; i < n_; ++i)
          p = mulmod_i64(p, powmod_i64(x[size_t(i)], uint64_t(m.exponents[size_t(i)]), q), q);
        acc = (acc + p) % q;
      }
      break;
  }
  return acc;
}

double IntegralForm::eval_real(const std::vector<double>& x) const {
  if (int(x.size()) != n_) throw input_error("eval_real: dimension mismatch");
  double acc = 0;
  switch (kind_) {
    case FormKind::diagonal:
      for (int i = 0; i < n_; ++i)
        acc += double(coeffs_[size_t(i)]) * std::pow(x[size_t(i)], k_);
      break;
    case FormKind::quadratic:
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
          acc += double(gram_[size_t(i) * n_ + j]) * x[size_t(i)] * x[size_t(j)];
      break;
    case FormKind::generic:
      for (const auto& m : monomials_) {
        double p = double(m.coefficient);
        for (int i = 0; i < n_; ++i) p *= std::pow(x[size_t(i)], m.exponents[size_t(i)]);
        acc += p;
      }
      break;
  }
  return acc;
}

std::vector<int64_t> IntegralForm::gradient(const std::vector<int64_t>& x) const {
  if (int(x.size()) != n_) throw input_error("gradient: dimension mismatch");
  std::vector<int64_t> g(size_t(n_), 0);
  // Exact via GMP throughout; gradient calls are never hot.
  for (int i = 0; i < n_; ++i) {
    mpz_class gi = 0;
    switch (kind_) {
      case FormKind::diagonal: {
        mpz_class p = 1;
        for (int t = 0; t < k_ - 1; ++t) p *= x[size_t(i)];
        gi = mpz_class(long(k_)) * long(coeffs_[size_t(i)]) * p;
        break;
      }
      case FormKind::quadratic: {
        for (int j = 0; j < n_; ++j)
          gi += 2 * mpz_class(long(gram_[size_t(i) * n_ + j])) * long(x[size_t(j)]);
        break;
      }
      case FormKind::generic: {
        for (const auto& m : monomials_) {
          int e = m.exponents[size_t(i)];
          if (e == 0) continue;
          mpz_class p = mpz_class(long(m.coefficient)) * long(e);
          for (int j = 0; j < n_; ++j) {
            int ej = m.exponents[size_t(j)] - (j == i ? 1 : 0);
            for (int t = 0; t < ej; ++t) p *= x[size_t(j)];
          }
          gi += p;
        }
        break;
      }
    }
    g[size_t(i)] = mpz_to_i64_checked(gi, "form gradient");
  }
  return g;
}

std::vector<double> IntegralForm::gradient_real(const std::vector<double>& x) const {
  if (int(x.size()) != n_) throw input_error("gradient_real: dimension mismatch");
  std::vector<double> g(size_t(n_), 0.0);
  switch (kind_) {
    case FormKind::diagonal:
      for (int i = 0; i < n_; ++i)
        g[size_t(i)] = double(k_) * double(coeffs_[size_t(i)]) * std::pow(x[size_t(i)], k_ - 1);
      break;
    case FormKind::quadratic:
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
          g[size_t(i)] += 2.0 * double(gram_[size_t(i) * n_ + j]) * x[size_t(j)];
      break;
    case FormKind::generic:
      for (const auto& m : monomials_)
        for (int i = 0; i < n_; ++i) {
          int e = m.exponents[size_t(i)];
          if (e == 0) continue;
          double p = double(m.coefficient) * e * std::pow(x[size_t(i)], e - 1);
          for (int j = 0; j < n_; ++j)
            if (j != i) p *= std::pow(x[size_t(j)], m.exponents[size_t(j)]);
          g[size_t(i)] += p;
        }
      break;
  }
  return g;
}

// ------------------------------------------------------------- invariants --

bool IntegralForm::positive_definite() const {
  switch (kind_) {
    case FormKind::diagonal: {
      if (k_ % 2 != 0) return false;
      for (int64_t c : coeffs_)
        if (c <= 0) return false;
      return true;
    }
    case FormKind::quadratic: {
      std::vector<double> a(gram_.begin(), gram_.end());
      auto eig = symmetric_eigenvalues(a, n_);
      return eig.front() > 0.0;
    }
    case FormKind::generic: {
      // Sampled check on random directions (deterministic stream).
      RandomStream rng(0xD10D, 7);
      for (int t = 0; t < 4096; ++t) {
        std::vector<double> u(static_cast<size_t>(n_));
        double norm = 0;
        for (auto& c : u) {
          c = rng.next_gaussian();
          norm += c * c;
        }
        norm = std::sqrt(norm);
        if (norm == 0) continue;
        for (auto& c : u) c /= norm;
        if (eval_real(u) <= 0) return false;
      }
      return true;
    }
  }
  return false;
}

BirchRank IntegralForm::birch_rank() const {
  BirchRank b;
  switch (kind_) {
    case FormKind::diagonal:
      // grad Q = (k c_i x_i^{k-1}) vanishes only at the origin when all
      // c_i != 0, so the singular locus is {0} and the codimension is n.
      b.value = n_;
      b.status = BirchRank::Status::verified;
      break;
    case FormKind::quadratic: {
      // Singular locus = kernel of the Gram matrix; codim = rank(A).
      // Exact rank via fraction-free elimination on a copy in mpz.
      std::vector<mpz_class> m;
      m.reserve(gram_.size());
      for (int64_t v : gram_) m.emplace_back(long(v));
      int rank = 0;
      int rows = n_, cols = n_;
      for (int col = 0; col < cols && rank < rows; ++col) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r)
          if (m[size_t(r) * cols + col] != 0) {
            pivot = r;
            break;
          }
        if (pivot < 0) continue;
        for (int c = 0; c < cols; ++c)
          std::swap(m[size_t(pivot) * cols + c], m[size_t(rank) * cols + c]);
        for (int r = rank + 1; r < rows; ++r) {
          mpz_class f = m[size_t(r) * cols + col], p = m[size_t(rank) * cols + col];
          for (int c = 0; c < cols; ++c)
            m[size_t(r) * cols + c] =
                m[size_t(r) * cols + c] * p - m[size_t(rank) * cols + c] * f;
        }
        ++rank;
      }
      b.value = rank;
      b.status = BirchRank::Status::verified;
      break;
    }
    case FormKind::generic:
      if (declared_birch_) {
        b.value = *declared_birch_;
        b.status = BirchRank::Status::declared;
      } else {
        b.value = n_;  // optimistic default, flagged as assumed
        b.status = BirchRank::Status::assumed;
      }
      break;
  }
  b.regular = b.value > (k_ - 1) * (int64_t(1) << k_);
  return b;
}

double IntegralForm::coercivity_bound() const {
  switch (kind_) {
    case FormKind::diagonal: {
      if (!positive_definite())
        throw input_error("coercivity_bound: form is not positive definite");
      int64_t cmin = coeffs_[0];
      for (int64_t c : coeffs_) cmin = std::min(cmin, c);
      // sum c_i x_i^k >= cmin * max|x_i|^k >= cmin * (|x|_2/sqrt(n))^k
      return double(cmin) * std::pow(1.0 / std::sqrt(double(n_)), k_);
    }
    case FormKind::quadratic: {
      std::vector<double> a(gram_.begin(), gram_.end());
      auto eig = symmetric_eigenvalues(a, n_);
      if (eig.front() <= 0)
        throw input_error("coercivity_bound: form is not positive definite");
      return eig.front();
    }
    case FormKind::generic: {
      if (!positive_definite())
        throw input_error("coercivity_bound: form is not positive definite");
      RandomStream rng(0xC0EC, 11);
      double mu = 1e300;
      for (int t = 0; t < 8192; ++t) {
        std::vector<double> u(static_cast<size_t>(n_));
        double norm = 0;
        for (auto& c : u) {
          c = rng.next_gaussian();
          norm += c * c;
        }
        norm = std::sqrt(norm);
        if (norm == 0) continue;
        for (auto& c : u) c /= norm;
        mu = std::min(mu, eval_real(u));
      }
      return 0.5 * mu;  // sampled minimum, halved for safety
    }
  }
  throw input_error("coercivity_bound: unreachable");
}

std::string IntegralForm::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case FormKind::diagonal: {
      os << "diagonal k=" << k_ << " c=(";
      for (int i = 0; i < n_; ++i) os << (i ? "," : "") << coeffs_[size_t(i)];
      os << ")";
      break;
    }
    case FormKind::quadratic:
      os << "quadratic n=" << n_;
      break;
    case FormKind::generic:
      os << "generic n=" << n_ << " k=" << k_ << " terms=" << monomials_.size();
      break;
  }
  return os.str();
}

// ------------------------------------------------------------------ cutoff --

double smooth_step(double s) {
  // B(s) = exp(-1/s) glue: 0 below 0, 1 above 1, C^infinity everywhere.
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  double a = std::exp(-1.0 / s);
  double b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

CutoffPsi CutoffPsi::unit() {
  CutoffPsi p;
  p.kind_ = PsiKind::unit;
  return p;
}

CutoffPsi CutoffPsi::positive_orthant() {
  CutoffPsi p;
  p.kind_ = PsiKind::positive_orthant;
  return p;
}

CutoffPsi CutoffPsi::custom_radial(std::vector<std::pair<double, double>> profile) {
  if (profile.size() < 2) throw input_error("custom_radial: need >= 2 samples");
  for (size_t i = 0; i < profile.size(); ++i) {
    if (profile[i].second < 0.0 || profile[i].second > 1.0)
      throw input_error("custom_radial: values must lie in [0,1]");
    if (i && profile[i].first <= profile[i - 1].first)
      throw input_error("custom_radial: radii must increase");
  }
  CutoffPsi p;
  p.kind_ = PsiKind::custom_radial;
  p.profile_ = std::move(profile);
  return p;
}

double CutoffPsi::coordinate_factor(double t) const {
  switch (kind_) {
    case PsiKind::unit:
      return 1.0;
    case PsiKind::positive_orthant:
      // 0 below 1/20, 1 above 3/20.
      return smooth_step((t - 0.05) / 0.10);
    case PsiKind::custom_radial:
      throw input_error("custom_radial cutoff does not factor per coordinate");
  }
  return 1.0;
}

double CutoffPsi::operator()(const std::vector<double>& x) const {
  switch (kind_) {
    case PsiKind::unit:
      return 1.0;
    case PsiKind::positive_orthant: {
      double v = 1.0;
      for (double t : x) {
        v *= coordinate_factor(t);
        if (v == 0.0) break;
      }
      return v;
    }
    case PsiKind::custom_radial: {
      double r = 0;
      for (double t : x) r += t * t;
      r = std::sqrt(r);
      if (r >= profile_.back().first) return 0.0;
      if (r <= profile_.front().first) return profile_.front().second;
      for (size_t i = 1; i < profile_.size(); ++i) {
        if (r <= profile_[i].first) {
          double t = (r - profile_[i - 1].first) /
                     (profile_[i].first - profile_[i - 1].first);
          return profile_[i - 1].second +
                 t * (profile_[i].second - profile_[i - 1].second);
        }
      }
      return 0.0;
    }
  }
  return 1.0;
}

double CutoffPsi::support_box() const {
  if (kind_ == PsiKind::custom_radial) return profile_.back().first;
  return std::numeric_limits<double>::infinity();
}

std::string CutoffPsi::describe() const {
  switch (kind_) {
    case PsiKind::unit:
      return "unit";
    case PsiKind::positive_orthant:
      return "positive_orthant";
    case PsiKind::custom_radial:
      return "custom_radial[" + std::to_string(profile_.size()) + "]";
  }
  return "?";
}

}  // namespace diomax
