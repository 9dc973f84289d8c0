#include "diomax/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace diomax {

int64_t gcd_i64(int64_t a, int64_t b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b) {
    int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

int64_t lcm_i64(int64_t a, int64_t b) {
  if (a == 0 || b == 0) throw input_error("lcm of zero");
  int64_t g = gcd_i64(a, b);
  __int128 l = (__int128)(a / g) * b;
  if (l > INT64_MAX || l < 0) throw overflow_error("lcm overflow");
  return int64_t(l);
}

int64_t powmod_i64(int64_t base, uint64_t e, int64_t m) {
  if (m <= 0) throw input_error("powmod: modulus must be positive");
  int64_t r = 1 % m, b = mod_i64(base, m);
  while (e) {
    if (e & 1) r = mulmod_i64(r, b, m);
    b = mulmod_i64(b, b, m);
    e >>= 1;
  }
  return r;
}

std::vector<int> moebius_table(int64_t n) {
  std::vector<int> mu(size_t(n) + 1, 1);
  std::vector<char> sieved(size_t(n) + 1, 0);
  mu[0] = 0;
  for (int64_t p = 2; p <= n; ++p) {
    if (sieved[size_t(p)]) continue;
    for (int64_t m = p; m <= n; m += p) {
      sieved[size_t(m)] = 1;
      mu[size_t(m)] = -mu[size_t(m)];
    }
    if (p <= n / p) {
      for (int64_t m = p * p; m <= n; m += p * p) mu[size_t(m)] = 0;
    }
  }
  return mu;
}

std::vector<int64_t> divisors(int64_t n) {
  if (n <= 0) throw input_error("divisors: n must be positive");
  std::vector<int64_t> small, large;
  for (int64_t d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      small.push_back(d);
      if (d != n / d) large.push_back(n / d);
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

std::vector<int64_t> units_mod(int64_t q) {
  if (q <= 0) throw input_error("units_mod: q must be positive");
  if (q == 1) return {0};  // U_1 = Z_1 = {0}
  std::vector<int64_t> u;
  for (int64_t a = 1; a < q; ++a)
    if (gcd_i64(a, q) == 1) u.push_back(a);
  return u;
}

int64_t euler_phi(int64_t q) {
  if (q <= 0) throw input_error("euler_phi: q must be positive");
  if (q == 1) return 1;
  int64_t result = q, m = q;
  for (int64_t p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      result -= result / p;
      while (m % p == 0) m /= p;
    }
  }
  if (m > 1) result -= result / m;
  return result;
}

bool is_squarefree(int64_t q) {
  if (q <= 0) return false;
  for (int64_t p = 2; p * p <= q; ++p) {
    if (q % (p * p) == 0) return false;
    while (q % p == 0) q /= p;
  }
  return true;
}

bool is_prime_i64(int64_t p) {
  if (p < 2) return false;
  for (int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

int64_t floor_kth_root(int64_t m, int k) {
  if (m < 0 || k < 1) throw input_error("floor_kth_root: need m >= 0, k >= 1");
  if (m < 2 || k == 1) return m;
  auto pow_le = [&](int64_t r) {
    // r^k <= m without overflow (r, m >= 0)
    __int128 p = 1;
    for (int t = 0; t < k; ++t) {
      p *= r;
      if (p > m) return false;
    }
    return p <= m;
  };
  int64_t r = int64_t(std::floor(std::pow(double(m), 1.0 / double(k))));
  while (r > 0 && !pow_le(r)) --r;
  while (pow_le(r + 1)) ++r;
  return r;
}

RootTable::RootTable(int64_t L) : L_(L) {
  if (L <= 0) throw input_error("RootTable: modulus must be positive");
  roots_.resize(size_t(L));
  for (int64_t m = 0; m < L; ++m) {
    double a = 2.0 * M_PI * double(m) / double(L);
    roots_[size_t(m)] = {std::cos(a), std::sin(a)};
  }
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw input_error("fit_line: need at least two paired samples");
  size_t n = x.size();
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / double(n);
  double my = std::accumulate(y.begin(), y.end(), 0.0) / double(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw input_error("fit_line: degenerate abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.correlation = syy > 0 ? sxy / std::sqrt(sxx * syy) : 0.0;
  if (n > 2) {
    double rss = 0;
    for (size_t i = 0; i < n; ++i) {
      double e = y[i] - (f.intercept + f.slope * x[i]);
      rss += e * e;
    }
    f.slope_stderr = std::sqrt(rss / (double(n) - 2.0) / sxx);
  }
  return f;
}

std::vector<double> symmetric_eigenvalues(const std::vector<double>& a, int n,
                                          std::vector<double>* vectors) {
  if (int(a.size()) != n * n) throw input_error("symmetric_eigenvalues: bad size");
  std::vector<double> m = a;
  std::vector<double> v(size_t(n) * n, 0.0);
  for (int i = 0; i < n; ++i) v[size_t(i) * n + i] = 1.0;
  auto at = [&](std::vector<double>& w, int i, int j) -> double& {
    return w[size_t(i) * n + j];
  };
  // Cyclic Jacobi sweeps; 40 sweeps is far beyond convergence for n <= 16.
  for (int sweep = 0; sweep < 40; ++sweep) {
    double off = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += at(m, i, j) * at(m, i, j);
    if (off < 1e-26) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = at(m, p, q);
        if (std::fabs(apq) < 1e-300) continue;
        double theta = (at(m, q, q) - at(m, p, p)) / (2 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int i = 0; i < n; ++i) {
          double mip = at(m, i, p), miq = at(m, i, q);
          at(m, i, p) = c * mip - s * miq;
          at(m, i, q) = s * mip + c * miq;
        }
        for (int i = 0; i < n; ++i) {
          double mpi = at(m, p, i), mqi = at(m, q, i);
          at(m, p, i) = c * mpi - s * mqi;
          at(m, q, i) = s * mpi + c * mqi;
        }
        for (int i = 0; i < n; ++i) {
          double vip = at(v, i, p), viq = at(v, i, q);
          at(v, i, p) = c * vip - s * viq;
          at(v, i, q) = s * vip + c * viq;
        }
      }
    }
  }
  std::vector<std::pair<double, int>> order(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) order[size_t(i)] = {at(m, i, i), i};
  std::sort(order.begin(), order.end());
  std::vector<double> eig(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) eig[size_t(i)] = order[size_t(i)].first;
  if (vectors) {
    vectors->assign(size_t(n) * n, 0.0);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        (*vectors)[size_t(i) * n + j] = at(v, i, order[size_t(j)].second);
  }
  return eig;
}

}  // namespace diomax
