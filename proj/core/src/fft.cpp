#include "diomax/fft.hpp"

#include <cmath>

namespace diomax {

namespace {

bool is_pow2(size_t n) { return n && !(n & (n - 1)); }

// Iterative radix-2 Cooley-Tukey, sign = -1 forward / +1 inverse (no 1/N).
void fft_pow2(std::vector<cplx>& a, int sign) {
  size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    double ang = double(sign) * 2.0 * M_PI / double(len);
    cplx wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        cplx u = a[i + k], v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

// Bluestein chirp-z: any-N DFT as a cyclic convolution of length >= 2N-1.
void fft_bluestein(std::vector<cplx>& a, int sign) {
  size_t n = a.size();
  size_t m = 1;
  while (m < 2 * n - 1) m <<= 1;
  // chirp[k] = exp(sign * pi * i * k^2 / n); k^2 reduced mod 2n exactly.
  std::vector<cplx> chirp(n);
  for (size_t k = 0; k < n; ++k) {
    size_t k2 = (k * k) % (2 * n);
    double ang = double(sign) * M_PI * double(k2) / double(n);
    chirp[k] = {std::cos(ang), std::sin(ang)};
  }
  std::vector<cplx> u(m, cplx(0, 0)), v(m, cplx(0, 0));
  for (size_t k = 0; k < n; ++k) u[k] = a[k] * chirp[k];
  v[0] = std::conj(chirp[0]);
  for (size_t k = 1; k < n; ++k) v[k] = v[m - k] = std::conj(chirp[k]);
  fft_pow2(u, -1);
  fft_pow2(v, -1);
  for (size_t k = 0; k < m; ++k) u[k] *= v[k];
  fft_pow2(u, +1);
  for (size_t k = 0; k < n; ++k) a[k] = u[k] * chirp[k] / double(m);
}

void fft_any(std::vector<cplx>& a, int sign) {
  if (a.size() <= 1) return;
  if (is_pow2(a.size()))
    fft_pow2(a, sign);
  else
    fft_bluestein(a, sign);
}

void fft_nd(std::vector<cplx>& data, const std::vector<int64_t>& shape, int sign) {
  size_t total = 1;
  for (int64_t s : shape) {
    if (s <= 0) throw input_error("fft_nd: axis lengths must be positive");
    total *= size_t(s);
  }
  if (data.size() != total) throw input_error("fft_nd: shape/data mismatch");
  size_t stride = 1;  // stride of the current axis, walking from the last axis
  for (size_t ax = shape.size(); ax-- > 0;) {
    size_t len = size_t(shape[ax]);
    size_t block = stride * len;
    std::vector<cplx> line(len);
    for (size_t base = 0; base < total; base += block) {
      for (size_t off = 0; off < stride; ++off) {
        for (size_t k = 0; k < len; ++k) line[k] = data[base + off + k * stride];
        fft_any(line, sign);
        for (size_t k = 0; k < len; ++k) data[base + off + k * stride] = line[k];
      }
    }
    stride = block;
  }
}

}  // namespace

void fft_forward(std::vector<cplx>& data) { fft_any(data, -1); }

void fft_inverse(std::vector<cplx>& data) {
  fft_any(data, +1);
  double inv = 1.0 / double(data.size());
  for (auto& z : data) z *= inv;
}

std::vector<cplx> naive_dft(const std::vector<cplx>& data, int sign) {
  size_t n = data.size();
  std::vector<cplx> out(n, cplx(0, 0));
  for (size_t m = 0; m < n; ++m) {
    KahanCSum acc;
    for (size_t x = 0; x < n; ++x) {
      double ang = double(sign) * 2.0 * M_PI * double((m * x) % n) / double(n);
      acc.add(data[x] * cplx(std::cos(ang), std::sin(ang)));
    }
    out[m] = acc.value();
  }
  return out;
}

void fft_forward_nd(std::vector<cplx>& data, const std::vector<int64_t>& shape) {
  fft_nd(data, shape, -1);
}

void fft_inverse_nd(std::vector<cplx>& data, const std::vector<int64_t>& shape) {
  fft_nd(data, shape, +1);
  double inv = 1.0 / double(data.size());
  for (auto& z : data) z *= inv;
}

}  // namespace diomax
