// SPDX-License-Identifier: MIT
//
// AVX2 backend.  Compiled with -mavx2 and only on x86_64; selected at
// runtime after a cpuid check.  No FMA anywhere: every operation must round
// exactly like the scalar backend's add/mul sequence.

#include <immintrin.h>

#include <cmath>
#include <cstddef>
#include <vector>

#include "kernels_backend.hpp"

namespace bgk::kern {
namespace {

inline double horizontal(__m256d acc) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  return (lane[0] + lane[2]) + (lane[1] + lane[3]);
}

double block_sum(const double* x, std::size_t len) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (; i < len; ++i) lane[i % 4] += x[i];
  return (lane[0] + lane[2]) + (lane[1] + lane[3]);
}

double block_dot(const double* x, const double* y, std::size_t len) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    __m256d p = _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc = _mm256_add_pd(acc, p);
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (; i < len; ++i) lane[i % 4] += x[i] * y[i];
  return (lane[0] + lane[2]) + (lane[1] + lane[3]);
}

template <typename BlockFn>
double reduce_blocks(std::size_t n, BlockFn&& block) {
  if (n == 0) return 0.0;
  std::size_t nblocks = (n + kBlock - 1) / kBlock;
  if (nblocks == 1) return block(0, n);
  std::vector<double> partial(nblocks);
  for (std::size_t b = 0; b < nblocks; ++b) {
    std::size_t lo = b * kBlock;
    std::size_t len = lo + kBlock <= n ? kBlock : n - lo;
    partial[b] = block(lo, len);
  }
  return fold_blocks(partial.data(), nblocks);
}

double v_sum(const double* x, std::size_t n) {
  return reduce_blocks(n, [&](std::size_t lo, std::size_t len) { return block_sum(x + lo, len); });
}

double v_dot(const double* x, const double* y, std::size_t n) {
  return reduce_blocks(n, [&](std::size_t lo, std::size_t len) { return block_dot(x + lo, y + lo, len); });
}

double v_min(const double* x, std::size_t n) {
  std::size_t i = 0;
  double m = x[0];
  if (n >= 4) {
    __m256d acc = _mm256_loadu_pd(x);
    for (i = 4; i + 4 <= n; i += 4) acc = _mm256_min_pd(acc, _mm256_loadu_pd(x + i));
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    m = lane[0];
    for (int l = 1; l < 4; ++l)
      if (lane[l] < m) m = lane[l];
  }
  for (; i < n; ++i)
    if (x[i] < m) m = x[i];
  return m;
}

double v_max(const double* x, std::size_t n) {
  std::size_t i = 0;
  double m = x[0];
  if (n >= 4) {
    __m256d acc = _mm256_loadu_pd(x);
    for (i = 4; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(x + i));
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    m = lane[0];
    for (int l = 1; l < 4; ++l)
      if (lane[l] > m) m = lane[l];
  }
  for (; i < n; ++i)
    if (x[i] > m) m = x[i];
  return m;
}

double v_max_abs(const double* x, std::size_t n) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_max_pd(acc, _mm256_andnot_pd(sign_mask, _mm256_loadu_pd(x + i)));
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  double m = (lane[0] > lane[1] ? lane[0] : lane[1]);
  double m2 = (lane[2] > lane[3] ? lane[2] : lane[3]);
  if (m2 > m) m = m2;
  for (; i < n; ++i) {
    double a = std::fabs(x[i]);
    if (a > m) m = a;
  }
  return m;
}

void v_axpby(double a, const double* x, double b, const double* y, double* out,
             std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d t = _mm256_add_pd(_mm256_mul_pd(va, _mm256_loadu_pd(x + i)),
                              _mm256_mul_pd(vb, _mm256_loadu_pd(y + i)));
    _mm256_storeu_pd(out + i, t);
  }
  for (; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void v_eq_indicator_row(const double* vx, std::size_t n, double ux, double base,
                        double r2, double amp, double* out) {
  const __m256d vux = _mm256_set1_pd(ux);
  const __m256d vbase = _mm256_set1_pd(base);
  const __m256d vr2 = _mm256_set1_pd(r2);
  const __m256d vamp = _mm256_set1_pd(amp);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d dvx = _mm256_sub_pd(_mm256_loadu_pd(vx + j), vux);
    __m256d q = _mm256_add_pd(_mm256_mul_pd(dvx, dvx), vbase);
    __m256d mask = _mm256_cmp_pd(q, vr2, _CMP_LE_OQ);
    _mm256_storeu_pd(out + j, _mm256_and_pd(mask, vamp));
  }
  for (; j < n; ++j) {
    double dvx = vx[j] - ux;
    out[j] = (dvx * dvx + base) <= r2 ? amp : 0.0;
  }
}

void v_eq_positive_row(const double* vx, std::size_t n, double ux, double base,
                       double b, double c, double half_n, double* out) {
  if (half_n != 1.0 && half_n != 0.5) {
    eq_positive_row_generic(vx, n, ux, base, b, c, half_n, out);
    return;
  }
  const bool linear = (half_n == 1.0);
  const __m256d vux = _mm256_set1_pd(ux);
  const __m256d vbase = _mm256_set1_pd(base);
  const __m256d vb = _mm256_set1_pd(b);
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d dvx = _mm256_sub_pd(_mm256_loadu_pd(vx + j), vux);
    __m256d t = _mm256_sub_pd(vb, _mm256_add_pd(_mm256_mul_pd(dvx, dvx), vbase));
    __m256d mask = _mm256_cmp_pd(t, zero, _CMP_GT_OQ);
    __m256d val = linear ? _mm256_mul_pd(vc, t)
                         : _mm256_mul_pd(vc, _mm256_sqrt_pd(_mm256_and_pd(mask, t)));
    _mm256_storeu_pd(out + j, _mm256_and_pd(mask, val));
  }
  for (; j < n; ++j) {
    double dvx = vx[j] - ux;
    double t = b - (dvx * dvx + base);
    out[j] = t > 0.0 ? (linear ? c * t : c * std::sqrt(t)) : 0.0;
  }
}

}  // namespace

const Backend& avx2_backend() {
  static const Backend backend{v_sum,     v_dot,   v_min,
                               v_max,     v_max_abs, v_axpby,
                               v_eq_indicator_row, v_eq_positive_row};
  return backend;
}

}  // namespace bgk::kern
