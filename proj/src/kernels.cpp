// SPDX-License-Identifier: MIT
//
// Scalar reference backend and runtime dispatch.  The scalar reductions
// deliberately mimic the 4-lane accumulator layout of the AVX2 backend so
// the two produce bit-identical results; see bgk/kernels.hpp.

#include "bgk/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "kernels_backend.hpp"

namespace bgk::kern {

double fold_blocks(double* blocks, std::size_t count) {
  while (count > 1) {
    std::size_t half = count / 2;
    for (std::size_t i = 0; i < half; ++i) blocks[i] = blocks[2 * i] + blocks[2 * i + 1];
    if (count % 2 != 0) {
      blocks[half] = blocks[count - 1];
      ++half;
    }
    count = half;
  }
  return blocks[0];
}

void eq_positive_row_generic(const double* vx, std::size_t n, double ux,
                             double base, double b, double c, double half_n,
                             double* out) {
  for (std::size_t j = 0; j < n; ++j) {
    double dvx = vx[j] - ux;
    double t = b - (dvx * dvx + base);
    out[j] = t > 0.0 ? c * std::pow(t, half_n) : 0.0;
  }
}

namespace {

double block_sum(const double* x, std::size_t len) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    acc[0] += x[i];
    acc[1] += x[i + 1];
    acc[2] += x[i + 2];
    acc[3] += x[i + 3];
  }
  for (; i < len; ++i) acc[i % 4] += x[i];
  return (acc[0] + acc[2]) + (acc[1] + acc[3]);
}

double block_dot(const double* x, const double* y, std::size_t len) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    acc[0] += x[i] * y[i];
    acc[1] += x[i + 1] * y[i + 1];
    acc[2] += x[i + 2] * y[i + 2];
    acc[3] += x[i + 3] * y[i + 3];
  }
  for (; i < len; ++i) acc[i % 4] += x[i] * y[i];
  return (acc[0] + acc[2]) + (acc[1] + acc[3]);
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

double s_sum(const double* x, std::size_t n) {
  return reduce_blocks(n, [&](std::size_t lo, std::size_t len) { return block_sum(x + lo, len); });
}

double s_dot(const double* x, const double* y, std::size_t n) {
  return reduce_blocks(n, [&](std::size_t lo, std::size_t len) { return block_dot(x + lo, y + lo, len); });
}

double s_min(const double* x, std::size_t n) {
  double m = x[0];
  for (std::size_t i = 1; i < n; ++i)
    if (x[i] < m) m = x[i];
  return m;
}

double s_max(const double* x, std::size_t n) {
  double m = x[0];
  for (std::size_t i = 1; i < n; ++i)
    if (x[i] > m) m = x[i];
  return m;
}

double s_max_abs(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double a = std::fabs(x[i]);
    if (a > m) m = a;
  }
  return m;
}

void s_axpby(double a, const double* x, double b, const double* y, double* out,
             std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void s_eq_indicator_row(const double* vx, std::size_t n, double ux, double base,
                        double r2, double amp, double* out) {
  for (std::size_t j = 0; j < n; ++j) {
    double dvx = vx[j] - ux;
    out[j] = (dvx * dvx + base) <= r2 ? amp : 0.0;
  }
}

void s_eq_positive_row(const double* vx, std::size_t n, double ux, double base,
                       double b, double c, double half_n, double* out) {
  if (half_n == 1.0) {
    for (std::size_t j = 0; j < n; ++j) {
      double dvx = vx[j] - ux;
      double t = b - (dvx * dvx + base);
      out[j] = t > 0.0 ? c * t : 0.0;
    }
  } else if (half_n == 0.5) {
    for (std::size_t j = 0; j < n; ++j) {
      double dvx = vx[j] - ux;
      double t = b - (dvx * dvx + base);
      out[j] = t > 0.0 ? c * std::sqrt(t) : 0.0;
    }
  } else {
    eq_positive_row_generic(vx, n, ux, base, b, c, half_n, out);
  }
}

}  // namespace

const Backend& scalar_backend() {
  static const Backend backend{s_sum,     s_dot,   s_min,
                               s_max,     s_max_abs, s_axpby,
                               s_eq_indicator_row, s_eq_positive_row};
  return backend;
}

namespace {

struct Dispatch {
  Isa isa;
  const Backend* backend;
};

Dispatch make_dispatch() {
  bool want_avx2 = false;
#if defined(BGK_HAVE_AVX2)
  __builtin_cpu_init();
  want_avx2 = __builtin_cpu_supports("avx2");
#endif
  if (const char* env = std::getenv("BGK_SIMD")) {
    std::string mode(env);
    if (mode == "scalar") want_avx2 = false;
    // "avx2" keeps detection (no forcing onto CPUs without it); "auto" and
    // anything else fall through to the detected choice.
  }
#if defined(BGK_HAVE_AVX2)
  if (want_avx2) return {Isa::Avx2, &avx2_backend()};
#endif
  return {Isa::Scalar, &scalar_backend()};
}

Dispatch& dispatch() {
  static Dispatch d = make_dispatch();
  return d;
}

}  // namespace

Isa active_isa() { return dispatch().isa; }

bool avx2_available() {
#if defined(BGK_HAVE_AVX2)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa set_isa(Isa isa) {
  if (isa == Isa::Avx2 && avx2_available()) {
#if defined(BGK_HAVE_AVX2)
    dispatch() = {Isa::Avx2, &avx2_backend()};
#endif
  } else {
    dispatch() = {Isa::Scalar, &scalar_backend()};
  }
  return dispatch().isa;
}

double sum(const double* x, std::size_t n) { return dispatch().backend->sum(x, n); }
double dot(const double* x, const double* y, std::size_t n) {
  return dispatch().backend->dot(x, y, n);
}
double min_value(const double* x, std::size_t n) { return dispatch().backend->min_value(x, n); }
double max_value(const double* x, std::size_t n) { return dispatch().backend->max_value(x, n); }
double max_abs(const double* x, std::size_t n) { return dispatch().backend->max_abs(x, n); }
void axpby(double a, const double* x, double b, const double* y, double* out,
           std::size_t n) {
  dispatch().backend->axpby(a, x, b, y, out, n);
}
void eq_indicator_row(const double* vx, std::size_t n, double ux, double base,
                      double r2, double amp, double* out) {
  dispatch().backend->eq_indicator_row(vx, n, ux, base, r2, amp, out);
}
void eq_positive_row(const double* vx, std::size_t n, double ux, double base,
                     double b, double c, double half_n, double* out) {
  dispatch().backend->eq_positive_row(vx, n, ux, base, b, c, half_n, out);
}

}  // namespace bgk::kern
