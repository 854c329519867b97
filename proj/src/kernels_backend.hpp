// SPDX-License-Identifier: MIT
//
// Internal backend table for the array kernels.  Not installed; the public
// surface is bgk/kernels.hpp.
#pragma once

#include <cstddef>

namespace bgk::kern {

struct Backend {
  double (*sum)(const double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  double (*min_value)(const double*, std::size_t);
  double (*max_value)(const double*, std::size_t);
  double (*max_abs)(const double*, std::size_t);
  void (*axpby)(double, const double*, double, const double*, double*, std::size_t);
  void (*eq_indicator_row)(const double*, std::size_t, double, double, double,
                           double, double*);
  void (*eq_positive_row)(const double*, std::size_t, double, double, double,
                          double, double, double*);
};

/// Reduction layout shared by every backend (see bgk/kernels.hpp).
inline constexpr std::size_t kBlock = 256;

const Backend& scalar_backend();

#if defined(BGK_HAVE_AVX2)
const Backend& avx2_backend();
#endif

/// Fold an array of block partial sums with a fixed pairwise tree (in place,
/// destroys the buffer).  Shared so both backends combine blocks identically.
double fold_blocks(double* blocks, std::size_t count);

/// General positive-part row used by both backends for exponents without a
/// vector path.
void eq_positive_row_generic(const double* vx, std::size_t n, double ux,
                             double base, double b, double c, double half_n,
                             double* out);

}  // namespace bgk::kern
