// SPDX-License-Identifier: MIT
//
// Low-level array kernels with a scalar reference backend and an AVX2
// backend selected at runtime.  The two backends are required to produce
// bit-identical results, which constrains the arithmetic:
//
//  * Reductions use one fixed association.  The input is cut into blocks of
//    256 elements; inside a block four lane accumulators are advanced in
//    steps of four (acc[l] += x[4*i+l]), the tail goes into lane (j % 4),
//    and lanes combine as (acc0 + acc2) + (acc1 + acc3).  Block results are
//    then folded by a fixed pairwise tree.  The scalar backend performs the
//    same association the AVX2 backend does, so sums agree bit for bit and
//    runs are reproducible regardless of the machine the binary lands on.
//  * The build disables FP contraction and the AVX2 paths avoid FMA, so
//    per-element arithmetic is the same rounded sequence in both backends.
//
// Equilibrium row samplers live here too since they dominate the runtime of
// moment evaluation and relaxation.
#pragma once

#include <cstddef>
#include <cstdint>

namespace bgk::kern {

enum class Isa { Scalar, Avx2 };

/// Backend chosen at startup: AVX2 when the CPU supports it, else scalar.
/// The BGK_SIMD environment variable (auto|scalar|avx2) overrides detection;
/// asking for avx2 on a machine without it falls back to scalar.
Isa active_isa();

/// Force a backend (used by the equivalence tests). Returns the ISA actually
/// installed, which may be Scalar if AVX2 is unavailable.
Isa set_isa(Isa isa);

/// True when the AVX2 backend can run on this machine.
bool avx2_available();

// ==========================================================================
// Reductions (fixed association, see file comment)
// ==========================================================================

double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double min_value(const double* x, std::size_t n);
double max_value(const double* x, std::size_t n);
double max_abs(const double* x, std::size_t n);

// ==========================================================================
// Elementwise
// ==========================================================================

/// out[i] = a*x[i] + b*y[i].  out may alias x or y.
void axpby(double a, const double* x, double b, const double* y, double* out,
           std::size_t n);

/// Indicator equilibrium row: out[j] = amp when (vx[j]-ux)^2 + base <= r2,
/// else 0.
void eq_indicator_row(const double* vx, std::size_t n, double ux, double base,
                      double r2, double amp, double* out);

/// Positive-part equilibrium row:
///   t = b - ((vx[j]-ux)^2 + base),  out[j] = c * t^half_n for t > 0 else 0.
/// half_n of 1.0 and 0.5 have vector paths; other exponents run scalar code
/// through the same entry point so dispatch stays uniform.
void eq_positive_row(const double* vx, std::size_t n, double ux, double base,
                     double b, double c, double half_n, double* out);

}  // namespace bgk::kern
