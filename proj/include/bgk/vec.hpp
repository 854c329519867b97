// SPDX-License-Identifier: MIT
#pragma once

#include <array>
#include <cmath>

namespace bgk {

/// Small fixed-capacity vector for macroscopic velocities and velocity-space
/// points.  The library's grids are 1D/2D; geometry tests exercise d = 3,
/// hence capacity 3.  Unused components stay zero so norms are safe.
struct Vec {
  int d = 1;
  std::array<double, 3> c{0.0, 0.0, 0.0};

  double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
};

inline Vec vec1(double x) { return Vec{1, {x, 0.0, 0.0}}; }
inline Vec vec2(double x, double y) { return Vec{2, {x, y, 0.0}}; }
inline Vec vec3(double x, double y, double z) { return Vec{3, {x, y, z}}; }

inline Vec operator+(const Vec& a, const Vec& b) {
  Vec r = a;
  for (int i = 0; i < a.d; ++i) r[i] += b[i];
  return r;
}

inline Vec operator-(const Vec& a, const Vec& b) {
  Vec r = a;
  for (int i = 0; i < a.d; ++i) r[i] -= b[i];
  return r;
}

inline Vec operator*(double s, const Vec& a) {
  Vec r = a;
  for (int i = 0; i < a.d; ++i) r[i] *= s;
  return r;
}

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (int i = 0; i < a.d; ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }

}  // namespace bgk
