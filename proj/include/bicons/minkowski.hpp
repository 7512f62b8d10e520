#pragma once

#include <array>
#include <cstddef>

#include "bicons/error.hpp"

namespace bicons {

// Vector of R^5 carrying the Lorentzian product <x,y> = x1 y1 + ... + x4 y4 - x5 y5.
// The hyperboloid model of the 4-dimensional hyperbolic space lives inside this
// space as {<x,x> = -1, x5 > 0}.
struct Vec5 {
  std::array<double, 5> v{0.0, 0.0, 0.0, 0.0, 0.0};

  double& operator[](std::size_t i) { return v[i]; }
  double operator[](std::size_t i) const { return v[i]; }

  Vec5& operator+=(const Vec5& o) {
    for (std::size_t i = 0; i < 5; ++i) v[i] += o.v[i];
    return *this;
  }
  Vec5& operator-=(const Vec5& o) {
    for (std::size_t i = 0; i < 5; ++i) v[i] -= o.v[i];
    return *this;
  }
  Vec5& operator*=(double s) {
    for (std::size_t i = 0; i < 5; ++i) v[i] *= s;
    return *this;
  }
};

inline Vec5 operator+(Vec5 a, const Vec5& b) { return a += b; }
inline Vec5 operator-(Vec5 a, const Vec5& b) { return a -= b; }
inline Vec5 operator*(double s, Vec5 a) { return a *= s; }
inline Vec5 operator*(Vec5 a, double s) { return a *= s; }
inline Vec5 operator-(Vec5 a) { return a *= -1.0; }

// Lorentzian inner product; the fifth coordinate carries the minus sign.
double inner(const Vec5& a, const Vec5& b) noexcept;

// Euclidean norm, used only for scale estimates and zero tests.
double euclidean_norm(const Vec5& a) noexcept;

enum class CausalType { Spacelike, Timelike, Null };

const char* to_string(CausalType t) noexcept;

// Classifies x by the sign of <x,x>, treating |<x,x>| <= tol as Null.
// The tolerance is absolute. Errors: ZeroVector when every component of x is
// below tol in magnitude.
CausalType causal_type(const Vec5& x, double tol = 1e-9);

// True when <x,x> = -1 within tol and the fifth coordinate is positive.
bool on_hyperboloid(const Vec5& x, double tol = 1e-9) noexcept;

using Mat5 = std::array<std::array<double, 5>, 5>;

// Pairwise Lorentzian products of the five frame fields.
Mat5 gram(const std::array<Vec5, 5>& frame) noexcept;

// Largest entrywise deviation of gram(frame) from diag(-1, 1, 1, 1, 1), the
// Gram matrix of a point on the hyperboloid together with an orthonormal
// tangent frame at that point.
double max_gram_deviation(const std::array<Vec5, 5>& frame) noexcept;

}  // namespace bicons
