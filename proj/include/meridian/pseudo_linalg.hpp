#pragma once

// Vectors of the neutral-signature 4-space with metric
//   dx1^2 + dx2^2 - dx3^2 - dx4^2
// and the handful of 3-space helpers used by the spherical-curve layer.

#include <array>
#include <cmath>
#include <cstddef>

namespace meridian {

/// Default tolerance for classifying computed (inexact) vectors as null.
inline constexpr double kNullTolerance = 1e-10;

struct Vec4 {
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;
  double x4 = 0.0;

  constexpr double operator[](std::size_t i) const {
    return i == 0 ? x1 : i == 1 ? x2 : i == 2 ? x3 : x4;
  }
  constexpr double& operator[](std::size_t i) {
    return i == 0 ? x1 : i == 1 ? x2 : i == 2 ? x3 : x4;
  }

  constexpr Vec4& operator+=(const Vec4& o) {
    x1 += o.x1; x2 += o.x2; x3 += o.x3; x4 += o.x4;
    return *this;
  }
  constexpr Vec4& operator-=(const Vec4& o) {
    x1 -= o.x1; x2 -= o.x2; x3 -= o.x3; x4 -= o.x4;
    return *this;
  }
  constexpr Vec4& operator*=(double s) {
    x1 *= s; x2 *= s; x3 *= s; x4 *= s;
    return *this;
  }

  friend constexpr bool operator==(const Vec4&, const Vec4&) = default;
};

constexpr Vec4 operator+(Vec4 a, const Vec4& b) { return a += b; }
constexpr Vec4 operator-(Vec4 a, const Vec4& b) { return a -= b; }
constexpr Vec4 operator-(const Vec4& a) { return {-a.x1, -a.x2, -a.x3, -a.x4}; }
constexpr Vec4 operator*(double s, Vec4 a) { return a *= s; }
constexpr Vec4 operator*(Vec4 a, double s) { return a *= s; }
constexpr Vec4 operator/(Vec4 a, double s) { return a *= (1.0 / s); }

inline constexpr Vec4 kE1{1, 0, 0, 0};
inline constexpr Vec4 kE2{0, 1, 0, 0};
inline constexpr Vec4 kE3{0, 0, 1, 0};
inline constexpr Vec4 kE4{0, 0, 0, 1};

/// Indefinite inner product of signature (+,+,-,-).
constexpr double inner(const Vec4& v, const Vec4& w) {
  return v.x1 * w.x1 + v.x2 * w.x2 - v.x3 * w.x3 - v.x4 * w.x4;
}

double euclidean_norm(const Vec4& v);
double max_abs(const Vec4& v);

enum class CausalCharacter { Spacelike, Timelike, Null };

const char* to_string(CausalCharacter c);

/// Null when |<v,v>| <= tol and v is not (numerically) the zero vector; the
/// zero vector counts as spacelike. Pass tol = 0 for exact literal inputs.
CausalCharacter causal_character(const Vec4& v, double tol = kNullTolerance);

/// A linear map of the 4-space stored as a row-major 4x4 matrix acting on
/// column vectors.
struct Transform4 {
  std::array<std::array<double, 4>, 4> m{};

  Vec4 operator()(const Vec4& v) const;
};

/// The fixed permutation taking the meridian surfaces on the second-type
/// hypersurface with axis e4 onto those with axis e1. It swaps the spacelike
/// pair {e1, e2} with the timelike pair {e3, e4}, so it reverses the sign of
/// the metric: <T v, T w> = -<v, w>.
const Transform4& congruence_transform();

Vec4 apply_T(const Vec4& v);

// --- 3-space helpers on span{e1, e2, e3} (x4 ignored) -----------------------

/// Euclidean determinant of the 3x3 matrix with columns a, b, c.
double det3(const Vec4& a, const Vec4& b, const Vec4& c);

/// Cross product adapted to the (+,+,-) metric: the result is orthogonal to
/// both arguments with respect to <.,.>.
Vec4 lorentz_cross(const Vec4& a, const Vec4& b);

}  // namespace meridian
