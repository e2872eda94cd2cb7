#include "meridian/pseudo_linalg.hpp"

#include <algorithm>

#include "meridian/errors.hpp"

namespace meridian {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateCurve: return "DegenerateCurve";
    case ErrorKind::FrameDegenerate: return "FrameDegenerate";
    case ErrorKind::InvalidFrame: return "InvalidFrame";
    case ErrorKind::IntegrationFailure: return "IntegrationFailure";
    case ErrorKind::InvalidGauge: return "InvalidGauge";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::DomainExit: return "DomainExit";
    case ErrorKind::GaugeViolation: return "GaugeViolation";
    case ErrorKind::GaugeBoundary: return "GaugeBoundary";
    case ErrorKind::InvalidFamily: return "InvalidFamily";
    case ErrorKind::LightlikeH: return "LightlikeH";
    case ErrorKind::ZeroH: return "ZeroH";
    case ErrorKind::SignatureError: return "SignatureError";
    case ErrorKind::DegenerateTangent: return "DegenerateTangent";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

double euclidean_norm(const Vec4& v) {
  return std::sqrt(v.x1 * v.x1 + v.x2 * v.x2 + v.x3 * v.x3 + v.x4 * v.x4);
}

double max_abs(const Vec4& v) {
  return std::max({std::abs(v.x1), std::abs(v.x2), std::abs(v.x3), std::abs(v.x4)});
}

const char* to_string(CausalCharacter c) {
  switch (c) {
    case CausalCharacter::Spacelike: return "spacelike";
    case CausalCharacter::Timelike: return "timelike";
    case CausalCharacter::Null: return "null";
  }
  return "unknown";
}

CausalCharacter causal_character(const Vec4& v, double tol) {
  const double q = inner(v, v);
  if (q > tol) return CausalCharacter::Spacelike;
  if (q < -tol) return CausalCharacter::Timelike;
  if (tol == 0.0 ? euclidean_norm(v) == 0.0 : euclidean_norm(v) <= tol) {
    return CausalCharacter::Spacelike;
  }
  return CausalCharacter::Null;
}

Vec4 Transform4::operator()(const Vec4& v) const {
  Vec4 out;
  for (std::size_t r = 0; r < 4; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < 4; ++c) acc += m[r][c] * v[c];
    out[r] = acc;
  }
  return out;
}

const Transform4& congruence_transform() {
  static const Transform4 t{{{
      {0, 0, 0, 1},
      {0, 0, 1, 0},
      {1, 0, 0, 0},
      {0, 1, 0, 0},
  }}};
  return t;
}

Vec4 apply_T(const Vec4& v) { return congruence_transform()(v); }

double det3(const Vec4& a, const Vec4& b, const Vec4& c) {
  return a.x1 * (b.x2 * c.x3 - b.x3 * c.x2) - b.x1 * (a.x2 * c.x3 - a.x3 * c.x2) +
         c.x1 * (a.x2 * b.x3 - a.x3 * b.x2);
}

Vec4 lorentz_cross(const Vec4& a, const Vec4& b) {
  // J (a x b) with J = diag(1, 1, -1): <J w, a> = w . a = 0 for w = a x b.
  return {a.x2 * b.x3 - a.x3 * b.x2, a.x3 * b.x1 - a.x1 * b.x3, -(a.x1 * b.x2 - a.x2 * b.x1), 0.0};
}

}  // namespace meridian
