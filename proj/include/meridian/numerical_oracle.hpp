#pragma once

// Finite-difference Gauss and Weingarten formulas for an arbitrary immersion
// of a Lorentz surface into the neutral 4-space. Shares no code with the
// closed-form layer beyond the vector type.

#include <functional>
#include <limits>

#include "meridian/numerics.hpp"
#include "meridian/pseudo_linalg.hpp"

namespace meridian::oracle {

using numerics::Interval;

inline constexpr Interval kUnbounded{-std::numeric_limits<double>::infinity(),
                                     std::numeric_limits<double>::infinity()};

struct TangentPair {
  Vec4 zu;
  Vec4 zv;
};

struct Immersion {
  std::function<Vec4(double, double)> z;
  /// Optional exact first partials; used by induced_metric when present.
  std::function<TangentPair(double, double)> analytic_first;
  Interval u_domain = kUnbounded;
  Interval v_domain = kUnbounded;
};

struct OracleOptions {
  double h_step = 1e-4;
  /// Richardson extrapolation levels over steps h, h/2, ..., h/2^levels.
  int richardson_levels = 0;
  /// Differentiate the immersion's analytic first partials once instead of
  /// z twice, when available.
  bool use_analytic_first = true;
  /// Threshold on |EG - F^2| below which the tangent plane is degenerate.
  double degeneracy_tol = 1e-12;
};

struct Partials {
  Vec4 zu, zv, zuu, zuv, zvv;
};

/// Central-difference partials up to order two. Throws OutOfDomain when a
/// stencil point would leave the domain.
Partials partials(const Immersion& im, double u, double v, const OracleOptions& opt = {});

struct InducedMetric {
  double E = 0.0;
  double F = 0.0;
  double G = 0.0;

  double det() const { return E * G - F * F; }
};

struct InverseMetric {
  double uu = 0.0;
  double uv = 0.0;
  double vv = 0.0;
};

InducedMetric metric_from(const Partials& p);

/// Explicit signed 2x2 inverse. Throws DegenerateTangent when |det| <= tol.
InverseMetric inverse(const InducedMetric& g, double tol = 1e-12);

/// Uses the analytic first partials when the immersion has them. Throws
/// SignatureError unless EG - F^2 < 0.
InducedMetric induced_metric(const Immersion& im, double u, double v, const OracleOptions& opt = {});

/// w minus its tangential part, using the indefinite inverse metric.
Vec4 normal_project(const Vec4& zu, const Vec4& zv, const Vec4& w, double tol = 1e-12);
Vec4 normal_project(const Immersion& im, double u, double v, const Vec4& w,
                    const OracleOptions& opt = {});

struct ShapeReport {
  InducedMetric metric;
  InverseMetric inverse_metric;
  Vec4 zu, zv;
  Vec4 h_uu, h_uv, h_vv;  ///< second fundamental form on coordinate vectors
  /// Pseudo-orthonormal tangent frame: X along z_u, Y by Gram-Schmidt.
  Vec4 X, Y;
  /// X = x_u z_u, Y = y_u z_u + y_v z_v.
  double x_u = 0.0, y_u = 0.0, y_v = 0.0;
  Vec4 h_XX, h_XY, h_YY;
  Vec4 H;
  double K = 0.0;
  /// Largest |<h_ij, z_k>|: how normal the projected second derivatives are.
  double normality_residual = 0.0;
};

ShapeReport shape_report(const Immersion& im, double u, double v, const OracleOptions& opt = {});

/// Tangent direction a z_u + b z_v.
struct Direction {
  double a = 0.0;
  double b = 0.0;
};

/// Normal part of the directional derivative of the field xi.
Vec4 normal_derivative(const Immersion& im, double u, double v,
                       const std::function<Vec4(double, double)>& xi, Direction d,
                       const OracleOptions& opt = {});

struct DerivativeOptions {
  OracleOptions inner{.h_step = 5e-3, .richardson_levels = 2, .use_analytic_first = true};
  OracleOptions outer{.h_step = 1e-2, .richardson_levels = 2};
};

struct MeanCurvatureDerivatives {
  Vec4 H;
  Vec4 DXH, DYH;
  bool h0_defined = false;
  Vec4 H0;
  Vec4 DXH0, DYH0;
};

/// D_X H, D_Y H and, where <H,H> is not within `null_tol` of zero, D_X H0 and
/// D_Y H0, along the oracle's unit frame.
MeanCurvatureDerivatives mean_curvature_derivatives(const Immersion& im, double u, double v,
                                                    const DerivativeOptions& opt = {},
                                                    double null_tol = kNullTolerance);

}  // namespace meridian::oracle
