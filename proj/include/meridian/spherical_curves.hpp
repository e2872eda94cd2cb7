#pragma once

// Unit-speed curves on the two-dimensional pseudo-spheres of the Minkowski
// 3-space span{e1, e2, e3} (signature +,+,-), together with their Frenet
// frames {l, t, n} and spherical curvature kappa = <t', n>.
//
// Three cases occur:
//   A: <l,l> = +1, <t,t> = +1, <n,n> = -1   t' = -kappa n - l,  n' = -kappa t
//   B: <l,l> = +1, <t,t> = -1, <n,n> = +1   t' =  kappa n + l,  n' =  kappa t
//   C: <l,l> = -1, <t,t> = +1, <n,n> = +1   t' =  kappa n + l,  n' = -kappa t
// which all fit t' = s_n kappa n - s_t s_l l and n' = -s_t kappa t with
// (s_l, s_t, s_n) the frame signature.
//
// The sign of n is fixed by det[l, t, n] > 0 in the basis (e1, e2, e3).

#include <functional>
#include <numbers>
#include <optional>

#include "meridian/numerics.hpp"
#include "meridian/pseudo_linalg.hpp"

namespace meridian {

using numerics::Interval;

enum class SphereKind { DeSitter, AntiDeSitter };

enum class CurveCase { A, B, C };

struct CaseSignature {
  double l;
  double t;
  double n;
};

CaseSignature signature(CurveCase c);
SphereKind sphere_kind(CurveCase c);
const char* to_string(CurveCase c);

struct FrenetFrame {
  Vec4 l;
  Vec4 t;
  Vec4 n;
  double kappa = 0.0;
};

/// Position l(v) with its first two derivatives t = l' and t'.
struct CurveJet {
  Vec4 l;
  Vec4 t;
  Vec4 dt;
};

class SphericalCurve {
 public:
  using JetFn = std::function<CurveJet(double)>;
  using ScalarFn = std::function<double(double)>;

  SphericalCurve(CurveCase c, Interval domain, JetFn jet, ScalarFn kappa, ScalarFn kappa_prime);

  CurveCase curve_case() const { return case_; }
  const Interval& domain() const { return domain_; }

  CurveJet jet(double v) const { return jet_(v); }
  Vec4 position(double v) const { return jet_(v).l; }

  /// The curvature the curve was built with (closed form or prescribed).
  double curvature(double v) const { return kappa_(v); }
  double curvature_derivative(double v) const { return kappa_prime_(v); }

 private:
  CurveCase case_;
  Interval domain_;
  JetFn jet_;
  ScalarFn kappa_;
  ScalarFn kappa_prime_;
};

/// Frenet frame recomputed from the geometry: n from the metric cross
/// product of l and t, kappa = <t', n>. Throws FrameDegenerate when l and t
/// do not span a non-degenerate plane.
FrenetFrame frenet_frame(const SphericalCurve& c, double v, double tol = kNullTolerance);
FrenetFrame frenet_frame(const CurveJet& jet, double tol = kNullTolerance);

/// Largest deviation of the frame's Gram matrix from diag(s_l, s_t, s_n).
double frame_orthonormality_residual(CurveCase c, const FrenetFrame& f);

/// Gram-Schmidt in the order l, t, n under the indefinite metric; each vector
/// is scaled by 1/sqrt|<x,x>| so its causal sign is kept.
void pseudo_gram_schmidt(FrenetFrame& f);

// Base maps of the rotational hypersurfaces.
Vec4 base_map_l_I(double w1, double w2);         // de Sitter sphere in span{e1,e2,e3}
Vec4 base_map_l_II(double w1, double w2);        // hyperbolic sphere in span{e1,e2,e3}
Vec4 base_map_l_tilde_I(double w1, double w2);   // de Sitter sphere in span{e2,e3,e4}
Vec4 base_map_l_tilde_II(double w1, double w2);  // hyperbolic sphere in span{e2,e3,e4}

inline constexpr Interval kFullTurn{0.0, 2.0 * std::numbers::pi};

/// Constant-curvature test curves parametrized by arc length s:
///   A: the w1 = w1_0 circle of l^I, kappa = -tanh(w1_0);
///   B: the timelike orbit x1 = tanh(w1_0) on the de Sitter sphere (for
///      w1_0 = 0 the w2 = pi/2 meridian of l^I), kappa = -sinh(w1_0);
///   C: the w1 = w1_0 circle of l^II, kappa = coth|w1_0|; throws
///      DegenerateCurve when sinh(w1_0) = 0.
SphericalCurve parallel_circle(CurveCase c, double w1_0, Interval domain = kFullTurn);

/// Arc-length parameter of the case-C circle in terms of the l^II angle w2.
double parallel_circle_w2(double w1_0, double s);

/// l = e1, t = e2, n = e3 (A); l = e1, t = e3, n = -e2 (B); l = e3, t = e1, n = e2 (C).
FrenetFrame standard_initial_frame(CurveCase c);

/// Closed-form solution of the constant-coefficient Frenet system; exact
/// derivatives. `init` defaults to standard_initial_frame.
SphericalCurve constant_curvature_curve(CurveCase c, double kappa, Interval domain = kFullTurn,
                                        std::optional<FrenetFrame> init = std::nullopt);

struct FrenetIntegrationOptions {
  double step = 1e-3;
  /// Step for differentiating kappa when no derivative is supplied.
  double kappa_fd_step = 1e-4;
};

/// Integrates the case's Frenet system for a prescribed kappa(v) on
/// `domain`, starting from `init` at domain.lo, with classical RK4 and
/// pseudo-orthonormalization after every step. Dense output is a C2 quintic
/// Hermite interpolant of l built from (l, t, t') at the nodes.
SphericalCurve curve_from_kappa(CurveCase c, SphericalCurve::ScalarFn kappa, Interval domain,
                                std::optional<FrenetFrame> init = std::nullopt,
                                SphericalCurve::ScalarFn kappa_prime = nullptr,
                                const FrenetIntegrationOptions& opts = {});

}  // namespace meridian
