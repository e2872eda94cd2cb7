#include "meridian/spherical_curves.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <sstream>

#include "meridian/errors.hpp"

namespace meridian {

CaseSignature signature(CurveCase c) {
  switch (c) {
    case CurveCase::A: return {1.0, 1.0, -1.0};
    case CurveCase::B: return {1.0, -1.0, 1.0};
    case CurveCase::C: return {-1.0, 1.0, 1.0};
  }
  return {1.0, 1.0, -1.0};
}

SphereKind sphere_kind(CurveCase c) {
  return c == CurveCase::C ? SphereKind::AntiDeSitter : SphereKind::DeSitter;
}

const char* to_string(CurveCase c) {
  switch (c) {
    case CurveCase::A: return "A";
    case CurveCase::B: return "B";
    case CurveCase::C: return "C";
  }
  return "?";
}

SphericalCurve::SphericalCurve(CurveCase c, Interval domain, JetFn jet, ScalarFn kappa,
                               ScalarFn kappa_prime)
    : case_(c),
      domain_(domain),
      jet_(std::move(jet)),
      kappa_(std::move(kappa)),
      kappa_prime_(std::move(kappa_prime)) {}

FrenetFrame frenet_frame(const CurveJet& jet, double tol) {
  const Vec4 cross = lorentz_cross(jet.l, jet.t);
  const double q = inner(cross, cross);
  if (!(std::abs(q) > tol)) {
    throw GeometryError(ErrorKind::FrameDegenerate,
                        "position and tangent do not span a non-degenerate plane");
  }
  FrenetFrame f;
  f.l = jet.l;
  f.t = jet.t;
  f.n = cross / std::sqrt(std::abs(q));
  if (det3(f.l, f.t, f.n) < 0.0) f.n = -f.n;
  f.kappa = inner(jet.dt, f.n);
  return f;
}

FrenetFrame frenet_frame(const SphericalCurve& c, double v, double tol) {
  return frenet_frame(c.jet(v), tol);
}

double frame_orthonormality_residual(CurveCase c, const FrenetFrame& f) {
  const CaseSignature s = signature(c);
  return std::max({std::abs(inner(f.l, f.l) - s.l), std::abs(inner(f.t, f.t) - s.t),
                   std::abs(inner(f.n, f.n) - s.n), std::abs(inner(f.l, f.t)),
                   std::abs(inner(f.l, f.n)), std::abs(inner(f.t, f.n))});
}

void pseudo_gram_schmidt(FrenetFrame& f) {
  auto normalize = [](Vec4& x) { x = x / std::sqrt(std::abs(inner(x, x))); };
  normalize(f.l);
  const double ll = inner(f.l, f.l);
  f.t -= (inner(f.t, f.l) / ll) * f.l;
  normalize(f.t);
  const double tt = inner(f.t, f.t);
  f.n -= (inner(f.n, f.l) / ll) * f.l + (inner(f.n, f.t) / tt) * f.t;
  normalize(f.n);
}

Vec4 base_map_l_I(double w1, double w2) {
  return {std::cosh(w1) * std::cos(w2), std::cosh(w1) * std::sin(w2), std::sinh(w1), 0.0};
}

Vec4 base_map_l_II(double w1, double w2) {
  return {std::sinh(w1) * std::cos(w2), std::sinh(w1) * std::sin(w2), std::cosh(w1), 0.0};
}

Vec4 base_map_l_tilde_I(double w1, double w2) {
  return {0.0, std::cosh(w1), std::sinh(w1) * std::cos(w2), std::sinh(w1) * std::sin(w2)};
}

Vec4 base_map_l_tilde_II(double w1, double w2) {
  return {0.0, std::sinh(w1), std::cosh(w1) * std::cos(w2), std::cosh(w1) * std::sin(w2)};
}

namespace {

SphericalCurve::ScalarFn constant(double k) {
  return [k](double) { return k; };
}

}  // namespace

double parallel_circle_w2(double w1_0, double s) { return s / std::abs(std::sinh(w1_0)); }

SphericalCurve parallel_circle(CurveCase c, double w1_0, Interval domain) {
  switch (c) {
    case CurveCase::A: {
      const double r = std::cosh(w1_0), z = std::sinh(w1_0);
      auto jet = [r, z](double s) {
        const double cs = std::cos(s / r), sn = std::sin(s / r);
        return CurveJet{{r * cs, r * sn, z, 0.0}, {-sn, cs, 0.0, 0.0}, {-cs / r, -sn / r, 0.0, 0.0}};
      };
      return {c, domain, jet, constant(-std::tanh(w1_0)), constant(0.0)};
    }
    case CurveCase::B: {
      const double p = std::tanh(w1_0), r = 1.0 / std::cosh(w1_0);
      auto jet = [p, r](double s) {
        const double ch = std::cosh(s / r), sh = std::sinh(s / r);
        return CurveJet{{p, r * ch, r * sh, 0.0}, {0.0, sh, ch, 0.0}, {0.0, ch / r, sh / r, 0.0}};
      };
      return {c, domain, jet, constant(-std::sinh(w1_0)), constant(0.0)};
    }
    case CurveCase::C: {
      const double sh = std::sinh(w1_0), ch = std::cosh(w1_0);
      const double rho = std::abs(sh);
      if (rho < 1e-12) {
        throw GeometryError(ErrorKind::DegenerateCurve,
                            "w1 = 0 circle of the hyperbolic sphere collapses to a point");
      }
      const double sg = sh > 0 ? 1.0 : -1.0;
      auto jet = [sh, ch, rho, sg](double s) {
        const double cs = std::cos(s / rho), sn = std::sin(s / rho);
        return CurveJet{{sh * cs, sh * sn, ch, 0.0},
                        {-sg * sn, sg * cs, 0.0, 0.0},
                        {-sg * cs / rho, -sg * sn / rho, 0.0, 0.0}};
      };
      return {c, domain, jet, constant(ch / rho), constant(0.0)};
    }
  }
  throw GeometryError(ErrorKind::InvalidParams, "unknown curve case");
}

FrenetFrame standard_initial_frame(CurveCase c) {
  switch (c) {
    case CurveCase::A: return {kE1, kE2, kE3, 0.0};
    case CurveCase::B: return {kE1, kE3, -kE2, 0.0};
    case CurveCase::C: return {kE3, kE1, kE2, 0.0};
  }
  return {kE1, kE2, kE3, 0.0};
}

namespace {

void validate_initial_frame(CurveCase c, const FrenetFrame& f) {
  const double res = frame_orthonormality_residual(c, f);
  const double off_space = std::max({std::abs(f.l.x4), std::abs(f.t.x4), std::abs(f.n.x4)});
  if (!(res <= 1e-10) || off_space > 1e-10) {
    std::ostringstream os;
    os << "initial frame is not pseudo-orthonormal for case " << to_string(c)
       << " (residual " << res << ")";
    throw GeometryError(ErrorKind::InvalidFrame, os.str());
  }
  if (det3(f.l, f.t, f.n) <= 0.0) {
    throw GeometryError(ErrorKind::InvalidFrame, "initial frame must satisfy det[l, t, n] > 0");
  }
}

/// Solutions of y'' = -lambda y: C(0)=1, S(0)=0, S'(0)=1, and Si = int_0^s S.
struct TrigLike {
  double c;
  double s;
  double si;
};

TrigLike trig_like(double lambda, double s) {
  if (lambda > 0.0) {
    const double w = std::sqrt(lambda);
    const double half = std::sin(0.5 * w * s);
    return {std::cos(w * s), std::sin(w * s) / w, 2.0 * half * half / lambda};
  }
  if (lambda < 0.0) {
    const double w = std::sqrt(-lambda);
    const double half = std::sinh(0.5 * w * s);
    return {std::cosh(w * s), std::sinh(w * s) / w, 2.0 * half * half / (-lambda)};
  }
  return {1.0, s, 0.5 * s * s};
}

}  // namespace

SphericalCurve constant_curvature_curve(CurveCase c, double kappa, Interval domain,
                                        std::optional<FrenetFrame> init) {
  const FrenetFrame f0 = init.value_or(standard_initial_frame(c));
  validate_initial_frame(c, f0);
  const CaseSignature sig = signature(c);
  const double lambda = sig.t * (sig.n * kappa * kappa + sig.l);
  const Vec4 t0 = f0.t;
  const Vec4 dt0 = sig.n * kappa * f0.n - sig.t * sig.l * f0.l;
  const Vec4 l0 = f0.l;
  const double origin = domain.lo;
  auto jet = [=](double v) {
    const TrigLike b = trig_like(lambda, v - origin);
    return CurveJet{l0 + b.s * t0 + b.si * dt0, b.c * t0 + b.s * dt0, (-lambda * b.s) * t0 + b.c * dt0};
  };
  return {c, domain, jet, constant(kappa), constant(0.0)};
}

SphericalCurve curve_from_kappa(CurveCase c, SphericalCurve::ScalarFn kappa, Interval domain,
                                std::optional<FrenetFrame> init,
                                SphericalCurve::ScalarFn kappa_prime,
                                const FrenetIntegrationOptions& opts) {
  if (!(domain.hi > domain.lo)) {
    throw GeometryError(ErrorKind::InvalidParams, "curve domain must have positive length");
  }
  FrenetFrame frame = init.value_or(standard_initial_frame(c));
  validate_initial_frame(c, frame);
  if (!kappa_prime) {
    const double h = opts.kappa_fd_step;
    kappa_prime = [kappa, h](double v) { return numerics::five_point_first(kappa, v, h); };
  }
  const CaseSignature sig = signature(c);

  auto deriv = [&](double v, const FrenetFrame& f) {
    const double k = kappa(v);
    FrenetFrame d;
    d.l = f.t;
    d.t = sig.n * k * f.n - sig.t * sig.l * f.l;
    d.n = -sig.t * k * f.t;
    return d;
  };
  auto axpy = [](const FrenetFrame& f, double h, const FrenetFrame& d) {
    return FrenetFrame{f.l + h * d.l, f.t + h * d.t, f.n + h * d.n, 0.0};
  };

  auto table = std::make_shared<numerics::HermiteTable>(3);
  auto record = [&](double v, const FrenetFrame& f) {
    const double k = kappa(v);
    const double kp = kappa_prime(v);
    const Vec4 dt = sig.n * k * f.n - sig.t * sig.l * f.l;
    const std::array<double, 3> val{f.l.x1, f.l.x2, f.l.x3};
    const std::array<double, 3> d1{f.t.x1, f.t.x2, f.t.x3};
    const std::array<double, 3> d2{dt.x1, dt.x2, dt.x3};
    table->push_back(v, val, d1, d2);
    if (!std::isfinite(k) || !std::isfinite(kp) || !std::isfinite(f.l.x1 + f.t.x1 + f.n.x1)) {
      throw GeometryError(ErrorKind::IntegrationFailure, "non-finite state in Frenet integration");
    }
  };

  const auto steps = static_cast<std::size_t>(std::ceil(domain.length() / opts.step));
  const double h = domain.length() / static_cast<double>(steps);
  if (!(h > 1e-14)) {
    throw GeometryError(ErrorKind::IntegrationFailure, "Frenet step size underflow");
  }
  record(domain.lo, frame);
  for (std::size_t i = 0; i < steps; ++i) {
    const double v = domain.lo + h * static_cast<double>(i);
    const FrenetFrame k1 = deriv(v, frame);
    const FrenetFrame k2 = deriv(v + 0.5 * h, axpy(frame, 0.5 * h, k1));
    const FrenetFrame k3 = deriv(v + 0.5 * h, axpy(frame, 0.5 * h, k2));
    const FrenetFrame k4 = deriv(v + h, axpy(frame, h, k3));
    frame.l += (h / 6.0) * (k1.l + 2.0 * k2.l + 2.0 * k3.l + k4.l);
    frame.t += (h / 6.0) * (k1.t + 2.0 * k2.t + 2.0 * k3.t + k4.t);
    frame.n += (h / 6.0) * (k1.n + 2.0 * k2.n + 2.0 * k3.n + k4.n);
    pseudo_gram_schmidt(frame);
    const double vn = i + 1 == steps ? domain.hi : domain.lo + h * static_cast<double>(i + 1);
    record(vn, frame);
  }

  auto jet = [table](double v) {
    CurveJet j;
    for (std::size_t ch = 0; ch < 3; ++ch) {
      const numerics::Jet3 e = table->eval(ch, v);
      j.l[ch] = e.v;
      j.t[ch] = e.d1;
      j.dt[ch] = e.d2;
    }
    return j;
  };
  return {c, domain, jet, std::move(kappa), std::move(kappa_prime)};
}

}  // namespace meridian
