#include "meridian/numerical_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "meridian/errors.hpp"

namespace meridian::oracle {

namespace {

Partials raw_partials_from_first(const Immersion& im, double u, double v, double h) {
  const TangentPair here = im.analytic_first(u, v);
  Partials p;
  p.zu = here.zu;
  p.zv = here.zv;
  p.zuu = numerics::central_first([&](double x) { return im.analytic_first(x, v).zu; }, u, h);
  p.zvv = numerics::central_first([&](double y) { return im.analytic_first(u, y).zv; }, v, h);
  p.zuv = 0.5 * (numerics::central_first([&](double y) { return im.analytic_first(u, y).zu; }, v, h) +
                 numerics::central_first([&](double x) { return im.analytic_first(x, v).zv; }, u, h));
  return p;
}

Partials raw_partials(const Immersion& im, double u, double v, double h) {
  auto zu_at = [&](double vv) {
    return numerics::central_first([&](double x) { return im.z(x, vv); }, u, h);
  };
  Partials p;
  p.zu = zu_at(v);
  p.zv = numerics::central_first([&](double y) { return im.z(u, y); }, v, h);
  p.zuu = numerics::central_second([&](double x) { return im.z(x, v); }, u, h);
  p.zvv = numerics::central_second([&](double y) { return im.z(u, y); }, v, h);
  p.zuv = numerics::central_first(zu_at, v, h);
  return p;
}

/// Extrapolates second-order estimates at steps h, h/2, ... to h -> 0.
template <class T, class Eval>
T extrapolate(Eval eval, double h, int levels) {
  std::vector<T> row;
  for (int k = 0; k <= levels; ++k) row.push_back(eval(h / static_cast<double>(1 << k)));
  double factor = 4.0;
  for (int k = 1; k <= levels; ++k, factor *= 4.0) {
    for (int i = levels; i >= k; --i) row[i] = (factor * row[i] - row[i - 1]) / (factor - 1.0);
  }
  return row.back();
}

Partials operator*(double a, const Partials& p) { return {a * p.zu, a * p.zv, a * p.zuu, a * p.zuv, a * p.zvv}; }
Partials operator-(const Partials& p, const Partials& q) {
  return {p.zu - q.zu, p.zv - q.zv, p.zuu - q.zuu, p.zuv - q.zuv, p.zvv - q.zvv};
}
Partials operator/(const Partials& p, double a) { return (1.0 / a) * p; }

void check_stencil(const Immersion& im, double u, double v, double reach) {
  if (u - reach < im.u_domain.lo || u + reach > im.u_domain.hi || v - reach < im.v_domain.lo ||
      v + reach > im.v_domain.hi) {
    throw GeometryError(ErrorKind::OutOfDomain, "finite-difference stencil leaves the domain");
  }
}

}  // namespace

Partials partials(const Immersion& im, double u, double v, const OracleOptions& opt) {
  check_stencil(im, u, v, opt.h_step);
  const bool first = opt.use_analytic_first && im.analytic_first;
  return extrapolate<Partials>(
      [&](double h) { return first ? raw_partials_from_first(im, u, v, h) : raw_partials(im, u, v, h); },
      opt.h_step,
                               opt.richardson_levels);
}

InducedMetric metric_from(const Partials& p) {
  return {inner(p.zu, p.zu), inner(p.zu, p.zv), inner(p.zv, p.zv)};
}

InverseMetric inverse(const InducedMetric& g, double tol) {
  const double det = g.det();
  if (!(std::abs(det) > tol)) {
    throw GeometryError(ErrorKind::DegenerateTangent, "tangent Gram matrix is singular");
  }
  return {g.G / det, -g.F / det, g.E / det};
}

InducedMetric induced_metric(const Immersion& im, double u, double v, const OracleOptions& opt) {
  InducedMetric g;
  if (im.analytic_first) {
    const TangentPair t = im.analytic_first(u, v);
    g = {inner(t.zu, t.zu), inner(t.zu, t.zv), inner(t.zv, t.zv)};
  } else {
    g = metric_from(partials(im, u, v, opt));
  }
  if (!(g.det() < 0.0)) {
    throw GeometryError(ErrorKind::SignatureError, "induced metric is not Lorentzian");
  }
  return g;
}

Vec4 normal_project(const Vec4& zu, const Vec4& zv, const Vec4& w, double tol) {
  const InverseMetric gi = inverse({inner(zu, zu), inner(zu, zv), inner(zv, zv)}, tol);
  const double wu = inner(w, zu), wv = inner(w, zv);
  const double cu = gi.uu * wu + gi.uv * wv;
  const double cv = gi.uv * wu + gi.vv * wv;
  return w - cu * zu - cv * zv;
}

Vec4 normal_project(const Immersion& im, double u, double v, const Vec4& w, const OracleOptions& opt) {
  const Partials p = partials(im, u, v, opt);
  return normal_project(p.zu, p.zv, w, opt.degeneracy_tol);
}

ShapeReport shape_report(const Immersion& im, double u, double v, const OracleOptions& opt) {
  const Partials p = partials(im, u, v, opt);
  ShapeReport r;
  r.metric = metric_from(p);
  if (!(r.metric.det() < 0.0)) {
    throw GeometryError(ErrorKind::SignatureError, "induced metric is not Lorentzian");
  }
  r.inverse_metric = inverse(r.metric, opt.degeneracy_tol);
  r.zu = p.zu;
  r.zv = p.zv;
  r.h_uu = normal_project(p.zu, p.zv, p.zuu, opt.degeneracy_tol);
  r.h_uv = normal_project(p.zu, p.zv, p.zuv, opt.degeneracy_tol);
  r.h_vv = normal_project(p.zu, p.zv, p.zvv, opt.degeneracy_tol);

  const double E = r.metric.E, F = r.metric.F, G = r.metric.G;
  if (!(std::abs(E) > opt.degeneracy_tol)) {
    throw GeometryError(ErrorKind::DegenerateTangent, "z_u is null; no unit tangent along u");
  }
  r.x_u = 1.0 / std::sqrt(std::abs(E));
  const double rest = G - F * F / E;  // <Y~, Y~> for Y~ = z_v - (F/E) z_u
  r.y_v = 1.0 / std::sqrt(std::abs(rest));
  r.y_u = -(F / E) * r.y_v;
  r.X = r.x_u * p.zu;
  r.Y = r.y_u * p.zu + r.y_v * p.zv;
  r.h_XX = (r.x_u * r.x_u) * r.h_uu;
  r.h_XY = r.x_u * (r.y_u * r.h_uu + r.y_v * r.h_uv);
  r.h_YY = (r.y_u * r.y_u) * r.h_uu + (2.0 * r.y_u * r.y_v) * r.h_uv + (r.y_v * r.y_v) * r.h_vv;

  const InverseMetric& gi = r.inverse_metric;
  r.H = 0.5 * (gi.uu * r.h_uu + (2.0 * gi.uv) * r.h_uv + gi.vv * r.h_vv);
  r.K = (inner(r.h_uu, r.h_vv) - inner(r.h_uv, r.h_uv)) / r.metric.det();
  for (const Vec4* h : {&r.h_uu, &r.h_uv, &r.h_vv}) {
    r.normality_residual =
        std::max({r.normality_residual, std::abs(inner(*h, p.zu)), std::abs(inner(*h, p.zv))});
  }
  return r;
}

namespace {

Vec4 directional(const std::function<Vec4(double, double)>& xi, double u, double v, Direction d,
                 const OracleOptions& opt) {
  auto once = [&](double h) {
    Vec4 out;
    if (d.a != 0.0) out += d.a * numerics::central_first([&](double x) { return xi(x, v); }, u, h);
    if (d.b != 0.0) out += d.b * numerics::central_first([&](double y) { return xi(u, y); }, v, h);
    return out;
  };
  return extrapolate<Vec4>(once, opt.h_step, opt.richardson_levels);
}

}  // namespace

Vec4 normal_derivative(const Immersion& im, double u, double v,
                       const std::function<Vec4(double, double)>& xi, Direction d,
                       const OracleOptions& opt) {
  check_stencil(im, u, v, opt.h_step);
  const Partials p = partials(im, u, v, opt);
  return normal_project(p.zu, p.zv, directional(xi, u, v, d, opt), opt.degeneracy_tol);
}

MeanCurvatureDerivatives mean_curvature_derivatives(const Immersion& im, double u, double v,
                                                    const DerivativeOptions& opt, double null_tol) {
  const double reach = opt.outer.h_step + opt.inner.h_step;
  check_stencil(im, u, v, reach);
  auto H = [&](double x, double y) { return shape_report(im, x, y, opt.inner).H; };
  const ShapeReport here = shape_report(im, u, v, opt.inner);

  MeanCurvatureDerivatives out;
  out.H = here.H;
  const Direction dx{here.x_u, 0.0}, dy{here.y_u, here.y_v};
  auto project = [&](const Vec4& w) {
    return normal_project(here.zu, here.zv, w, opt.inner.degeneracy_tol);
  };
  out.DXH = project(directional(H, u, v, dx, opt.outer));
  out.DYH = project(directional(H, u, v, dy, opt.outer));

  const double hh = inner(here.H, here.H);
  if (euclidean_norm(here.H) > null_tol && std::abs(hh) > null_tol) {
    out.h0_defined = true;
    auto H0 = [&](double x, double y) {
      const Vec4 h = H(x, y);
      return h / std::sqrt(std::abs(inner(h, h)));
    };
    out.H0 = here.H / std::sqrt(std::abs(hh));
    out.DXH0 = project(directional(H0, u, v, dx, opt.outer));
    out.DYH0 = project(directional(H0, u, v, dy, opt.outer));
  }
  return out;
}

}  // namespace meridian::oracle
