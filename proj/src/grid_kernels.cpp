#include "meridian/grid_kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace meridian {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

double GridSpec::u_at(std::size_t i) const {
  return u.lo + (static_cast<double>(i) + 0.5) * u.length() / static_cast<double>(nu);
}

double GridSpec::v_at(std::size_t k) const {
  return v.lo + (static_cast<double>(k) + 0.5) * v.length() / static_cast<double>(nv);
}

FirstPartials first_partials(const MeridianSurface& s, double u, double v) {
  const ProfileJet j = s.profile().jet(u);
  const CurveJet c = s.curve().jet(v);
  return {j.df * c.l + j.dg * kE4, j.f * c.t};
}

oracle::Immersion make_immersion(const MeridianSurface& s) {
  oracle::Immersion im;
  im.z = [s](double u, double v) { return immerse(s, u, v); };
  im.analytic_first = [s](double u, double v) {
    const FirstPartials p = first_partials(s, u, v);
    return oracle::TangentPair{p.zu, p.zv};
  };
  im.u_domain = s.profile().domain();
  im.v_domain = s.curve().domain();
  return im;
}

namespace {

double gram_error(FamilyTag fam, const SurfaceFrame& fr) {
  const FrameSignature sig = frame_signature(fam);
  const std::array<const Vec4*, 4> e{&fr.X, &fr.Y, &fr.n1, &fr.n2};
  const std::array<double, 4> d{sig.X, sig.Y, sig.n1, sig.n2};
  double worst = 0.0;
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = a; b < 4; ++b) {
      const double want = a == b ? d[a] : 0.0;
      worst = std::max(worst, std::abs(inner(*e[a], *e[b]) - want));
    }
  }
  return worst;
}

void closed_form_block(const MeridianSurface& s, double u, double v, const GridOptions& opt,
                       GeometryReport& r, NormalDerivatives& nd, SurfaceFrame& fr,
                       SecondFundamentalForm& sff) {
  const FamilyTag fam = s.family();
  const FrameSignature sig = frame_signature(fam);
  r.x = immerse(s, u, v);
  fr = frame(s, u, v);
  r.n1 = fr.n1;
  r.frame_err = gram_error(fam, fr);

  const FirstPartials p = first_partials(s, u, v);
  const double f = s.profile().f(u);
  r.metric_err = std::max({std::abs(inner(p.zu, p.zu) - sig.X), std::abs(inner(p.zu, p.zv)),
                           std::abs(inner(p.zv, p.zv) - sig.Y * f * f)});

  r.K = gauss_curvature(s, u);
  const MeanCurvature mc = mean_curvature(s, u, v, opt.null_tol);
  r.H = mc.H;
  r.HH = mc.HH;
  r.quasi_minimal = mc.quasi_minimal;

  sff = second_fundamental_form(s, u, v);
  const NormalVec trace{0.5 * (sig.X * sff.hXX.c1 + sig.Y * sff.hYY.c1),
                        0.5 * (sig.X * sff.hXX.c2 + sig.Y * sff.hYY.c2)};
  r.trace_err = frame_norm({trace.c1 - r.H.c1, trace.c2 - r.H.c2});

  nd = normal_connection_derivatives(s, u, v, opt.null_tol);
  r.DXH = nd.DXH;
  r.DYH = nd.DYH;
  r.res_DXH = frame_norm(nd.DXH);
  r.res_DYH = frame_norm(nd.DYH);
  try {
    const NormalizedMeanCurvature h0 = normalized_mean_curvature(s, u, v, opt.null_tol);
    r.A = h0.A;
    r.B = h0.B;
    r.res_DXH0 = frame_norm(*nd.DXH0);
    r.res_DYH0 = frame_norm(*nd.DYH0);
  } catch (const GeometryError& e) {
    r.h0_error = e.kind();
    r.A = r.B = r.res_DXH0 = r.res_DYH0 = kNaN;
  }
}

double gap(FamilyTag fam, const SurfaceFrame& fr, const Vec4& w, const NormalVec& closed) {
  const NormalVec c = frame_coefficients(fam, fr, w);
  return frame_norm({c.c1 - closed.c1, c.c2 - closed.c2});
}

OracleComparison oracle_block(const MeridianSurface& s, double u, double v, const GridOptions& opt,
                              const GeometryReport& r, const NormalDerivatives& nd,
                              const SurfaceFrame& fr, const SecondFundamentalForm& sff) {
  const FamilyTag fam = s.family();
  const oracle::Immersion im = make_immersion(s);
  const oracle::ShapeReport sr = oracle::shape_report(im, u, v, opt.shape);
  OracleComparison o;
  o.h_err = std::max({gap(fam, fr, sr.h_XX, sff.hXX), gap(fam, fr, sr.h_XY, sff.hXY),
                      gap(fam, fr, sr.h_YY, sff.hYY)});
  o.K_err = std::abs(sr.K - r.K);
  o.H_err = gap(fam, fr, sr.H, r.H);

  const oracle::MeanCurvatureDerivatives d =
      oracle::mean_curvature_derivatives(im, u, v, opt.derivatives, opt.null_tol);
  o.DXH = frame_norm(frame_coefficients(fam, fr, d.DXH));
  o.DYH = frame_norm(frame_coefficients(fam, fr, d.DYH));
  o.DH_err = std::max(gap(fam, fr, d.DXH, nd.DXH), gap(fam, fr, d.DYH, nd.DYH));
  if (d.h0_defined) {
    o.DXH0 = frame_norm(frame_coefficients(fam, fr, d.DXH0));
    o.DYH0 = frame_norm(frame_coefficients(fam, fr, d.DYH0));
    o.DH0_err = nd.DXH0 ? std::max(gap(fam, fr, d.DXH0, *nd.DXH0), gap(fam, fr, d.DYH0, *nd.DYH0))
                        : kNaN;
  } else {
    o.DXH0 = o.DYH0 = o.DH0_err = kNaN;
  }
  return o;
}

}  // namespace

GeometryReport evaluate_point(const MeridianSurface& s, double u, double v, const GridOptions& opt) {
  GeometryReport r;
  r.u = u;
  r.v = v;
  try {
    NormalDerivatives nd;
    SurfaceFrame fr;
    SecondFundamentalForm sff;
    closed_form_block(s, u, v, opt, r, nd, fr, sff);
    if (opt.with_oracle) r.oracle = oracle_block(s, u, v, opt, r, nd, fr, sff);
  } catch (const GeometryError& e) {
    r.error = e.kind();
    r.message = e.what();
  } catch (const std::exception& e) {
    r.error = ErrorKind::IntegrationFailure;
    r.message = e.what();
  }
  return r;
}

std::vector<GeometryReport> evaluate_grid_serial(const MeridianSurface& s, const GridSpec& grid,
                                                 const GridOptions& opt) {
  std::vector<GeometryReport> out;
  out.reserve(grid.size());
  for (std::size_t i = 0; i < grid.nu; ++i) {
    for (std::size_t k = 0; k < grid.nv; ++k) {
      out.push_back(evaluate_point(s, grid.u_at(i), grid.v_at(k), opt));
    }
  }
  return out;
}

std::vector<GeometryReport> evaluate_grid_parallel(const MeridianSurface& s, const GridSpec& grid,
                                                   const GridOptions& opt) {
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
  std::vector<GeometryReport> out(grid.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t idx = 0; idx < n; ++idx) {
    const auto i = static_cast<std::size_t>(idx) / grid.nv;
    const auto k = static_cast<std::size_t>(idx) % grid.nv;
    out[static_cast<std::size_t>(idx)] = evaluate_point(s, grid.u_at(i), grid.v_at(k), opt);
  }
  return out;
}

}  // namespace meridian
