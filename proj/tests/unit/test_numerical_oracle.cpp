#include <gtest/gtest.h>

#include <cmath>

#include "meridian/errors.hpp"
#include "meridian/grid_kernels.hpp"
#include "meridian/numerical_oracle.hpp"

namespace meridian {
namespace {

using oracle::Immersion;
using oracle::OracleOptions;

Immersion polynomial() {
  Immersion im;
  im.z = [](double u, double v) { return Vec4{u * u, u * v, v * v * v, u}; };
  return im;
}

TEST(Oracle, PartialsOfPolynomial) {
  const auto p = oracle::partials(polynomial(), 0.4, -0.3);
  EXPECT_NEAR(p.zu.x1, 0.8, 1e-8);
  EXPECT_NEAR(p.zv.x3, 3 * 0.09, 1e-8);
  EXPECT_NEAR(p.zuu.x1, 2.0, 1e-6);
  EXPECT_NEAR(p.zuv.x2, 1.0, 1e-6);
  EXPECT_NEAR(p.zvv.x3, -1.8, 1e-6);
}

TEST(Oracle, RichardsonImprovesAccuracy) {
  Immersion im;
  im.z = [](double u, double v) { return Vec4{std::exp(u) * std::cos(v), 0, 0, 0}; };
  OracleOptions plain{.h_step = 1e-2, .richardson_levels = 0, .use_analytic_first = false};
  OracleOptions extra = plain;
  extra.richardson_levels = 2;
  const double exact = std::exp(0.3) * std::cos(0.5);
  const double e0 = std::abs(oracle::partials(im, 0.3, 0.5, plain).zuu.x1 - exact);
  const double e2 = std::abs(oracle::partials(im, 0.3, 0.5, extra).zuu.x1 - exact);
  EXPECT_LT(e2, 1e-3 * e0);
}

TEST(Oracle, StencilLeavingDomainThrows) {
  Immersion im = polynomial();
  im.u_domain = {0.0, 1.0};
  try {
    oracle::partials(im, 1e-6, 0.0);
    FAIL() << "expected OutOfDomain";
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutOfDomain);
  }
}

TEST(Oracle, NormalProjectionIsIdempotent) {
  const Vec4 zu{1, 0, 0.3, 0.2}, zv{0.1, 0.2, 1.0, 0};
  for (const Vec4& w : {Vec4{1, 2, 3, 4}, Vec4{-0.5, 0.1, 0.7, 2}}) {
    const Vec4 n = oracle::normal_project(zu, zv, w);
    EXPECT_LT(max_abs(oracle::normal_project(zu, zv, n) - n), 1e-10);
    EXPECT_NEAR(inner(n, zu), 0.0, 1e-12);
    EXPECT_NEAR(inner(n, zv), 0.0, 1e-12);
  }
}

TEST(Oracle, SpacelikePlaneIsNotLorentz) {
  Immersion im;
  im.z = [](double u, double v) { return Vec4{u, v, 0, 0}; };
  EXPECT_THROW(oracle::induced_metric(im, 0.0, 0.0), GeometryError);
}

TEST(Oracle, MatchesClosedFormsOnFlatFamily) {
  const MeridianSurface s(FamilyTag::MaPrime, constant_curvature_curve(CurveCase::A, 0.5, {-0.1, 2.1}),
                          flat_profile(GaugeKind::TimelikeMeridian, 1.0, 0.0, 1));
  GridOptions opt;
  opt.with_oracle = true;
  const GeometryReport r = evaluate_point(s, 0.2, 0.9, opt);
  ASSERT_TRUE(r.oracle);
  EXPECT_LT(r.oracle->h_err, 1e-6);
  EXPECT_LT(r.oracle->K_err, 1e-6);
  EXPECT_LT(r.oracle->H_err, 1e-6);
  EXPECT_LT(r.oracle->DXH, 1e-6);
  EXPECT_LT(r.oracle->DYH, 1e-6);
}

TEST(Oracle, SecondOrderConvergence) {
  const MeridianSurface s(FamilyTag::MDoublePrime, constant_curvature_curve(CurveCase::C, 2.0, {-0.1, 2.1}),
                          flat_profile(GaugeKind::SpacelikeMeridianADS, 1.0, 0.0, 1));
  auto gap = [&](double h) {
    GridOptions opt;
    opt.with_oracle = true;
    opt.shape.h_step = h;
    const GeometryReport r = evaluate_point(s, 0.2, 0.9, opt);
    return std::max({r.oracle->h_err, r.oracle->K_err, r.oracle->H_err});
  };
  EXPECT_GT(gap(2e-3) / gap(1e-3), 3.5);
}

TEST(GridKernels, SerialAndParallelAgreeExactly) {
  const MeridianSurface s(FamilyTag::MaPrime, constant_curvature_curve(CurveCase::A, 0.5, {-0.1, 2.1}),
                          flat_profile(GaugeKind::TimelikeMeridian, 1.0, 0.0, 1));
  const GridSpec g{{-1, 1}, {0, 2}, 7, 5};
  GridOptions opt;
  opt.with_oracle = true;
  const auto a = evaluate_grid_serial(s, g, opt);
  const auto b = evaluate_grid_parallel(s, g, opt);
  ASSERT_EQ(a.size(), g.size());
  ASSERT_EQ(b.size(), g.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].u, b[i].u);
    EXPECT_EQ(a[i].v, b[i].v);
    EXPECT_EQ(a[i].x, b[i].x);
    EXPECT_EQ(a[i].HH, b[i].HH);
    EXPECT_EQ(a[i].oracle->h_err, b[i].oracle->h_err);
  }
}

TEST(GridKernels, CellCentredGrid) {
  const GridSpec g{{0, 1}, {0, 2}, 4, 2};
  EXPECT_DOUBLE_EQ(g.u_at(0), 0.125);
  EXPECT_DOUBLE_EQ(g.u_at(3), 0.875);
  EXPECT_DOUBLE_EQ(g.v_at(1), 1.5);
}

}  // namespace
}  // namespace meridian
