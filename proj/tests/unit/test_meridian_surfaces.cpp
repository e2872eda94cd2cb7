#include <gtest/gtest.h>

#include <cmath>

#include "meridian/errors.hpp"
#include "meridian/grid_kernels.hpp"
#include "meridian/meridian_surfaces.hpp"

namespace meridian {
namespace {

MeridianSurface flat_surface(FamilyTag fam, double a, double kappa) {
  const CurveCase cc = curve_case_of(fam);
  return {fam, constant_curvature_curve(cc, kappa, {-0.1, 2.1}), flat_profile(gauge_of(fam), a, 0.0, 1)};
}

TEST(Surfaces, FamilyRoundTrip) {
  for (FamilyTag f : {FamilyTag::MaPrime, FamilyTag::MbPrime, FamilyTag::MDoublePrime}) {
    EXPECT_EQ(parse_family(short_name(f)), f);
    EXPECT_EQ(family_of(gauge_of(f)), f);
  }
  EXPECT_FALSE(parse_family("Mc"));
}

TEST(Surfaces, MismatchedCurveIsRejected) {
  try {
    MeridianSurface s(FamilyTag::MbPrime, constant_curvature_curve(CurveCase::A, 0.5),
                      flat_profile(GaugeKind::TimelikeMeridian, 1.0, 0.0, 1));
    FAIL() << "expected InvalidFamily";
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidFamily);
  }
}

TEST(Surfaces, FirstFundamentalForm) {
  const MeridianSurface s = flat_surface(FamilyTag::MaPrime, 1.5, 0.5);
  for (double u : {-0.5, 0.3}) {
    for (double v : {0.2, 1.7}) {
      const FirstPartials p = first_partials(s, u, v);
      EXPECT_NEAR(inner(p.zu, p.zu), -1.0, 1e-12);
      EXPECT_NEAR(inner(p.zu, p.zv), 0.0, 1e-12);
      EXPECT_NEAR(inner(p.zv, p.zv), 2.25, 1e-12);
    }
  }
}

TEST(Surfaces, FrameMatchesSignature) {
  for (FamilyTag fam : {FamilyTag::MaPrime, FamilyTag::MDoublePrime}) {
    const MeridianSurface s = flat_surface(fam, 1.0, 0.5);
    const SurfaceFrame fr = frame(s, 0.2, 0.9);
    const FrameSignature sig = frame_signature(fam);
    EXPECT_NEAR(inner(fr.X, fr.X), sig.X, 1e-12);
    EXPECT_NEAR(inner(fr.Y, fr.Y), sig.Y, 1e-12);
    EXPECT_NEAR(inner(fr.n1, fr.n1), sig.n1, 1e-12);
    EXPECT_NEAR(inner(fr.n2, fr.n2), sig.n2, 1e-12);
    for (const Vec4& w : {fr.Y, fr.n1, fr.n2}) EXPECT_NEAR(inner(fr.X, w), 0.0, 1e-12);
    EXPECT_NEAR(inner(fr.n1, fr.n2), 0.0, 1e-12);
  }
}

TEST(Surfaces, FlatFamilyMeanCurvature) {
  for (double a : {0.5, 1.0, 2.0}) {
    for (double kappa : {0.0, 0.5, 2.0}) {
      const MeridianSurface s = flat_surface(FamilyTag::MaPrime, a, kappa);
      EXPECT_DOUBLE_EQ(gauss_curvature(s, 0.1), 0.0);
      const MeanCurvature m = mean_curvature(s, 0.1, 0.4);
      EXPECT_NEAR(m.HH, (1.0 - kappa * kappa) / (4.0 * a * a), 1e-12);
      const NormalDerivatives d = normal_connection_derivatives(s, 0.1, 0.4);
      EXPECT_NEAR(frame_norm(d.DXH), 0.0, 1e-12);
      EXPECT_NEAR(frame_norm(d.DYH), 0.0, 1e-12);
    }
  }
}

TEST(Surfaces, QuasiMinimalHasNoNormalizedMeanCurvature) {
  const MeridianSurface s = flat_surface(FamilyTag::MaPrime, 1.0, 1.0);
  EXPECT_TRUE(mean_curvature(s, 0.0, 0.5).quasi_minimal);
  try {
    normalized_mean_curvature(s, 0.0, 0.5);
    FAIL() << "expected LightlikeH";
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::LightlikeH);
  }
}

TEST(Surfaces, MeanCurvatureIsHalfTraceOfSecondFundamentalForm) {
  const MeridianSurface s = flat_surface(FamilyTag::MDoublePrime, 1.3, 0.7);
  const GeometryReport r = evaluate_point(s, 0.3, 0.8);
  ASSERT_FALSE(r.error);
  EXPECT_LT(r.trace_err, 1e-12);
  EXPECT_LT(r.metric_err, 1e-12);
}

TEST(Surfaces, CongruenceToTildeParametrization) {
  const MeridianSurface s = flat_surface(FamilyTag::MDoublePrime, 1.0, 0.5);
  auto lt = [&](double v) { return apply_T(s.curve().position(v)); };
  for (double u : {-0.5, 0.5}) {
    for (double v : {0.0, 1.0, 2.0}) {
      const Vec4 d = apply_T(immerse(s, u, v)) - immerse_tilde_prime(s.profile(), lt, u, v);
      EXPECT_LE(max_abs(d), 1e-15);
    }
  }
}

}  // namespace
}  // namespace meridian
