#include <gtest/gtest.h>

#include <cmath>
#include <ostream>
#include <string>
#include <tuple>

#include "meridian/errors.hpp"
#include "meridian/spherical_curves.hpp"

namespace meridian {

void PrintTo(CurveCase c, std::ostream* os) { *os << to_string(c); }

namespace {

class ConstantCurvature : public ::testing::TestWithParam<std::tuple<CurveCase, double>> {};

TEST_P(ConstantCurvature, StaysOnTheSphereWithUnitSpeed) {
  const auto [cc, kappa] = GetParam();
  const SphericalCurve c = constant_curvature_curve(cc, kappa, {0.0, 2.0});
  const CaseSignature sig = signature(cc);
  for (double v = 0.0; v <= 2.0; v += 0.1) {
    const CurveJet j = c.jet(v);
    const double scale = 1.0 + euclidean_norm(j.l) * euclidean_norm(j.l);
    EXPECT_NEAR(inner(j.l, j.l), sig.l, 1e-12 * scale);
    EXPECT_NEAR(inner(j.t, j.t), sig.t, 1e-12 * scale);
    EXPECT_NEAR(inner(j.l, j.t), 0.0, 1e-12 * scale);
    EXPECT_DOUBLE_EQ(j.l.x4, 0.0);
  }
}

TEST_P(ConstantCurvature, FrenetFrameRecoversCurvature) {
  const auto [cc, kappa] = GetParam();
  const SphericalCurve c = constant_curvature_curve(cc, kappa, {0.0, 2.0});
  for (double v : {0.0, 0.7, 1.9}) {
    const FrenetFrame f = frenet_frame(c, v);
    EXPECT_NEAR(f.kappa, kappa, 1e-9 * (1.0 + euclidean_norm(f.l)));
    EXPECT_LT(frame_orthonormality_residual(cc, f), 1e-9 * (1.0 + std::pow(euclidean_norm(f.l), 2)));
  }
}

INSTANTIATE_TEST_SUITE_P(Cases, ConstantCurvature,
                         ::testing::Combine(::testing::Values(CurveCase::A, CurveCase::B, CurveCase::C),
                                            ::testing::Values(0.0, 0.5, 2.0)),
                         [](const auto& info) {
                           const int k = static_cast<int>(std::get<1>(info.param) * 10);
                           return std::string(to_string(std::get<0>(info.param))) + "_kappa_x10_" + std::to_string(k);
                         });

TEST(SphericalCurves, IntegratedCurveMatchesClosedForm) {
  for (CurveCase cc : {CurveCase::A, CurveCase::B, CurveCase::C}) {
    const SphericalCurve exact = constant_curvature_curve(cc, 0.8, {0.0, 1.5});
    const SphericalCurve num = curve_from_kappa(cc, [](double) { return 0.8; }, {0.0, 1.5});
    for (double v = 0.0; v <= 1.5; v += 0.05) {
      EXPECT_LT(max_abs(exact.position(v) - num.position(v)), 1e-9) << to_string(cc) << " v=" << v;
    }
  }
}

TEST(SphericalCurves, ParallelCircleCurvature) {
  const double w = 0.4;
  EXPECT_NEAR(frenet_frame(parallel_circle(CurveCase::A, w), 1.0).kappa, -std::tanh(w), 1e-10);
  EXPECT_NEAR(frenet_frame(parallel_circle(CurveCase::C, w), 1.0).kappa, 1.0 / std::tanh(w), 1e-10);
  EXPECT_THROW(parallel_circle(CurveCase::C, 0.0), GeometryError);
}

TEST(SphericalCurves, BaseMapsLieOnTheirSpheres) {
  for (double w1 : {-1.0, 0.0, 0.6}) {
    for (double w2 : {0.0, 1.0, 2.5}) {
      EXPECT_NEAR(inner(base_map_l_I(w1, w2), base_map_l_I(w1, w2)), 1.0, 1e-12);
      EXPECT_NEAR(inner(base_map_l_II(w1, w2), base_map_l_II(w1, w2)), -1.0, 1e-12);
      EXPECT_NEAR(inner(base_map_l_tilde_I(w1, w2), base_map_l_tilde_I(w1, w2)), 1.0, 1e-12);
      EXPECT_NEAR(inner(base_map_l_tilde_II(w1, w2), base_map_l_tilde_II(w1, w2)), -1.0, 1e-12);
    }
  }
}

TEST(SphericalCurves, SphereKinds) {
  EXPECT_EQ(sphere_kind(CurveCase::A), SphereKind::DeSitter);
  EXPECT_EQ(sphere_kind(CurveCase::B), SphereKind::DeSitter);
  EXPECT_EQ(sphere_kind(CurveCase::C), SphereKind::AntiDeSitter);
}

}  // namespace
}  // namespace meridian
