#include <gtest/gtest.h>

#include "meridian/pseudo_linalg.hpp"

namespace meridian {
namespace {

TEST(PseudoLinalg, InnerProductSignature) {
  EXPECT_DOUBLE_EQ(inner(kE1, kE1), 1.0);
  EXPECT_DOUBLE_EQ(inner(kE2, kE2), 1.0);
  EXPECT_DOUBLE_EQ(inner(kE3, kE3), -1.0);
  EXPECT_DOUBLE_EQ(inner(kE4, kE4), -1.0);
  EXPECT_DOUBLE_EQ(inner(kE1, kE3), 0.0);
  const Vec4 v{1, 2, 3, 4}, w{-2, 0.5, 1, 3};
  EXPECT_DOUBLE_EQ(inner(v, w), inner(w, v));
}

TEST(PseudoLinalg, CausalCharacter) {
  EXPECT_EQ(causal_character(kE1), CausalCharacter::Spacelike);
  EXPECT_EQ(causal_character(kE4), CausalCharacter::Timelike);
  EXPECT_EQ(causal_character(kE1 + kE3), CausalCharacter::Null);
  EXPECT_EQ(causal_character(kE1 + 1.001 * kE3, 1e-6), CausalCharacter::Timelike);
  EXPECT_STREQ(to_string(CausalCharacter::Null), "null");
}

TEST(PseudoLinalg, TransformIsAnAntiIsometry) {
  const std::vector<Vec4> vs = {{1, 2, 3, 4}, {0.5, -1, 2, 0}, {0, 0, 1, -1}, {3, 0, 0, 1}};
  for (const Vec4& v : vs) {
    for (const Vec4& w : vs) EXPECT_DOUBLE_EQ(inner(apply_T(v), apply_T(w)), -inner(v, w));
  }
  EXPECT_EQ(apply_T(kE4), kE1);
  EXPECT_EQ(apply_T(kE3), kE2);
  EXPECT_EQ(apply_T(kE1), kE3);
  EXPECT_EQ(apply_T(kE2), kE4);
}

TEST(PseudoLinalg, LorentzCrossIsOrthogonal) {
  const Vec4 a{0.3, 1.2, -0.7, 0}, b{-1.1, 0.4, 2.0, 0};
  const Vec4 c = lorentz_cross(a, b);
  EXPECT_NEAR(inner(c, a), 0.0, 1e-14);
  EXPECT_NEAR(inner(c, b), 0.0, 1e-14);
  EXPECT_DOUBLE_EQ(c.x4, 0.0);
}

TEST(PseudoLinalg, Determinant) {
  EXPECT_DOUBLE_EQ(det3(kE1, kE2, kE3), 1.0);
  EXPECT_DOUBLE_EQ(det3(kE2, kE1, kE3), -1.0);
  EXPECT_DOUBLE_EQ(det3(kE1, kE1, kE3), 0.0);
}

TEST(PseudoLinalg, Norms) {
  const Vec4 v{3, -4, 0, 0};
  EXPECT_DOUBLE_EQ(euclidean_norm(v), 5.0);
  EXPECT_DOUBLE_EQ(max_abs(v), 4.0);
  EXPECT_EQ(v / 2.0, (Vec4{1.5, -2, 0, 0}));
}

}  // namespace
}  // namespace meridian
