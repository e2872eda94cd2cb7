#pragma once

// Lorentz meridian surfaces z(u, v) = f(u) l(v) + g(u) e4 and their
// closed-form invariants in the parallel normal frame {n1, n2}.
//
//   family        curve case  gauge                  <X,X> <Y,Y> <n1,n1> <n2,n2>
//   MaPrime       A           TimelikeMeridian        -1    +1    -1      +1
//   MbPrime       B           SpacelikeMeridianDS     +1    -1    +1      -1
//   MDoublePrime  C           SpacelikeMeridianADS    -1    +1    +1      -1
//
// X = z_u, Y = z_v / f = t, n1 = n, n2 = g' l + f' e4 (MaPrime, MbPrime) or
// -g' l + f' e4 (MDoublePrime). Normal vectors are returned as coefficient
// pairs in {n1, n2}.

#include <functional>
#include <optional>
#include <string>

#include "meridian/meridian_profiles.hpp"
#include "meridian/pseudo_linalg.hpp"
#include "meridian/spherical_curves.hpp"

namespace meridian {

enum class FamilyTag { MaPrime, MbPrime, MDoublePrime };

const char* to_string(FamilyTag f);
/// Short CLI names: Ma, Mb, Mpp.
const char* short_name(FamilyTag f);
std::optional<FamilyTag> parse_family(const std::string& s);

CurveCase curve_case_of(FamilyTag f);
GaugeKind gauge_of(FamilyTag f);
FamilyTag family_of(GaugeKind g);

struct FrameSignature {
  double X;
  double Y;
  double n1;
  double n2;
};
FrameSignature frame_signature(FamilyTag f);

/// Coefficients of a normal vector in the frame {n1, n2}.
struct NormalVec {
  double c1 = 0.0;
  double c2 = 0.0;
};

/// sqrt(c1^2 + c2^2): size of a normal vector measured in the frame.
double frame_norm(const NormalVec& w);

class MeridianSurface {
 public:
  /// Throws InvalidFamily when the curve case or gauge do not match the family.
  MeridianSurface(FamilyTag family, SphericalCurve curve, ProfileCurve profile);

  FamilyTag family() const { return family_; }
  const SphericalCurve& curve() const { return curve_; }
  const ProfileCurve& profile() const { return profile_; }

 private:
  FamilyTag family_;
  SphericalCurve curve_;
  ProfileCurve profile_;
};

Vec4 immerse(const MeridianSurface& s, double u, double v);

struct SurfaceFrame {
  Vec4 X;
  Vec4 Y;
  Vec4 n1;
  Vec4 n2;
};
SurfaceFrame frame(const MeridianSurface& s, double u, double v);

Vec4 to_ambient(const SurfaceFrame& fr, const NormalVec& w);
/// Coefficients of w along n1 and n2 (its normal part, for any w).
NormalVec frame_coefficients(FamilyTag f, const SurfaceFrame& fr, const Vec4& w);

struct SecondFundamentalForm {
  NormalVec hXX;
  NormalVec hXY;
  NormalVec hYY;
};
SecondFundamentalForm second_fundamental_form(const MeridianSurface& s, double u, double v);

double gauss_curvature(const MeridianSurface& s, double u);

struct MeanCurvature {
  NormalVec H;
  double HH = 0.0;  ///< <H, H>
  bool quasi_minimal = false;
};

/// Throws GaugeBoundary when g' vanishes (MbPrime, MDoublePrime).
MeanCurvature mean_curvature(const MeridianSurface& s, double u, double v,
                             double null_tol = kNullTolerance);

/// <w, w> for a normal vector given by its frame coefficients.
double normal_inner(FamilyTag f, const NormalVec& w);

struct NormalizedMeanCurvature {
  double A = 0.0;
  double B = 0.0;
  int epsilon = 1;  ///< sign of <H, H>
};

/// H0 = H / sqrt(eps <H,H>). Throws ZeroH when H vanishes and LightlikeH
/// when |<H,H>| <= null_tol.
NormalizedMeanCurvature normalized_mean_curvature(const MeridianSurface& s, double u, double v,
                                                  double null_tol = kNullTolerance);

struct NormalDerivatives {
  NormalVec DXH;
  NormalVec DYH;
  std::optional<NormalVec> DXH0;  ///< empty where H0 is undefined
  std::optional<NormalVec> DYH0;
};

/// Normal-connection derivatives of H and H0 along X and Y. The u-derivative
/// of the n2-coefficient is analytic for profiles with exact derivatives and a
/// central difference of step `fd_step` otherwise.
NormalDerivatives normal_connection_derivatives(const MeridianSurface& s, double u, double v,
                                                double null_tol = kNullTolerance,
                                                double fd_step = 1e-5);

/// The surface f(u) l~(v) + g(u) e1 over a curve l~ in span{e2, e3, e4}.
Vec4 immerse_tilde_prime(const ProfileCurve& profile, const std::function<Vec4(double)>& l_tilde,
                         double u, double v);

}  // namespace meridian
