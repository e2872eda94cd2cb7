#include "meridian/meridian_surfaces.hpp"

#include <algorithm>
#include <cmath>

#include "meridian/errors.hpp"

namespace meridian {

const char* to_string(FamilyTag f) {
  switch (f) {
    case FamilyTag::MaPrime: return "MaPrime";
    case FamilyTag::MbPrime: return "MbPrime";
    case FamilyTag::MDoublePrime: return "MDoublePrime";
  }
  return "?";
}

const char* short_name(FamilyTag f) {
  switch (f) {
    case FamilyTag::MaPrime: return "Ma";
    case FamilyTag::MbPrime: return "Mb";
    case FamilyTag::MDoublePrime: return "Mpp";
  }
  return "?";
}

std::optional<FamilyTag> parse_family(const std::string& s) {
  for (FamilyTag f : {FamilyTag::MaPrime, FamilyTag::MbPrime, FamilyTag::MDoublePrime}) {
    if (s == short_name(f) || s == to_string(f)) return f;
  }
  return std::nullopt;
}

CurveCase curve_case_of(FamilyTag f) {
  switch (f) {
    case FamilyTag::MaPrime: return CurveCase::A;
    case FamilyTag::MbPrime: return CurveCase::B;
    case FamilyTag::MDoublePrime: return CurveCase::C;
  }
  return CurveCase::A;
}

GaugeKind gauge_of(FamilyTag f) {
  switch (f) {
    case FamilyTag::MaPrime: return GaugeKind::TimelikeMeridian;
    case FamilyTag::MbPrime: return GaugeKind::SpacelikeMeridianDS;
    case FamilyTag::MDoublePrime: return GaugeKind::SpacelikeMeridianADS;
  }
  return GaugeKind::TimelikeMeridian;
}

FamilyTag family_of(GaugeKind g) {
  switch (g) {
    case GaugeKind::TimelikeMeridian: return FamilyTag::MaPrime;
    case GaugeKind::SpacelikeMeridianDS: return FamilyTag::MbPrime;
    case GaugeKind::SpacelikeMeridianADS: return FamilyTag::MDoublePrime;
  }
  return FamilyTag::MaPrime;
}

FrameSignature frame_signature(FamilyTag f) {
  switch (f) {
    case FamilyTag::MaPrime: return {-1, 1, -1, 1};
    case FamilyTag::MbPrime: return {1, -1, 1, -1};
    case FamilyTag::MDoublePrime: return {-1, 1, 1, -1};
  }
  return {-1, 1, -1, 1};
}

double frame_norm(const NormalVec& w) { return std::hypot(w.c1, w.c2); }

MeridianSurface::MeridianSurface(FamilyTag family, SphericalCurve curve, ProfileCurve profile)
    : family_(family), curve_(std::move(curve)), profile_(std::move(profile)) {
  if (curve_.curve_case() != curve_case_of(family_)) {
    throw GeometryError(ErrorKind::InvalidFamily,
                        std::string(to_string(family_)) + " needs a case-" +
                            to_string(curve_case_of(family_)) + " curve");
  }
  if (profile_.gauge() != gauge_of(family_)) {
    throw GeometryError(ErrorKind::InvalidFamily, std::string(to_string(family_)) + " needs a " +
                                                      to_string(gauge_of(family_)) + " profile");
  }
}

Vec4 immerse(const MeridianSurface& s, double u, double v) {
  const ProfileJet j = s.profile().jet(u);
  return j.f * s.curve().position(v) + j.g * kE4;
}

namespace {

SurfaceFrame frame_from(FamilyTag fam, const ProfileJet& j, const FrenetFrame& fr) {
  const double s2 = fam == FamilyTag::MDoublePrime ? -1.0 : 1.0;
  return {j.df * fr.l + j.dg * kE4, fr.t, fr.n, (s2 * j.dg) * fr.l + j.df * kE4};
}

/// Sign of kappa / (2f) in the n1-coefficient of H.
double h1_sign(FamilyTag f) { return f == FamilyTag::MDoublePrime ? 1.0 : -1.0; }

void check_gauge_boundary(FamilyTag fam, const ProfileJet& j) {
  if (fam != FamilyTag::MaPrime && !(std::abs(j.dg) > 1e-12)) {
    throw GeometryError(ErrorKind::GaugeBoundary, "g' vanishes; the mean curvature is undefined");
  }
}

double h2_value(FamilyTag fam, const ProfileJet& j) {
  const double base = j.f * j.d2f + j.df * j.df;
  const double w = j.f * j.dg;
  return fam == FamilyTag::MaPrime ? -(base + 1.0) / (2.0 * w) : (base - 1.0) / (2.0 * w);
}

double h2_u_derivative(FamilyTag fam, const ProfileJet& j) {
  const double base = j.f * j.d2f + j.df * j.df;
  const double num = fam == FamilyTag::MaPrime ? base + 1.0 : base - 1.0;
  const double dnum = j.f * j.d3f + 3.0 * j.df * j.d2f;
  const double w = j.f * j.dg;
  const double dw = j.df * j.dg + j.f * j.d2g;
  const double d = (dnum * w - num * dw) / (2.0 * w * w);
  return fam == FamilyTag::MaPrime ? -d : d;
}

NormalVec mean_curvature_vec(FamilyTag fam, const ProfileJet& j, double kappa) {
  check_gauge_boundary(fam, j);
  return {h1_sign(fam) * kappa / (2.0 * j.f), h2_value(fam, j)};
}

}  // namespace

SurfaceFrame frame(const MeridianSurface& s, double u, double v) {
  return frame_from(s.family(), s.profile().jet(u), frenet_frame(s.curve(), v));
}

Vec4 to_ambient(const SurfaceFrame& fr, const NormalVec& w) { return w.c1 * fr.n1 + w.c2 * fr.n2; }

NormalVec frame_coefficients(FamilyTag f, const SurfaceFrame& fr, const Vec4& w) {
  const FrameSignature sig = frame_signature(f);
  return {sig.n1 * inner(w, fr.n1), sig.n2 * inner(w, fr.n2)};
}

SecondFundamentalForm second_fundamental_form(const MeridianSurface& s, double u, double v) {
  const ProfileJet j = s.profile().jet(u);
  const double kappa = s.curve().curvature(v);
  const double km = kappa_m(s.profile().gauge(), j);
  const double s1 = s.family() == FamilyTag::MaPrime ? -1.0 : 1.0;
  return {{0.0, km}, {0.0, 0.0}, {s1 * kappa / j.f, -j.dg / j.f}};
}

double gauss_curvature(const MeridianSurface& s, double u) {
  const ProfileJet j = s.profile().jet(u);
  const double k = j.d2f / j.f;
  return s.family() == FamilyTag::MbPrime ? -k : k;
}

double normal_inner(FamilyTag f, const NormalVec& w) {
  const FrameSignature sig = frame_signature(f);
  return sig.n1 * w.c1 * w.c1 + sig.n2 * w.c2 * w.c2;
}

MeanCurvature mean_curvature(const MeridianSurface& s, double u, double v, double null_tol) {
  MeanCurvature m;
  m.H = mean_curvature_vec(s.family(), s.profile().jet(u), s.curve().curvature(v));
  m.HH = normal_inner(s.family(), m.H);
  m.quasi_minimal = std::abs(m.HH) <= null_tol && frame_norm(m.H) > null_tol;
  return m;
}

namespace {

NormalizedMeanCurvature normalize(FamilyTag fam, const NormalVec& H, double null_tol) {
  if (!(frame_norm(H) > null_tol)) {
    throw GeometryError(ErrorKind::ZeroH, "mean curvature vector vanishes");
  }
  const double hh = normal_inner(fam, H);
  if (!(std::abs(hh) > null_tol)) {
    throw GeometryError(ErrorKind::LightlikeH, "mean curvature vector is lightlike");
  }
  NormalizedMeanCurvature n;
  n.epsilon = hh > 0.0 ? 1 : -1;
  const double N = std::sqrt(std::abs(hh));
  n.A = H.c1 / N;
  n.B = H.c2 / N;
  return n;
}

}  // namespace

NormalizedMeanCurvature normalized_mean_curvature(const MeridianSurface& s, double u, double v,
                                                  double null_tol) {
  return normalize(s.family(), mean_curvature_vec(s.family(), s.profile().jet(u), s.curve().curvature(v)),
                   null_tol);
}

NormalDerivatives normal_connection_derivatives(const MeridianSurface& s, double u, double v,
                                                double null_tol, double fd_step) {
  const FamilyTag fam = s.family();
  const ProfileJet j = s.profile().jet(u);
  const double kappa = s.curve().curvature(v);
  const double dkappa = s.curve().curvature_derivative(v);
  const NormalVec H = mean_curvature_vec(fam, j, kappa);
  const double sh = h1_sign(fam);

  const double du_h1 = -sh * kappa * j.df / (2.0 * j.f * j.f);
  double du_h2 = 0.0;
  if (s.profile().exact_derivatives()) {
    du_h2 = h2_u_derivative(fam, j);
  } else {
    const ProfileCurve& prof = s.profile();
    du_h2 = numerics::central_first([&](double x) { return h2_value(fam, prof.jet(x)); }, u, fd_step);
  }
  const double dy_h1 = sh * dkappa / (2.0 * j.f * j.f);

  NormalDerivatives out;
  out.DXH = {du_h1, du_h2};
  out.DYH = {dy_h1, 0.0};

  const double hh = normal_inner(fam, H);
  if (frame_norm(H) > null_tol && std::abs(hh) > null_tol) {
    const NormalizedMeanCurvature n = normalize(fam, H, null_tol);
    const FrameSignature sig = frame_signature(fam);
    const double N = std::sqrt(std::abs(hh));
    auto derive = [&](const NormalVec& dH) {
      const double dN = n.epsilon * (sig.n1 * H.c1 * dH.c1 + sig.n2 * H.c2 * dH.c2) / N;
      return NormalVec{(dH.c1 - n.A * dN) / N, (dH.c2 - n.B * dN) / N};
    };
    out.DXH0 = derive(out.DXH);
    out.DYH0 = derive(out.DYH);
  }
  return out;
}

Vec4 immerse_tilde_prime(const ProfileCurve& profile, const std::function<Vec4(double)>& l_tilde,
                         double u, double v) {
  const ProfileJet j = profile.jet(u);
  return j.f * l_tilde(v) + j.g * kE1;
}

}  // namespace meridian
