#include "meridian/meridian_profiles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "meridian/errors.hpp"

namespace meridian {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRadicandClamp = 1e-12;
// Below this phi^2 the first-order flow stalls at a radicand root.
constexpr double kStallPhiSquared = 1e-10;
constexpr double kNearRootPhiSquared = 1e-4;

using GaussLegendre = boost::math::quadrature::gauss<double, 20>;

double safe_sqrt(double x) { return std::sqrt(std::max(0.0, x)); }

std::string describe_intervals(const std::vector<Interval>& ivs) {
  std::ostringstream os;
  os.precision(17);
  if (ivs.empty()) return "none";
  for (std::size_t i = 0; i < ivs.size(); ++i) {
    if (i) os << ", ";
    os << "[" << ivs[i].lo << ", " << ivs[i].hi << "]";
  }
  return os.str();
}

}  // namespace

const char* to_string(GaugeKind g) {
  switch (g) {
    case GaugeKind::TimelikeMeridian: return "TimelikeMeridian";
    case GaugeKind::SpacelikeMeridianDS: return "SpacelikeMeridianDS";
    case GaugeKind::SpacelikeMeridianADS: return "SpacelikeMeridianADS";
  }
  return "?";
}

namespace {
constexpr std::array<std::pair<TheoremTag, const char*>, 11> kTagNames{{
    {TheoremTag::T41i, "T41i"},
    {TheoremTag::T41ii, "T41ii"},
    {TheoremTag::T42, "T42"},
    {TheoremTag::T43i, "T43i"},
    {TheoremTag::T43ii, "T43ii"},
    {TheoremTag::T51i, "T51i"},
    {TheoremTag::T51ii, "T51ii"},
    {TheoremTag::T52i, "T52i"},
    {TheoremTag::T52ii, "T52ii"},
    {TheoremTag::T53i, "T53i"},
    {TheoremTag::T53ii, "T53ii"},
}};
}  // namespace

const char* to_string(TheoremTag t) {
  for (const auto& [tag, name] : kTagNames) {
    if (tag == t) return name;
  }
  return "?";
}

std::optional<TheoremTag> parse_theorem_tag(const std::string& s) {
  for (const auto& [tag, name] : kTagNames) {
    if (s == name) return tag;
  }
  return std::nullopt;
}

GaugeKind gauge_of(TheoremTag t) {
  switch (t) {
    case TheoremTag::T41i:
    case TheoremTag::T41ii:
    case TheoremTag::T51i:
    case TheoremTag::T51ii: return GaugeKind::TimelikeMeridian;
    case TheoremTag::T42:
    case TheoremTag::T52i:
    case TheoremTag::T52ii: return GaugeKind::SpacelikeMeridianDS;
    case TheoremTag::T43i:
    case TheoremTag::T43ii:
    case TheoremTag::T53i:
    case TheoremTag::T53ii: return GaugeKind::SpacelikeMeridianADS;
  }
  return GaugeKind::TimelikeMeridian;
}

bool is_phi_family(TheoremTag t) {
  switch (t) {
    case TheoremTag::T41ii:
    case TheoremTag::T42:
    case TheoremTag::T43ii:
    case TheoremTag::T51ii:
    case TheoremTag::T52ii:
    case TheoremTag::T53ii: return true;
    default: return false;
  }
}

bool is_flat_family(TheoremTag t) { return t == TheoremTag::T41i || t == TheoremTag::T43i; }

bool is_analytic_T5i(TheoremTag t) {
  return t == TheoremTag::T51i || t == TheoremTag::T52i || t == TheoremTag::T53i;
}

bool is_section5(TheoremTag t) {
  return is_analytic_T5i(t) || t == TheoremTag::T51ii || t == TheoremTag::T52ii ||
         t == TheoremTag::T53ii;
}

// --- profile curves -----------------------------------------------------------

double gauge_radicand(GaugeKind gauge, double df) {
  switch (gauge) {
    case GaugeKind::TimelikeMeridian: return df * df + 1.0;
    case GaugeKind::SpacelikeMeridianDS: return df * df - 1.0;
    case GaugeKind::SpacelikeMeridianADS: return 1.0 - df * df;
  }
  return 0.0;
}

void complete_g_derivatives(GaugeKind gauge, int g_sign, ProfileJet& j) {
  double q = gauge_radicand(gauge, j.df);
  if (q < 0.0) {
    if (q < -kRadicandClamp) {
      throw GeometryError(ErrorKind::OutOfDomain, "gauge has no real g' at this f'");
    }
    q = 0.0;
  }
  j.dg = g_sign * std::sqrt(q);
  const double s = gauge == GaugeKind::SpacelikeMeridianADS ? -1.0 : 1.0;
  j.d2g = j.dg == 0.0 ? 0.0 : s * j.df * j.d2f / j.dg;
}

ProfileCurve::ProfileCurve(GaugeKind gauge, Interval domain, BranchSigns signs, JetFn jet,
                           bool exact_derivatives)
    : gauge_(gauge), domain_(domain), signs_(signs), jet_(std::move(jet)), exact_(exact_derivatives) {}

double kappa_m(GaugeKind gauge, const ProfileJet& j) {
  const double d = j.d2f * j.dg - j.df * j.d2g;
  return gauge == GaugeKind::TimelikeMeridian ? d : -d;
}

double kappa_m(const ProfileCurve& p, double u) { return kappa_m(p.gauge(), p.jet(u)); }

double gauge_residual(GaugeKind gauge, const ProfileJet& j) {
  switch (gauge) {
    case GaugeKind::TimelikeMeridian: return j.df * j.df - j.dg * j.dg + 1.0;
    case GaugeKind::SpacelikeMeridianDS: return j.df * j.df - j.dg * j.dg - 1.0;
    case GaugeKind::SpacelikeMeridianADS: return j.df * j.df + j.dg * j.dg - 1.0;
  }
  return 0.0;
}

ProfileCurve flat_profile(GaugeKind gauge, double a, double b, int sign, Interval domain) {
  if (gauge == GaugeKind::SpacelikeMeridianDS) {
    throw GeometryError(ErrorKind::InvalidGauge,
                        "f' = 0 forces g'^2 = -1 in the f'^2 - g'^2 = 1 gauge");
  }
  if (!(a > 0.0)) {
    throw GeometryError(ErrorKind::InvalidParams, "constant radius a must be positive");
  }
  const double sg = sign >= 0 ? 1.0 : -1.0;
  auto jet = [a, b, sg](double u) {
    ProfileJet j;
    j.f = a;
    j.g = sg * u + b;
    j.dg = sg;
    return j;
  };
  return {gauge, domain, BranchSigns{1, 1, sign >= 0 ? 1 : -1}, jet, true};
}

// --- radicands ------------------------------------------------------------------

namespace {

struct Linear {
  double l;
  double dl;
  double d2l;
};

Linear linear_jet(TheoremTag tag, const ProfileParams& p, const BranchSigns& s, double t) {
  switch (tag) {
    case TheoremTag::T41ii:
    case TheoremTag::T42:
    case TheoremTag::T43ii: {
      const double sa = s.inner * p.a;
      return {p.c + sa * t * t, 2.0 * sa * t, 2.0 * sa};
    }
    case TheoremTag::T51ii:
    case TheoremTag::T52ii: return {p.c * t + p.a, p.c, 0.0};
    case TheoremTag::T53ii: return {p.c * t - p.a, p.c, 0.0};
    default: break;
  }
  throw GeometryError(ErrorKind::InvalidParams,
                      std::string("theorem family ") + to_string(tag) + " has no phi reduction");
}

/// +1 when R = L^2 - t^2 or L^2 + t^2 style, -1 when R = t^2 - L^2.
double radicand_sign(TheoremTag tag) {
  return tag == TheoremTag::T43ii || tag == TheoremTag::T53ii ? -1.0 : 1.0;
}

/// Coefficient of t^2 in R besides the L^2 part.
double t2_coefficient(TheoremTag tag) {
  switch (tag) {
    case TheoremTag::T41ii:
    case TheoremTag::T51ii: return -1.0;
    case TheoremTag::T42:
    case TheoremTag::T52ii: return 1.0;
    default: return 1.0;  // t^2 - L^2
  }
}

void add_quadratic_roots(double a2, double a1, double a0, std::vector<double>& out) {
  if (a2 == 0.0) {
    if (a1 != 0.0) out.push_back(-a0 / a1);
    return;
  }
  const double disc = a1 * a1 - 4.0 * a2 * a0;
  if (disc < 0.0) return;
  const double sq = std::sqrt(disc);
  // Cancellation-free pair.
  const double q = -0.5 * (a1 + (a1 >= 0.0 ? sq : -sq));
  if (q != 0.0) {
    out.push_back(q / a2);
    out.push_back(a0 / q);
  } else {
    out.push_back(0.0);
  }
}

}  // namespace

Radicand radicand(TheoremTag tag, const ProfileParams& p, const BranchSigns& s, double t) {
  const Linear L = linear_jet(tag, p, s, t);
  const double sr = radicand_sign(tag);
  const double k = t2_coefficient(tag);
  if (sr > 0) {
    return {L.l * L.l + k * t * t, 2.0 * L.l * L.dl + 2.0 * k * t,
            2.0 * L.dl * L.dl + 2.0 * L.l * L.d2l + 2.0 * k};
  }
  return {t * t - L.l * L.l, 2.0 * t - 2.0 * L.l * L.dl, 2.0 - 2.0 * L.dl * L.dl - 2.0 * L.l * L.d2l};
}

double linear_factor(TheoremTag tag, const ProfileParams& p, const BranchSigns& s, double t) {
  return linear_jet(tag, p, s, t).l;
}

std::vector<double> radicand_roots(TheoremTag tag, const ProfileParams& p, const BranchSigns& s) {
  (void)linear_jet(tag, p, s, 1.0);
  std::vector<double> roots;
  if (tag == TheoremTag::T42 || tag == TheoremTag::T52ii) return roots;
  // R = +/-(L - t)(L + t), L = l2 t^2 + l1 t + l0.
  double l2 = 0.0, l1 = 0.0, l0 = 0.0;
  if (tag == TheoremTag::T41ii || tag == TheoremTag::T43ii) {
    l2 = s.inner * p.a;
    l0 = p.c;
  } else if (tag == TheoremTag::T51ii) {
    l1 = p.c;
    l0 = p.a;
  } else {
    l1 = p.c;
    l0 = -p.a;
  }
  std::vector<double> all;
  add_quadratic_roots(l2, l1 - 1.0, l0, all);
  add_quadratic_roots(l2, l1 + 1.0, l0, all);
  for (double r : all) {
    if (r > 0.0 && std::isfinite(r)) roots.push_back(r);
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

std::vector<Interval> admissible_intervals(TheoremTag tag, const ProfileParams& p,
                                           const BranchSigns& s) {
  std::vector<double> cuts{0.0};
  for (double r : radicand_roots(tag, p, s)) cuts.push_back(r);
  cuts.push_back(kInf);
  std::vector<Interval> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    const double mid = std::isinf(hi) ? lo + 1.0 + std::abs(lo) : 0.5 * (lo + hi);
    if (radicand(tag, p, s, mid).r < 0.0) continue;
    if (!out.empty() && out.back().hi == lo) {
      out.back().hi = hi;
    } else {
      out.push_back({lo, hi});
    }
  }
  return out;
}

std::optional<Interval> admissible_interval(TheoremTag tag, const ProfileParams& p,
                                            const BranchSigns& s, double t) {
  for (const Interval& iv : admissible_intervals(tag, p, s)) {
    if (t >= iv.lo && t <= iv.hi) return iv;
  }
  return std::nullopt;
}

void validate_phi_params(TheoremTag tag, const ProfileParams& p) {
  if (!is_phi_family(tag)) {
    throw GeometryError(ErrorKind::InvalidParams,
                        std::string("theorem family ") + to_string(tag) + " has no phi reduction");
  }
  if (is_section5(tag)) {
    if (p.c == 0.0) throw GeometryError(ErrorKind::InvalidParams, "c must be nonzero");
  } else if (p.a == 0.0) {
    throw GeometryError(ErrorKind::InvalidParams, "a must be nonzero");
  }
}

double phi_closed_form(TheoremTag tag, double t, const ProfileParams& p, const BranchSigns& s) {
  validate_phi_params(tag, p);
  if (!(t > 0.0)) throw GeometryError(ErrorKind::InvalidParams, "phi requires t > 0");
  const double r = radicand(tag, p, s, t).r;
  if (r < 0.0) {
    std::ostringstream os;
    os.precision(17);
    os << "radicand of " << to_string(tag) << " is negative at t = " << t
       << "; admissible t-intervals: " << describe_intervals(admissible_intervals(tag, p, s));
    throw GeometryError(ErrorKind::DomainExit, os.str());
  }
  return s.outer * std::sqrt(r) / t;
}

std::optional<PhiJet> phi_jet(TheoremTag tag, const ProfileParams& p, const BranchSigns& s, double t) {
  if (!(t > 0.0)) return std::nullopt;
  Radicand r = radicand(tag, p, s, t);
  if (r.r < 0.0) {
    if (r.r < -kRadicandClamp * (1.0 + t * t * t * t)) return std::nullopt;
    r.r = 0.0;
  }
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
  PhiJet j;
  j.df = s.outer * std::sqrt(r.r) / t;
  const double dPhi = r.dr / t2 - 2.0 * r.r / t3;
  const double d2Phi = r.d2r / t2 - 4.0 * r.dr / t3 + 6.0 * r.r / t4;
  j.d2f = 0.5 * dPhi;
  j.d3f = 0.5 * d2Phi * j.df;
  return j;
}

double substitution_residual(TheoremTag tag, const ProfileParams& p, const BranchSigns& s,
                             Interval t_range, std::size_t samples) {
  validate_phi_params(tag, p);
  const GaugeKind gauge = gauge_of(tag);
  auto z = [&](double t) {
    const double phi = phi_closed_form(tag, t, p, s);
    return std::sqrt(gauge_radicand(gauge, phi));
  };
  double worst = -1.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = t_range.lo + (t_range.hi - t_range.lo) * (static_cast<double>(k) + 0.5) /
                                      static_cast<double>(samples);
    const double h = 1e-4 * std::max(1.0, t);
    bool usable = true;
    const double l0 = linear_factor(tag, p, s, t);
    for (int i = -2; i <= 2 && usable; ++i) {
      const double ti = t + i * h;
      const double li = linear_factor(tag, p, s, ti);
      usable = ti > 0.0 && radicand(tag, p, s, ti).r >= 0.0 && li * l0 > 0.0 &&
               std::abs(li) > 1e-3 * ti;
    }
    if (!usable) continue;
    const double dz = numerics::five_point_first(z, t, h);
    const double lhs = dz + z(t) / t;
    const double rhs = is_section5(tag) ? p.c / t : 2.0 * p.a;
    worst = std::max(worst, std::min(std::abs(lhs - rhs), std::abs(lhs + rhs)));
  }
  return worst < 0.0 ? std::numeric_limits<double>::quiet_NaN() : worst;
}

// --- integration ------------------------------------------------------------------

ProfileSolution integrate_profile(TheoremTag tag, const ProfileParams& p, const BranchSigns& s,
                                  double f0, Interval u_span, const IntegrationOptions& opts) {
  validate_phi_params(tag, p);
  if (!(u_span.hi > u_span.lo)) {
    throw GeometryError(ErrorKind::InvalidParams, "u-span must have positive length");
  }
  if (!(f0 > 0.0)) throw GeometryError(ErrorKind::InvalidParams, "f0 must be positive");
  if (!(radicand(tag, p, s, f0).r > kStallPhiSquared * f0 * f0)) {
    std::ostringstream os;
    os.precision(17);
    os << "f0 = " << f0 << " is not strictly inside an admissible interval; admissible: "
       << describe_intervals(admissible_intervals(tag, p, s));
    throw GeometryError(ErrorKind::DomainExit, os.str());
  }
  const GaugeKind gauge = gauge_of(tag);
  const double sg = s.g >= 0 ? 1.0 : -1.0;

  using State = std::array<double, 2>;
  std::function<bool(double, const State&, State&)> rhs = [&](double, const State& y, State& dy) {
    const double t = y[0];
    if (!(t > 0.0)) return false;
    const double r = radicand(tag, p, s, t).r;
    if (!(r >= kStallPhiSquared * t * t)) return false;
    const double phi = s.outer * std::sqrt(r) / t;
    const double q = gauge_radicand(gauge, phi);
    if (!(q >= -kRadicandClamp)) return false;
    dy = {phi, sg * safe_sqrt(q)};
    return true;
  };

  std::vector<double> us, fs, grk;
  std::function<void(double, const State&)> observe = [&](double u, const State& y) {
    us.push_back(u);
    fs.push_back(y[0]);
    grk.push_back(y[1]);
  };
  const auto res = numerics::integrate_dopri5<2>(rhs, State{f0, 0.0}, u_span.lo, u_span.hi,
                                                 opts.adaptive, observe);
  bool at_boundary = res.status == numerics::StepStatus::DomainExit;
  if (res.status == numerics::StepStatus::StepUnderflow) {
    // Error control also collapses on the square-root singularity at a root.
    const double t = res.y_end[0];
    const double r = radicand(tag, p, s, t).r;
    if (!(r < kNearRootPhiSquared * t * t)) {
      throw GeometryError(ErrorKind::IntegrationFailure, "step-size underflow in profile integration");
    }
    at_boundary = true;
  }
  if (us.size() < 2) {
    throw GeometryError(ErrorKind::DomainExit, "profile leaves its domain immediately");
  }

  auto node_jet = [&](double f) {
    auto j = phi_jet(tag, p, s, f);
    return j.value_or(PhiJet{0.0, 0.0, 0.0});
  };

  numerics::HermiteTable ftab(1);
  for (std::size_t k = 0; k < us.size(); ++k) {
    const PhiJet j = node_jet(fs[k]);
    const std::array<double, 1> v{fs[k]}, d1{j.df}, d2{j.d2f};
    ftab.push_back(us[k], v, d1, d2);
  }

  auto g_prime = [&](double u) {
    const double df = ftab.eval(0, u).d1;
    return sg * safe_sqrt(gauge_radicand(gauge, df));
  };
  auto table = std::make_shared<numerics::HermiteTable>(2);
  double g = 0.0, drift = 0.0;
  for (std::size_t k = 0; k < us.size(); ++k) {
    if (k > 0) g += GaussLegendre::integrate(g_prime, us[k - 1], us[k]);
    drift = std::max(drift, std::abs(g - grk[k]));
    const PhiJet j = node_jet(fs[k]);
    ProfileJet pj{fs[k], j.df, j.d2f, j.d3f, g, 0.0, 0.0};
    complete_g_derivatives(gauge, static_cast<int>(sg), pj);
    const std::array<double, 2> v{fs[k], g}, d1{j.df, pj.dg}, d2{j.d2f, pj.d2g};
    table->push_back(us[k], v, d1, d2);
  }
  if (drift > opts.gauge_drift_tol) {
    std::ostringstream os;
    os << "g drifted by " << drift << " from the quadrature of the gauge";
    throw GeometryError(ErrorKind::GaugeViolation, os.str());
  }

  const int gsign = static_cast<int>(sg);
  auto jet = [table, tag, p, s, gauge, gsign](double u) {
    const numerics::Jet3 fe = table->eval(0, u);
    ProfileJet j;
    j.f = fe.v;
    if (auto pj = phi_jet(tag, p, s, fe.v)) {
      j.df = pj->df;
      j.d2f = pj->d2f;
      j.d3f = pj->d3f;
    } else {
      j.df = fe.d1;
      j.d2f = fe.d2;
      j.d3f = fe.d3;
    }
    j.g = table->eval(1, u).v;
    complete_g_derivatives(gauge, gsign, j);
    return j;
  };

  const Interval domain{us.front(), us.back()};
  ProfileSolution sol{ProfileCurve(gauge, domain, s, jet, false), std::nullopt, res.accepted,
                      res.rejected, drift};
  if (at_boundary) {
    DomainExitInfo info;
    info.u = res.t_end;
    info.f = res.y_end[0];
    const auto ivs = admissible_intervals(tag, p, s);
    for (const Interval& iv : ivs) {
      if (info.f >= iv.lo - 1e-6 && info.f <= iv.hi + 1e-6) info.admissible = iv;
    }
    std::ostringstream os;
    os.precision(17);
    os << "f reached the boundary of its admissible interval at u = " << info.u
       << " (f = " << info.f << "); admissible f-intervals: " << describe_intervals(ivs);
    info.message = os.str();
    sol.exit = info;
  }
  return sol;
}

// --- closed-form T5i profiles --------------------------------------------------------

namespace {

struct QuadraticRadius {
  double sigma;  // coefficient of u^2
  double k;      // constant multiplying g'
};

QuadraticRadius t5i_shape(TheoremTag tag, double a, double b) {
  switch (tag) {
    case TheoremTag::T51i:
      if (!(a * a + b > 0.0)) throw GeometryError(ErrorKind::InvalidParams, "T51i needs a^2 + b > 0");
      return {-1.0, std::sqrt(a * a + b)};
    case TheoremTag::T52i:
      if (!(a * a - b > 0.0)) throw GeometryError(ErrorKind::InvalidParams, "T52i needs a^2 - b > 0");
      return {1.0, std::sqrt(a * a - b)};
    case TheoremTag::T53i:
      if (!(b - a * a > 0.0)) throw GeometryError(ErrorKind::InvalidParams, "T53i needs b - a^2 > 0");
      return {1.0, std::sqrt(b - a * a)};
    default: break;
  }
  throw GeometryError(ErrorKind::InvalidParams,
                      std::string(to_string(tag)) + " is not a closed-form T5i family");
}

}  // namespace

Interval analytic_T5i_domain(TheoremTag tag, double a, double b) {
  const QuadraticRadius q = t5i_shape(tag, a, b);
  switch (tag) {
    case TheoremTag::T51i: return {a - q.k, a + q.k};
    case TheoremTag::T52i: return {-a + q.k, kInf};
    default: return {-kInf, kInf};
  }
}

ProfileCurve analytic_profile_T5i(TheoremTag tag, double a, double b, double c_int, int sign,
                                  Interval domain) {
  const QuadraticRadius q = t5i_shape(tag, a, b);
  const double sigma = q.sigma, k = q.k;
  auto F = [=](double u) { return sigma * u * u + 2.0 * a * u + b; };
  const bool straddles_gap =
      tag == TheoremTag::T52i && domain.lo < -a + k && domain.hi > -a - k;
  if (!(domain.hi > domain.lo) || !(F(domain.lo) > 0.0) || !(F(domain.hi) > 0.0) || straddles_gap) {
    throw GeometryError(ErrorKind::InvalidParams,
                        std::string("requested u-range leaves the domain of the ") + to_string(tag) +
                            " profile");
  }
  const double sg = sign >= 0 ? 1.0 : -1.0;
  auto jet = [=](double u) {
    const double Fv = F(u), dF = 2.0 * sigma * u + 2.0 * a, d2F = 2.0 * sigma;
    const double r = std::sqrt(Fv);
    const double r3 = Fv * r, r5 = r3 * Fv;
    ProfileJet j;
    j.f = r;
    j.df = 0.5 * dF / r;
    j.d2f = 0.5 * d2F / r - 0.25 * dF * dF / r3;
    j.d3f = -0.75 * dF * d2F / r3 + 0.375 * dF * dF * dF / r5;
    const double G = tag == TheoremTag::T51i ? std::asin((u - a) / k) : std::log(std::abs(u + a + r));
    j.g = sg * k * G + c_int;
    j.dg = sg * k / r;
    j.d2g = -sg * k * 0.5 * dF / r3;
    return j;
  };
  return {gauge_of(tag), domain, BranchSigns{1, 1, static_cast<int>(sg)}, jet, true};
}

ProfileCurve profile_from_radius(GaugeKind gauge, RadiusFn radius, Interval domain, int g_sign,
                                 double g0, double node_spacing) {
  if (!(domain.hi > domain.lo)) {
    throw GeometryError(ErrorKind::InvalidParams, "profile domain must have positive length");
  }
  const double sg = g_sign >= 0 ? 1.0 : -1.0;
  const auto n = static_cast<std::size_t>(std::ceil(domain.length() / node_spacing));
  const double h = domain.length() / static_cast<double>(n);

  auto node = [&](double u) {
    const numerics::Jet3 r = radius(u);
    if (!(r.v > 0.0)) throw GeometryError(ErrorKind::OutOfDomain, "radius must stay positive");
    ProfileJet j{r.v, r.d1, r.d2, r.d3, 0.0, 0.0, 0.0};
    complete_g_derivatives(gauge, static_cast<int>(sg), j);
    return j;
  };
  auto g_prime = [&](double u) { return sg * safe_sqrt(gauge_radicand(gauge, radius(u).d1)); };

  auto table = std::make_shared<numerics::HermiteTable>(1);
  double g = g0;
  double prev = domain.lo;
  for (std::size_t k = 0; k <= n; ++k) {
    const double u = k == n ? domain.hi : domain.lo + h * static_cast<double>(k);
    if (k > 0) g += GaussLegendre::integrate(g_prime, prev, u);
    const ProfileJet j = node(u);
    const std::array<double, 1> v{g}, d1{j.dg}, d2{j.d2g};
    table->push_back(u, v, d1, d2);
    prev = u;
  }

  const int gsign = static_cast<int>(sg);
  auto jet = [radius, table, gauge, gsign](double u) {
    const numerics::Jet3 r = radius(u);
    ProfileJet j{r.v, r.d1, r.d2, r.d3, table->eval(0, u).v, 0.0, 0.0};
    complete_g_derivatives(gauge, gsign, j);
    return j;
  };
  return {gauge, domain, BranchSigns{1, 1, gsign}, jet, true};
}

ProfileCurve perturbed_profile(const ProfileCurve& base, double delta) {
  auto radius = [base, delta](double u) {
    const ProfileJet j = base.jet(u);
    const double sn = std::sin(u), cs = std::cos(u);
    return numerics::Jet3{j.f + delta * sn, j.df + delta * cs, j.d2f - delta * sn, j.d3f - delta * cs};
  };
  const Interval d = base.domain();
  ProfileCurve out = profile_from_radius(base.gauge(), radius, d, base.branch_signs().g, base.g(d.lo));
  return {out.gauge(), d, base.branch_signs(), [out](double u) { return out.jet(u); },
          base.exact_derivatives()};
}

// --- ODE residuals -----------------------------------------------------------------------

double ode_residual(TheoremTag tag, const ProfileParams& p, const ProfileJet& j) {
  const double base = j.f * j.d2f + j.df * j.df;
  const double P = base + 1.0, Q = base - 1.0;
  auto fit = [](double lhs, double rhs) { return std::abs(std::abs(lhs) - std::abs(rhs)); };
  switch (tag) {
    case TheoremTag::T41i:
    case TheoremTag::T43i: return std::max(std::abs(j.df), std::abs(j.d2f));
    case TheoremTag::T51i: return std::abs(P);
    case TheoremTag::T52i:
    case TheoremTag::T53i: return std::abs(Q);
    case TheoremTag::T41ii: return fit(P, 2.0 * p.a * j.f * safe_sqrt(j.df * j.df + 1.0));
    case TheoremTag::T42: return fit(Q, 2.0 * p.a * j.f * safe_sqrt(j.df * j.df - 1.0));
    case TheoremTag::T43ii: return fit(Q, 2.0 * p.a * j.f * safe_sqrt(1.0 - j.df * j.df));
    case TheoremTag::T51ii: return fit(P, p.c * safe_sqrt(j.df * j.df + 1.0));
    case TheoremTag::T52ii: return fit(Q, p.c * safe_sqrt(j.df * j.df - 1.0));
    case TheoremTag::T53ii: return fit(Q, p.c * safe_sqrt(1.0 - j.df * j.df));
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double verify_profile_ode(const ProfileCurve& prof, TheoremTag tag, const ProfileParams& p,
                          std::size_t samples, ResidualRoute route, double fd_step) {
  Interval d = prof.domain();
  if (route == ResidualRoute::FiniteDifference) {
    d.lo += 2.0 * fd_step;
    d.hi -= 2.0 * fd_step;
  }
  if (!(d.hi > d.lo) || samples == 0) return std::numeric_limits<double>::quiet_NaN();
  auto f = [&prof](double u) { return prof.f(u); };
  double worst = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double u = samples == 1 ? 0.5 * (d.lo + d.hi)
                                  : d.lo + d.length() * static_cast<double>(k) /
                                               static_cast<double>(samples - 1);
    ProfileJet j = prof.jet(u);
    if (route == ResidualRoute::FiniteDifference) {
      const double h = fd_step, hh = 0.5 * fd_step;
      j.df = (16.0 * numerics::five_point_first(f, u, hh) - numerics::five_point_first(f, u, h)) / 15.0;
      j.d2f = (16.0 * numerics::five_point_second(f, u, hh) - numerics::five_point_second(f, u, h)) / 15.0;
    }
    const double r = ode_residual(tag, p, j);
    if (!(r <= worst)) worst = r;  // propagates NaN
  }
  return worst;
}

}  // namespace meridian
