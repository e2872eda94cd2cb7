#pragma once

// Meridian profiles m(u) = (f(u), g(u)) under one of three unit-speed gauges,
// the theorem families and their reduced ODEs.
//
//   TimelikeMeridian      f'^2 - g'^2 = -1
//   SpacelikeMeridianDS   f'^2 - g'^2 = +1
//   SpacelikeMeridianADS  f'^2 + g'^2 = +1
//
// The first-order families are written f' = phi(f) with
//   phi(t) = s_outer * sqrt(R(t)) / t
// where R is the family's radicand polynomial.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "meridian/numerics.hpp"

namespace meridian {

using numerics::Interval;

enum class GaugeKind { TimelikeMeridian, SpacelikeMeridianDS, SpacelikeMeridianADS };

enum class TheoremTag { T41i, T41ii, T42, T43i, T43ii, T51i, T51ii, T52i, T52ii, T53i, T53ii };

const char* to_string(GaugeKind g);
const char* to_string(TheoremTag t);
std::optional<TheoremTag> parse_theorem_tag(const std::string& s);

GaugeKind gauge_of(TheoremTag t);

/// Families whose profile solves f' = phi(f).
bool is_phi_family(TheoremTag t);
/// Constant-radius families.
bool is_flat_family(TheoremTag t);
/// Closed-form families of the normalized-mean-curvature theorems.
bool is_analytic_T5i(TheoremTag t);
/// Families of the normalized-mean-curvature theorems.
bool is_section5(TheoremTag t);

struct ProfileParams {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double kappa = 0.0;

  bool operator==(const ProfileParams&) const = default;
};

/// Every +/- choice: `outer` in front of phi, `inner` inside (c +/- a t^2),
/// `g` the sign of g'.
struct BranchSigns {
  int outer = 1;
  int inner = 1;
  int g = 1;

  bool operator==(const BranchSigns&) const = default;
};

struct ProfileJet {
  double f = 0.0;
  double df = 0.0;
  double d2f = 0.0;
  double d3f = 0.0;
  double g = 0.0;
  double dg = 0.0;
  double d2g = 0.0;
};

/// g'^2 as a function of f' for the gauge.
double gauge_radicand(GaugeKind gauge, double df);

/// Fills dg and d2g from (df, d2f) using the gauge and the sign of g'.
/// Slightly negative radicands from round-off are clamped to zero; larger
/// violations throw OutOfDomain.
void complete_g_derivatives(GaugeKind gauge, int g_sign, ProfileJet& j);

class ProfileCurve {
 public:
  using JetFn = std::function<ProfileJet(double)>;

  ProfileCurve(GaugeKind gauge, Interval domain, BranchSigns signs, JetFn jet,
               bool exact_derivatives = true);

  GaugeKind gauge() const { return gauge_; }
  const Interval& domain() const { return domain_; }
  const BranchSigns& branch_signs() const { return signs_; }
  /// True when f', f'', f''' are exact functions of u rather than
  /// interpolated data.
  bool exact_derivatives() const { return exact_; }

  ProfileJet jet(double u) const { return jet_(u); }
  double f(double u) const { return jet_(u).f; }
  double g(double u) const { return jet_(u).g; }

 private:
  GaugeKind gauge_;
  Interval domain_;
  BranchSigns signs_;
  JetFn jet_;
  bool exact_;
};

/// Signed meridian curvature: f''g' - f'g'' for the timelike gauge,
/// f'g'' - f''g' for the two spacelike gauges.
double kappa_m(GaugeKind gauge, const ProfileJet& j);
double kappa_m(const ProfileCurve& p, double u);

double gauge_residual(GaugeKind gauge, const ProfileJet& j);

/// f = a, g = sign * u + b. Requires a > 0; the DS gauge admits no
/// constant-radius profile.
ProfileCurve flat_profile(GaugeKind gauge, double a, double b, int sign,
                          Interval domain = {-1.0, 1.0});

// --- radicands and phi -------------------------------------------------------

struct Radicand {
  double r = 0.0;
  double dr = 0.0;
  double d2r = 0.0;
};

/// R(t) with two derivatives for a phi family.
Radicand radicand(TheoremTag tag, const ProfileParams& p, const BranchSigns& s, double t);

/// The linear factor L(t) with z(t) = |L(t)| / t in the substitution chain.
double linear_factor(TheoremTag tag, const ProfileParams& p, const BranchSigns& s, double t);

/// Positive roots of R, sorted.
std::vector<double> radicand_roots(TheoremTag tag, const ProfileParams& p, const BranchSigns& s);

/// Maximal intervals of t > 0 on which R >= 0; `hi` is +infinity when
/// unbounded.
std::vector<Interval> admissible_intervals(TheoremTag tag, const ProfileParams& p,
                                           const BranchSigns& s);
/// The admissible interval containing t, if any.
std::optional<Interval> admissible_interval(TheoremTag tag, const ProfileParams& p,
                                            const BranchSigns& s, double t);

void validate_phi_params(TheoremTag tag, const ProfileParams& p);

/// phi(t). Throws DomainExit (with the admissible interval in the message)
/// when R(t) < 0 and InvalidParams for t <= 0 or inadmissible parameters.
double phi_closed_form(TheoremTag tag, double t, const ProfileParams& p, const BranchSigns& s);

/// f', f'', f''' of a solution of f' = phi(f) at the point where f = t.
struct PhiJet {
  double df = 0.0;
  double d2f = 0.0;
  double d3f = 0.0;
};
std::optional<PhiJet> phi_jet(TheoremTag tag, const ProfileParams& p, const BranchSigns& s, double t);

/// Max over samples of |z' + z/t - rhs| for z = sqrt(phi^2 +/- 1), with the
/// smaller residual over the two signs of rhs. Samples whose stencil leaves
/// the admissible region or straddles a zero of L are skipped.
double substitution_residual(TheoremTag tag, const ProfileParams& p, const BranchSigns& s,
                             Interval t_range, std::size_t samples = 200);

// --- integration ------------------------------------------------------------

struct IntegrationOptions {
  /// The step cap also sets the node spacing of the dense output.
  numerics::AdaptiveOptions adaptive{.h_max = 2e-3};
  double gauge_drift_tol = 1e-9;
};

struct DomainExitInfo {
  double u = 0.0;
  double f = 0.0;
  Interval admissible{};
  std::string message;
};

struct ProfileSolution {
  ProfileCurve profile;
  std::optional<DomainExitInfo> exit;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  /// Largest gap between the Runge-Kutta g and the Gauss-Legendre quadrature of g'.
  double gauge_drift = 0.0;
};

/// Integrates f' = phi(f), f(u_span.lo) = f0, over u_span. g(u_span.lo) = 0
/// and g is recovered from the gauge by quadrature on the step grid. A
/// DomainExit inside the span truncates the profile and fills `exit`.
ProfileSolution integrate_profile(TheoremTag tag, const ProfileParams& p, const BranchSigns& s,
                                  double f0, Interval u_span, const IntegrationOptions& opts = {});

/// Closed-form T51i / T52i / T53i profiles, f = sqrt(F) with F quadratic.
/// `sign` is the sign of g'; `c_int` the additive constant in g.
ProfileCurve analytic_profile_T5i(TheoremTag tag, double a, double b, double c_int, int sign,
                                  Interval domain);

/// Largest open interval on which the analytic T5i profile is defined.
Interval analytic_T5i_domain(TheoremTag tag, double a, double b);

/// Builds a profile from a radius function with exact derivatives; g is
/// obtained by Gauss-Legendre quadrature of the gauge on a fine grid and
/// stored as a quintic Hermite table. Throws OutOfDomain if the gauge
/// radicand is negative anywhere on the grid.
using RadiusFn = std::function<numerics::Jet3(double)>;
ProfileCurve profile_from_radius(GaugeKind gauge, RadiusFn radius, Interval domain, int g_sign,
                                 double g0 = 0.0, double node_spacing = 1e-2);

/// f + delta * sin(u) with the gauge re-imposed on g.
ProfileCurve perturbed_profile(const ProfileCurve& base, double delta);

// --- ODE residuals ----------------------------------------------------------

/// |LHS - RHS| of the family's defining second-order ODE at one jet; the
/// +/- on the right-hand side is taken as the better-fitting sign.
double ode_residual(TheoremTag tag, const ProfileParams& p, const ProfileJet& j);

enum class ResidualRoute { Jet, FiniteDifference };

/// Max of ode_residual over `samples` equispaced points. The finite
/// difference route differentiates f with Richardson-extrapolated five-point
/// stencils (steps `fd_step` and fd_step / 2) and skips points closer than
/// 2 * fd_step to the ends.
double verify_profile_ode(const ProfileCurve& prof, TheoremTag tag, const ProfileParams& p,
                          std::size_t samples = 201, ResidualRoute route = ResidualRoute::Jet,
                          double fd_step = 1e-2);

}  // namespace meridian
