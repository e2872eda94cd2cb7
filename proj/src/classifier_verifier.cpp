#include "meridian/classifier_verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "meridian/errors.hpp"

namespace meridian {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
/// Margin added around the sampled ranges so oracle stencils stay inside the
/// profile and curve domains.
constexpr double kDomainPad = 0.02;

/// Smallest |g'| accepted on the sampled range; H grows like 1/g' near the
/// gauge boundary of the spacelike gauges.
constexpr double kGaugeMargin = 1e-3;

Interval padded(Interval r) { return {r.lo - kDomainPad, r.hi + kDomainPad}; }

void check_gauge_margin(const ProfileCurve& prof, std::size_t samples = 401) {
  const Interval d = prof.domain();
  for (std::size_t k = 0; k < samples; ++k) {
    const double u = d.lo + d.length() * static_cast<double>(k) / static_cast<double>(samples - 1);
    if (!(std::abs(prof.jet(u).dg) > kGaugeMargin)) {
      throw GeometryError(ErrorKind::GaugeBoundary,
                          "profile reaches g' = 0 near u = " + std::to_string(u));
    }
  }
}

double max_finite(double acc, double x) { return std::isnan(x) ? acc : std::max(acc, x); }

struct RunningStats {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    if (std::isnan(x)) return;
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  double stddev() const { return n > 0 ? std::sqrt(m2 / static_cast<double>(n)) : 0.0; }
};

SphericalCurve make_curve(const InstanceSpec& spec, CurveCase cc, Interval v) {
  const Interval dom = padded(v);
  if (spec.kappa_wave == 0.0) return constant_curvature_curve(cc, spec.params.kappa, dom);
  const double k0 = spec.params.kappa, w = spec.kappa_wave;
  return curve_from_kappa(
      cc, [k0, w](double s) { return k0 + w * std::sin(s); }, dom, std::nullopt,
      [w](double s) { return w * std::cos(s); });
}

struct ProfileBuild {
  ProfileCurve profile;
  std::optional<double> f0;
  std::optional<DomainExitInfo> exit;
};

/// Joins a forward profile on [anchor, ...] with the reflection of a profile
/// integrated with flipped signs on [0, pad], so that f(anchor) = f0 and the
/// result extends pad to the left of the anchor.
ProfileCurve stitch(const ProfileCurve& fwd, const ProfileCurve& bwd, double anchor) {
  const double pad = bwd.domain().hi;
  auto reflect = [](ProfileJet j) {
    j.df = -j.df;
    j.d3f = -j.d3f;
    j.dg = -j.dg;
    return j;
  };
  auto jet = [=](double u) { return u >= anchor ? fwd.jet(u) : reflect(bwd.jet(anchor - u)); };
  return {fwd.gauge(), {anchor - pad, fwd.domain().hi}, fwd.branch_signs(), jet, false};
}

ProfileBuild integrate_phi(const InstanceSpec& spec, Interval u, bool allow_partial) {
  validate_phi_params(spec.theorem, spec.params);
  BranchSigns flipped = spec.signs;
  flipped.outer = -flipped.outer;
  flipped.g = -flipped.g;
  std::optional<ProfileBuild> longest;
  auto attempt = [&](double f0) {
    ProfileSolution back =
        integrate_profile(spec.theorem, spec.params, flipped, f0, {0.0, kDomainPad});
    if (back.exit) throw GeometryError(ErrorKind::DomainExit, back.exit->message);
    ProfileSolution sol =
        integrate_profile(spec.theorem, spec.params, spec.signs, f0, {u.lo, u.hi + kDomainPad});
    ProfileCurve prof = stitch(sol.profile, back.profile, u.lo);
    check_gauge_margin(prof);
    if (sol.exit) {
      if (allow_partial && (!longest || prof.domain().hi > longest->profile.domain().hi)) {
        longest = ProfileBuild{prof, f0, sol.exit};
      }
      throw GeometryError(ErrorKind::DomainExit, sol.exit->message);
    }
    return prof;
  };

  std::vector<double> candidates;
  if (spec.f0) {
    candidates.push_back(*spec.f0);
  } else {
    candidates = {1.0, 1.5, 2.0, 0.5, 3.0, 0.75, 4.0, 0.25, 6.0, 10.0};
    for (const Interval& iv : admissible_intervals(spec.theorem, spec.params, spec.signs)) {
      if (!std::isfinite(iv.hi)) continue;
      const double w = iv.hi - iv.lo;
      candidates.push_back(spec.signs.outer > 0 ? iv.lo + 0.01 * w : iv.hi - 0.01 * w);
      candidates.push_back(iv.lo + 0.5 * w);
    }
  }
  std::string last;
  for (double f0 : candidates) {
    try {
      return {attempt(f0), f0, std::nullopt};
    } catch (const GeometryError& e) {
      const bool recoverable = e.kind() == ErrorKind::DomainExit ||
                               e.kind() == ErrorKind::GaugeViolation ||
                               e.kind() == ErrorKind::GaugeBoundary;
      if (!recoverable || spec.f0) {
        if (longest) return std::move(*longest);
        throw;
      }
      last = e.what();
    }
  }
  if (longest) return std::move(*longest);
  throw GeometryError(ErrorKind::DomainExit,
                      "no starting radius keeps the profile admissible on the u-range; last attempt: " + last);
}

ProfileBuild make_profile(const InstanceSpec& spec, Interval u, bool allow_partial) {
  const TheoremTag t = spec.theorem;
  const GaugeKind gauge = gauge_of(t);
  const ProfileParams& p = spec.params;
  if (is_flat_family(t)) {
    return {flat_profile(gauge, p.a, p.b, spec.signs.g, padded(u)), std::nullopt, std::nullopt};
  }
  if (is_analytic_T5i(t)) {
    const Interval full = analytic_T5i_domain(t, p.a, p.b);
    Interval d = padded(u);
    d.lo = std::max(d.lo, 0.5 * (u.lo + full.lo));
    d.hi = std::min(d.hi, 0.5 * (u.hi + full.hi));
    return {analytic_profile_T5i(t, p.a, p.b, 0.0, spec.signs.g, d), std::nullopt, std::nullopt};
  }
  return integrate_phi(spec, u, allow_partial);
}

double profile_ode_residual(const ProfileCurve& prof, TheoremTag t, const ProfileParams& p) {
  if (prof.exact_derivatives()) return verify_profile_ode(prof, t, p);
  return verify_profile_ode(prof, t, p, 201, ResidualRoute::FiniteDifference);
}

double profile_gauge_residual(const ProfileCurve& prof, std::size_t samples = 201) {
  const Interval d = prof.domain();
  double worst = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double u = d.lo + d.length() * static_cast<double>(k) / static_cast<double>(samples - 1);
    worst = max_finite(worst, gauge_residual(prof.gauge(), prof.jet(u)));
  }
  return worst;
}

}  // namespace

FamilyTag family_of(TheoremTag t) { return family_of(gauge_of(t)); }

Interval default_u_range(const InstanceSpec& spec) {
  if (spec.u_range) return *spec.u_range;
  const TheoremTag t = spec.theorem;
  const double a = spec.params.a, b = spec.params.b;
  if (is_flat_family(t)) return {-1.0, 1.0};
  if (is_analytic_T5i(t)) {
    switch (t) {
      case TheoremTag::T51i: {
        const double k = std::sqrt(std::max(a * a + b, 0.0));
        return {a - 0.9 * k, a + 0.9 * k};
      }
      case TheoremTag::T52i: {
        const double k = std::sqrt(std::max(a * a - b, 0.0));
        return {-a + 1.2 * k, -a + 3.0 * k};
      }
      default: return {-a - 2.0, -a + 2.0};
    }
  }
  return {0.0, 1.0};
}

Interval default_v_range(const InstanceSpec& spec) {
  return spec.v_range ? *spec.v_range : Interval{0.0, 2.0};
}

BuiltInstance build_instance(const InstanceSpec& in, bool allow_partial) {
  InstanceSpec spec = in;
  spec.u_range = default_u_range(in);
  spec.v_range = default_v_range(in);
  if (!(spec.u_range->hi > spec.u_range->lo) || !(spec.v_range->hi > spec.v_range->lo)) {
    throw GeometryError(ErrorKind::InvalidParams, "empty u- or v-range");
  }
  const FamilyTag fam = family_of(spec.theorem);
  ProfileBuild pb = make_profile(spec, *spec.u_range, allow_partial);
  if (!pb.f0) check_gauge_margin(pb.profile);
  spec.f0 = pb.f0;
  if (pb.exit) {
    spec.u_range->hi = std::min(spec.u_range->hi, pb.profile.domain().hi - kDomainPad);
    if (!(spec.u_range->hi > spec.u_range->lo)) {
      throw GeometryError(ErrorKind::DomainExit, pb.exit->message);
    }
  }

  const double ode = profile_ode_residual(pb.profile, spec.theorem, spec.params);
  ProfileCurve prof = spec.perturb != 0.0 ? perturbed_profile(pb.profile, spec.perturb) : std::move(pb.profile);
  const double gauge = profile_gauge_residual(prof);
  const double ode_final = spec.perturb != 0.0 ? profile_ode_residual(prof, spec.theorem, spec.params) : ode;

  SphericalCurve curve = make_curve(spec, curve_case_of(fam), *spec.v_range);
  return {MeridianSurface(fam, std::move(curve), std::move(prof)), spec, ode_final, gauge, pb.exit};
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Verified: return "Verified";
    case Verdict::Violated: return "Violated";
    case Verdict::Error: return "Error";
  }
  return "?";
}

namespace {

struct GridScan {
  std::vector<GeometryReport> reports;
  Residuals res;
  bool quasi_minimal = false;
  std::optional<ErrorKind> error;
  std::optional<ErrorKind> h0_error;
  std::string message;
  bool oracle_complete = true;
};

GridScan scan(const MeridianSurface& s, const GridSpec& grid, const Tolerances& tol,
              const CheckOptions& opt) {
  GridOptions go = opt.grid;
  go.with_oracle = opt.with_oracle;
  go.null_tol = tol.null_tol;
  GridScan g;
  g.reports = opt.parallel ? evaluate_grid_parallel(s, grid, go) : evaluate_grid_serial(s, grid, go);

  Residuals& r = g.res;
  RunningStats hh, A, B;
  const Vec4* n1_ref = nullptr;
  for (const GeometryReport& p : g.reports) {
    if (p.error) {
      if (!g.error) {
        g.error = p.error;
        g.message = p.message;
      }
      continue;
    }
    if (p.h0_error && !g.h0_error) g.h0_error = p.h0_error;
    g.quasi_minimal = g.quasi_minimal || p.quasi_minimal;
    r.max_DXH = max_finite(r.max_DXH, p.res_DXH);
    r.max_DYH = max_finite(r.max_DYH, p.res_DYH);
    r.max_DXH0 = max_finite(r.max_DXH0, p.res_DXH0);
    r.max_DYH0 = max_finite(r.max_DYH0, p.res_DYH0);
    r.K_max = max_finite(r.K_max, std::abs(p.K));
    hh.add(p.HH);
    A.add(p.A);
    B.add(p.B);
    if (!n1_ref) n1_ref = &p.n1;
    r.hyperplane_dev = max_finite(r.hyperplane_dev, euclidean_norm(p.n1 - *n1_ref));

    const ProfileJet j = s.profile().jet(p.u);
    const double kappa = s.curve().curvature(p.v);
    r.max_kappa_prime = max_finite(r.max_kappa_prime, std::abs(s.curve().curvature_derivative(p.v)));
    r.max_kappa_fprime = max_finite(r.max_kappa_fprime, std::abs(kappa * j.df));
    r.max_DX_H2 = max_finite(r.max_DX_H2, std::abs(p.DXH.c2));

    if (p.oracle) {
      r.oracle_max_DXH = max_finite(r.oracle_max_DXH, p.oracle->DXH);
      r.oracle_max_DYH = max_finite(r.oracle_max_DYH, p.oracle->DYH);
      if (std::isnan(p.oracle->DXH0) || std::isnan(p.oracle->DYH0)) g.oracle_complete = false;
      r.oracle_max_DXH0 = max_finite(r.oracle_max_DXH0, p.oracle->DXH0);
      r.oracle_max_DYH0 = max_finite(r.oracle_max_DYH0, p.oracle->DYH0);
      r.oracle_h_err = max_finite(r.oracle_h_err, p.oracle->h_err);
      r.oracle_K_err = max_finite(r.oracle_K_err, p.oracle->K_err);
      r.oracle_H_err = max_finite(r.oracle_H_err, p.oracle->H_err);
    } else if (opt.with_oracle) {
      g.oracle_complete = false;
    }
  }
  r.HH_mean = hh.mean;
  r.HH_stddev = hh.stddev();
  r.A_stddev = A.stddev();
  r.B_stddev = B.stddev();
  if (!opt.with_oracle) {
    r.oracle_max_DXH = r.oracle_max_DYH = r.oracle_max_DXH0 = r.oracle_max_DYH0 = kNaN;
    r.oracle_h_err = r.oracle_K_err = r.oracle_H_err = kNaN;
  }
  return g;
}

TheoremCheck start_check(const GridSpec& grid, const Tolerances& tol, const CheckOptions& opt) {
  TheoremCheck c;
  c.grid = grid;
  c.tol = tol;
  c.with_oracle = opt.with_oracle;
  return c;
}

void fill_common(TheoremCheck& c, const GridScan& g) {
  c.residuals = g.res;
  c.quasi_minimal = g.quasi_minimal;
  c.flat = g.res.K_max <= c.tol.flat;
  c.cmc = g.res.HH_stddev <= c.tol.cmc;
  c.in_hyperplane = g.res.hyperplane_dev <= c.tol.hyperplane;
}

void combine(TheoremCheck& c) {
  if (c.closed_form_verdict == Verdict::Error || c.oracle_verdict == Verdict::Error) {
    c.verdict = Verdict::Error;
  } else if (c.closed_form_verdict == Verdict::Verified &&
             (!c.with_oracle || c.oracle_verdict == Verdict::Verified)) {
    c.verdict = Verdict::Verified;
  } else {
    c.verdict = Verdict::Violated;
  }
  if (c.with_oracle && c.closed_form_verdict != c.oracle_verdict) {
    c.diagnostics += "closed-form and oracle verdicts disagree; ";
  }
}

bool empty_grid(TheoremCheck& c, const GridSpec& grid) {
  if (grid.size() > 0) return false;
  c.verdict = c.closed_form_verdict = c.oracle_verdict = Verdict::Error;
  c.error = ErrorKind::ConfigError;
  c.diagnostics = "empty grid";
  return true;
}

}  // namespace

TheoremCheck check_parallel_H(const MeridianSurface& s, const GridSpec& grid, const Tolerances& tol,
                              const CheckOptions& opt) {
  TheoremCheck c = start_check(grid, tol, opt);
  if (empty_grid(c, grid)) return c;
  const GridScan g = scan(s, grid, tol, opt);
  fill_common(c, g);
  if (g.error) {
    c.verdict = c.closed_form_verdict = c.oracle_verdict = Verdict::Error;
    c.error = g.error;
    c.diagnostics = g.message;
    return c;
  }
  const Residuals& r = c.residuals;
  const double closed = std::max(r.max_DXH, r.max_DYH);
  c.closed_form_verdict = closed <= tol.parallel ? Verdict::Verified : Verdict::Violated;
  if (opt.with_oracle) {
    const double orc = std::max(r.oracle_max_DXH, r.oracle_max_DYH);
    c.oracle_verdict = orc <= tol.oracle ? Verdict::Verified : Verdict::Violated;
  } else {
    c.oracle_verdict = c.closed_form_verdict;
  }
  combine(c);
  std::ostringstream d;
  d.precision(3);
  d << "max |DH| = " << closed;
  if (opt.with_oracle) d << " (oracle " << std::max(r.oracle_max_DXH, r.oracle_max_DYH) << ")";
  c.diagnostics += d.str();
  return c;
}

TheoremCheck check_parallel_H0_not_H(const MeridianSurface& s, const GridSpec& grid,
                                     const Tolerances& tol, const CheckOptions& opt) {
  TheoremCheck c = start_check(grid, tol, opt);
  if (empty_grid(c, grid)) return c;
  const GridScan g = scan(s, grid, tol, opt);
  fill_common(c, g);
  const std::optional<ErrorKind> err = g.error ? g.error : g.h0_error;
  if (err) {
    c.verdict = c.closed_form_verdict = c.oracle_verdict = Verdict::Error;
    c.error = err;
    c.diagnostics = g.error ? g.message
                            : std::string(to_string(*err)) + ": H0 is undefined at some grid point";
    return c;
  }
  const Residuals& r = c.residuals;
  const double margin = tol.not_parallel_factor;
  const double closed_h0 = std::max(r.max_DXH0, r.max_DYH0);
  const double closed_h = std::max(r.max_DXH, r.max_DYH);
  c.closed_form_verdict =
      closed_h0 <= tol.parallel && closed_h > margin * tol.parallel ? Verdict::Verified : Verdict::Violated;
  if (opt.with_oracle) {
    if (!g.oracle_complete) {
      c.oracle_verdict = Verdict::Error;
      c.diagnostics += "oracle could not normalize H at some grid point; ";
    } else {
      const double orc_h0 = std::max(r.oracle_max_DXH0, r.oracle_max_DYH0);
      const double orc_h = std::max(r.oracle_max_DXH, r.oracle_max_DYH);
      c.oracle_verdict =
          orc_h0 <= tol.oracle && orc_h > margin * tol.oracle ? Verdict::Verified : Verdict::Violated;
    }
  } else {
    c.oracle_verdict = c.closed_form_verdict;
  }
  combine(c);
  std::ostringstream d;
  d.precision(3);
  d << "max |DH0| = " << closed_h0 << ", max |DH| = " << closed_h;
  c.diagnostics += d.str();
  return c;
}

TheoremCheck verify_theorem(const InstanceSpec& spec, std::size_t nu, std::size_t nv,
                            const Tolerances& tol, const CheckOptions& opt) {
  GridSpec grid{default_u_range(spec), default_v_range(spec), nu, nv};
  TheoremCheck c;
  try {
    const BuiltInstance inst = build_instance(spec);
    grid.u = *inst.spec.u_range;
    grid.v = *inst.spec.v_range;
    c = is_section5(spec.theorem) ? check_parallel_H0_not_H(inst.surface, grid, tol, opt)
                                  : check_parallel_H(inst.surface, grid, tol, opt);
    c.spec = inst.spec;
    c.residuals.ode_residual = inst.ode_residual;
    c.residuals.gauge_residual = inst.gauge_residual;
    if (c.verdict == Verdict::Verified) {
      if (is_flat_family(spec.theorem) && !(c.flat && c.cmc)) {
        c.verdict = Verdict::Violated;
        c.diagnostics += "; surface is not flat with constant <H,H>";
      }
      if (is_phi_family(spec.theorem) && !is_section5(spec.theorem) && !c.in_hyperplane) {
        c.verdict = Verdict::Violated;
        c.diagnostics += "; n1 is not constant";
      }
    }
  } catch (const GeometryError& e) {
    c = TheoremCheck{};
    c.spec = spec;
    c.grid = grid;
    c.tol = tol;
    c.with_oracle = opt.with_oracle;
    c.error = e.kind();
    c.diagnostics = e.what();
  }
  return c;
}

SweepResult scan_family_grid(const InstanceSpec& base, const ParamRanges& ranges, std::size_t nu,
                             std::size_t nv, const Tolerances& tol, const CheckOptions& opt) {
  auto values = [](const std::optional<std::vector<double>>& r, double fallback) {
    return r ? *r : std::vector<double>{fallback};
  };
  const auto as = values(ranges.a, base.params.a);
  const auto bs = values(ranges.b, base.params.b);
  const auto cs = values(ranges.c, base.params.c);
  const auto ks = values(ranges.kappa, base.params.kappa);

  std::vector<InstanceSpec> specs;
  for (double a : as)
    for (double b : bs)
      for (double c : cs)
        for (double k : ks) {
          InstanceSpec s = base;
          s.params = {a, b, c, k};
          specs.push_back(s);
        }

  SweepResult out;
  out.checks.resize(specs.size());
  CheckOptions inner = opt;
  inner.parallel = false;
  const auto n = static_cast<std::ptrdiff_t>(specs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out.checks[k] = verify_theorem(specs[k], nu, nv, tol, inner);
  }
  for (const TheoremCheck& c : out.checks) {
    if (c.verdict == Verdict::Verified) ++out.verified;
    if (c.verdict == Verdict::Error) continue;
    const Residuals& r = c.residuals;
    const bool h0 = is_section5(c.spec.theorem);
    out.max_residual = max_finite(out.max_residual, h0 ? std::max(r.max_DXH0, r.max_DYH0)
                                                       : std::max(r.max_DXH, r.max_DYH));
  }
  return out;
}

}  // namespace meridian
