// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "cli_app.hpp"
#include "meridian/classifier_verifier.hpp"
#include "meridian/grid_kernels.hpp"

namespace {

using namespace meridian;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("FAILED " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

InstanceSpec instance(TheoremTag t, double a, double b, double c, double kappa) {
  InstanceSpec s;
  s.theorem = t;
  s.params = {a, b, c, kappa};
  return s;
}

std::string label(const InstanceSpec& s) {
  std::ostringstream os;
  os << to_string(s.theorem) << "(a=" << s.params.a << ",b=" << s.params.b << ",c=" << s.params.c
     << ",k=" << s.params.kappa << ")";
  return os.str();
}

GridSpec grid_of(const BuiltInstance& inst, std::size_t n = 20) {
  return {default_u_range(inst.spec), default_v_range(inst.spec), n, n};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Three profiles per family.
std::vector<InstanceSpec> family_instances() {
  return {
      instance(TheoremTag::T41i, 1, 0, 0, 0.5),  instance(TheoremTag::T41ii, 1, 0, 0, 0),
      instance(TheoremTag::T51i, 0, 1, 0, 2),    instance(TheoremTag::T42, 1, 0, 1, 0),
      instance(TheoremTag::T52i, 2, 1, 0, 2),    instance(TheoremTag::T52ii, 1, 0, 2, 1),
      instance(TheoremTag::T43i, 1, 0, 0, 0.5),  instance(TheoremTag::T43ii, 1, 0, 0, 0),
      instance(TheoremTag::T53i, 0, 1, 0, 2),
  };
}

Outcome metric_and_frame() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  double metric = 0.0, frame = 0.0;
  for (const InstanceSpec& s : family_instances()) {
    const BuiltInstance inst = build_instance(s);
    const auto reports = evaluate_grid_parallel(inst.surface, grid_of(inst));
    for (const GeometryReport& r : reports) {
      o.require(!r.error, label(s) + " point error: " + r.message);
      if (r.error) break;
      metric = std::max(metric, r.metric_err);
      frame = std::max(frame, r.frame_err);
    }
  }
  const double t = seconds_since(t0);
  o.note("max metric gap " + sci(metric) + ", max frame Gram gap " + sci(frame) + ", " + sci(t) + " s");
  o.require(metric <= 1e-8, "metric gap <= 1e-8");
  o.require(frame <= 1e-8, "frame Gram gap <= 1e-8");
  o.require(t < 5.0, "runtime < 5 s");
  return o;
}

double oracle_gap(const BuiltInstance& inst, double h, int levels) {
  GridOptions opt;
  opt.with_oracle = true;
  opt.shape.h_step = h;
  opt.shape.richardson_levels = levels;
  double gap = 0.0;
  for (const GeometryReport& r : evaluate_grid_parallel(inst.surface, grid_of(inst), opt)) {
    if (r.oracle) gap = std::max({gap, r.oracle->h_err, r.oracle->K_err, r.oracle->H_err});
  }
  return gap;
}

Outcome oracle_equivalence() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0, worst_plain = 0.0, min_ratio = INFINITY;
  for (const InstanceSpec& s : family_instances()) {
    const BuiltInstance inst = build_instance(s);
    const double gap = oracle_gap(inst, 1e-4, 1);
    const double coarse = oracle_gap(inst, 2e-4, 0);
    const double fine = oracle_gap(inst, 1e-4, 0);
    const double ratio = coarse / fine;
    worst = std::max(worst, gap);
    worst_plain = std::max(worst_plain, fine);
    min_ratio = std::min(min_ratio, ratio);
    o.require(gap <= 1e-6, label(s) + " gap " + sci(gap) + " <= 1e-6");
    o.require(ratio >= 3.5, label(s) + " halving ratio " + sci(ratio) + " >= 3.5");
  }
  const double t = seconds_since(t0);
  o.note("max gap at h=1e-4 with one Richardson level " + sci(worst) + "; plain central differences " +
         sci(worst_plain) + "; min ratio gap(2e-4)/gap(1e-4) " + sci(min_ratio) + ", " + sci(t) + " s");
  o.require(t < 30.0, "runtime < 30 s");
  return o;
}

Tolerances tolerances(double parallel, double oracle = 1e-6) {
  Tolerances t;
  t.parallel = parallel;
  t.oracle = oracle;
  return t;
}

/// Instances verified by criteria 3 to 6; reused by the negative controls.
std::vector<InstanceSpec> g_verified;

Outcome flat_family() {
  Outcome o;
  double dh = 0.0, k = 0.0, hh = 0.0;
  for (double a : {0.5, 1.0, 2.0}) {
    for (double kappa : {0.0, 0.5, 2.0}) {
      const InstanceSpec s = instance(TheoremTag::T41i, a, 0, 0, kappa);
      const TheoremCheck c = verify_theorem(s, 20, 20, tolerances(1e-8));
      const Residuals& r = c.residuals;
      const double expected = (1.0 - kappa * kappa) / (4.0 * a * a);
      const double hh_gap = std::abs(r.HH_mean - expected) + r.HH_stddev;
      dh = std::max({dh, r.max_DXH, r.max_DYH});
      k = std::max(k, r.K_max);
      hh = std::max(hh, hh_gap);
      o.require(c.verdict == Verdict::Verified, label(s) + " verdict " + to_string(c.verdict));
      o.require(std::max(r.max_DXH, r.max_DYH) <= 1e-8, label(s) + " DH <= 1e-8");
      o.require(r.K_max <= 1e-10, label(s) + " K <= 1e-10");
      o.require(hh_gap <= 1e-10, label(s) + " <H,H> within 1e-10 of " + sci(expected));
      o.require(!c.quasi_minimal, label(s) + " not quasi-minimal");
      if (c.verdict == Verdict::Verified) g_verified.push_back(s);
    }
    const InstanceSpec q = instance(TheoremTag::T41i, a, 0, 0, 1.0);
    o.require(verify_theorem(q, 20, 20, tolerances(1e-8)).quasi_minimal, label(q) + " quasi-minimal");
  }
  o.note("max DH " + sci(dh) + ", max |K| " + sci(k) + ", max <H,H> gap " + sci(hh));
  return o;
}

Outcome phi_families() {
  Outcome o;
  double ode = 0.0, dh = 0.0, hyper = 0.0;
  const std::vector<InstanceSpec> specs = {
      instance(TheoremTag::T41ii, 1, 0, 0, 0),    instance(TheoremTag::T41ii, 1, 0, 0.5, 0),
      instance(TheoremTag::T41ii, 0.5, 0, 0.5, 0), instance(TheoremTag::T42, 1, 0, 1, 0),
      instance(TheoremTag::T42, 0.5, 0, 1, 0),    instance(TheoremTag::T42, 1, 0, 2, 0),
      instance(TheoremTag::T43ii, 1, 0, 0, 0),    instance(TheoremTag::T43ii, 0.5, 0, 0, 0),
      instance(TheoremTag::T43ii, 0.75, 0, 0, 0),
  };
  for (const InstanceSpec& s : specs) {
    const TheoremCheck c = verify_theorem(s, 20, 20, tolerances(1e-7, 1e-7));
    const Residuals& r = c.residuals;
    const double d = std::max({r.max_DXH, r.max_DYH, r.oracle_max_DXH, r.oracle_max_DYH});
    ode = std::max(ode, r.ode_residual);
    dh = std::max(dh, d);
    hyper = std::max(hyper, r.hyperplane_dev);
    o.require(c.verdict == Verdict::Verified,
              label(s) + " verdict " + to_string(c.verdict) + " " + c.diagnostics);
    o.require(r.ode_residual <= 1e-8, label(s) + " ODE residual " + sci(r.ode_residual));
    o.require(d <= 1e-7, label(s) + " DH " + sci(d));
    o.require(r.hyperplane_dev <= 1e-9, label(s) + " n1 deviation " + sci(r.hyperplane_dev));
    if (c.verdict == Verdict::Verified) g_verified.push_back(s);
  }

  const double u0 = 0.2;
  const ProfileSolution sol = integrate_profile(TheoremTag::T41ii, {1, 0, 0, 0}, {}, std::cosh(u0),
                                                {u0, 1.5});
  double cosh_gap = 0.0;
  for (int k = 0; k <= 200; ++k) {
    const double u = u0 + (1.5 - u0) * k / 200.0;
    cosh_gap = std::max(cosh_gap, std::abs(sol.profile.f(u) - std::cosh(u)));
  }
  o.require(!sol.exit && cosh_gap <= 1e-8, "c=0, a=1 profile matches cosh within 1e-8");
  o.note("max ODE residual " + sci(ode) + ", max DH " + sci(dh) + ", max n1 deviation " + sci(hyper) +
         ", cosh gap " + sci(cosh_gap));
  return o;
}

Outcome analytic_section5() {
  Outcome o;
  double ode = 0.0, dh0 = 0.0, margin = INFINITY;
  const std::vector<InstanceSpec> specs = {
      instance(TheoremTag::T51i, 0, 1, 0, 2),   instance(TheoremTag::T51i, 0.5, 2, 0, 0.5),
      instance(TheoremTag::T52i, 2, 1, 0, 2),   instance(TheoremTag::T52i, 1, 0.5, 0, 1.5),
      instance(TheoremTag::T53i, 0, 1, 0, 2),   instance(TheoremTag::T53i, 1, 2, 0, 0.5),
  };
  for (const InstanceSpec& s : specs) {
    const BuiltInstance inst = build_instance(s);
    const double res = verify_profile_ode(inst.surface.profile(), s.theorem, s.params, 401);
    ode = std::max(ode, res);
    o.require(res <= 1e-12, label(s) + " ODE residual " + sci(res));

    const TheoremCheck c = verify_theorem(s, 20, 20, tolerances(1e-8));
    const Residuals& r = c.residuals;
    const double d0 = std::max(r.max_DXH0, r.max_DYH0);
    dh0 = std::max(dh0, d0);
    o.require(c.verdict == Verdict::Verified,
              label(s) + " verdict " + to_string(c.verdict) + " " + c.diagnostics);
    o.require(d0 <= 1e-8, label(s) + " DH0 " + sci(d0));
    if (c.verdict == Verdict::Verified) g_verified.push_back(s);

    for (const GeometryReport& p : evaluate_grid_parallel(inst.surface, grid_of(inst))) {
      const ProfileJet j = inst.surface.profile().jet(p.u);
      const double bound = std::abs(s.params.kappa * j.df / (2.0 * j.f * j.f));
      margin = std::min(margin, p.res_DXH - (bound - 1e-8));
      if (!(p.res_DXH >= bound - 1e-8 && bound - 1e-8 > 0.0)) {
        o.require(false, label(s) + " |D_X H| bound at u=" + sci(p.u));
        break;
      }
    }
  }
  o.note("max ODE residual " + sci(ode) + ", max DH0 " + sci(dh0) + ", min |D_X H| - bound " + sci(margin));
  return o;
}

int run_cli(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::ostringstream os, es;
  const int code = cli::run(args, os, es);
  if (out) *out = os.str();
  return code;
}

Outcome integrated_section5() {
  Outcome o;
  double ode = 0.0, ab = 0.0;
  const std::vector<InstanceSpec> specs = {
      instance(TheoremTag::T51ii, 0, 0, 2, 1),  instance(TheoremTag::T51ii, 1, 0, 2, 1),
      instance(TheoremTag::T52ii, 1, 0, 2, 1),  instance(TheoremTag::T52ii, 0.5, 0, 1.5, 0.5),
      instance(TheoremTag::T53ii, 1, 0, 1.5, 1), instance(TheoremTag::T53ii, 0.5, 0, 1.5, 1),
  };
  for (const InstanceSpec& s : specs) {
    const TheoremCheck c = verify_theorem(s, 20, 20, tolerances(1e-8));
    const Residuals& r = c.residuals;
    const double spread = std::max(r.A_stddev, r.B_stddev);
    ode = std::max(ode, r.ode_residual);
    ab = std::max(ab, spread);
    o.require(c.verdict == Verdict::Verified,
              label(s) + " verdict " + to_string(c.verdict) + " " + c.diagnostics);
    o.require(r.ode_residual <= 1e-8, label(s) + " ODE residual " + sci(r.ode_residual));
    o.require(spread <= 1e-8, label(s) + " A, B spread " + sci(spread));
    if (c.verdict == Verdict::Verified) g_verified.push_back(s);
  }
  for (const char* tag : {"T51ii", "T52ii", "T53ii"}) {
    const int code = run_cli({"verify", "--theorem", tag, "--a", "1", "--c", "1", "--kappa", "1"});
    o.require(code == cli::kLightlike, std::string(tag) + " with c = kappa exits 4 (got " +
                                           std::to_string(code) + ")");
  }
  const int code = run_cli({"verify", "--theorem", "T51ii", "--c", "2", "--kappa", "-2"});
  o.require(code == cli::kLightlike, "T51ii with c = -kappa exits 4");
  o.note("max ODE residual " + sci(ode) + ", max A/B standard deviation " + sci(ab));
  return o;
}

Outcome negative_controls() {
  Outcome o;
  double smallest = INFINITY;
  o.require(!g_verified.empty(), "verified instances available");
  for (InstanceSpec s : g_verified) {
    s.perturb = 1e-2;
    const TheoremCheck c = verify_theorem(s, 20, 20, tolerances(1e-8));
    const Residuals& r = c.residuals;
    const double res = is_section5(s.theorem) ? std::max(r.max_DXH0, r.max_DYH0)
                                              : std::max(r.max_DXH, r.max_DYH);
    smallest = std::min(smallest, res);
    o.require(c.verdict == Verdict::Violated,
              label(s) + " perturbed verdict " + to_string(c.verdict) + " " + c.diagnostics);
    o.require(res > 1e-4, label(s) + " perturbed residual " + sci(res));
  }
  o.note(std::to_string(g_verified.size()) + " instances, min perturbed residual " + sci(smallest));
  return o;
}

Outcome congruence() {
  Outcome o;
  double gap = 0.0, base_gap = 0.0;
  for (const InstanceSpec& s :
       {instance(TheoremTag::T43i, 1, 0, 0, 0.5), instance(TheoremTag::T43ii, 1, 0, 0, 0),
        instance(TheoremTag::T53i, 0, 1, 0, 2), instance(TheoremTag::T53ii, 1, 0, 1.5, 1)}) {
    const BuiltInstance inst = build_instance(s);
    const GridSpec g = grid_of(inst);
    const SphericalCurve& curve = inst.surface.curve();
    auto l_tilde = [&](double v) { return apply_T(curve.position(v)); };
    for (std::size_t i = 0; i < g.nu; ++i) {
      for (std::size_t k = 0; k < g.nv; ++k) {
        const double u = g.u_at(i), v = g.v_at(k);
        const Vec4 d = apply_T(immerse(inst.surface, u, v)) -
                       immerse_tilde_prime(inst.surface.profile(), l_tilde, u, v);
        gap = std::max(gap, max_abs(d));
      }
    }
  }
  for (int i = 0; i < 20; ++i) {
    for (int k = 0; k < 20; ++k) {
      const double w1 = -2.0 + 0.2 * i, w2 = 0.3 * k;
      base_gap = std::max(base_gap, max_abs(apply_T(base_map_l_II(w1, w2)) - base_map_l_tilde_I(w1, w2)));
    }
  }
  o.require(gap <= 1e-12, "T(M'') matches the tilde parametrization within 1e-12");
  o.require(base_gap <= 1e-12, "T maps the hyperbolic base sphere onto the tilde de Sitter sphere");
  o.note("max surface gap " + sci(gap) + ", max base-map gap " + sci(base_gap));
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome determinism() {
  Outcome o;
  const std::vector<std::vector<std::string>> runs = {
      {"sample", "--theorem", "T41ii", "--a", "1", "--grid", "20x20"},
      {"sample", "--theorem", "T52i", "--a", "2", "--b", "1", "--kappa", "2", "--format", "json"},
      {"verify", "--theorem", "T51ii", "--c", "2", "--a", "0", "--kappa", "1"},
      {"solve-profile", "--theorem", "T43ii", "--a", "1"},
      {"sweep", "--theorem", "T41i", "--a-values", "0.5,1,2", "--kappa-values", "0,0.5", "--grid", "8x8"},
  };
  for (const auto& args : runs) {
    std::string first, second;
    const int c1 = run_cli(args, &first);
    const int c2 = run_cli(args, &second);
    o.require(c1 == c2 && !first.empty() && first == second, args[0] + " " + args[2] + " output identical");
  }
  const auto dir = std::filesystem::temp_directory_path() / "meridian_acceptance";
  std::filesystem::create_directories(dir);
  std::vector<std::string> files;
  for (int rep = 0; rep < 2; ++rep) {
    const auto path = (dir / ("sample" + std::to_string(rep) + ".csv")).string();
    run_cli({"sample", "--theorem", "T53ii", "--a", "1", "--c", "1.5", "--kappa", "1", "--out", path});
    files.push_back(slurp(path));
  }
  o.require(!files[0].empty() && files[0] == files[1], "--out files byte-identical");
  std::filesystem::remove_all(dir);
  o.note(std::to_string(runs.size() + 1) + " configurations repeated");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"metric and frame", metric_and_frame},
      {"oracle equivalence", oracle_equivalence},
      {"flat family", flat_family},
      {"phi families", phi_families},
      {"analytic H0-parallel profiles", analytic_section5},
      {"integrated H0-parallel profiles", integrated_section5},
      {"negative controls", negative_controls},
      {"congruence", congruence},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::printf("criterion %zu %-32s %s\n", i + 1, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL");
    for (const std::string& n : o.notes) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
