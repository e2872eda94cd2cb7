#include "cli_app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "meridian/classifier_verifier.hpp"
#include "meridian/errors.hpp"
#include "meridian/report_io.hpp"

namespace meridian::cli {

namespace {

using nlohmann::json;

struct Options {
  std::string family;
  std::string theorem;
  std::optional<double> a, b, c, kappa, f0;
  std::string sign_outer = "+", sign_inner = "+", sign_g = "+";
  std::string grid = "20x20";
  std::string u_range, v_range;
  double tol = 1e-6;
  double h_step = 1e-4;
  std::size_t samples = 201;
  double perturb = 1e-2;
  bool negative_control = false;
  bool allow_quasi_minimal = false;
  bool no_oracle = false;
  std::string out;
  std::string format;
  std::optional<std::string> a_values, b_values, c_values, kappa_values;
};

[[noreturn]] void config_error(const std::string& msg) { throw GeometryError(ErrorKind::ConfigError, msg); }

double parse_double(const std::string& s, const std::string& what) {
  double x = 0.0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, x);
  if (ec != std::errc{} || ptr != end || !std::isfinite(x)) config_error("bad number for " + what + ": '" + s + "'");
  return x;
}

int parse_sign(const std::string& s, const std::string& what) {
  if (s == "+" || s == "+1" || s == "1") return 1;
  if (s == "-" || s == "-1") return -1;
  config_error(what + " must be + or -");
}

Interval parse_range(const std::string& s, const std::string& what) {
  const std::size_t colon = s.find(':');
  if (colon == std::string::npos) config_error(what + " must be lo:hi");
  const Interval r{parse_double(s.substr(0, colon), what), parse_double(s.substr(colon + 1), what)};
  if (!(r.hi > r.lo)) config_error(what + " needs lo < hi");
  return r;
}

std::pair<std::size_t, std::size_t> parse_grid(const std::string& s) {
  const std::size_t x = s.find('x');
  if (x == std::string::npos) config_error("--grid must be NxM");
  auto count = [&](const std::string& t) {
    std::size_t n = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), n);
    if (ec != std::errc{} || ptr != t.data() + t.size()) config_error("bad --grid '" + s + "'");
    return n;
  };
  const std::size_t nu = count(s.substr(0, x)), nv = count(s.substr(x + 1));
  if (nu == 0 || nv == 0) config_error("--grid needs at least one point in each direction");
  return {nu, nv};
}

std::optional<std::vector<double>> parse_list(const std::optional<std::string>& s, const std::string& what) {
  if (!s) return std::nullopt;
  std::vector<double> out;
  std::stringstream ss(*s);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(parse_double(item, what));
  }
  return out;
}

void require_params(TheoremTag t, const RunConfig& c, const Options& o) {
  auto has = [](const std::optional<double>& v, const std::optional<std::vector<double>>& r) {
    return v.has_value() || r.has_value();
  };
  auto need = [&](bool present, const char* flag) {
    if (!present) config_error(std::string(to_string(t)) + " needs " + flag);
  };
  if (is_flat_family(t) || (is_phi_family(t) && !is_section5(t))) need(has(o.a, c.ranges.a), "--a");
  if (is_analytic_T5i(t)) need(has(o.b, c.ranges.b), "--b");
  if (is_phi_family(t) && is_section5(t)) need(has(o.c, c.ranges.c), "--c");
}

RunConfig make_config(Command cmd, const Options& o) {
  RunConfig c;
  c.command = cmd;
  if (o.theorem.empty()) config_error("--theorem is required");
  const auto tag = parse_theorem_tag(o.theorem);
  if (!tag) config_error("unknown theorem tag '" + o.theorem + "'");
  c.theorem = *tag;
  if (!o.family.empty()) {
    const auto fam = parse_family(o.family);
    if (!fam) config_error("unknown family '" + o.family + "'");
    if (*fam != family_of(*tag)) {
      config_error(std::string(to_string(*tag)) + " belongs to family " + short_name(family_of(*tag)));
    }
    c.family = fam;
  }
  c.params = {o.a.value_or(0.0), o.b.value_or(0.0), o.c.value_or(0.0), o.kappa.value_or(0.0)};
  c.signs = {parse_sign(o.sign_outer, "--sign-outer"), parse_sign(o.sign_inner, "--sign-inner"),
             parse_sign(o.sign_g, "--sign-g")};
  c.f0 = o.f0;
  if (c.f0 && !(*c.f0 > 0.0)) config_error("--f0 must be positive");
  std::tie(c.nu, c.nv) = parse_grid(o.grid);
  c.explicit_u_range = !o.u_range.empty();
  c.explicit_v_range = !o.v_range.empty();
  if (c.explicit_u_range) c.u_range = parse_range(o.u_range, "--u-range");
  if (c.explicit_v_range) c.v_range = parse_range(o.v_range, "--v-range");
  if (!(o.tol > 0.0)) config_error("--tol must be positive");
  if (!(o.h_step > 0.0)) config_error("--h-step must be positive");
  if (o.samples < 2) config_error("--samples must be at least 2");
  c.tol = o.tol;
  c.h_step = o.h_step;
  c.samples = o.samples;
  c.negative_control = o.negative_control;
  c.perturb = o.negative_control ? o.perturb : 0.0;
  c.allow_quasi_minimal = o.allow_quasi_minimal;
  c.with_oracle = !o.no_oracle;
  c.out = o.out;
  const bool report = cmd == Command::Verify || cmd == Command::Sweep;
  const std::string fmt = o.format.empty() ? (report ? "json" : "csv") : o.format;
  if (fmt != "csv" && fmt != "json") config_error("--format must be csv or json");
  c.format = fmt == "csv" ? OutputFormat::Csv : OutputFormat::Json;
  c.ranges = {parse_list(o.a_values, "--a-values"), parse_list(o.b_values, "--b-values"),
              parse_list(o.c_values, "--c-values"), parse_list(o.kappa_values, "--kappa-values")};
  require_params(c.theorem, c, o);
  return c;
}

InstanceSpec instance_of(const RunConfig& c) {
  InstanceSpec s;
  s.theorem = c.theorem;
  s.params = c.params;
  s.signs = c.signs;
  s.f0 = c.f0;
  if (c.explicit_u_range) s.u_range = c.u_range;
  if (c.explicit_v_range) s.v_range = c.v_range;
  s.perturb = c.perturb;
  return s;
}

Tolerances tolerances_of(const RunConfig& c) {
  Tolerances t;
  t.parallel = c.tol;
  t.oracle = c.tol;
  return t;
}

CheckOptions check_options_of(const RunConfig& c) {
  CheckOptions o;
  o.with_oracle = c.with_oracle;
  o.grid.shape.h_step = c.h_step;
  return o;
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::ConfigError:
    case ErrorKind::InvalidParams:
    case ErrorKind::InvalidGauge:
    case ErrorKind::InvalidFamily:
    case ErrorKind::InvalidFrame: return kConfig;
    case ErrorKind::DomainExit:
    case ErrorKind::OutOfDomain:
    case ErrorKind::GaugeBoundary:
    case ErrorKind::GaugeViolation: return kDomain;
    case ErrorKind::LightlikeH:
    case ErrorKind::ZeroH: return kLightlike;
    default: return kNotVerified;
  }
}

/// Output sink: the file named by --out, or `fallback`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) config_error("cannot open '" + path + "' for writing");
      os_ = file_.get();
    }
  }
  std::ostream& stream() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

void write_json(std::ostream& os, const json& j) { os << j.dump(2) << '\n'; }

json exit_json(const DomainExitInfo& e) {
  return {{"u", e.u},
          {"f", e.f},
          {"admissible", json::array({e.admissible.lo, e.admissible.hi})},
          {"message", e.message}};
}

int cmd_sample(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const InstanceSpec spec = instance_of(cfg);
  const BuiltInstance inst = build_instance(spec, true);
  const GridSpec grid{default_u_range(spec), default_v_range(spec), cfg.nu, cfg.nv};
  GridOptions go;
  std::vector<GeometryReport> reports = evaluate_grid_parallel(inst.surface, grid, go);
  if (inst.exit) {
    const double cut = inst.spec.u_range->hi;
    std::erase_if(reports, [cut](const GeometryReport& r) { return r.u > cut; });
  }
  {
    Sink sink(cfg.out, out);
    if (cfg.format == OutputFormat::Csv) {
      write_surface_csv(sink.stream(), reports);
    } else {
      write_json(sink.stream(), surface_json(reports));
    }
  }
  if (!cfg.out.empty()) {
    json side = to_json(cfg);
    side["warning"] = inst.exit ? exit_json(*inst.exit) : json(nullptr);
    side["f0_used"] = inst.spec.f0 ? json(*inst.spec.f0) : json(nullptr);
    std::ofstream sc(cfg.out + ".config.json", std::ios::binary);
    if (!sc) config_error("cannot write the config sidecar");
    write_json(sc, side);
  }
  if (inst.exit) {
    err << "warning: DomainExit at u = " << format_number(inst.exit->u) << "; " << inst.exit->message
        << '\n';
    return kDomain;
  }
  return kOk;
}

int cmd_solve_profile(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  InstanceSpec spec = instance_of(cfg);
  const Interval u = default_u_range(spec);
  if (!is_phi_family(cfg.theorem)) {
    const BuiltInstance inst = build_instance(spec);
    Sink sink(cfg.out, out);
    if (cfg.format == OutputFormat::Csv) {
      write_profile_csv(sink.stream(), inst.surface.profile(), u, cfg.theorem, cfg.params, cfg.samples);
    } else {
      write_json(sink.stream(), profile_json(inst.surface.profile(), u, cfg.theorem, cfg.params, cfg.samples));
    }
    return kOk;
  }
  if (!spec.f0) {
    spec.v_range = Interval{0.0, 1.0};
    spec.f0 = build_instance(spec, true).spec.f0;
  }
  ProfileSolution sol = integrate_profile(cfg.theorem, cfg.params, cfg.signs, *spec.f0, u);
  const Interval span = sol.profile.domain();
  {
    Sink sink(cfg.out, out);
    if (cfg.format == OutputFormat::Csv) {
      write_profile_csv(sink.stream(), sol.profile, span, cfg.theorem, cfg.params, cfg.samples);
    } else {
      json j = profile_json(sol.profile, span, cfg.theorem, cfg.params, cfg.samples);
      j["f0"] = *spec.f0;
      j["exit"] = sol.exit ? exit_json(*sol.exit) : json(nullptr);
      write_json(sink.stream(), j);
    }
  }
  if (sol.exit) {
    err << "DomainExit at u = " << format_number(sol.exit->u) << " (f = " << format_number(sol.exit->f)
        << "), admissible f-interval [" << format_number(sol.exit->admissible.lo) << ", "
        << format_number(sol.exit->admissible.hi) << "]\n";
    return kDomain;
  }
  return kOk;
}

constexpr const char* kSummaryHeader =
    "theorem,a,b,c,kappa,verdict,error,max_DXH,max_DYH,max_DXH0,max_DYH0,K_max,HH_stddev,quasi_minimal";

void write_summary_row(std::ostream& os, const TheoremCheck& c) {
  const Residuals& r = c.residuals;
  const ProfileParams& p = c.spec.params;
  os << to_string(c.spec.theorem);
  for (double x : {p.a, p.b, p.c, p.kappa}) os << ',' << format_number(x);
  os << ',' << to_string(c.verdict) << ',' << (c.error ? to_string(*c.error) : "");
  for (double x : {r.max_DXH, r.max_DYH, r.max_DXH0, r.max_DYH0, r.K_max, r.HH_stddev}) {
    os << ',' << format_number(x);
  }
  os << ',' << (c.quasi_minimal ? 1 : 0) << '\n';
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const TheoremCheck c =
      verify_theorem(instance_of(cfg), cfg.nu, cfg.nv, tolerances_of(cfg), check_options_of(cfg));
  {
    Sink sink(cfg.out, out);
    if (cfg.format == OutputFormat::Json) {
      write_json(sink.stream(), to_json(c));
    } else {
      sink.stream() << kSummaryHeader << '\n';
      write_summary_row(sink.stream(), c);
    }
  }
  if (c.verdict == Verdict::Error) {
    const ErrorKind k = c.error.value_or(ErrorKind::IntegrationFailure);
    err << "error: " << c.diagnostics << '\n';
    return exit_code(k);
  }
  if (cfg.negative_control) return c.verdict == Verdict::Violated ? kOk : kNotVerified;
  if (c.quasi_minimal && !cfg.allow_quasi_minimal) {
    err << "error: LightlikeH: surface is quasi-minimal (<H,H> = 0); pass --allow-quasi-minimal\n";
    return kLightlike;
  }
  if (c.verdict != Verdict::Verified) err << "not verified: " << c.diagnostics << '\n';
  return c.verdict == Verdict::Verified ? kOk : kNotVerified;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const SweepResult r = scan_family_grid(instance_of(cfg), cfg.ranges, cfg.nu, cfg.nv, tolerances_of(cfg),
                                         check_options_of(cfg));
  {
    Sink sink(cfg.out, out);
    if (cfg.format == OutputFormat::Json) {
      write_json(sink.stream(), to_json(r));
    } else {
      sink.stream() << kSummaryHeader << '\n';
      for (const TheoremCheck& c : r.checks) write_summary_row(sink.stream(), c);
    }
  }
  const Verdict expected = cfg.negative_control ? Verdict::Violated : Verdict::Verified;
  const auto hits = std::count_if(r.checks.begin(), r.checks.end(),
                                  [&](const TheoremCheck& c) { return c.verdict == expected; });
  err << hits << '/' << r.checks.size() << ' ' << to_string(expected) << ", max residual "
      << format_number(r.max_residual) << '\n';
  return static_cast<std::size_t>(hits) == r.checks.size() ? kOk : kNotVerified;
}

void add_common(CLI::App* app, Options& o) {
  app->add_option("--family", o.family, "Ma, Mb or Mpp; must match the theorem");
  app->add_option("--theorem", o.theorem, "T41i, T41ii, T42, T43i, T43ii, T51i, T51ii, T52i, T52ii, T53i, T53ii");
  app->add_option("--a", o.a);
  app->add_option("--b", o.b);
  app->add_option("--c", o.c);
  app->add_option("--kappa", o.kappa, "curvature of the spherical curve");
  app->add_option("--f0", o.f0, "f at the start of the u-range for integrated profiles");
  app->add_option("--sign-outer", o.sign_outer, "+ or -");
  app->add_option("--sign-inner", o.sign_inner, "+ or -");
  app->add_option("--sign-g", o.sign_g, "sign of g' (+ or -)");
  app->add_option("--grid", o.grid, "NxM");
  app->add_option("--u-range", o.u_range, "lo:hi");
  app->add_option("--v-range", o.v_range, "lo:hi");
  app->add_option("--tol", o.tol);
  app->add_option("--h-step", o.h_step, "finite-difference step of the shape oracle");
  app->add_option("--samples", o.samples, "rows of a profile export");
  app->add_option("--out", o.out);
  app->add_option("--format", o.format, "csv or json");
  app->add_flag("--negative-control", o.negative_control, "perturb f by delta sin(u) and expect Violated");
  app->add_option("--perturb", o.perturb, "delta of the negative control");
  app->add_flag("--allow-quasi-minimal", o.allow_quasi_minimal);
  app->add_flag("--no-oracle", o.no_oracle, "closed forms only");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lorentz meridian surfaces in pseudo-Euclidean 4-space"};
  app.require_subcommand(1);
  Options o;
  struct Entry {
    Command cmd;
    CLI::App* app;
  };
  std::vector<Entry> subs;
  for (Command cmd : {Command::Sample, Command::Verify, Command::SolveProfile, Command::Sweep}) {
    CLI::App* sub = app.add_subcommand(to_string(cmd));
    add_common(sub, o);
    subs.push_back({cmd, sub});
  }
  CLI::App* sweep = subs.back().app;
  sweep->add_option("--a-values", o.a_values, "comma-separated list");
  sweep->add_option("--b-values", o.b_values, "comma-separated list");
  sweep->add_option("--c-values", o.c_values, "comma-separated list");
  sweep->add_option("--kappa-values", o.kappa_values, "comma-separated list");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfig;
  }

  try {
    for (const Entry& e : subs) {
      if (!e.app->parsed()) continue;
      const RunConfig cfg = make_config(e.cmd, o);
      switch (e.cmd) {
        case Command::Sample: return cmd_sample(cfg, out, err);
        case Command::Verify: return cmd_verify(cfg, out, err);
        case Command::SolveProfile: return cmd_solve_profile(cfg, out, err);
        case Command::Sweep: return cmd_sweep(cfg, out, err);
      }
    }
  } catch (const GeometryError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  }
  return kConfig;
}

}  // namespace meridian::cli
