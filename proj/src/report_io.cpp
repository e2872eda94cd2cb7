#include "meridian/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "meridian/errors.hpp"

namespace meridian {

using nlohmann::json;

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

json interval_json(const Interval& i) { return json::array({i.lo, i.hi}); }

Interval interval_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

json params_json(const ProfileParams& p) {
  return {{"a", p.a}, {"b", p.b}, {"c", p.c}, {"kappa", p.kappa}};
}

json signs_json(const BranchSigns& s) { return {{"outer", s.outer}, {"inner", s.inner}, {"g", s.g}}; }

json optional_list(const std::optional<std::vector<double>>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<std::vector<double>> list_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<std::vector<double>>();
}

}  // namespace

namespace {

using Row = std::vector<double>;

std::vector<Row> surface_rows(const std::vector<GeometryReport>& reports) {
  std::vector<Row> rows;
  for (const GeometryReport& r : reports) {
    if (r.error) continue;
    rows.push_back({r.u, r.v, r.x.x1, r.x.x2, r.x.x3, r.x.x4, r.K, r.H.c1, r.H.c2, r.HH, r.res_DXH,
                    r.res_DYH, r.res_DXH0, r.res_DYH0});
  }
  return rows;
}

std::vector<Row> profile_rows(const ProfileCurve& profile, Interval d, TheoremTag tag,
                              const ProfileParams& params, std::size_t samples) {
  std::vector<Row> rows;
  for (std::size_t k = 0; k < samples; ++k) {
    const double u = samples == 1 ? d.lo
                                  : d.lo + d.length() * static_cast<double>(k) /
                                               static_cast<double>(samples - 1);
    const ProfileJet j = profile.jet(u);
    rows.push_back({u, j.f, j.df, j.d2f, j.g, j.dg, gauge_residual(profile.gauge(), j),
                    ode_residual(tag, params, j)});
  }
  return rows;
}

void write_csv(std::ostream& os, const char* header, const std::vector<Row>& rows) {
  os << header << '\n';
  for (const Row& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
    os << '\n';
  }
}

json table_json(const char* header, const std::vector<Row>& rows) {
  json cols = json::array();
  std::string h = header;
  for (std::size_t pos = 0;;) {
    const std::size_t next = h.find(',', pos);
    cols.push_back(h.substr(pos, next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  json body = json::array();
  for (const Row& row : rows) {
    json r = json::array();
    for (double x : row) r.push_back(std::isfinite(x) ? json(x) : json(nullptr));
    body.push_back(std::move(r));
  }
  return {{"columns", cols}, {"rows", body}};
}

}  // namespace

void write_surface_csv(std::ostream& os, const std::vector<GeometryReport>& reports) {
  write_csv(os, kSurfaceCsvHeader, surface_rows(reports));
}

void write_profile_csv(std::ostream& os, const ProfileCurve& profile, Interval d, TheoremTag tag,
                       const ProfileParams& params, std::size_t samples) {
  write_csv(os, kProfileCsvHeader, profile_rows(profile, d, tag, params, samples));
}

json surface_json(const std::vector<GeometryReport>& reports) {
  return table_json(kSurfaceCsvHeader, surface_rows(reports));
}

json profile_json(const ProfileCurve& profile, Interval d, TheoremTag tag, const ProfileParams& params,
                  std::size_t samples) {
  return table_json(kProfileCsvHeader, profile_rows(profile, d, tag, params, samples));
}

json to_json(const TheoremCheck& c) {
  const Residuals& r = c.residuals;
  json j;
  j["theorem"] = to_string(c.spec.theorem);
  j["family"] = short_name(family_of(c.spec.theorem));
  j["params"] = params_json(c.spec.params);
  j["branch_signs"] = signs_json(c.spec.signs);
  j["f0"] = c.spec.f0 ? json(*c.spec.f0) : json(nullptr);
  j["perturb"] = c.spec.perturb;
  j["kappa_wave"] = c.spec.kappa_wave;
  j["grid"] = {{"u_range", interval_json(c.grid.u)},
               {"v_range", interval_json(c.grid.v)},
               {"nu", c.grid.nu},
               {"nv", c.grid.nv}};
  j["tolerances"] = {{"parallel", c.tol.parallel},       {"oracle", c.tol.oracle},
                     {"not_parallel_factor", c.tol.not_parallel_factor},
                     {"flat", c.tol.flat},               {"cmc", c.tol.cmc},
                     {"hyperplane", c.tol.hyperplane},   {"null", c.tol.null_tol}};
  j["residuals"] = {{"max_DXH", r.max_DXH},
                    {"max_DYH", r.max_DYH},
                    {"max_DXH0", r.max_DXH0},
                    {"max_DYH0", r.max_DYH0},
                    {"oracle_max_DXH", r.oracle_max_DXH},
                    {"oracle_max_DYH", r.oracle_max_DYH},
                    {"oracle_max_DXH0", r.oracle_max_DXH0},
                    {"oracle_max_DYH0", r.oracle_max_DYH0},
                    {"oracle_h_err", r.oracle_h_err},
                    {"oracle_K_err", r.oracle_K_err},
                    {"oracle_H_err", r.oracle_H_err},
                    {"K_max", r.K_max},
                    {"HH_mean", r.HH_mean},
                    {"HH_stddev", r.HH_stddev},
                    {"A_stddev", r.A_stddev},
                    {"B_stddev", r.B_stddev},
                    {"hyperplane_dev", r.hyperplane_dev},
                    {"max_kappa_prime", r.max_kappa_prime},
                    {"max_kappa_fprime", r.max_kappa_fprime},
                    {"max_DX_H2", r.max_DX_H2},
                    {"ode_residual", r.ode_residual},
                    {"gauge_residual", r.gauge_residual}};
  j["verdict"] = to_string(c.verdict);
  j["closed_form_verdict"] = to_string(c.closed_form_verdict);
  j["oracle_verdict"] = c.with_oracle ? json(to_string(c.oracle_verdict)) : json(nullptr);
  j["quasi_minimal"] = c.quasi_minimal;
  j["flat"] = c.flat;
  j["cmc"] = c.cmc;
  j["in_hyperplane"] = c.in_hyperplane;
  j["error"] = c.error ? json(std::string(to_string(*c.error))) : json(nullptr);
  j["diagnostics"] = c.diagnostics;
  return j;
}

json to_json(const SweepResult& r) {
  json checks = json::array();
  for (const TheoremCheck& c : r.checks) checks.push_back(to_json(c));
  return {{"count", r.checks.size()},
          {"verified", r.verified},
          {"max_residual", r.max_residual},
          {"checks", checks}};
}

const char* to_string(Command c) {
  switch (c) {
    case Command::Sample: return "sample";
    case Command::Verify: return "verify";
    case Command::SolveProfile: return "solve-profile";
    case Command::Sweep: return "sweep";
  }
  return "?";
}

std::optional<Command> parse_command(const std::string& s) {
  for (Command c : {Command::Sample, Command::Verify, Command::SolveProfile, Command::Sweep}) {
    if (s == to_string(c)) return c;
  }
  return std::nullopt;
}

json to_json(const RunConfig& c) {
  return {{"command", to_string(c.command)},
          {"family", c.family ? json(short_name(*c.family)) : json(nullptr)},
          {"theorem", to_string(c.theorem)},
          {"params", params_json(c.params)},
          {"branch_signs", signs_json(c.signs)},
          {"f0", c.f0 ? json(*c.f0) : json(nullptr)},
          {"u_range", interval_json(c.u_range)},
          {"v_range", interval_json(c.v_range)},
          {"explicit_u_range", c.explicit_u_range},
          {"explicit_v_range", c.explicit_v_range},
          {"grid", {{"nu", c.nu}, {"nv", c.nv}}},
          {"tol", c.tol},
          {"h_step", c.h_step},
          {"samples", c.samples},
          {"perturb", c.perturb},
          {"negative_control", c.negative_control},
          {"allow_quasi_minimal", c.allow_quasi_minimal},
          {"with_oracle", c.with_oracle},
          {"out", c.out},
          {"format", c.format == OutputFormat::Csv ? "csv" : "json"},
          {"ranges",
           {{"a", optional_list(c.ranges.a)},
            {"b", optional_list(c.ranges.b)},
            {"c", optional_list(c.ranges.c)},
            {"kappa", optional_list(c.ranges.kappa)}}}};
}

RunConfig run_config_from_json(const json& j) {
  try {
    RunConfig c;
    const auto cmd = parse_command(j.at("command").get<std::string>());
    if (!cmd) throw GeometryError(ErrorKind::ConfigError, "unknown command");
    c.command = *cmd;
    if (!j.at("family").is_null()) {
      const auto fam = parse_family(j.at("family").get<std::string>());
      if (!fam) throw GeometryError(ErrorKind::ConfigError, "unknown family");
      c.family = fam;
    }
    const auto tag = parse_theorem_tag(j.at("theorem").get<std::string>());
    if (!tag) throw GeometryError(ErrorKind::ConfigError, "unknown theorem tag");
    c.theorem = *tag;
    const json& p = j.at("params");
    c.params = {p.at("a").get<double>(), p.at("b").get<double>(), p.at("c").get<double>(),
                p.at("kappa").get<double>()};
    const json& s = j.at("branch_signs");
    c.signs = {s.at("outer").get<int>(), s.at("inner").get<int>(), s.at("g").get<int>()};
    if (!j.at("f0").is_null()) c.f0 = j.at("f0").get<double>();
    c.u_range = interval_from(j.at("u_range"));
    c.v_range = interval_from(j.at("v_range"));
    c.explicit_u_range = j.at("explicit_u_range").get<bool>();
    c.explicit_v_range = j.at("explicit_v_range").get<bool>();
    c.nu = j.at("grid").at("nu").get<std::size_t>();
    c.nv = j.at("grid").at("nv").get<std::size_t>();
    c.tol = j.at("tol").get<double>();
    c.h_step = j.at("h_step").get<double>();
    c.samples = j.at("samples").get<std::size_t>();
    c.perturb = j.at("perturb").get<double>();
    c.negative_control = j.at("negative_control").get<bool>();
    c.allow_quasi_minimal = j.at("allow_quasi_minimal").get<bool>();
    c.with_oracle = j.at("with_oracle").get<bool>();
    c.out = j.at("out").get<std::string>();
    const std::string fmt = j.at("format").get<std::string>();
    if (fmt != "csv" && fmt != "json") throw GeometryError(ErrorKind::ConfigError, "unknown format");
    c.format = fmt == "csv" ? OutputFormat::Csv : OutputFormat::Json;
    const json& r = j.at("ranges");
    c.ranges = {list_from(r.at("a")), list_from(r.at("b")), list_from(r.at("c")),
                list_from(r.at("kappa"))};
    return c;
  } catch (const json::exception& e) {
    throw GeometryError(ErrorKind::ConfigError, std::string("malformed run config: ") + e.what());
  }
}

}  // namespace meridian
