#pragma once

// CSV and JSON serialization of surface samples, profiles, verdicts and run
// configurations. Numbers are written with 17 significant digits.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "meridian/classifier_verifier.hpp"
#include "meridian/grid_kernels.hpp"
#include "meridian/meridian_profiles.hpp"

namespace meridian {

inline constexpr const char* kSurfaceCsvHeader =
    "u,v,x1,x2,x3,x4,K,H_n1,H_n2,HH,res_DXH,res_DYH,res_DXH0,res_DYH0";
inline constexpr const char* kProfileCsvHeader = "u,f,f',f'',g,g',gauge_residual,ode_residual";

/// "%.17g"; NaN and infinities as "nan", "inf", "-inf".
std::string format_number(double x);

/// Rows in report order; failed points are skipped.
void write_surface_csv(std::ostream& os, const std::vector<GeometryReport>& reports);

/// `samples` equispaced rows over `domain`.
void write_profile_csv(std::ostream& os, const ProfileCurve& profile, Interval domain, TheoremTag tag,
                       const ProfileParams& params, std::size_t samples);

/// {"columns": [...], "rows": [[...], ...]} with the CSV columns; NaN as null.
nlohmann::json surface_json(const std::vector<GeometryReport>& reports);
nlohmann::json profile_json(const ProfileCurve& profile, Interval domain, TheoremTag tag,
                            const ProfileParams& params, std::size_t samples);

nlohmann::json to_json(const TheoremCheck& c);
nlohmann::json to_json(const SweepResult& r);

enum class Command { Sample, Verify, SolveProfile, Sweep };
enum class OutputFormat { Csv, Json };

const char* to_string(Command c);
std::optional<Command> parse_command(const std::string& s);

/// Everything needed to replay a CLI run.
struct RunConfig {
  Command command = Command::Verify;
  std::optional<FamilyTag> family;
  TheoremTag theorem = TheoremTag::T41i;
  ProfileParams params{};
  BranchSigns signs{};
  std::optional<double> f0;
  Interval u_range{};
  Interval v_range{};
  bool explicit_u_range = false;
  bool explicit_v_range = false;
  std::size_t nu = 20;
  std::size_t nv = 20;
  double tol = 1e-6;
  double h_step = 1e-4;
  std::size_t samples = 201;
  double perturb = 0.0;
  bool negative_control = false;
  bool allow_quasi_minimal = false;
  bool with_oracle = true;
  std::string out;
  OutputFormat format = OutputFormat::Csv;
  ParamRanges ranges;

  bool operator==(const RunConfig&) const = default;
};

nlohmann::json to_json(const RunConfig& c);
/// Throws GeometryError(ConfigError) on missing or malformed fields.
RunConfig run_config_from_json(const nlohmann::json& j);

}  // namespace meridian
