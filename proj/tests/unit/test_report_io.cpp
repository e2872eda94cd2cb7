#include <gtest/gtest.h>

#include <sstream>

#include "meridian/errors.hpp"
#include "meridian/report_io.hpp"

namespace meridian {
namespace {

TEST(ReportIo, NumbersRoundTrip) {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 12345.678901234567}) {
    EXPECT_EQ(std::stod(format_number(x)), x);
  }
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_EQ(format_number(-INFINITY), "-inf");
}

TEST(ReportIo, SurfaceCsvSchema) {
  InstanceSpec s;
  s.theorem = TheoremTag::T41i;
  s.params = {1, 0, 0, 0.5};
  const BuiltInstance inst = build_instance(s);
  const auto reports = evaluate_grid_serial(inst.surface, {{-1, 1}, {0, 2}, 3, 2});
  std::ostringstream os;
  write_surface_csv(os, reports);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, kSurfaceCsvHeader);
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 6);
}

TEST(ReportIo, ProfileJsonMatchesCsvColumns) {
  const ProfileCurve p = flat_profile(GaugeKind::TimelikeMeridian, 1.0, 0.0, 1);
  const auto j = profile_json(p, {0, 1}, TheoremTag::T41i, {1, 0, 0, 0}, 5);
  EXPECT_EQ(j["columns"].size(), 8u);
  EXPECT_EQ(j["rows"].size(), 5u);
  EXPECT_EQ(j["columns"][2], "f'");
}

TEST(ReportIo, RunConfigRoundTrip) {
  RunConfig c;
  c.command = Command::Sweep;
  c.family = FamilyTag::MbPrime;
  c.theorem = TheoremTag::T52ii;
  c.params = {1, 0, 2, 1};
  c.signs = {-1, 1, -1};
  c.f0 = 0.75;
  c.u_range = {-0.5, 0.5};
  c.explicit_u_range = true;
  c.nu = 7;
  c.format = OutputFormat::Json;
  c.ranges.c = std::vector<double>{1.5, 2.0};
  const RunConfig back = run_config_from_json(nlohmann::json::parse(to_json(c).dump()));
  EXPECT_EQ(back, c);
}

TEST(ReportIo, MalformedConfigIsConfigError) {
  auto j = to_json(RunConfig{});
  j.erase("theorem");
  try {
    run_config_from_json(j);
    FAIL() << "expected ConfigError";
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConfigError);
  }
  j = to_json(RunConfig{});
  j["command"] = "plot";
  EXPECT_THROW(run_config_from_json(j), GeometryError);
}

TEST(ReportIo, VerdictJsonKeys) {
  InstanceSpec s;
  s.theorem = TheoremTag::T41i;
  s.params = {1, 0, 0, 0.5};
  const auto j = to_json(verify_theorem(s, 4, 4, {}));
  for (const char* key : {"theorem", "params", "branch_signs", "grid", "tolerances", "residuals", "verdict"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  for (const char* key : {"max_DXH", "max_DYH", "max_DXH0", "max_DYH0", "K_max", "HH_stddev"}) {
    EXPECT_TRUE(j["residuals"].contains(key)) << key;
  }
  EXPECT_EQ(j["verdict"], "Verified");
}

}  // namespace
}  // namespace meridian
