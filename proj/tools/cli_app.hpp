#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace meridian::cli {

enum ExitCode : int {
  kOk = 0,
  kNotVerified = 1,
  kConfig = 2,
  kDomain = 3,
  kLightlike = 4,
};

/// Runs the command line in-process. Reports go to `out` unless --out is
/// given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace meridian::cli
