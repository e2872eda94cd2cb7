#pragma once

// Executable checks of the parallel-H and parallel-H0 classification
// statements over grids of theorem-family instances.

#include <optional>
#include <string>
#include <vector>

#include "meridian/grid_kernels.hpp"
#include "meridian/meridian_profiles.hpp"
#include "meridian/meridian_surfaces.hpp"

namespace meridian {

struct Tolerances {
  double parallel = 1e-6;  ///< closed-form residual bound
  double oracle = 1e-6;    ///< oracle residual bound
  double not_parallel_factor = 10.0;
  double flat = 1e-9;
  double cmc = 1e-9;
  double hyperplane = 1e-9;
  double constancy = 1e-8;
  double null_tol = kNullTolerance;
};

/// Description of one theorem-family instance.
struct InstanceSpec {
  TheoremTag theorem = TheoremTag::T41i;
  ProfileParams params{};
  BranchSigns signs{};
  std::optional<double> f0;
  std::optional<Interval> u_range;
  std::optional<Interval> v_range;
  /// kappa(v) = params.kappa + kappa_wave * sin(v); a nonzero wave builds the
  /// curve by Frenet integration.
  double kappa_wave = 0.0;
  /// Amplitude of the sinusoidal negative-control perturbation of f.
  double perturb = 0.0;
};

FamilyTag family_of(TheoremTag t);

/// Ranges used when the instance leaves them open.
Interval default_u_range(const InstanceSpec& spec);
Interval default_v_range(const InstanceSpec& spec);

struct BuiltInstance {
  MeridianSurface surface;
  InstanceSpec spec;  ///< with ranges and f0 filled in
  double ode_residual = 0.0;
  double gauge_residual = 0.0;
  /// Set when a truncated profile was accepted; u_range then ends before the exit.
  std::optional<DomainExitInfo> exit;
};

/// Constructs curve, profile and surface. Throws GeometryError on invalid
/// parameters, and DomainExit if an integrated profile leaves its domain
/// inside the requested u-range, unless `allow_partial` is set, in which case
/// the longest surviving profile is kept and `exit` describes the cut.
BuiltInstance build_instance(const InstanceSpec& spec, bool allow_partial = false);

enum class Verdict { Verified, Violated, Error };
const char* to_string(Verdict v);

struct Residuals {
  double max_DXH = 0.0;
  double max_DYH = 0.0;
  double max_DXH0 = 0.0;
  double max_DYH0 = 0.0;
  double oracle_max_DXH = 0.0;
  double oracle_max_DYH = 0.0;
  double oracle_max_DXH0 = 0.0;
  double oracle_max_DYH0 = 0.0;
  /// Largest oracle gaps in h, K and H (shape oracle at GridOptions::shape).
  double oracle_h_err = 0.0;
  double oracle_K_err = 0.0;
  double oracle_H_err = 0.0;
  double K_max = 0.0;
  double HH_mean = 0.0;
  double HH_stddev = 0.0;
  double A_stddev = 0.0;
  double B_stddev = 0.0;
  double hyperplane_dev = 0.0;  ///< max |n1 - n1(first point)|
  // Scalar parallel-H conditions: kappa' = 0, kappa f' = 0, (n2-coefficient)' = 0.
  double max_kappa_prime = 0.0;
  double max_kappa_fprime = 0.0;
  double max_DX_H2 = 0.0;
  double ode_residual = 0.0;
  double gauge_residual = 0.0;
};

struct TheoremCheck {
  InstanceSpec spec;
  GridSpec grid;
  Tolerances tol;
  Verdict verdict = Verdict::Error;
  Verdict closed_form_verdict = Verdict::Error;
  Verdict oracle_verdict = Verdict::Error;
  bool with_oracle = true;
  bool quasi_minimal = false;
  bool flat = false;
  bool cmc = false;
  bool in_hyperplane = false;
  std::optional<ErrorKind> error;
  std::string diagnostics;
  Residuals residuals;
};

struct CheckOptions {
  bool with_oracle = true;
  bool parallel = true;
  GridOptions grid{};
};

/// Verified iff max |D_X H|, |D_Y H| <= tol on the grid, for the closed
/// forms and (when enabled) the oracle.
TheoremCheck check_parallel_H(const MeridianSurface& s, const GridSpec& grid, const Tolerances& tol,
                              const CheckOptions& opt = {});

/// Verified iff D H0 vanishes within tol everywhere while D H exceeds
/// not_parallel_factor * tol somewhere. Lightlike or zero H gives Error.
TheoremCheck check_parallel_H0_not_H(const MeridianSurface& s, const GridSpec& grid,
                                     const Tolerances& tol, const CheckOptions& opt = {});

/// Builds the instance and runs the theorem's check; flat families also
/// require |K| <= tol.flat and constant <H,H>. Construction errors become an
/// Error verdict carrying the error kind.
TheoremCheck verify_theorem(const InstanceSpec& spec, std::size_t nu, std::size_t nv,
                            const Tolerances& tol, const CheckOptions& opt = {});

/// Parameter values to sweep; an unset list keeps the base value, an empty
/// list yields no tuples.
struct ParamRanges {
  std::optional<std::vector<double>> a, b, c, kappa;

  bool operator==(const ParamRanges&) const = default;
};

struct SweepResult {
  std::vector<TheoremCheck> checks;
  std::size_t verified = 0;
  double max_residual = 0.0;
};

/// One check per parameter tuple, run in parallel; per-instance errors are
/// recorded, never thrown.
SweepResult scan_family_grid(const InstanceSpec& base, const ParamRanges& ranges, std::size_t nu,
                             std::size_t nv, const Tolerances& tol, const CheckOptions& opt = {});

}  // namespace meridian
