#pragma once

// Per-point evaluation of a meridian surface over a (u, v) grid, with a
// serial reference loop and an OpenMP loop producing identical records.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "meridian/errors.hpp"
#include "meridian/meridian_surfaces.hpp"
#include "meridian/numerical_oracle.hpp"

namespace meridian {

/// Cell-centred grid: u_i = lo + (i + 1/2) (hi - lo) / nu.
struct GridSpec {
  Interval u{};
  Interval v{};
  std::size_t nu = 0;
  std::size_t nv = 0;

  std::size_t size() const { return nu * nv; }
  double u_at(std::size_t i) const;
  double v_at(std::size_t k) const;
};

/// Oracle view of a meridian surface: z from the profile and curve, with
/// analytic first partials z_u = f' l + g' e4 and z_v = f l'.
oracle::Immersion make_immersion(const MeridianSurface& s);

/// Analytic first partials for the surface, as used by the metric check.
struct FirstPartials {
  Vec4 zu;
  Vec4 zv;
};
FirstPartials first_partials(const MeridianSurface& s, double u, double v);

struct OracleComparison {
  double h_err = 0.0;  ///< max frame_norm gap over h_XX, h_XY, h_YY
  double K_err = 0.0;
  double H_err = 0.0;
  double DXH = 0.0;  ///< frame_norm of the oracle's D_X H
  double DYH = 0.0;
  double DXH0 = 0.0;  ///< NaN where H0 is undefined
  double DYH0 = 0.0;
  double DH_err = 0.0;   ///< gap between oracle and closed-form D H
  double DH0_err = 0.0;  ///< gap between oracle and closed-form D H0
};

struct GeometryReport {
  double u = 0.0;
  double v = 0.0;
  Vec4 x;
  Vec4 n1;
  double K = 0.0;
  NormalVec H;
  double HH = 0.0;
  bool quasi_minimal = false;
  double A = 0.0;  ///< NaN where H0 is undefined
  double B = 0.0;
  NormalVec DXH;  ///< closed-form D_X H
  NormalVec DYH;
  double res_DXH = 0.0;
  double res_DYH = 0.0;
  double res_DXH0 = 0.0;  ///< NaN where H0 is undefined
  double res_DYH0 = 0.0;
  double metric_err = 0.0;  ///< max gap of (E, F, G) from the family's closed form
  double frame_err = 0.0;   ///< max gap of the frame Gram matrix from its signature
  double trace_err = 0.0;   ///< gap between H and the trace of h
  std::optional<ErrorKind> h0_error;
  std::optional<ErrorKind> error;
  std::string message;
  std::optional<OracleComparison> oracle;
};

struct GridOptions {
  bool with_oracle = false;
  oracle::OracleOptions shape{};
  oracle::DerivativeOptions derivatives{};
  double null_tol = kNullTolerance;
};

GeometryReport evaluate_point(const MeridianSurface& s, double u, double v, const GridOptions& opt = {});

std::vector<GeometryReport> evaluate_grid_serial(const MeridianSurface& s, const GridSpec& grid,
                                                 const GridOptions& opt = {});
std::vector<GeometryReport> evaluate_grid_parallel(const MeridianSurface& s, const GridSpec& grid,
                                                   const GridOptions& opt = {});

}  // namespace meridian
