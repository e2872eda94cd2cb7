#pragma once

// Small numerical building blocks shared by the curve and profile layers:
// C2 quintic Hermite tables for dense output, and an embedded 5(4)
// Dormand-Prince integrator with step rejection on leaving the domain.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace meridian::numerics {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
  bool operator==(const Interval&) const = default;
};

/// Value and first three derivatives of a scalar function at a point.
struct Jet3 {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

/// Quintic Hermite interpolation of one channel on [x0, x0 + h] from value,
/// first and second derivative at both ends.
Jet3 quintic_hermite(double h, double s, double p0, double d0, double a0, double p1, double d1,
                     double a1);

/// Piecewise quintic Hermite interpolant over sorted nodes; each channel
/// stores (value, d1, d2) per node, so the result is C2 across nodes.
class HermiteTable {
 public:
  explicit HermiteTable(std::size_t channels = 1) : channels_(channels) {}

  std::size_t channels() const { return channels_; }
  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  double front() const { return nodes_.front(); }
  double back() const { return nodes_.back(); }
  std::span<const double> nodes() const { return nodes_; }

  /// Append a node; `value`, `d1`, `d2` must each have `channels()` entries.
  void push_back(double x, std::span<const double> value, std::span<const double> d1,
                 std::span<const double> d2);

  /// Evaluate channel `c`. Queries outside [front, back] extrapolate the end
  /// polynomial.
  Jet3 eval(std::size_t c, double x) const;

  double node_value(std::size_t k, std::size_t c) const { return data_[(k * channels_ + c) * 3]; }

 private:
  std::size_t locate(double x) const;

  std::size_t channels_;
  std::vector<double> nodes_;
  std::vector<double> data_;  // [node][channel][value,d1,d2]
};

enum class StepStatus { Completed, DomainExit, StepUnderflow };

struct AdaptiveOptions {
  double rtol = 1e-10;
  double atol = 1e-10;
  double h_init = 1e-3;
  double h_max = 1e-2;
  double h_min = 1e-12;
  std::size_t max_steps = 2'000'000;
};

template <std::size_t N>
struct AdaptiveResult {
  StepStatus status = StepStatus::Completed;
  double t_end = 0.0;
  std::array<double, N> y_end{};
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::array<double, N> error_sum{};  // accumulated |local error estimate| per component
};

/// Dormand-Prince 5(4) with PI-free standard step control. The right-hand
/// side returns false when the state lies outside its domain of definition;
/// the step is then rejected and shrunk. When the step would drop below
/// h_min the integration halts with DomainExit if the last failure was a
/// domain failure, StepUnderflow otherwise. `observe` sees every accepted
/// state including the initial one.
template <std::size_t N>
AdaptiveResult<N> integrate_dopri5(
    const std::function<bool(double, const std::array<double, N>&, std::array<double, N>&)>& rhs,
    std::array<double, N> y, double t0, double t1, const AdaptiveOptions& opt,
    const std::function<void(double, const std::array<double, N>&)>& observe) {
  using State = std::array<double, N>;
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                   a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  AdaptiveResult<N> res;
  const double dir = t1 >= t0 ? 1.0 : -1.0;
  double t = t0;
  double h = std::min(opt.h_init, opt.h_max);
  observe(t, y);

  State k1, k2, k3, k4, k5, k6, k7, tmp, ynew;
  auto stage = [&](double tt, const State& base, std::initializer_list<std::pair<double, const State*>> terms,
                   double hh, State& out) -> bool {
    for (std::size_t i = 0; i < N; ++i) {
      double acc = base[i];
      for (const auto& [coef, k] : terms) acc += hh * coef * (*k)[i];
      tmp[i] = acc;
    }
    return rhs(tt, tmp, out);
  };

  bool last_failure_domain = false;
  while (dir * (t1 - t) > 0.0) {
    if (res.accepted + res.rejected > opt.max_steps) {
      res.status = StepStatus::StepUnderflow;
      break;
    }
    double hh = dir * std::min(h, std::abs(t1 - t));
    bool ok = rhs(t, y, k1);
    if (!ok) {
      res.status = StepStatus::DomainExit;
      break;
    }
    ok = stage(t + c2 * hh, y, {{a21, &k1}}, hh, k2) &&
         stage(t + c3 * hh, y, {{a31, &k1}, {a32, &k2}}, hh, k3) &&
         stage(t + c4 * hh, y, {{a41, &k1}, {a42, &k2}, {a43, &k3}}, hh, k4) &&
         stage(t + c5 * hh, y, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}, hh, k5) &&
         stage(t + hh, y, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}, hh, k6);
    double err = 0.0;
    State errv{};
    if (ok) {
      for (std::size_t i = 0; i < N; ++i) {
        ynew[i] = y[i] + hh * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
      }
      ok = rhs(t + hh, ynew, k7);
      if (ok) {
        for (std::size_t i = 0; i < N; ++i) {
          errv[i] = hh * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
          const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
          err += (errv[i] / sc) * (errv[i] / sc);
        }
        err = std::sqrt(err / static_cast<double>(N));
        ok = std::isfinite(err);
      }
    }
    if (!ok) {
      last_failure_domain = true;
      ++res.rejected;
      h *= 0.25;
      if (h < opt.h_min) {
        res.status = StepStatus::DomainExit;
        break;
      }
      continue;
    }
    if (err <= 1.0) {
      t += hh;
      y = ynew;
      ++res.accepted;
      for (std::size_t i = 0; i < N; ++i) res.error_sum[i] += std::abs(errv[i]);
      observe(t, y);
      last_failure_domain = false;
      const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      h = std::min(opt.h_max, std::abs(hh) * fac);
    } else {
      ++res.rejected;
      h = std::abs(hh) * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 1.0);
      if (h < opt.h_min) {
        res.status = last_failure_domain ? StepStatus::DomainExit : StepStatus::StepUnderflow;
        break;
      }
    }
  }
  res.t_end = t;
  res.y_end = y;
  return res;
}

/// Central-difference stencils. `h` is the nominal step; callers pass the
/// function and point.
template <class F>
auto central_first(const F& f, double x, double h) {
  const double xp = x + h, xm = x - h;
  return (f(xp) - f(xm)) * (1.0 / (xp - xm));
}

template <class F>
auto central_second(const F& f, double x, double h) {
  const double xp = x + h, xm = x - h;
  const double hp = xp - x, hm = x - xm;
  // Non-uniform three-point formula; reduces to the classic one when hp == hm.
  return (f(xp) * (1.0 / hp) - f(x) * (1.0 / hp + 1.0 / hm) + f(xm) * (1.0 / hm)) * (2.0 / (hp + hm));
}

/// Fourth-order five-point first derivative.
template <class F>
auto five_point_first(const F& f, double x, double h) {
  return (f(x - 2 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2 * h)) * (1.0 / (12.0 * h));
}

/// Fourth-order five-point second derivative.
template <class F>
auto five_point_second(const F& f, double x, double h) {
  return (-f(x - 2 * h) + 16.0 * f(x - h) - 30.0 * f(x) + 16.0 * f(x + h) - f(x + 2 * h)) *
         (1.0 / (12.0 * h * h));
}

}  // namespace meridian::numerics
