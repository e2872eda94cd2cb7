#include "meridian/numerics.hpp"

#include <cassert>

namespace meridian::numerics {

Jet3 quintic_hermite(double h, double s, double p0, double d0, double a0, double p1, double d1,
                     double a1) {
  const double hd0 = h * d0, hd1 = h * d1;
  const double h2a0 = h * h * a0, h2a1 = h * h * a1;
  const double c0 = p0;
  const double c1 = hd0;
  const double c2 = 0.5 * h2a0;
  const double c3 = -10.0 * p0 - 6.0 * hd0 - 1.5 * h2a0 + 0.5 * h2a1 - 4.0 * hd1 + 10.0 * p1;
  const double c4 = 15.0 * p0 + 8.0 * hd0 + 1.5 * h2a0 - h2a1 + 7.0 * hd1 - 15.0 * p1;
  const double c5 = -6.0 * p0 - 3.0 * hd0 - 0.5 * h2a0 + 0.5 * h2a1 - 3.0 * hd1 + 6.0 * p1;

  Jet3 j;
  j.v = c0 + s * (c1 + s * (c2 + s * (c3 + s * (c4 + s * c5))));
  const double ds = c1 + s * (2 * c2 + s * (3 * c3 + s * (4 * c4 + s * 5 * c5)));
  const double dss = 2 * c2 + s * (6 * c3 + s * (12 * c4 + s * 20 * c5));
  const double dsss = 6 * c3 + s * (24 * c4 + s * 60 * c5);
  const double ih = 1.0 / h;
  j.d1 = ds * ih;
  j.d2 = dss * ih * ih;
  j.d3 = dsss * ih * ih * ih;
  return j;
}

void HermiteTable::push_back(double x, std::span<const double> value, std::span<const double> d1,
                             std::span<const double> d2) {
  assert(value.size() == channels_ && d1.size() == channels_ && d2.size() == channels_);
  assert(nodes_.empty() || x > nodes_.back());
  nodes_.push_back(x);
  for (std::size_t c = 0; c < channels_; ++c) {
    data_.push_back(value[c]);
    data_.push_back(d1[c]);
    data_.push_back(d2[c]);
  }
}

std::size_t HermiteTable::locate(double x) const {
  // Index k of the segment [nodes_[k], nodes_[k+1]] used for x.
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  std::size_t k = it == nodes_.begin() ? 0 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
  return std::min(k, nodes_.size() - 2);
}

Jet3 HermiteTable::eval(std::size_t c, double x) const {
  assert(nodes_.size() >= 2);
  const std::size_t k = locate(x);
  const double x0 = nodes_[k];
  const double h = nodes_[k + 1] - x0;
  const double* p = &data_[(k * channels_ + c) * 3];
  const double* q = &data_[((k + 1) * channels_ + c) * 3];
  return quintic_hermite(h, (x - x0) / h, p[0], p[1], p[2], q[0], q[1], q[2]);
}

}  // namespace meridian::numerics
