#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gaplab {

// A subset of the complex plane used to restrict the base point of a gap.
// RealInterval is the open interval (lo, hi) on the real axis and contains
// only points with zero imaginary part.
struct Region {
  enum class Kind { Everything, RealInterval, Disk, Rect };

  Kind kind = Kind::Everything;
  double lo = 0.0, hi = 0.0;  // RealInterval, or the Re range of Rect
  double im_lo = 0.0, im_hi = 0.0;  // Rect only
  std::complex<double> center{};  // Disk
  double radius = 0.0;  // Disk

  static Region everything() { return Region{}; }

  static Region interval(double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("Region::interval: need lo < hi");
    Region r;
    r.kind = Kind::RealInterval;
    r.lo = lo;
    r.hi = hi;
    return r;
  }

  static Region disk(std::complex<double> center, double radius) {
    if (!(radius >= 0.0)) throw std::invalid_argument("Region::disk: negative radius");
    Region r;
    r.kind = Kind::Disk;
    r.center = center;
    r.radius = radius;
    return r;
  }

  static Region rect(double re_lo, double re_hi, double im_lo, double im_hi) {
    if (!(re_lo <= re_hi && im_lo <= im_hi)) throw std::invalid_argument("Region::rect: empty bounds");
    Region r;
    r.kind = Kind::Rect;
    r.lo = re_lo;
    r.hi = re_hi;
    r.im_lo = im_lo;
    r.im_hi = im_hi;
    return r;
  }

  bool contains(std::complex<double> z) const {
    switch (kind) {
      case Kind::Everything:
        return true;
      case Kind::RealInterval:
        return z.imag() == 0.0 && lo < z.real() && z.real() < hi;
      case Kind::Disk:
        return std::abs(z - center) <= radius;
      case Kind::Rect:
        return lo <= z.real() && z.real() <= hi && im_lo <= z.imag() && z.imag() <= im_hi;
    }
    return false;
  }

  bool bounded() const { return kind != Kind::Everything; }

  // Planar Lebesgue measure (zero for a real interval).
  double area() const {
    switch (kind) {
      case Kind::Everything:
        return std::numeric_limits<double>::infinity();
      case Kind::RealInterval:
        return 0.0;
      case Kind::Disk:
        return std::numbers::pi * radius * radius;
      case Kind::Rect:
        return (hi - lo) * (im_hi - im_lo);
    }
    return 0.0;
  }

  double length() const {
    if (kind != Kind::RealInterval) throw std::invalid_argument("Region::length: not a real interval");
    return hi - lo;
  }
};

namespace detail {

// Antiderivative of sqrt(1 - x^2) on [-1, 1].
inline double semicircle_primitive(double x) {
  x = std::clamp(x, -1.0, 1.0);
  return 0.5 * (x * std::sqrt(1.0 - x * x) + std::asin(x));
}

// Area of {(x, y): x0 <= x <= x1, y0 <= y <= y1, x^2 + y^2 <= 1}, exact.
// Between consecutive breakpoints the upper and lower envelopes are each
// either a constant or +-sqrt(1 - x^2), so each piece integrates in closed form.
inline double rect_unit_disk_area(double x0, double x1, double y0, double y1) {
  const double a = std::max(x0, -1.0);
  const double b = std::min(x1, 1.0);
  if (!(a < b) || !(y0 < y1)) return 0.0;
  std::vector<double> cuts{a, b};
  for (double y : {y0, y1}) {
    if (std::abs(y) < 1.0) {
      const double w = std::sqrt(1.0 - y * y);
      cuts.push_back(w);
      cuts.push_back(-w);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double p = std::max(cuts[i], a);
    const double q = std::min(cuts[i + 1], b);
    if (!(p < q)) continue;
    const double mid = 0.5 * (p + q);
    const double h = std::sqrt(1.0 - mid * mid);
    if (std::min(y1, h) <= std::max(y0, -h)) continue;
    const double circ = semicircle_primitive(q) - semicircle_primitive(p);
    const double top = (y1 < h) ? y1 * (q - p) : circ;
    const double bottom = (y0 > -h) ? y0 * (q - p) : -circ;
    total += top - bottom;
  }
  return total;
}

// Area of the intersection of two disks.
inline double disk_disk_area(double d, double r1, double r2) {
  if (r1 <= 0.0 || r2 <= 0.0) return 0.0;
  if (d >= r1 + r2) return 0.0;
  if (d <= std::abs(r1 - r2)) {
    const double r = std::min(r1, r2);
    return std::numbers::pi * r * r;
  }
  const double a1 = std::acos(std::clamp((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1), -1.0, 1.0));
  const double a2 = std::acos(std::clamp((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2), -1.0, 1.0));
  const double k = 0.5 * std::sqrt(std::max(0.0, (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2)));
  return r1 * r1 * a1 + r2 * r2 * a2 - k;
}

}  // namespace detail

// |I ∩ D(0, 1)| for a planar region. A real interval has planar measure 0.
inline double area_within_unit_disk(const Region& region) {
  switch (region.kind) {
    case Region::Kind::Everything:
      return std::numbers::pi;
    case Region::Kind::RealInterval:
      return 0.0;
    case Region::Kind::Disk:
      return detail::disk_disk_area(std::abs(region.center), 1.0, region.radius);
    case Region::Kind::Rect:
      return detail::rect_unit_disk_area(region.lo, region.hi, region.im_lo, region.im_hi);
  }
  return 0.0;
}

// Finite union of open intervals (lo, hi) in [0, inf); the set A of gap
// lengths. Intervals are kept sorted and merged.
class LengthSet {
 public:
  LengthSet() = default;

  explicit LengthSet(std::vector<std::pair<double, double>> intervals) {
    for (auto [lo, hi] : intervals) {
      if (!(lo >= 0.0) || !(lo <= hi) || !std::isfinite(hi))
        throw std::invalid_argument("LengthSet: intervals must satisfy 0 <= lo <= hi < inf");
      if (lo < hi) parts_.emplace_back(lo, hi);
    }
    std::sort(parts_.begin(), parts_.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& p : parts_) {
      if (!merged.empty() && p.first <= merged.back().second)
        merged.back().second = std::max(merged.back().second, p.second);
      else
        merged.push_back(p);
    }
    parts_ = std::move(merged);
  }

  static LengthSet interval(double lo, double hi) { return LengthSet({{lo, hi}}); }

  bool empty() const { return parts_.empty(); }
  const std::vector<std::pair<double, double>>& parts() const { return parts_; }

  bool contains(double x) const {
    for (const auto& [lo, hi] : parts_)
      if (lo < x && x < hi) return true;
    return false;
  }

  double sup() const { return parts_.empty() ? 0.0 : parts_.back().second; }

  // ∫_A r^p dr.
  double moment(int p) const {
    double s = 0.0;
    for (const auto& [lo, hi] : parts_) s += (std::pow(hi, p + 1) - std::pow(lo, p + 1)) / (p + 1);
    return s;
  }

 private:
  std::vector<std::pair<double, double>> parts_;
};

}  // namespace gaplab
