#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "gaplab/density.hpp"
#include "gaplab/region.hpp"
#include "gaplab/spectrum.hpp"

namespace gaplab {

// z1 ≺ z2: imaginary parts first, real parts break ties.
inline bool lex_less(std::complex<double> z1, std::complex<double> z2) {
  if (z1.imag() != z2.imag()) return z1.imag() < z2.imag();
  return z1.real() < z2.real();
}

enum class GapMode { Successor, Consecutive, UnorderedPair };

inline std::string to_string(GapMode m) {
  switch (m) {
    case GapMode::Successor: return "successor";
    case GapMode::Consecutive: return "consecutive";
    case GapMode::UnorderedPair: return "unordered_pair";
  }
  return "unknown";
}

struct GapRecord {
  double length = 0.0;  // unscaled |partner - base|
  std::complex<double> base{};
  std::complex<double> partner{};
  GapMode mode = GapMode::Successor;
};

// τ = c · n^γ · t.
struct Scaling {
  double c = 1.0;
  double gamma = 0.0;
  double n = 1.0;

  double factor() const { return c * std::pow(n, gamma); }
  double apply(double t) const { return factor() * t; }
};

struct GapStatistics {
  std::vector<double> raw;  // ascending
  std::vector<GapRecord> records;  // aligned with raw
  std::vector<double> scaled;  // empty until rescaled
  std::optional<Scaling> scaling;
  Region window;
};

namespace detail {

inline std::vector<std::size_t> lex_order(const std::vector<std::complex<double>>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return lex_less(v[a], v[b]); });
  return idx;
}

}  // namespace detail

// For every eigenvalue except the lex-maximum, the nearest eigenvalue among
// those ⪰ it (ties on distance go to the lex-smaller partner). Equal values
// are ranked by index, so a k-fold eigenvalue yields k - 1 zero gaps. Records
// are in lex order of the base. Sweeping in lex order, candidates have
// Im >= Im(base), so the scan stops once the imaginary offset alone exceeds
// the best distance.
inline std::vector<GapRecord> successor_gaps(const Spectrum& spectrum) {
  const auto& v = spectrum.values;
  if (v.size() < 2) throw std::invalid_argument("successor_gaps: need at least two eigenvalues");
  const auto order = detail::lex_order(v);
  const std::size_t n = v.size();
  std::vector<GapRecord> out;
  out.reserve(n - 1);
  for (std::size_t p = 0; p + 1 < n; ++p) {
    const auto base = v[order[p]];
    if (v[order[p + 1]] == base) {
      out.push_back({0.0, base, base, GapMode::Successor});
      continue;
    }
    double best = std::numeric_limits<double>::infinity();
    std::complex<double> partner{};
    for (std::size_t q = p + 1; q < n; ++q) {
      const auto z = v[order[q]];
      if (z.imag() - base.imag() > best) break;
      const double d = std::abs(z - base);
      if (d < best) {
        best = d;
        partner = z;
      }
    }
    out.push_back({best, base, partner, GapMode::Successor});
  }
  return out;
}

// (λ_{i+1} - λ_i, λ_i) for each i whose λ_i lies in the window.
inline std::vector<GapRecord> consecutive_gaps(const Spectrum& spectrum, const Region& window = Region::everything()) {
  if (!spectrum.is_real()) throw std::invalid_argument("consecutive_gaps: requires a RealLine spectrum");
  const auto& v = spectrum.values;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i].real() < v[i - 1].real()) throw std::invalid_argument("consecutive_gaps: spectrum is not sorted");
  std::vector<GapRecord> out;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (!window.contains(v[i])) continue;
    out.push_back({v[i + 1].real() - v[i].real(), v[i], v[i + 1], GapMode::Consecutive});
  }
  return out;
}

namespace detail {

// k smallest |λ_p - λ_q| over unordered pairs, base = lex-smaller endpoint in
// the window. Max-heap of the current k best prunes the Im sweep.
inline std::vector<GapRecord> smallest_pair_gaps(const Spectrum& spectrum, std::size_t k, const Region& window) {
  const auto& v = spectrum.values;
  const auto order = lex_order(v);
  const std::size_t n = v.size();
  auto cmp = [](const GapRecord& a, const GapRecord& b) {
    if (a.length != b.length) return a.length < b.length;
    return lex_less(a.base, b.base);
  };
  std::priority_queue<GapRecord, std::vector<GapRecord>, decltype(cmp)> heap(cmp);
  for (std::size_t p = 0; p + 1 < n; ++p) {
    const auto base = v[order[p]];
    if (!window.contains(base)) continue;
    for (std::size_t q = p + 1; q < n; ++q) {
      const auto z = v[order[q]];
      const double bound = heap.size() < k ? std::numeric_limits<double>::infinity() : heap.top().length;
      if (z.imag() - base.imag() > bound) break;
      const double d = std::abs(z - base);
      if (heap.size() < k) {
        heap.push({d, base, z, GapMode::UnorderedPair});
      } else if (d < heap.top().length) {
        heap.pop();
        heap.push({d, base, z, GapMode::UnorderedPair});
      }
    }
  }
  std::vector<GapRecord> out;
  while (!heap.empty()) {
    out.push_back(heap.top());
    heap.pop();
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace detail

inline GapStatistics k_smallest_gaps(const Spectrum& spectrum, std::size_t k, GapMode mode,
                                     const Region& window = Region::everything()) {
  if (k < 1) throw std::invalid_argument("k_smallest_gaps: k must be at least 1");
  std::vector<GapRecord> recs;
  switch (mode) {
    case GapMode::Successor: {
      for (const auto& r : successor_gaps(spectrum))
        if (window.contains(r.base)) recs.push_back(r);
      break;
    }
    case GapMode::Consecutive:
      recs = consecutive_gaps(spectrum, window);
      break;
    case GapMode::UnorderedPair: {
      const std::size_t n = spectrum.size();
      if (n < 2 || k > n * (n - 1) / 2) throw std::invalid_argument("k_smallest_gaps: k exceeds available gaps");
      recs = detail::smallest_pair_gaps(spectrum, k, window);
      break;
    }
  }
  if (recs.size() < k) throw std::invalid_argument("k_smallest_gaps: k exceeds available gaps");
  std::stable_sort(recs.begin(), recs.end(), [](const GapRecord& a, const GapRecord& b) { return a.length < b.length; });
  recs.resize(k);
  GapStatistics st;
  st.records = std::move(recs);
  for (const auto& r : st.records) st.raw.push_back(r.length);
  st.window = window;
  return st;
}

inline GapStatistics rescale_gaps(GapStatistics stats, const Scaling& s) {
  if (!(s.factor() > 0.0) || !std::isfinite(s.factor()))
    throw std::invalid_argument("rescale_gaps: scaling factor must be positive and finite");
  stats.scaled.resize(stats.raw.size());
  for (std::size_t i = 0; i < stats.raw.size(); ++i) stats.scaled[i] = s.apply(stats.raw[i]);
  stats.scaling = s;
  return stats;
}

enum class GinibreConstant { Quarter, PiQuarter };

inline std::string to_string(GinibreConstant c) { return c == GinibreConstant::Quarter ? "quarter" : "pi_quarter"; }

inline GinibreConstant ginibre_constant_from_string(const std::string& s) {
  if (s == "quarter") return GinibreConstant::Quarter;
  if (s == "pi_quarter") return GinibreConstant::PiQuarter;
  throw std::invalid_argument("unknown ginibre_constant '" + s + "' (expected quarter or pi_quarter)");
}

// Smallest-gap normalization for Ginibre: c n^{3/4} t. Quarter uses
// c = (1/4)^{1/4}, which matches the s^4/4 mean count of the limiting
// intensity over the whole disk; PiQuarter uses c = (π/4)^{1/4}.
inline Scaling ginibre_scaling(int n, GinibreConstant constant = GinibreConstant::Quarter) {
  const double c = constant == GinibreConstant::Quarter ? std::pow(0.25, 0.25) : std::pow(std::numbers::pi / 4.0, 0.25);
  return {c, 0.75, static_cast<double>(n)};
}

// Units of the successor point process: n^{3/4} t for Ginibre.
inline Scaling ginibre_point_process_scaling(int n) { return {1.0, 0.75, static_cast<double>(n)}; }

// n t for i.i.d. uniform points in the disk.
inline Scaling iid_disk_scaling(int n) { return {1.0, 1.0, static_cast<double>(n)}; }

// (π²/9 ∫_I ρ^4)^{1/3} n^{4/3} t for a real-line ensemble with limiting
// density ρ on the window I = (lo, hi).
inline Scaling real_line_scaling(int n, const DensityFn& density, double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("real_line_scaling: empty window");
  const double integral = density.fourth_power_integral(lo, hi);
  if (!(integral > 0.0)) throw std::invalid_argument("real_line_scaling: window misses the support");
  const double c = std::cbrt(std::numbers::pi * std::numbers::pi / 9.0 * integral);
  return {c, 4.0 / 3.0, static_cast<double>(n)};
}

inline Scaling wishart_scaling(int n, double beta, double lo, double hi) {
  return real_line_scaling(n, DensityFn::marchenko_pastur(beta), lo, hi);
}

// Bulk window (a + ε_a, b - ε_b) of a density.
inline Region bulk_window(const DensityFn& density, double eps_lo, double eps_hi) {
  return Region::interval(density.lower() + eps_lo, density.upper() - eps_hi);
}

// #{records: scaled length in A and base in I}.
inline std::size_t count_in_region(const std::vector<GapRecord>& records, const LengthSet& lengths, const Region& region,
                                   const Scaling& scaling) {
  std::size_t c = 0;
  for (const auto& r : records)
    if (lengths.contains(scaling.apply(r.length)) && region.contains(r.base)) ++c;
  return c;
}

enum class ClusterShape { FullDisk, HalfDisk };

// Ordered triples of distinct indices (i1, i2, i3) with λ_{i2}, λ_{i3} within
// `radius` of λ_{i1} and λ_{i1} in `base`. FullDisk uses closed disks;
// HalfDisk additionally requires λ_{i2}, λ_{i3} ⪰ λ_{i1} (the upper half-disk).
inline std::int64_t triple_cluster_count(const Spectrum& spectrum, double radius, ClusterShape shape = ClusterShape::FullDisk,
                                         const Region& base = Region::everything()) {
  if (!(radius > 0.0)) throw std::invalid_argument("triple_cluster_count: radius must be positive");
  const auto& v = spectrum.values;
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a].imag() < v[b].imag(); });
  std::int64_t total = 0;
  for (std::size_t p = 0; p < idx.size(); ++p) {
    const auto c = v[idx[p]];
    if (!base.contains(c)) continue;
    std::int64_t neighbours = 0;
    auto consider = [&](std::size_t q) {
      const auto z = v[idx[q]];
      if (std::abs(z - c) > radius) return;
      if (shape == ClusterShape::HalfDisk && lex_less(z, c)) return;
      ++neighbours;
    };
    for (std::size_t q = p + 1; q < idx.size() && v[idx[q]].imag() - c.imag() <= radius; ++q) consider(q);
    if (shape == ClusterShape::FullDisk)
      for (std::size_t q = p; q-- > 0 && c.imag() - v[idx[q]].imag() <= radius;) consider(q);
    else
      for (std::size_t q = p; q-- > 0 && v[idx[q]].imag() == c.imag();) consider(q);
    total += neighbours * (neighbours - 1);
  }
  return total;
}

}  // namespace gaplab
