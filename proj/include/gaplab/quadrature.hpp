#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gaplab/rng.hpp"

namespace gaplab {

struct GaussLegendreRule {
  std::vector<double> nodes;  // on [-1, 1]
  std::vector<double> weights;
};

// Nodes and weights by Newton iteration on P_N from the Chebyshev guess.
inline GaussLegendreRule gauss_legendre(int count) {
  if (count < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  GaussLegendreRule rule;
  rule.nodes.resize(count);
  rule.weights.resize(count);
  const int half = (count + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= count; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = count * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= count; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = count * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[count - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[count - 1 - i] = w;
  }
  if (count % 2 == 1) rule.nodes[count / 2] = 0.0;
  return rule;
}

// ∫_a^b f(x) dx with an N-point rule.
template <class F>
double integrate_gl(F&& f, double a, double b, int count = 24) {
  const auto rule = gauss_legendre(count);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double s = 0.0;
  for (int i = 0; i < count; ++i) s += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return s * half;
}

// ∫_a^b f by composite GL over `panels` equal pieces.
template <class F>
double integrate_composite(F&& f, double a, double b, int panels, int count = 24) {
  const auto rule = gauss_legendre(count);
  const double h = (b - a) / panels;
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    for (int i = 0; i < count; ++i) s += rule.weights[i] * f(lo + 0.5 * h * (rule.nodes[i] + 1.0));
  }
  return s * 0.5 * h;
}

// Annular sector {center + r e^{iθ}: r in [r_lo, r_hi], θ in [th_lo, th_hi]}.
struct PolarPatch {
  std::complex<double> center{};
  double r_lo = 0.0, r_hi = 0.0;
  double th_lo = 0.0, th_hi = 0.0;

  double area() const { return 0.5 * (r_hi * r_hi - r_lo * r_lo) * (th_hi - th_lo); }

  // Maps (u, v) in [0,1)^2 to a uniformly distributed point of the patch.
  std::complex<double> map_uniform(double u, double v) const {
    const double r = std::sqrt(r_lo * r_lo + u * (r_hi * r_hi - r_lo * r_lo));
    const double th = th_lo + v * (th_hi - th_lo);
    return center + std::polar(r, th);
  }
};

// Finite union of disjoint polar patches.
struct PlanarDomain {
  std::vector<PolarPatch> patches;

  double area() const {
    double a = 0.0;
    for (const auto& p : patches) a += p.area();
    return a;
  }

  PlanarDomain translated(std::complex<double> shift) const {
    PlanarDomain d = *this;
    for (auto& p : d.patches) p.center += shift;
    return d;
  }

  PlanarDomain joined(const PlanarDomain& other) const {
    PlanarDomain d = *this;
    d.patches.insert(d.patches.end(), other.patches.begin(), other.patches.end());
    return d;
  }

  // Tensor Gauss-Legendre nodes (points and weights summing to the area).
  std::vector<std::pair<std::complex<double>, double>> nodes(int count) const {
    const auto rule = gauss_legendre(count);
    std::vector<std::pair<std::complex<double>, double>> out;
    out.reserve(patches.size() * count * count);
    for (const auto& p : patches) {
      const double hr = 0.5 * (p.r_hi - p.r_lo), mr = 0.5 * (p.r_hi + p.r_lo);
      const double ht = 0.5 * (p.th_hi - p.th_lo), mt = 0.5 * (p.th_hi + p.th_lo);
      for (int i = 0; i < count; ++i) {
        const double r = mr + hr * rule.nodes[i];
        for (int j = 0; j < count; ++j) {
          const double th = mt + ht * rule.nodes[j];
          out.emplace_back(p.center + std::polar(r, th), rule.weights[i] * rule.weights[j] * hr * ht * r);
        }
      }
    }
    return out;
  }

  // Uniform point from (selector, u, v) in [0,1)^3, patches chosen by area.
  std::complex<double> map_uniform(double selector, double u, double v) const {
    const double total = area();
    double acc = 0.0;
    for (const auto& p : patches) {
      acc += p.area();
      if (selector * total < acc) return p.map_uniform(u, v);
    }
    return patches.back().map_uniform(u, v);
  }
};

// Upper half-disk {u: |u| <= radius, θ in [0, π)} around `center`.
inline PlanarDomain half_disk(std::complex<double> center, double radius) {
  return PlanarDomain{{PolarPatch{center, 0.0, radius, 0.0, std::numbers::pi}}};
}

inline PlanarDomain full_disk(std::complex<double> center, double radius) {
  return PlanarDomain{{PolarPatch{center, 0.0, radius, 0.0, 2.0 * std::numbers::pi}}};
}

struct MonteCarloEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::int64_t evaluations = 0;
};

// Monte Carlo over a product of planar domains with B independent replicate
// batches; within each batch every coordinate is Latin-hypercube stratified.
// The reported standard error is the spread of the batch means.
template <class F>
MonteCarloEstimate monte_carlo_product(const std::vector<PlanarDomain>& factors, F&& integrand,
                                       std::int64_t samples, std::uint64_t seed, int batches = 32) {
  if (samples < batches || batches < 2) throw std::invalid_argument("monte_carlo_product: sample budget too small");
  double volume = 1.0;
  for (const auto& f : factors) volume *= f.area();
  const std::int64_t per_batch = samples / batches;
  const std::size_t dims = factors.size();
  std::vector<double> means(batches);
  std::vector<std::complex<double>> point(dims);
  std::vector<std::vector<std::int64_t>> perms(3 * dims, std::vector<std::int64_t>(per_batch));
  for (int b = 0; b < batches; ++b) {
    Rng rng(split_seed(seed, static_cast<std::uint64_t>(b)));
    for (auto& perm : perms) {
      std::iota(perm.begin(), perm.end(), std::int64_t{0});
      for (std::int64_t i = per_batch - 1; i > 0; --i) {
        const auto j = static_cast<std::int64_t>(rng.next_u64() % static_cast<std::uint64_t>(i + 1));
        std::swap(perm[i], perm[j]);
      }
    }
    double acc = 0.0;
    for (std::int64_t s = 0; s < per_batch; ++s) {
      for (std::size_t d = 0; d < dims; ++d) {
        const double c[3] = {(perms[3 * d][s] + rng.uniform()) / per_batch,
                             (perms[3 * d + 1][s] + rng.uniform()) / per_batch,
                             (perms[3 * d + 2][s] + rng.uniform()) / per_batch};
        point[d] = factors[d].map_uniform(c[0], c[1], c[2]);
      }
      acc += integrand(point);
    }
    means[b] = volume * acc / per_batch;
  }
  const double mean = std::accumulate(means.begin(), means.end(), 0.0) / batches;
  double ss = 0.0;
  for (double m : means) ss += (m - mean) * (m - mean);
  return {mean, std::sqrt(ss / (batches - 1) / batches), per_batch * batches};
}

}  // namespace gaplab
