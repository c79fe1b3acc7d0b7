#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gaplab/density.hpp"
#include "gaplab/region.hpp"
#include "gaplab/special_functions.hpp"

namespace gaplab {

// Law of the k-th smallest rescaled gap: density q/(k-1)! x^{qk-1} e^{-x^q}.
struct LimitLaw {
  int q = 4;
  int k = 1;

  LimitLaw(int q_, int k_) : q(q_), k(k_) {
    if (q != 3 && q != 4) throw std::invalid_argument("LimitLaw: q must be 3 or 4");
    if (k < 1) throw std::invalid_argument("LimitLaw: k must be at least 1");
  }

  double normalization() const { return q / std::tgamma(static_cast<double>(k)); }

  double density(double x) const {
    if (x <= 0.0) return 0.0;
    return std::exp(std::log(static_cast<double>(q)) - std::lgamma(static_cast<double>(k)) +
                    (q * k - 1.0) * std::log(x) - std::pow(x, q));
  }

  double cdf(double x) const {
    if (x <= 0.0) return 0.0;
    return regularized_gamma_p(static_cast<double>(k), std::pow(x, q));
  }

  std::string describe() const {
    return "P(" + std::to_string(k) + ", x^" + std::to_string(q) + ")";
  }
};

inline double kth_gap_cdf(const LimitLaw& law, double x) {
  if (x < 0.0 || std::isnan(x)) throw std::invalid_argument("kth_gap_cdf: x must be nonnegative");
  return law.cdf(x);
}

enum class IntensityEnsemble { Ginibre, IidDisk, Wishart, UUE };

struct IntensityQuery {
  IntensityEnsemble ensemble = IntensityEnsemble::Ginibre;
  LengthSet lengths;  // A, in the ensemble's point-process units
  Region region;  // I
  double beta = 1.0;  // Wishart aspect ratio m/n
  double eps0 = 0.05;  // bulk margin (Wishart, UUE)
  std::optional<DensityFn> psi;  // UUE equilibrium density
};

// Mean of the limiting Poisson process on A x I:
//   Ginibre   |I ∩ D(0,1)|/π ∫_A r³ dr
//   IidDisk   |I ∩ D(0,1)|/π ∫_A r dr
//   Wishart   π²/3 ∫_A u² du ∫_I g⁴       (g Marchenko-Pastur)
//   UUE       π²/3 ∫_A u² du ∫_I Ψ⁴
inline double poisson_intensity(const IntensityQuery& q) {
  if (q.lengths.empty()) return 0.0;
  switch (q.ensemble) {
    case IntensityEnsemble::Ginibre:
      return area_within_unit_disk(q.region) / std::numbers::pi * q.lengths.moment(3);
    case IntensityEnsemble::IidDisk:
      return area_within_unit_disk(q.region) / std::numbers::pi * q.lengths.moment(1);
    case IntensityEnsemble::Wishart:
    case IntensityEnsemble::UUE: {
      if (q.ensemble == IntensityEnsemble::UUE && !q.psi)
        throw std::invalid_argument("poisson_intensity: UUE needs an equilibrium density");
      const DensityFn dens = q.ensemble == IntensityEnsemble::Wishart ? DensityFn::marchenko_pastur(q.beta) : *q.psi;
      if (q.region.kind != Region::Kind::RealInterval)
        throw std::invalid_argument("poisson_intensity: I must be a real interval");
      if (q.region.lo < dens.lower() + q.eps0 || q.region.hi > dens.upper() - q.eps0)
        throw std::invalid_argument("poisson_intensity: I must lie inside the bulk");
      return std::numbers::pi * std::numbers::pi / 3.0 * q.lengths.moment(2) *
             dens.fourth_power_integral(q.region.lo, q.region.hi);
    }
  }
  return 0.0;
}

// Limiting P(x_ℓ < τ_ℓ < y_ℓ for ℓ = 1..k) = (e^{-x_k^q} - e^{-y_k^q}) Π_{ℓ<k} (y_ℓ^q - x_ℓ^q),
// for 0 <= x_1 < y_1 < x_2 < ... < y_k given as (x_1, y_1, ..., x_k, y_k).
inline double joint_box_probability(const std::vector<double>& xs, int q) {
  if (q != 3 && q != 4) throw std::invalid_argument("joint_box_probability: q must be 3 or 4");
  if (xs.size() < 2 || xs.size() % 2 != 0) throw std::invalid_argument("joint_box_probability: need pairs (x, y)");
  if (!(xs[0] >= 0.0)) throw std::invalid_argument("joint_box_probability: values must be nonnegative");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1])) throw std::invalid_argument("joint_box_probability: sequence must strictly increase");
  const std::size_t k = xs.size() / 2;
  double p = std::exp(-std::pow(xs[2 * k - 2], q)) - std::exp(-std::pow(xs[2 * k - 1], q));
  for (std::size_t l = 0; l + 1 < k; ++l) p *= std::pow(xs[2 * l + 1], q) - std::pow(xs[2 * l], q);
  return p;
}

}  // namespace gaplab
