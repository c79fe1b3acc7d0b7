#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "gaplab/quadrature.hpp"

namespace gaplab {

// Limiting spectral density on a compact support [a, b], zero outside.
class DensityFn {
 public:
  enum class Kind { MarchenkoPastur, Semicircle, UserSupplied };

  // g(x) = β/(2πx) sqrt((b - x)(x - a)), a,b = (1 ∓ β^{-1/2})^2, for β = m/n >= 1.
  static DensityFn marchenko_pastur(double beta) {
    if (!(beta >= 1.0)) throw std::invalid_argument("marchenko_pastur: need beta >= 1");
    DensityFn d;
    d.kind_ = Kind::MarchenkoPastur;
    d.beta_ = beta;
    const double r = 1.0 / std::sqrt(beta);
    d.a_ = (1.0 - r) * (1.0 - r);
    d.b_ = (1.0 + r) * (1.0 + r);
    return d;
  }

  // Equilibrium density (κ/π) sqrt(R^2 - x^2), R = sqrt(2/κ), of V(x) = κ x^2.
  // The default κ = 1/2 gives sqrt(4 - x^2)/(2π) on [-2, 2].
  static DensityFn semicircle(double kappa = 0.5) {
    if (!(kappa > 0.0)) throw std::invalid_argument("semicircle: need kappa > 0");
    DensityFn d;
    d.kind_ = Kind::Semicircle;
    d.kappa_ = kappa;
    d.b_ = std::sqrt(2.0 / kappa);
    d.a_ = -d.b_;
    return d;
  }

  static DensityFn user_supplied(std::function<double(double)> f, double a, double b, std::string label = "user") {
    if (!f) throw std::invalid_argument("user_supplied: empty evaluator");
    if (!(a < b)) throw std::invalid_argument("user_supplied: need a < b");
    DensityFn d;
    d.kind_ = Kind::UserSupplied;
    d.user_ = std::move(f);
    d.a_ = a;
    d.b_ = b;
    d.label_ = std::move(label);
    return d;
  }

  double operator()(double x) const {
    if (!(x > a_ && x < b_)) return 0.0;
    switch (kind_) {
      case Kind::MarchenkoPastur:
        return beta_ / (2.0 * std::numbers::pi * x) * std::sqrt((b_ - x) * (x - a_));
      case Kind::Semicircle:
        return kappa_ / std::numbers::pi * std::sqrt((b_ - x) * (x - a_));
      case Kind::UserSupplied:
        return user_(x);
    }
    return 0.0;
  }

  Kind kind() const { return kind_; }
  double lower() const { return a_; }
  double upper() const { return b_; }
  double beta() const { return beta_; }
  double kappa() const { return kappa_; }

  // ∫ density over its support. Uses x = c - d cos φ, which removes the
  // square-root endpoint behaviour of the closed-form kinds.
  double total_mass(int panels = 64) const {
    if (kind_ == Kind::UserSupplied) return integrate_composite(*this, a_, b_, panels);
    const double c = 0.5 * (a_ + b_), d = 0.5 * (b_ - a_);
    auto f = [&](double phi) {
      const double x = c - d * std::cos(phi);
      const double s = d * std::sin(phi);
      return kind_ == Kind::MarchenkoPastur ? beta_ / (2.0 * std::numbers::pi * x) * s * s
                                            : kappa_ / std::numbers::pi * s * s;
    };
    return integrate_composite(f, 0.0, std::numbers::pi, panels);
  }

  // ∫_lo^hi density(x)^4 dx.
  double fourth_power_integral(double lo, double hi, int panels = 64) const {
    lo = std::max(lo, a_);
    hi = std::min(hi, b_);
    if (!(lo < hi)) return 0.0;
    return integrate_composite([&](double x) { return std::pow((*this)(x), 4); }, lo, hi, panels);
  }

 private:
  Kind kind_ = Kind::Semicircle;
  double beta_ = 1.0;
  double kappa_ = 0.5;
  double a_ = -2.0, b_ = 2.0;
  std::function<double(double)> user_;
  std::string label_;
};

}  // namespace gaplab
