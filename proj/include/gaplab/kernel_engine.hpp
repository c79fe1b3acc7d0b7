#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gaplab/density.hpp"
#include "gaplab/errors.hpp"
#include "gaplab/special_functions.hpp"

namespace gaplab {

// m e^{iφ} carried as (log m, φ).
struct LogComplex {
  double log_magnitude = -std::numeric_limits<double>::infinity();
  double phase = 0.0;

  static constexpr double kOverflowLog = 700.0;

  static LogComplex from(std::complex<double> z) {
    if (z == std::complex<double>(0.0, 0.0)) return {};
    return {std::log(std::abs(z)), std::arg(z)};
  }

  LogComplex operator*(const LogComplex& o) const { return {log_magnitude + o.log_magnitude, phase + o.phase}; }
  LogComplex operator/(const LogComplex& o) const { return {log_magnitude - o.log_magnitude, phase - o.phase}; }

  bool materializable() const { return log_magnitude < kOverflowLog; }

  std::complex<double> value() const {
    if (!materializable()) throw numerical_failure("LogComplex: magnitude exceeds the materialization threshold");
    return std::polar(std::exp(log_magnitude), phase);
  }
};

struct KernelValue {
  LogComplex log_value;
  std::optional<std::complex<double>> value;  // set when materializable
};

namespace detail {

// Σ_{ℓ<terms} x^ℓ/ℓ! as (sum, log scale): the true value is sum · e^{log_scale}.
inline std::pair<std::complex<double>, double> scaled_exponential_partial_sum(std::complex<double> x, int terms) {
  std::complex<double> term = 1.0, sum = 1.0;
  double log_scale = 0.0;
  for (int l = 1; l < terms; ++l) {
    term *= x / static_cast<double>(l);
    sum += term;
    if (std::abs(term) > 1e200 || std::abs(sum) > 1e200) {
      term *= 1e-200;
      sum *= 1e-200;
      log_scale += 200.0 * std::numbers::ln10;
    }
  }
  return {sum, log_scale};
}

}  // namespace detail

// S_n(z, w) = e^{-n(|z|^2+|w|^2)/2} K_n(z w̄), K_n(x) = Σ_{ℓ<n} (n x)^ℓ / ℓ!.
// |S_n| <= 1; the absolute error is O(ulp) even when the sum cancels.
inline KernelValue ginibre_kernel_scaled(std::complex<double> z, std::complex<double> w, int n) {
  if (n < 1) throw std::invalid_argument("ginibre_kernel_scaled: n must be positive");
  const std::complex<double> x = static_cast<double>(n) * z * std::conj(w);
  if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
    throw std::invalid_argument("ginibre_kernel_scaled: n z conj(w) is not finite");
  const auto [sum, log_scale] = detail::scaled_exponential_partial_sum(x, n);
  KernelValue kv;
  kv.log_value = LogComplex::from(sum);
  kv.log_value.log_magnitude += log_scale - 0.5 * n * (std::norm(z) + std::norm(w));
  // |S_n| <= 1 holds exactly; trim the rounding excess.
  kv.log_value.log_magnitude = std::min(kv.log_value.log_magnitude, 0.0);
  if (kv.log_value.materializable()) kv.value = kv.log_value.value();
  return kv;
}

inline std::complex<double> ginibre_kernel_value(std::complex<double> z, std::complex<double> w, int n) {
  const auto kv = ginibre_kernel_scaled(z, w, n);
  return kv.value ? *kv.value : kv.log_value.value();
}

// R_n(z) = 1 - e^{-nz} K_n(z) = P(n, n z), as principal logs of R and 1 - R.
inline IncompleteGammaLog ginibre_remainder_log(std::complex<double> z, int n) {
  if (n < 1) throw std::invalid_argument("ginibre_remainder: n must be positive");
  return incomplete_gamma_log(static_cast<double>(n), static_cast<double>(n) * z);
}

inline std::complex<double> ginibre_remainder(std::complex<double> z, int n) {
  if (z == std::complex<double>(0.0, 0.0)) return 0.0;
  return std::exp(ginibre_remainder_log(z, n).log_p);
}

struct RegimeCheck {
  int regime = 0;  // 1, 2 or 3
  double log_bound = 0.0;
  double log_actual = 0.0;
  bool satisfied = false;
};

struct RegimeReport {
  std::complex<double> z;
  int n = 0;
  std::vector<RegimeCheck> checks;  // one per regime containing |z|
};

struct RemainderConstants {
  double c2 = 1.0;  // 0.01 < |z| <= 1:  |R| <= C2 sqrt(n) (|z| e^{1-|z|})^n
  double c3 = 1.0;  // |z| >= 1:         |1 - R| <= C3 (|z| e^{1-|z|})^n
};

namespace detail {

inline double log_envelope(double r, int n) { return n * (std::log(r) + 1.0 - r); }

}  // namespace detail

// Classifies |z| into the three regimes (|z| <= 0.02, 0.01 < |z| <= 1,
// |z| >= 1; overlaps checked under both) and compares the remainder with
// each applicable bound. Everything is compared in log space.
inline RegimeReport check_remainder_regimes(std::complex<double> z, int n, RemainderConstants k = {}) {
  RegimeReport rep{z, n, {}};
  const double r = std::abs(z);
  const auto lg = ginibre_remainder_log(z, n);
  const double log_r = r == 0.0 ? -std::numeric_limits<double>::infinity() : lg.log_p.real();
  const double log_1mr = lg.log_q.real();
  if (r <= 0.02) {
    const double bound = 0.5 * std::log(n / (2.0 * std::numbers::pi)) + n * std::log(0.06);
    rep.checks.push_back({1, bound, log_r, log_r <= bound});
  }
  if (r > 0.01 && r <= 1.0) {
    const double bound = std::log(k.c2) + 0.5 * std::log(static_cast<double>(n)) + detail::log_envelope(r, n);
    rep.checks.push_back({2, bound, log_r, log_r <= bound});
  }
  if (r >= 1.0) {
    const double bound = std::log(k.c3) + detail::log_envelope(r, n);
    rep.checks.push_back({3, bound, log_1mr, log_1mr <= bound});
  }
  return rep;
}

// Grid of test points: magnitudes as given, imaginary part n^{-3/4}
// (capped at |z|/2 so small magnitudes keep a positive real part).
inline std::vector<std::complex<double>> remainder_grid(int n, const std::vector<double>& magnitudes = {
                                                                       0.005, 0.015, 0.1, 0.5, 0.9, 1.0, 1.1, 1.5, 3.0}) {
  std::vector<std::complex<double>> out;
  for (double r : magnitudes) {
    const double im = std::min(std::pow(static_cast<double>(n), -0.75), 0.5 * r);
    out.emplace_back(std::sqrt(r * r - im * im), im);
  }
  return out;
}

// Smallest C2, C3 making the regime-2/3 bounds hold on the grid at this n.
inline RemainderConstants fit_remainder_constants(int n, const std::vector<std::complex<double>>& grid) {
  double l2 = -std::numeric_limits<double>::infinity(), l3 = l2;
  for (auto z : grid) {
    const auto rep = check_remainder_regimes(z, n);  // C = 1 bounds
    for (const auto& c : rep.checks) {
      if (c.regime == 2) l2 = std::max(l2, c.log_actual - c.log_bound);
      if (c.regime == 3) l3 = std::max(l3, c.log_actual - c.log_bound);
    }
  }
  return {std::exp(l2), std::exp(l3)};
}

// ---------------------------------------------------------------------------
// Laguerre wave functions ψ_ℓ(x) = sqrt(ℓ!/(ℓ+α)!) L_ℓ^{(α)}(x) x^{α/2} e^{-x/2}.

struct WavePair {
  double prev = 0.0;  // ψ_{ℓ-1}(x) (0 when ℓ = 0)
  double curr = 0.0;  // ψ_ℓ(x)
};

// ψ_{ℓ-1} and ψ_ℓ from the orthonormal three-term recurrence
//   sqrt((j+1)(j+1+α)) l_{j+1} = (2j+1+α-x) l_j - sqrt(j(j+α)) l_{j-1},
// run on rescaled values with the Γ, power and exponential factors applied
// once in log space at the end.
inline WavePair laguerre_wave_pair(int ell, double alpha, double x) {
  if (ell < 0) throw std::invalid_argument("laguerre_wave: negative order");
  if (!(x > 0.0)) throw std::invalid_argument("laguerre_wave: x must be positive");
  if (!(alpha >= 0.0)) throw std::invalid_argument("laguerre_wave: need m >= n");
  double lm1 = 0.0, l0 = 1.0, log_scale = 0.0;
  for (int j = 0; j < ell; ++j) {
    const double next = ((2.0 * j + 1.0 + alpha - x) * l0 - std::sqrt(j * (j + alpha)) * lm1) /
                        std::sqrt((j + 1.0) * (j + 1.0 + alpha));
    lm1 = l0;
    l0 = next;
    const double mag = std::max(std::abs(l0), std::abs(lm1));
    if (mag > 1e100) {
      l0 *= 1e-100;
      lm1 *= 1e-100;
      log_scale += 100.0 * std::numbers::ln10;
    } else if (mag < 1e-100 && mag > 0.0) {
      l0 *= 1e100;
      lm1 *= 1e100;
      log_scale -= 100.0 * std::numbers::ln10;
    }
  }
  const double log_w = log_scale - 0.5 * std::lgamma(alpha + 1.0) + 0.5 * alpha * std::log(x) - 0.5 * x;
  auto apply = [&](double v) { return v == 0.0 ? 0.0 : std::copysign(std::exp(std::log(std::abs(v)) + log_w), v); };
  return {apply(lm1), apply(l0)};
}

inline double laguerre_wave(int ell, int m, int n, double x) {
  if (m < n) throw std::invalid_argument("laguerre_wave: need m >= n");
  return laguerre_wave_pair(ell, static_cast<double>(m - n), x).curr;
}

// dψ_ℓ/dx = (-1/2 + (α + 2ℓ)/(2x)) ψ_ℓ - sqrt(ℓ(ℓ+α))/x ψ_{ℓ-1}.
inline double laguerre_wave_derivative(int ell, double alpha, double x, const WavePair& p) {
  return (-0.5 + (alpha + 2.0 * ell) / (2.0 * x)) * p.curr - std::sqrt(ell * (ell + alpha)) / x * p.prev;
}

// Wishart correlation kernel in eigenvalue units,
//   K_n(x, y) = m Σ_{j<n} ψ_j(mx) ψ_j(my)
//             = sqrt(mn) (ψ_{n-1}(mx) ψ_n(my) - ψ_n(mx) ψ_{n-1}(my)) / (x - y),
// with the confluent form m sqrt(mn) (ψ'_{n-1} ψ_n - ψ'_n ψ_{n-1})(mx) when
// |x - y| < 1e-8 max(x, 1).
inline double wishart_kernel(double x, double y, int m, int n) {
  if (!(x > 0.0) || !(y > 0.0)) throw std::invalid_argument("wishart_kernel: x and y must be positive");
  if (m < n || n < 1) throw std::invalid_argument("wishart_kernel: need m >= n >= 1");
  const double alpha = m - n;
  const double a_n = std::sqrt(static_cast<double>(m) * n);
  if (std::abs(x - y) < 1e-8 * std::max(x, 1.0)) {
    const double s = m * 0.5 * (x + y);
    const auto pn = laguerre_wave_pair(n, alpha, s);
    const auto pn1 = laguerre_wave_pair(n - 1, alpha, s);
    const double dn = laguerre_wave_derivative(n, alpha, s, pn);
    const double dn1 = laguerre_wave_derivative(n - 1, alpha, s, pn1);
    return m * a_n * (dn1 * pn.curr - dn * pn.prev);
  }
  const auto px = laguerre_wave_pair(n, alpha, m * x);
  const auto py = laguerre_wave_pair(n, alpha, m * y);
  // Put the larger argument first so the kernel is exactly symmetric.
  const auto& [p, q] = x > y ? std::pair{px, py} : std::pair{py, px};
  const double num = p.prev * q.curr - p.curr * q.prev;
  return a_n * num / (std::max(x, y) - std::min(x, y));
}

// Angles of the bulk Laguerre asymptotics at x for aspect ratio β:
// cos θ0 = (β - 1 - βx) / (2 sqrt(βx)), θ0 in (0, π); sin θ1 = sin θ0 / β,
// θ1 in (0, π/2).
struct AngleParams {
  double theta0 = 0.0;
  double theta1 = 0.0;
  double cos_residual = 0.0;
  double sin_residual = 0.0;

  static AngleParams at(double x, double beta) {
    if (!(beta >= 1.0)) throw std::invalid_argument("AngleParams: need beta >= 1");
    const double c0 = (beta - 1.0 - beta * x) / (2.0 * std::sqrt(beta * x));
    if (!(x > 0.0) || !(std::abs(c0) < 1.0))
      throw std::invalid_argument("AngleParams: x must lie strictly inside the spectral support");
    AngleParams a;
    a.theta0 = std::acos(c0);
    a.theta1 = std::asin(std::sin(a.theta0) / beta);
    a.cos_residual = std::abs(std::cos(a.theta0) - c0);
    a.sin_residual = std::abs(std::sin(a.theta1) - std::sin(a.theta0) / beta);
    return a;
  }
};

namespace detail {

// Liouville-Green approximation of ψ_N(s) between the turning points
// s± = ν/2 ± sqrt(ν²/4 - α²), ν = 4N + 2α + 2:
//   ψ_N(s) ≈ sqrt(2/π) ((s - s-)(s+ - s))^{-1/4} cos(Φ(s) - π/4),
//   Φ(s) = ∫_{s-}^{s} sqrt((t - s-)(s+ - t)) / (2t) dt.
// With s = c - d cos φ the phase integral is
//   Φ = (c φ + d sin φ)/2 - α atan(sqrt(s+/s-) tan(φ/2)).
inline double laguerre_wave_wkb(int big_n, double alpha, double s) {
  const double nu = 4.0 * big_n + 2.0 * alpha + 2.0;
  const double disc = std::sqrt(nu * nu / 4.0 - alpha * alpha);
  const double sm = nu / 2.0 - disc, sp = nu / 2.0 + disc;
  if (!(s > sm && s < sp)) throw std::invalid_argument("laguerre_wave_wkb: outside the oscillatory region");
  const double c = 0.5 * (sp + sm), d = 0.5 * (sp - sm);
  const double phi = std::acos(std::clamp((c - s) / d, -1.0, 1.0));
  double phase = 0.5 * (c * phi + d * std::sin(phi));
  if (alpha > 0.0) {
    const double t = std::tan(0.5 * phi);
    phase -= alpha * std::atan2(std::sqrt(sp) * t, std::sqrt(sm));
  }
  return std::sqrt(2.0 / std::numbers::pi) * std::pow((s - sm) * (sp - s), -0.25) *
         std::cos(phase - 0.25 * std::numbers::pi);
}

// Angle entering the two trigonometric bulk formulas for L_n and L_{n-1} at x.
inline double bulk_phase(int n, double beta, const AngleParams& a, double shift) {
  return (n + shift) * a.theta0 - 0.5 * n * std::sin(2.0 * a.theta0) + 0.5 * n * beta * std::sin(2.0 * a.theta1) -
         (n * beta + shift) * a.theta1 + 0.25 * std::numbers::pi;
}

}  // namespace detail

struct KernelAsymptotic {
  double exact = 0.0;  // Christoffel-Darboux value, the reference
  double approximation = 0.0;  // from Liouville-Green wave functions
  double trig_form = 0.0;  // sin M_- sin M_+ form with (x-y)(xy)^{1/4} π sqrt(sin θ0 sin φ0)
  double relative_error = 0.0;  // |approximation - exact| / |exact|
  double trig_form_relative_error = 0.0;
  AngleParams at_x, at_y;
};

// Bulk asymptotics of the Wishart kernel for x != y inside (a + ε0, b - ε0),
// β = m/n. The exact CD value is always returned alongside.
inline KernelAsymptotic wishart_kernel_asymptotic(double x, double y, int m, int n, double eps0 = 0.05) {
  const auto mp = DensityFn::marchenko_pastur(static_cast<double>(m) / n);
  const double lo = mp.lower() + eps0, hi = mp.upper() - eps0;
  if (!(x > lo && x < hi && y > lo && y < hi))
    throw std::invalid_argument("wishart_kernel_asymptotic: x and y must lie in the bulk");
  if (x == y) throw std::invalid_argument("wishart_kernel_asymptotic: needs x != y");
  const double beta = static_cast<double>(m) / n;
  const double alpha = m - n;
  KernelAsymptotic out;
  out.exact = wishart_kernel(x, y, m, n);
  const double a_n = std::sqrt(static_cast<double>(m) * n);
  const double gx1 = detail::laguerre_wave_wkb(n - 1, alpha, m * x), gx = detail::laguerre_wave_wkb(n, alpha, m * x);
  const double gy1 = detail::laguerre_wave_wkb(n - 1, alpha, m * y), gy = detail::laguerre_wave_wkb(n, alpha, m * y);
  out.approximation = a_n * (gx1 * gy - gx * gy1) / (x - y);
  out.at_x = AngleParams::at(x, beta);
  out.at_y = AngleParams::at(y, beta);
  const double mpx = detail::bulk_phase(n, beta, out.at_x, 0.5), mmx = detail::bulk_phase(n, beta, out.at_x, -0.5);
  const double mpy = detail::bulk_phase(n, beta, out.at_y, 0.5), mmy = detail::bulk_phase(n, beta, out.at_y, -0.5);
  const double denom = (x - y) * std::pow(x * y, 0.25) * std::numbers::pi *
                       std::sqrt(std::sin(out.at_x.theta0) * std::sin(out.at_y.theta0));
  out.trig_form = (std::sin(mmx) * std::sin(mpy) - std::sin(mpx) * std::sin(mmy)) / denom;
  out.relative_error = std::abs(out.approximation - out.exact) / std::abs(out.exact);
  out.trig_form_relative_error = std::abs(out.trig_form - out.exact) / std::abs(out.exact);
  return out;
}

// ---------------------------------------------------------------------------
// Unitary ensemble with V(x) = x²/2 (weight e^{-(n/2) x²} per eigenvalue).

namespace detail {

// Orthonormal Hermite functions h_{ℓ-1}(t), h_ℓ(t),
// h_0 = π^{-1/4} e^{-t²/2}, h_{j+1} = sqrt(2/(j+1)) t h_j - sqrt(j/(j+1)) h_{j-1}.
inline WavePair hermite_function_pair(int ell, double t) {
  double hm1 = 0.0, h0 = 1.0, log_scale = 0.0;
  for (int j = 0; j < ell; ++j) {
    const double next = std::sqrt(2.0 / (j + 1.0)) * t * h0 - std::sqrt(j / (j + 1.0)) * hm1;
    hm1 = h0;
    h0 = next;
    const double mag = std::max(std::abs(h0), std::abs(hm1));
    if (mag > 1e100) {
      h0 *= 1e-100;
      hm1 *= 1e-100;
      log_scale += 100.0 * std::numbers::ln10;
    }
  }
  const double log_w = log_scale - 0.25 * std::log(std::numbers::pi) - 0.5 * t * t;
  auto apply = [&](double v) { return v == 0.0 ? 0.0 : std::copysign(std::exp(std::log(std::abs(v)) + log_w), v); };
  return {apply(hm1), apply(h0)};
}

}  // namespace detail

inline double hermite_function(int ell, double t) { return detail::hermite_function_pair(ell, t).curr; }

// K_n(x, y) = e^{-n(x²+y²)/4} Σ_{j<n} p_j(x) p_j(y) for the weight e^{-n x²/2};
// with s = x sqrt(n/2) this is (n/2) (h_n(s) h_{n-1}(t) - h_{n-1}(s) h_n(t)) / (s - t).
inline double gue_kernel(double x, double y, int n) {
  if (n < 1) throw std::invalid_argument("gue_kernel: n must be positive");
  const double k = std::sqrt(0.5 * n);
  const double s = k * x, t = k * y;
  if (std::abs(x - y) < 1e-8 * std::max(std::abs(x), 1.0)) {
    const double u = 0.5 * (s + t);
    const auto p = detail::hermite_function_pair(n, u);
    const double hn1 = p.prev, hn = p.curr;
    const double hn2 = n >= 2 ? detail::hermite_function_pair(n - 1, u).prev : 0.0;
    const double dn = std::sqrt(2.0 * n) * hn1 - u * hn;
    const double dn1 = std::sqrt(2.0 * (n - 1)) * hn2 - u * hn1;
    return 0.5 * n * (dn * hn1 - dn1 * hn);
  }
  const auto ps = detail::hermite_function_pair(n, s);
  const auto pt = detail::hermite_function_pair(n, t);
  const auto& [p, q] = s > t ? std::pair{ps, pt} : std::pair{pt, ps};
  const double num = p.curr * q.prev - p.prev * q.curr;
  return 0.5 * n * num / (std::max(s, t) - std::min(s, t));
}

// sin(πs)/(πs), 1 at s = 0.
inline double sine_kernel(double s) {
  if (std::abs(s) < 1e-4) {
    const double z = std::numbers::pi * s;
    return 1.0 - z * z / 6.0 + z * z * z * z / 120.0;
  }
  return std::sin(std::numbers::pi * s) / (std::numbers::pi * s);
}

inline double spectral_density(const DensityFn& density, double x) { return density(x); }

}  // namespace gaplab
