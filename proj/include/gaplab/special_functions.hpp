#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "gaplab/errors.hpp"

namespace gaplab {

// Regularized incomplete gamma P(a, x) and Q(a, x) = 1 - P(a, x) for a > 0
// and real or complex x. Both are returned as principal complex logarithms
// so that values far below the double range stay representable.
// The power series is used for |x| < a + 1 (or Re x <= 0), the Lentz
// continued fraction for Q otherwise; the complement is taken from whichever
// side was computed directly.
struct IncompleteGammaLog {
  std::complex<double> log_p;
  std::complex<double> log_q;
  bool from_series;
};

namespace detail {

inline constexpr int kGammaMaxIter = 100000;

inline std::complex<double> log1m_exp(std::complex<double> log_v) {
  // log(1 - v) given log v.
  const std::complex<double> v = std::exp(log_v);
  if (v.imag() == 0.0 && v.real() < 1.0) return {std::log1p(-v.real()), 0.0};
  return std::log(1.0 - v);
}

inline std::complex<double> gamma_series_log_p(double a, std::complex<double> x) {
  // P(a, x) = x^a e^{-x} / Γ(a+1) * Σ_k x^k / ((a+1)...(a+k)), with the
  // running sum rescaled so growing terms (Re x < 0, |x| large) never overflow.
  std::complex<double> term = 1.0;
  std::complex<double> sum = 1.0;
  double log_scale = 0.0;
  for (int k = 1; k < kGammaMaxIter; ++k) {
    term *= x / (a + k);
    sum += term;
    if (std::abs(sum) > 1e250) {
      sum *= 1e-250;
      term *= 1e-250;
      log_scale += 250.0 * std::numbers::ln10;
    }
    if (std::abs(term) <= std::abs(sum) * 1e-17 && k > std::abs(x) - a) {
      return a * std::log(x) - x - std::lgamma(a + 1.0) + std::log(sum) + log_scale;
    }
  }
  throw numerical_failure("incomplete gamma series did not converge");
}

inline std::complex<double> gamma_cf_log_q(double a, std::complex<double> x) {
  const double tiny = 1e-300;
  std::complex<double> b = x + 1.0 - a;
  std::complex<double> c = 1.0 / tiny;
  std::complex<double> d = 1.0 / b;
  std::complex<double> h = d;
  for (int i = 1; i < kGammaMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const std::complex<double> del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) {
      return a * std::log(x) - x - std::lgamma(a) + std::log(h);
    }
  }
  throw numerical_failure("incomplete gamma continued fraction did not converge");
}

}  // namespace detail

inline IncompleteGammaLog incomplete_gamma_log(double a, std::complex<double> x) {
  if (!(a > 0.0)) throw std::invalid_argument("incomplete_gamma: need a > 0");
  if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
    throw std::invalid_argument("incomplete_gamma: non-finite argument");
  const double minus_inf = -std::numeric_limits<double>::infinity();
  if (x == std::complex<double>(0.0, 0.0)) return {{minus_inf, 0.0}, {0.0, 0.0}, true};
  if (std::abs(x) < a + 1.0 || x.real() <= 0.0) {
    const auto lp = detail::gamma_series_log_p(a, x);
    return {lp, detail::log1m_exp(lp), true};
  }
  const auto lq = detail::gamma_cf_log_q(a, x);
  return {detail::log1m_exp(lq), lq, false};
}

inline double regularized_gamma_p(double a, double x) {
  if (x < 0.0) throw std::invalid_argument("regularized_gamma_p: x < 0");
  return std::exp(incomplete_gamma_log(a, x).log_p.real());
}

inline double regularized_gamma_q(double a, double x) {
  if (x < 0.0) throw std::invalid_argument("regularized_gamma_q: x < 0");
  return std::exp(incomplete_gamma_log(a, x).log_q.real());
}

inline std::complex<double> regularized_gamma_p(double a, std::complex<double> x) {
  return std::exp(incomplete_gamma_log(a, x).log_p);
}

inline std::complex<double> regularized_gamma_q(double a, std::complex<double> x) {
  return std::exp(incomplete_gamma_log(a, x).log_q);
}

}  // namespace gaplab
