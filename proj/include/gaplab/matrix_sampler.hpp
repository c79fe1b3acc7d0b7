#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "gaplab/rng.hpp"
#include "gaplab/spectrum.hpp"

namespace gaplab {

enum class EnsembleKind { Ginibre, Wishart, GUE, UUE, IidDisk };

inline std::string to_string(EnsembleKind k) {
  switch (k) {
    case EnsembleKind::Ginibre: return "ginibre";
    case EnsembleKind::Wishart: return "wishart";
    case EnsembleKind::GUE: return "gue";
    case EnsembleKind::UUE: return "uue";
    case EnsembleKind::IidDisk: return "iid_disk";
  }
  return "unknown";
}

inline EnsembleKind ensemble_kind_from_string(const std::string& s) {
  for (auto k : {EnsembleKind::Ginibre, EnsembleKind::Wishart, EnsembleKind::GUE, EnsembleKind::UUE,
                 EnsembleKind::IidDisk})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown ensemble kind '" + s + "'");
}

struct McmcParams {
  // Proposal standard deviation; 0 selects 0.5 / sqrt(n).
  double step_scale = 0.0;
  int burn_in = 2000;  // sweeps
  int thinning = 50;  // sweeps between retained states

  bool operator==(const McmcParams&) const = default;
};

// Even polynomial potential V(x) = Σ c_k x^k (power basis).
class Potential {
 public:
  Potential() = default;
  explicit Potential(std::vector<double> coefficients) : c_(std::move(coefficients)) {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
    if (c_.size() < 3) throw std::invalid_argument("Potential: degree must be at least 2");
    for (std::size_t k = 1; k < c_.size(); k += 2)
      if (c_[k] != 0.0) throw std::invalid_argument("Potential: must be an even polynomial");
    if (!(c_.back() > 0.0)) throw std::invalid_argument("Potential: leading coefficient must be positive");
  }

  double operator()(double x) const {
    double v = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * x + *it;
    return v;
  }

  const std::vector<double>& coefficients() const { return c_; }

  bool operator==(const Potential&) const = default;

 private:
  std::vector<double> c_;
};

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::Ginibre;
  int n = 2;
  int m = 0;  // Wishart only
  std::vector<double> potential;  // UUE only, power basis
  McmcParams mcmc;

  void validate() const {
    if (n < 2) throw std::invalid_argument("EnsembleSpec: n must be at least 2");
    if (kind == EnsembleKind::Wishart && m < n) throw std::invalid_argument("EnsembleSpec: Wishart requires m >= n");
    if (kind == EnsembleKind::UUE) {
      Potential check(potential);
      if (mcmc.step_scale < 0.0) throw std::invalid_argument("EnsembleSpec: MCMC step scale must be positive");
      if (mcmc.burn_in < 0) throw std::invalid_argument("EnsembleSpec: MCMC burn-in must be nonnegative");
      if (mcmc.thinning < 1) throw std::invalid_argument("EnsembleSpec: MCMC thinning must be at least 1");
    }
  }

  bool operator==(const EnsembleSpec&) const = default;
};

using ComplexMatrix = Eigen::MatrixXcd;

// Square matrix for the general (non-Hermitian) eigensolver.
struct GeneralMatrix {
  ComplexMatrix data;
};

// Matrix known to be Hermitian; construction checks conjugate symmetry.
class HermitianMatrix {
 public:
  static HermitianMatrix checked(ComplexMatrix h) {
    if (h.rows() != h.cols()) throw std::invalid_argument("HermitianMatrix: not square");
    const double tol = 10.0 * std::numeric_limits<double>::epsilon();
    for (Eigen::Index j = 0; j < h.cols(); ++j) {
      for (Eigen::Index i = 0; i <= j; ++i) {
        const auto a = h(i, j), b = std::conj(h(j, i));
        const double scale = std::max({std::abs(a), std::abs(b), std::numeric_limits<double>::min()});
        if (std::abs(a - b) > tol * scale) throw std::invalid_argument("HermitianMatrix: input is not Hermitian");
      }
    }
    return HermitianMatrix(std::move(h));
  }

  const ComplexMatrix& data() const { return data_; }

 private:
  explicit HermitianMatrix(ComplexMatrix h) : data_(std::move(h)) {}
  ComplexMatrix data_;
};

// Rectangular m x n factor X of a Wishart matrix X*X/m; never multiplied out.
struct GramFactor {
  ComplexMatrix data;
  int m = 0;
};

struct SampleOutput {
  std::variant<std::monostate, GeneralMatrix, HermitianMatrix, GramFactor> matrix;
  std::optional<Spectrum> spectrum;
  std::uint64_t seed = 0;
  std::optional<double> acceptance_rate;
  bool acceptance_warning = false;
};

inline SampleOutput sample_ginibre(int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("sample_ginibre: n must be at least 2");
  Rng rng(seed);
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  ComplexMatrix a(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = rng.complex_normal() * s;
  SampleOutput out;
  out.matrix = GeneralMatrix{std::move(a)};
  out.seed = seed;
  return out;
}

inline SampleOutput sample_wishart_factor(int m, int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("sample_wishart_factor: n must be at least 2");
  if (m < n) throw std::invalid_argument("sample_wishart_factor: need m >= n");
  Rng rng(seed);
  ComplexMatrix x(m, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i) x(i, j) = rng.complex_normal();
  SampleOutput out;
  out.matrix = GramFactor{std::move(x), m};
  out.seed = seed;
  return out;
}

// Hermitian matrix with density proportional to exp(-(n/2) tr H^2): diagonal
// N(0, 1/n), off-diagonal real and imaginary parts N(0, 1/(2n)). The limiting
// spectrum is the semicircle on [-2, 2].
inline SampleOutput sample_gue(int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("sample_gue: n must be at least 2");
  Rng rng(seed);
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  ComplexMatrix h(n, n);
  for (int j = 0; j < n; ++j) {
    h(j, j) = rng.normal() * s;
    for (int i = 0; i < j; ++i) {
      h(i, j) = rng.complex_normal() * s;
      h(j, i) = std::conj(h(i, j));
    }
  }
  SampleOutput out;
  out.matrix = HermitianMatrix::checked(std::move(h));
  out.seed = seed;
  return out;
}

inline SampleOutput sample_iid_disk(int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("sample_iid_disk: n must be at least 2");
  Rng rng(seed);
  std::vector<std::complex<double>> z(n);
  for (auto& p : z) {
    const double r = std::sqrt(rng.uniform());
    const double th = 2.0 * std::numbers::pi * rng.uniform();
    p = std::polar(r, th);
  }
  SampleOutput out;
  out.spectrum = Spectrum::complex_plane(std::move(z));
  out.seed = seed;
  return out;
}

// Metropolis-Hastings chain on the log-gas
//   log p(λ) = 2 Σ_{i<j} log|λ_i - λ_j| - n Σ V(λ_j).
class LogGasChain {
 public:
  LogGasChain(const EnsembleSpec& spec, std::uint64_t seed)
      : n_(spec.n), v_(spec.potential), rng_(seed), x_(spec.n) {
    if (spec.kind != EnsembleKind::UUE) throw std::invalid_argument("LogGasChain: spec must be UUE");
    if (spec.mcmc.step_scale < 0.0) throw std::invalid_argument("LogGasChain: step scale must be positive");
    if (spec.mcmc.burn_in < 0) throw std::invalid_argument("LogGasChain: burn-in must be nonnegative");
    step_ = spec.mcmc.step_scale > 0.0 ? spec.mcmc.step_scale : 0.5 / std::sqrt(static_cast<double>(n_));
    for (int i = 0; i < n_; ++i) x_[i] = -1.0 + 2.0 * (i + 0.5) / n_;
  }

  // log p(y) - log p(x) when coordinate i moves to y; -inf on collision.
  double log_ratio(int i, double y) const {
    double d = -n_ * (v_(y) - v_(x_[i]));
    for (int j = 0; j < n_; ++j) {
      if (j == i) continue;
      const double dy = std::abs(y - x_[j]);
      if (dy == 0.0) return -std::numeric_limits<double>::infinity();
      d += 2.0 * (std::log(dy) - std::log(std::abs(x_[i] - x_[j])));
    }
    return d;
  }

  // One sweep of n single-coordinate proposals; returns accepted count.
  int sweep() {
    int accepted = 0;
    for (int i = 0; i < n_; ++i) {
      const double y = x_[i] + step_ * rng_.normal();
      const double lr = log_ratio(i, y);
      if (lr >= 0.0 || std::log(rng_.uniform_open()) < lr) {
        x_[i] = y;
        ++accepted;
      }
    }
    return accepted;
  }

  double energy() const {
    double e = 0.0;
    for (int i = 0; i < n_; ++i) {
      e += n_ * v_(x_[i]);
      for (int j = i + 1; j < n_; ++j) e -= 2.0 * std::log(std::abs(x_[i] - x_[j]));
    }
    return e;
  }

  const std::vector<double>& state() const { return x_; }
  double step() const { return step_; }

 private:
  int n_;
  Potential v_;
  Rng rng_;
  std::vector<double> x_;
  double step_;
};

// Burn-in, then `thinning` further sweeps whose acceptance rate is reported.
inline SampleOutput sample_uue_eigenvalues(const EnsembleSpec& spec, std::uint64_t seed) {
  spec.validate();
  if (spec.kind != EnsembleKind::UUE) throw std::invalid_argument("sample_uue_eigenvalues: spec must be UUE");
  LogGasChain chain(spec, seed);
  for (int s = 0; s < spec.mcmc.burn_in; ++s) chain.sweep();
  long accepted = 0;
  for (int s = 0; s < spec.mcmc.thinning; ++s) accepted += chain.sweep();
  const double rate = static_cast<double>(accepted) / (static_cast<double>(spec.mcmc.thinning) * spec.n);
  SampleOutput out;
  out.spectrum = Spectrum::real_line(chain.state());
  out.seed = seed;
  out.acceptance_rate = rate;
  out.acceptance_warning = rate < 0.1 || rate > 0.7;
  return out;
}

inline SampleOutput sample(const EnsembleSpec& spec, std::uint64_t seed) {
  spec.validate();
  switch (spec.kind) {
    case EnsembleKind::Ginibre: return sample_ginibre(spec.n, seed);
    case EnsembleKind::Wishart: return sample_wishart_factor(spec.m, spec.n, seed);
    case EnsembleKind::GUE: return sample_gue(spec.n, seed);
    case EnsembleKind::UUE: return sample_uue_eigenvalues(spec, seed);
    case EnsembleKind::IidDisk: return sample_iid_disk(spec.n, seed);
  }
  throw std::invalid_argument("sample: unknown ensemble");
}

}  // namespace gaplab
