#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "gaplab/density.hpp"
#include "gaplab/errors.hpp"
#include "gaplab/gap_process.hpp"
#include "gaplab/kernel_engine.hpp"
#include "gaplab/quadrature.hpp"
#include "gaplab/region.hpp"

namespace gaplab {

enum class CorrelationEnsemble { Ginibre, Wishart, GUE };

struct CorrelationRequest {
  CorrelationEnsemble ensemble = CorrelationEnsemble::Ginibre;
  std::vector<std::complex<double>> points;
  int n = 1;
  int m = 0;  // Wishart only
};

namespace detail {

inline Eigen::MatrixXcd ginibre_kernel_matrix(const std::vector<std::complex<double>>& pts, int n) {
  const auto k = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXcd mat(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    mat(i, i) = ginibre_kernel_value(pts[i], pts[i], n).real();
    for (Eigen::Index j = 0; j < i; ++j) {
      mat(i, j) = ginibre_kernel_value(pts[i], pts[j], n);
      mat(j, i) = std::conj(mat(i, j));
    }
  }
  return mat;
}

// Determinant of a PSD kernel matrix; roundoff negatives above
// -1e-10 · Π diag are clamped to zero, anything below is a failure.
inline double psd_determinant(const Eigen::MatrixXcd& mat) {
  double diag = 1.0;
  for (Eigen::Index i = 0; i < mat.rows(); ++i) diag *= mat(i, i).real();
  const double det = mat.rows() == 0 ? 1.0 : mat.partialPivLu().determinant().real();
  if (det >= 0.0) return det;
  if (det >= -1e-10 * std::abs(diag)) return 0.0;
  throw numerical_failure("kernel determinant " + std::to_string(det) + " is negative beyond roundoff");
}

}  // namespace detail

inline Eigen::MatrixXcd kernel_matrix(const CorrelationRequest& req) {
  const auto k = static_cast<Eigen::Index>(req.points.size());
  if (req.ensemble == CorrelationEnsemble::Ginibre) return detail::ginibre_kernel_matrix(req.points, req.n);
  Eigen::MatrixXcd mat(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double x = req.points[i].real(), y = req.points[j].real();
      const double v = req.ensemble == CorrelationEnsemble::Wishart ? wishart_kernel(x, y, req.m, req.n)
                                                                    : gue_kernel(x, y, req.n);
      mat(i, j) = v;
      mat(j, i) = v;
    }
  }
  return mat;
}

// k-point correlation function. Ginibre: (n/π)^k det[S_n(λ_i, λ_j)];
// Wishart and GUE: det[K_n(x_i, x_j)] with real points.
inline double rho_k(const CorrelationRequest& req) {
  const auto k = static_cast<int>(req.points.size());
  if (k < 1) throw std::invalid_argument("rho_k: need at least one point");
  if (req.n < 1) throw std::invalid_argument("rho_k: n must be positive");
  if (k > req.n) return 0.0;
  if (req.ensemble == CorrelationEnsemble::Wishart && req.m < req.n)
    throw std::invalid_argument("rho_k: Wishart requires m >= n");
  if (req.ensemble != CorrelationEnsemble::Ginibre)
    for (const auto& p : req.points)
      if (p.imag() != 0.0) throw std::invalid_argument("rho_k: points must be real for this ensemble");
  const double det = detail::psd_determinant(kernel_matrix(req));
  if (req.ensemble == CorrelationEnsemble::Ginibre) return std::pow(req.n / std::numbers::pi, k) * det;
  return det;
}

struct PairDeterminant {
  double exact = 0.0;
  double leading = 0.0;
  double ratio = 0.0;  // exact / leading (0 when leading is 0)
};

struct PairDeterminantParams {
  CorrelationEnsemble ensemble = CorrelationEnsemble::GUE;
  int m = 0;  // Wishart only
  double eps0 = 0.05;  // bulk margin
};

// det [[K(x,x), K(x,y)], [K(y,x), K(y,y)]] at y = x + u against the
// leading term (π²/3) n⁴ u² ρ(x)⁴, ρ the limiting density.
inline PairDeterminant pair_determinant_limit(double x, double u, int n, const PairDeterminantParams& p) {
  DensityFn dens = p.ensemble == CorrelationEnsemble::Wishart ? DensityFn::marchenko_pastur(static_cast<double>(p.m) / n)
                                                              : DensityFn::semicircle();
  if (p.ensemble == CorrelationEnsemble::Ginibre)
    throw std::invalid_argument("pair_determinant_limit: real-line ensembles only");
  const double lo = dens.lower() + p.eps0, hi = dens.upper() - p.eps0;
  if (!(x > lo && x < hi)) throw std::invalid_argument("pair_determinant_limit: x outside the bulk");
  const double y = x + u;
  auto kern = [&](double a, double b) {
    return p.ensemble == CorrelationEnsemble::Wishart ? wishart_kernel(a, b, p.m, n) : gue_kernel(a, b, n);
  };
  PairDeterminant out;
  if (u == 0.0) return out;
  const double kxy = kern(x, y);
  out.exact = kern(x, x) * kern(y, y) - kxy * kxy;
  out.leading = std::numbers::pi * std::numbers::pi / 3.0 * std::pow(static_cast<double>(n), 4) * u * u *
                std::pow(dens(x), 4);
  out.ratio = out.leading != 0.0 ? out.exact / out.leading : 0.0;
  return out;
}

struct QuadratureSpec {
  enum class Scheme { TensorGaussLegendre, MonteCarlo };
  Scheme scheme = Scheme::TensorGaussLegendre;
  int nodes = 24;  // per real dimension
  std::int64_t samples = 1 << 20;  // Monte Carlo budget
  std::uint64_t seed = 1;
  int batches = 32;
};

struct IntegralEstimate {
  double value = 0.0;
  double standard_error = 0.0;  // 0 for deterministic quadrature
  std::int64_t evaluations = 0;
};

namespace detail {

inline PlanarDomain region_domain(const Region& r) {
  if (r.kind == Region::Kind::Disk) return full_disk(r.center, r.radius);
  throw std::invalid_argument("integration region must be a disk");
}

}  // namespace detail

// E Ξ³(B) = ∫_I dλ ∫_{(λ + D)²} ρ3(λ, x1, x2) dx1 dx2 for Ginibre, D the
// half-disk (or full disk) of radius c n^{-3/4}. Six real dimensions, so the
// estimate is always Monte Carlo with replicate-batch standard errors.
inline IntegralEstimate triple_cluster_expectation(const Region& base, double c, int n, const QuadratureSpec& quad,
                                                   ClusterShape shape = ClusterShape::HalfDisk) {
  if (quad.samples <= 0) throw std::invalid_argument("triple_cluster_expectation: empty quadrature budget");
  if (!(c > 0.0) || n < 3) throw std::invalid_argument("triple_cluster_expectation: need c > 0 and n >= 3");
  const double radius = c * std::pow(static_cast<double>(n), -0.75);
  if (base.kind == Region::Kind::Disk && base.radius == 0.0) return {};
  const PlanarDomain cell = shape == ClusterShape::HalfDisk ? half_disk(0.0, radius) : full_disk(0.0, radius);
  const std::vector<PlanarDomain> factors{detail::region_domain(base), cell, cell};
  std::vector<std::complex<double>> pts(3);
  auto integrand = [&](const std::vector<std::complex<double>>& p) {
    pts[0] = p[0];
    pts[1] = p[0] + p[1];
    pts[2] = p[0] + p[2];
    return std::pow(n / std::numbers::pi, 3) * detail::psd_determinant(detail::ginibre_kernel_matrix(pts, n));
  };
  const auto mc = monte_carlo_product(factors, integrand, quad.samples, quad.seed, quad.batches);
  return {mc.value, mc.standard_error, mc.evaluations};
}

// Exact finite-n mean number of Ginibre pairs λ_i ≺ λ_j with λ_i in `base` and
// |λ_j - λ_i| <= radius: ∫_I dλ ∫_{λ + D⁺(0, radius)} ρ2. Bounds the mean
// successor-gap count from above; the two differ by triple clusters.
inline IntegralEstimate pair_gap_expectation(const Region& base, double radius, int n, const QuadratureSpec& quad) {
  if (quad.samples <= 0) throw std::invalid_argument("pair_gap_expectation: empty quadrature budget");
  if (!(radius > 0.0) || n < 2) throw std::invalid_argument("pair_gap_expectation: need radius > 0 and n >= 2");
  const std::vector<PlanarDomain> factors{detail::region_domain(base), half_disk(0.0, radius)};
  std::vector<std::complex<double>> pts(2);
  auto integrand = [&](const std::vector<std::complex<double>>& p) {
    pts[0] = p[0];
    pts[1] = p[0] + p[1];
    return std::pow(n / std::numbers::pi, 2) * detail::psd_determinant(detail::ginibre_kernel_matrix(pts, n));
  };
  const auto mc = monte_carlo_product(factors, integrand, quad.samples, quad.seed, quad.batches);
  return {mc.value, mc.standard_error, mc.evaluations};
}

// {u : |u| in A, arg u in [0, π)} scaled by n^{-3/4}.
inline PlanarDomain thinning_window(const LengthSet& lengths, int n) {
  const double s = std::pow(static_cast<double>(n), -0.75);
  PlanarDomain d;
  for (const auto& [lo, hi] : lengths.parts()) d.patches.push_back({0.0, lo * s, hi * s, 0.0, std::numbers::pi});
  return d;
}

struct ThinnedCorrelation {
  std::vector<double> terms;  // m = 0 .. M+1, signed
  std::vector<double> term_errors;  // Monte Carlo standard errors (0 for GL)
  double value = 0.0;  // partial sum up to M
  double next = 0.0;  // partial sum up to M+1
  double bracket_lo = 0.0, bracket_hi = 0.0;
  double envelope = 0.0;  // term0 · (exp(|b_n| n/π) - 1), bounds all m >= 1 terms
};

// Correlation function of the thinned process (points with exactly one
// successor-side neighbour in λ + n^{-3/4} B) by inclusion-exclusion
// truncated after m = M, reporting the partial sums at M and M+1. The
// translates λ_i + B_n must be disjoint.
inline ThinnedCorrelation thinned_correlation(const std::vector<std::complex<double>>& lambdas, int n,
                                              const LengthSet& lengths, int truncation, const QuadratureSpec& quad = {}) {
  const int k = static_cast<int>(lambdas.size());
  if (k < 1) throw std::invalid_argument("thinned_correlation: need at least one point");
  if (truncation < 0) throw std::invalid_argument("thinned_correlation: M must be nonnegative");
  if (lengths.empty()) {
    ThinnedCorrelation z;
    z.terms.assign(truncation + 2, 0.0);
    z.term_errors.assign(truncation + 2, 0.0);
    return z;
  }
  const double reach = 2.0 * lengths.sup() * std::pow(static_cast<double>(n), -0.75);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < i; ++j) {
      if (lambdas[i] == lambdas[j]) throw std::invalid_argument("thinned_correlation: points must be distinct");
      if (std::abs(lambdas[i] - lambdas[j]) <= reach)
        throw std::invalid_argument("thinned_correlation: translated windows are not disjoint");
    }
  if (2 * k + truncation + 1 > 16) throw truncation_error("thinned_correlation: order exceeds the 16-point budget");

  const PlanarDomain window = thinning_window(lengths, n);
  PlanarDomain union_domain;
  for (const auto& l : lambdas) union_domain = union_domain.joined(window.translated(l));

  ThinnedCorrelation out;
  double factorial = 1.0;
  for (int m = 0; m <= truncation + 1; ++m) {
    if (m > 0) factorial *= m;
    const int total = 2 * k + m;
    if (total > n) {
      out.terms.push_back(0.0);
      out.term_errors.push_back(0.0);
      continue;
    }
    std::vector<PlanarDomain> factors;
    for (const auto& l : lambdas) factors.push_back(window.translated(l));
    for (int j = 0; j < m; ++j) factors.push_back(union_domain);
    std::vector<std::complex<double>> pts(total);
    auto integrand = [&](const std::vector<std::complex<double>>& p) {
      for (int i = 0; i < k; ++i) {
        pts[2 * i] = lambdas[i];
        pts[2 * i + 1] = p[i];
      }
      for (int j = 0; j < m; ++j) pts[2 * k + j] = p[k + j];
      return std::pow(n / std::numbers::pi, total) * detail::psd_determinant(detail::ginibre_kernel_matrix(pts, n));
    };
    const int dims = 2 * static_cast<int>(factors.size());
    double value = 0.0, se = 0.0;
    if (quad.scheme == QuadratureSpec::Scheme::TensorGaussLegendre && dims <= 4) {
      std::vector<std::vector<std::pair<std::complex<double>, double>>> nodes;
      for (const auto& f : factors) nodes.push_back(f.nodes(quad.nodes));
      std::vector<std::complex<double>> p(factors.size());
      if (factors.size() == 1) {
        for (const auto& [z, w] : nodes[0]) {
          p[0] = z;
          value += w * integrand(p);
        }
      } else {
        for (const auto& [z0, w0] : nodes[0])
          for (const auto& [z1, w1] : nodes[1]) {
            p[0] = z0;
            p[1] = z1;
            value += w0 * w1 * integrand(p);
          }
      }
    } else {
      const auto mc = monte_carlo_product(factors, integrand, quad.samples, split_seed(quad.seed, m), quad.batches);
      value = mc.value;
      se = mc.standard_error;
    }
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    out.terms.push_back(sign * value / factorial);
    out.term_errors.push_back(se / factorial);
  }
  for (int m = 0; m <= truncation; ++m) out.value += out.terms[m];
  out.next = out.value + out.terms[truncation + 1];
  out.bracket_lo = std::min(out.value, out.next);
  out.bracket_hi = std::max(out.value, out.next);
  out.envelope = out.terms[0] * std::expm1(union_domain.area() * n / std::numbers::pi);
  return out;
}

// det(M) <= det(M_ω) det(M_ω̄) for Hermitian PSD M, within 1e-10 relative
// slack. Indices in ω are 0-based.
inline bool fischer_check(const Eigen::MatrixXcd& mat, const std::vector<int>& omega) {
  const auto k = mat.rows();
  if (mat.cols() != k) throw std::invalid_argument("fischer_check: matrix is not square");
  if (!mat.isApprox(mat.adjoint(), 1e-12)) throw std::invalid_argument("fischer_check: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mat, Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().cwiseAbs().maxCoeff();
  if (es.eigenvalues().minCoeff() < -1e-12 * std::max(top, 1e-300))
    throw std::invalid_argument("fischer_check: matrix is not positive semidefinite");
  std::vector<bool> in(k, false);
  for (int i : omega) {
    if (i < 0 || i >= k) throw std::invalid_argument("fischer_check: index out of range");
    in[i] = true;
  }
  std::vector<Eigen::Index> a, b;
  for (Eigen::Index i = 0; i < k; ++i) (in[i] ? a : b).push_back(i);
  auto sub_det = [&](const std::vector<Eigen::Index>& idx) {
    if (idx.empty()) return 1.0;
    Eigen::MatrixXcd s(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) s(i, j) = mat(idx[i], idx[j]);
    return s.determinant().real();
  };
  const double full = mat.determinant().real();
  const double product = sub_det(a) * sub_det(b);
  return full <= product + 1e-10 * std::abs(product) + 1e-300;
}

}  // namespace gaplab
