#pragma once

#include <complex>

#ifndef lapack_complex_float
#define lapack_complex_float std::complex<float>
#endif
#ifndef lapack_complex_double
#define lapack_complex_double std::complex<double>
#endif
#include <lapacke.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "gaplab/errors.hpp"
#include "gaplab/matrix_sampler.hpp"
#include "gaplab/spectrum.hpp"

extern "C" void openblas_set_num_threads(int) __attribute__((weak));

namespace gaplab {

// Keeps BLAS single threaded; trial-level parallelism owns the cores.
inline void pin_blas_threads() {
  if (openblas_set_num_threads) openblas_set_num_threads(1);
}

struct SolverOptions {
  // Compute Schur/eigen/singular vectors to measure the residual and enforce
  // the backward-error contract. Eigenvalue-only mode skips the vectors.
  bool certify = false;
};

inline double unit_roundoff() { return std::numeric_limits<double>::epsilon(); }

inline double general_tolerance(int n) { return 100.0 * n * unit_roundoff(); }
inline double hermitian_tolerance(int n) { return 50.0 * n * unit_roundoff(); }

namespace detail {

inline void check_finite(const ComplexMatrix& a, const char* who) {
  if (!a.allFinite()) throw std::invalid_argument(std::string(who) + ": non-finite entries");
}

inline void check_info(lapack_int info, const char* routine, int n) {
  if (info < 0) throw std::logic_error(std::string(routine) + ": illegal argument " + std::to_string(-info));
  if (info > 0)
    throw convergence_failure(std::string(routine) + " failed to converge (info=" + std::to_string(info) +
                                  ", n=" + std::to_string(n) + ")",
                              n, static_cast<int>(info));
}

}  // namespace detail

// All eigenvalues of a square complex matrix (Hessenberg reduction plus
// shifted QR through LAPACK). With certify, the Schur residual
// ||AZ - ZT||_F / ||A||_F is returned and must be within 100 n ulp.
inline Spectrum eigvals_general(const ComplexMatrix& a_in, SolverOptions opt = {}) {
  if (a_in.rows() != a_in.cols()) throw std::invalid_argument("eigvals_general: matrix is not square");
  detail::check_finite(a_in, "eigvals_general");
  const int n = static_cast<int>(a_in.rows());
  if (n == 0) return Spectrum::complex_plane({}, opt.certify ? std::optional<double>(0.0) : std::nullopt);
  ComplexMatrix a = a_in;
  std::vector<std::complex<double>> w(n);
  if (!opt.certify) {
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, w.data(), nullptr, 1,
                                          nullptr, 1);
    detail::check_info(info, "zgeev", n);
    return Spectrum::complex_plane(std::move(w));
  }
  ComplexMatrix z(n, n);
  lapack_int sdim = 0;
  const lapack_int info = LAPACKE_zgees(LAPACK_COL_MAJOR, 'V', 'N', nullptr, n, a.data(), n, &sdim, w.data(),
                                        z.data(), n);
  detail::check_info(info, "zgees", n);
  const ComplexMatrix t = a.triangularView<Eigen::Upper>();
  const double norm = a_in.norm();
  const double residual = norm > 0.0 ? (a_in * z - z * t).norm() / norm : 0.0;
  if (residual > general_tolerance(n))
    throw numerical_failure("eigvals_general: backward error " + std::to_string(residual) + " exceeds tolerance");
  return Spectrum::complex_plane(std::move(w), residual);
}

inline Spectrum eigvals_general(const GeneralMatrix& a, SolverOptions opt = {}) {
  return eigvals_general(a.data, opt);
}

// Real eigenvalues of a Hermitian matrix, ascending.
inline Spectrum eigvals_hermitian(const HermitianMatrix& h_in, SolverOptions opt = {}) {
  const ComplexMatrix& src = h_in.data();
  detail::check_finite(src, "eigvals_hermitian");
  const int n = static_cast<int>(src.rows());
  if (n == 0) return Spectrum::real_line({}, opt.certify ? std::optional<double>(0.0) : std::nullopt);
  ComplexMatrix h = src;
  std::vector<double> w(n);
  const char jobz = opt.certify ? 'V' : 'N';
  const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, jobz, 'U', n, h.data(), n, w.data());
  detail::check_info(info, "zheevd", n);
  if (!opt.certify) return Spectrum::real_line(std::move(w));
  Eigen::Map<const Eigen::VectorXd> lam(w.data(), n);
  const double norm = src.norm();
  const ComplexMatrix scaled = h * lam.cast<std::complex<double>>().asDiagonal();
  const double residual = norm > 0.0 ? (src * h - scaled).norm() / norm : 0.0;
  if (residual > hermitian_tolerance(n))
    throw numerical_failure("eigvals_hermitian: backward error " + std::to_string(residual) + " exceeds tolerance");
  return Spectrum::real_line(std::move(w), residual);
}

inline Spectrum eigvals_hermitian(const ComplexMatrix& h, SolverOptions opt = {}) {
  return eigvals_hermitian(HermitianMatrix::checked(h), opt);
}

// Singular values of an m x n matrix (m >= n), descending. They are carried
// in a RealLine-kind spectrum that keeps the descending order, so the
// contents are not a sorted eigenvalue list; use wishart_spectrum for that.
struct SingularValues {
  std::vector<double> values;  // descending
  std::optional<double> backward_error;
};

inline SingularValues singular_values(const ComplexMatrix& x_in, SolverOptions opt = {}) {
  const int m = static_cast<int>(x_in.rows()), n = static_cast<int>(x_in.cols());
  if (m < n) throw std::invalid_argument("singular_values: need m >= n");
  detail::check_finite(x_in, "singular_values");
  SingularValues out;
  out.values.resize(n);
  if (n == 0) return out;
  ComplexMatrix x = x_in;
  if (!opt.certify) {
    const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, x.data(), m, out.values.data(), nullptr,
                                           1, nullptr, 1);
    detail::check_info(info, "zgesdd", n);
    return out;
  }
  ComplexMatrix u(m, n), vt(n, n);
  const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'S', m, n, x.data(), m, out.values.data(), u.data(), m,
                                         vt.data(), n);
  detail::check_info(info, "zgesdd", n);
  Eigen::Map<const Eigen::VectorXd> s(out.values.data(), n);
  const double norm = x_in.norm();
  const ComplexMatrix us = u * s.cast<std::complex<double>>().asDiagonal();
  const double residual = norm > 0.0 ? (x_in * vt.adjoint() - us).norm() / norm : 0.0;
  if (residual > general_tolerance(std::max(m, n)))
    throw numerical_failure("singular_values: backward error " + std::to_string(residual) + " exceeds tolerance");
  out.backward_error = residual;
  return out;
}

// Eigenvalues σ_i^2 / m of X*X/m, ascending, without forming X*X.
inline Spectrum wishart_spectrum(const GramFactor& x, SolverOptions opt = {}) {
  auto sv = singular_values(x.data, opt);
  std::vector<double> lam(sv.values.size());
  for (std::size_t i = 0; i < lam.size(); ++i) lam[i] = sv.values[i] * sv.values[i] / x.m;
  return Spectrum::real_line(std::move(lam), sv.backward_error);
}

// Spectrum of whatever a sampler produced; dispatch by matrix type.
inline Spectrum spectrum_of(const SampleOutput& s, SolverOptions opt = {}) {
  if (s.spectrum) return *s.spectrum;
  if (auto* g = std::get_if<GeneralMatrix>(&s.matrix)) return eigvals_general(*g, opt);
  if (auto* h = std::get_if<HermitianMatrix>(&s.matrix)) return eigvals_hermitian(*h, opt);
  if (auto* f = std::get_if<GramFactor>(&s.matrix)) return wishart_spectrum(*f, opt);
  throw std::invalid_argument("spectrum_of: sample carries neither a matrix nor a spectrum");
}

}  // namespace gaplab
