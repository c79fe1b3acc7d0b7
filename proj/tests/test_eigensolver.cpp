#include <gtest/gtest.h>

#include <Eigen/SVD>
#include <algorithm>
#include <complex>

#include "gaplab/eigensolver.hpp"
#include "gaplab/matrix_sampler.hpp"

using namespace gaplab;
using cd = std::complex<double>;

namespace {

std::vector<cd> sorted_lex(std::vector<cd> v) {
  std::sort(v.begin(), v.end(), [](cd a, cd b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
  return v;
}

// Smallest singular value of A - λI, i.e. min over unit v of ‖(A - λ)v‖.
double residual_oracle(const ComplexMatrix& a, cd lambda) {
  const ComplexMatrix shifted = a - lambda * ComplexMatrix::Identity(a.rows(), a.cols());
  Eigen::JacobiSVD<ComplexMatrix> svd(shifted);
  return svd.singularValues()(a.rows() - 1);
}

}  // namespace

TEST(General, Diagonal) {
  ComplexMatrix a = ComplexMatrix::Zero(3, 3);
  a(0, 0) = 1.0;
  a(1, 1) = cd(0, 2);
  a(2, 2) = -3.0;
  const auto got = sorted_lex(eigvals_general(a).values);
  const auto want = sorted_lex({1.0, cd(0, 2), -3.0});
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(std::abs(got[i] - want[i]), 0.0, 1e-14);
}

TEST(General, Companion) {
  ComplexMatrix a(2, 2);
  a << 0.0, 1.0, 1.0, 0.0;
  const auto got = sorted_lex(eigvals_general(a).values);
  EXPECT_NEAR(std::abs(got[0] + 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(got[1] - 1.0), 0.0, 1e-12);
}

TEST(General, TraceIdentityAndResidual) {
  const auto a = std::get<GeneralMatrix>(sample_ginibre(50, 3).matrix).data;
  const auto sp = eigvals_general(a, {.certify = true});
  ASSERT_EQ(sp.size(), 50u);
  cd sum = 0.0;
  for (auto z : sp.values) sum += z;
  const double fro = a.norm(), tol = general_tolerance(50);
  EXPECT_LE(std::abs(sum - a.trace()), tol * fro);
  ASSERT_TRUE(sp.backward_error.has_value());
  EXPECT_LE(*sp.backward_error, tol);
  for (auto z : sp.values) EXPECT_LE(residual_oracle(a, z), tol * fro);
}

TEST(General, RejectsNonFinite) {
  ComplexMatrix a = ComplexMatrix::Identity(2, 2);
  a(0, 1) = NAN;
  EXPECT_THROW(eigvals_general(a), std::invalid_argument);
}

TEST(Hermitian, SortedSmallCases) {
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d(0, 0) = 3;
  d(1, 1) = 1;
  d(2, 2) = 2;
  EXPECT_EQ(eigvals_hermitian(d).real_values(), (std::vector<double>{1, 2, 3}));
  ComplexMatrix s(2, 2);
  s << 0.0, 1.0, 1.0, 0.0;
  const auto v = eigvals_hermitian(s).real_values();
  EXPECT_NEAR(v[0], -1.0, 1e-15);
  EXPECT_NEAR(v[1], 1.0, 1e-15);
}

TEST(Hermitian, RejectsAsymmetric) {
  ComplexMatrix s(2, 2);
  s << 0.0, 1.0, 2.0, 0.0;
  EXPECT_THROW(eigvals_hermitian(s), std::invalid_argument);
}

TEST(Hermitian, GueTraceAndResidual) {
  const auto s = sample_gue(100, 9);
  const auto& h = std::get<HermitianMatrix>(s.matrix);
  const auto sp = eigvals_hermitian(h, {.certify = true});
  EXPECT_TRUE(std::is_sorted(sp.values.begin(), sp.values.end(), [](cd a, cd b) { return a.real() < b.real(); }));
  double sum = 0.0;
  for (auto z : sp.values) sum += z.real();
  EXPECT_NEAR(sum, h.data().trace().real(), 1e-10 * h.data().norm());
  EXPECT_LE(*sp.backward_error, hermitian_tolerance(100));
  for (auto z : sp.values) EXPECT_LE(residual_oracle(h.data(), z), hermitian_tolerance(100) * h.data().norm());
}

TEST(Singular, SmallCases) {
  const auto id = singular_values(ComplexMatrix::Identity(4, 4));
  for (double s : id.values) EXPECT_NEAR(s, 1.0, 1e-15);
  ComplexMatrix x = ComplexMatrix::Zero(3, 2);
  x(0, 0) = 3;
  x(1, 1) = 4;
  const auto sv = singular_values(x);
  EXPECT_NEAR(sv.values[0], 4.0, 1e-14);
  EXPECT_NEAR(sv.values[1], 3.0, 1e-14);
  EXPECT_THROW(singular_values(ComplexMatrix::Zero(2, 3)), std::invalid_argument);
}

TEST(Singular, MatchesHermitianSolverOnGram) {
  const auto s = sample_wishart_factor(40, 20, 21);
  const ComplexMatrix x = std::get<GramFactor>(s.matrix).data;
  const auto sv = singular_values(x, {.certify = true});
  EXPECT_LE(*sv.backward_error, general_tolerance(40));
  const ComplexMatrix gram = x.adjoint() * x;
  const auto ev = eigvals_hermitian(ComplexMatrix((gram + gram.adjoint()) / 2.0)).real_values();
  for (int i = 0; i < 20; ++i) {
    const double s2 = sv.values[19 - i] * sv.values[19 - i];
    EXPECT_NEAR(s2, ev[i], 1e-10 * ev[i]);
  }
}

TEST(Dispatch, SpectrumKindsFollowSampler) {
  EXPECT_FALSE(spectrum_of(sample_ginibre(5, 1)).is_real());
  EXPECT_TRUE(spectrum_of(sample_gue(5, 1)).is_real());
  const auto w = spectrum_of(sample_wishart_factor(8, 5, 1));
  EXPECT_TRUE(w.is_real());
  EXPECT_EQ(w.size(), 5u);
}
