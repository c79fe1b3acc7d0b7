#pragma once

#include <stdexcept>
#include <string>

namespace gaplab {

// Raised when a computation produced a value that violates a numerical
// contract (negative determinant of a PSD kernel matrix, residual above
// tolerance, overflow on a path that must not overflow).
class numerical_failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative eigensolver hit its iteration cap.
class convergence_failure : public numerical_failure {
 public:
  convergence_failure(const std::string& what, int dimension, int unconverged_from)
      : numerical_failure(what), dimension_(dimension), unconverged_from_(unconverged_from) {}

  int dimension() const noexcept { return dimension_; }
  // 1-based index of the first eigenvalue that did not converge (LAPACK info).
  int unconverged_from() const noexcept { return unconverged_from_; }

 private:
  int dimension_;
  int unconverged_from_;
};

// A truncated series was asked for more terms than the numeric budget allows.
class truncation_error : public numerical_failure {
 public:
  using numerical_failure::numerical_failure;
};

}  // namespace gaplab
