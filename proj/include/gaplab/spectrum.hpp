#pragma once

#include <algorithm>
#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

namespace gaplab {

enum class SpectrumKind { ComplexPlane, RealLine };

// Eigenvalues of one matrix (or one directly sampled configuration).
// RealLine spectra are kept sorted ascending and have zero imaginary parts.
struct Spectrum {
  std::vector<std::complex<double>> values;
  SpectrumKind kind = SpectrumKind::ComplexPlane;
  // Certified relative residual; empty when the producer did not certify.
  std::optional<double> backward_error;

  static Spectrum complex_plane(std::vector<std::complex<double>> values,
                                std::optional<double> backward_error = std::nullopt) {
    return Spectrum{std::move(values), SpectrumKind::ComplexPlane, backward_error};
  }

  static Spectrum real_line(std::vector<double> values,
                            std::optional<double> backward_error = std::nullopt) {
    std::sort(values.begin(), values.end());
    Spectrum s;
    s.kind = SpectrumKind::RealLine;
    s.backward_error = backward_error;
    s.values.reserve(values.size());
    for (double v : values) s.values.emplace_back(v, 0.0);
    return s;
  }

  std::size_t size() const noexcept { return values.size(); }
  bool is_real() const noexcept { return kind == SpectrumKind::RealLine; }

  std::vector<double> real_values() const {
    if (!is_real()) throw std::invalid_argument("real_values: spectrum is not RealLine");
    std::vector<double> out;
    out.reserve(values.size());
    for (const auto& v : values) out.push_back(v.real());
    return out;
  }
};

}  // namespace gaplab
