#pragma once

// Rescaled Laplacian Delta_h = d_h d_h^T + d_h^T d_h with
// d_h = d01 + h d10 + h^2 d2m1 (adjoints are transposes).

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "folspec/complex.hpp"

namespace folspec {

template <Backend B>
Matrix<double> adiabatic_laplacian(const BigradedComplex<B>& c, double h, int r) {
  if constexpr (B::kind == ScalarKind::ExactRational) {
    throw UnsupportedBackend("adiabatic spectra need the float backend (rebuild the model with scalar \"float\")");
  } else {
    if (!(h > 0.0)) throw std::invalid_argument("adiabatic parameter h must be positive");
    if (r < 0 || r > c.max_degree()) throw std::invalid_argument("degree out of range");
    const std::array<double, 3> w{1.0, h, h * h};
    const auto out = weighted_total_differential(c, r, w);
    const auto in = weighted_total_differential(c, r - 1, w);
    Matrix<double> lap = out.transpose() * out;
    if (in.cols() > 0) lap += in * in.transpose();
    return lap;
  }
}

/// Full ascending spectrum of Delta_h on total degree r.
template <Backend B>
std::vector<double> adiabatic_spectrum(const BigradedComplex<B>& c, double h, int r) {
  if constexpr (B::kind == ScalarKind::ExactRational) {
    throw UnsupportedBackend("adiabatic spectra need the float backend (rebuild the model with scalar \"float\")");
  } else {
    return symmetric_eigenvalues(c.backend(), adiabatic_laplacian(c, h, r));
  }
}

/// i-th smallest eigenvalue followed across an h sweep.
struct EigenBranch {
  std::vector<double> values;  // one per h
  bool kernel = false;         // numerically zero at every h
  double exponent = 0.0;       // least-squares slope of log(value) against log(h)
};

struct AdiabaticSweep {
  int degree = 0;
  std::vector<double> h;
  std::vector<std::vector<double>> spectra;  // [h index][eigen index]
  std::vector<EigenBranch> branches;
  std::vector<std::size_t> kernel_dims;    // zero eigenvalues per h
  std::size_t kernel_dim_at_unit_h = 0;  // zero eigenvalues at h = 1, if swept
  double min_eigenvalue = 0.0;

  /// Branches that are zero or fall off like h^2 or faster.
  std::size_t decaying_branches(double min_exponent = 1.9) const {
    std::size_t n = 0;
    for (const auto& b : branches)
      if (b.kernel || b.exponent >= min_exponent) ++n;
    return n;
  }
};

/// Diagnostic only: reports branch decay, asserts nothing.
template <Backend B>
AdiabaticSweep adiabatic_sweep(const BigradedComplex<B>& c, const std::vector<double>& hs, int r,
                               double zero_threshold = 1e-10) {
  AdiabaticSweep s;
  s.degree = r;
  s.h = hs;
  for (double h : hs) s.spectra.push_back(adiabatic_spectrum(c, h, r));
  const std::size_t n = c.degree_dim(r);
  s.min_eigenvalue = 0.0;
  for (const auto& spec : s.spectra)
    for (double x : spec) s.min_eigenvalue = std::min(s.min_eigenvalue, x);
  for (std::size_t i = 0; i < hs.size(); ++i) {
    std::size_t zeros = 0;
    for (double x : s.spectra[i])
      if (std::fabs(x) <= zero_threshold) ++zeros;
    s.kernel_dims.push_back(zeros);
    if (hs[i] == 1.0) s.kernel_dim_at_unit_h = zeros;
  }
  for (std::size_t j = 0; j < n; ++j) {
    EigenBranch b;
    for (const auto& spec : s.spectra) b.values.push_back(spec[j]);
    b.kernel = true;
    for (double x : b.values)
      if (std::fabs(x) > zero_threshold) b.kernel = false;
    // slope from points where the eigenvalue is resolvable
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < hs.size(); ++i) {
      if (b.values[i] <= zero_threshold) continue;
      const double x = std::log(hs[i]);
      const double y = std::log(b.values[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++m;
    }
    const double denom = m * sxx - sx * sx;
    b.exponent = (m >= 2 && std::fabs(denom) > 0.0) ? (m * sxy - sx * sy) / denom : 0.0;
    s.branches.push_back(std::move(b));
  }
  return s;
}

}  // namespace folspec
