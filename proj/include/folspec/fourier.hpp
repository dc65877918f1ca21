#pragma once

// Period-1 trigonometric polynomials in t, truncated at N modes:
// basis 1, cos_1, sin_1, ..., cos_N, sin_N with cos_m = cos(2 pi m t).

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace folspec {

class NonInvertibleOperator : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class FourierElement {
 public:
  explicit FourierElement(int modes = 0) : modes_(modes), coeffs_(static_cast<std::size_t>(2 * modes + 1), 0.0) {
    if (modes < 0) throw std::invalid_argument("negative Fourier mode count");
  }

  static FourierElement constant(int modes, double c) {
    FourierElement f(modes);
    f.coeffs_[0] = c;
    return f;
  }

  int modes() const noexcept { return modes_; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  double& constant_term() { return coeffs_[0]; }
  double constant_term() const { return coeffs_[0]; }
  double& cos(int m) { return coeffs_[index_cos(m)]; }
  double cos(int m) const { return coeffs_[index_cos(m)]; }
  double& sin(int m) { return coeffs_[index_cos(m) + 1]; }
  double sin(int m) const { return coeffs_[index_cos(m) + 1]; }

  const std::vector<double>& coefficients() const noexcept { return coeffs_; }

  FourierElement derivative() const {
    FourierElement d(modes_);
    for (int m = 1; m <= modes_; ++m) {
      const double w = 2.0 * std::numbers::pi * m;
      d.cos(m) = w * sin(m);
      d.sin(m) = -w * cos(m);
    }
    return d;
  }

  double operator()(double t) const {
    double s = coeffs_[0];
    for (int m = 1; m <= modes_; ++m) {
      const double a = 2.0 * std::numbers::pi * m * t;
      s += cos(m) * std::cos(a) + sin(m) * std::sin(a);
    }
    return s;
  }

  /// Euclidean norm of the coefficient vector.
  double norm() const {
    double s = 0.0;
    for (double c : coeffs_) s += c * c;
    return std::sqrt(s);
  }

  FourierElement& operator+=(const FourierElement& o) {
    check(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  FourierElement& operator-=(const FourierElement& o) {
    check(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  friend FourierElement operator*(double s, FourierElement f) {
    for (auto& c : f.coeffs_) c *= s;
    return f;
  }
  friend FourierElement operator+(FourierElement a, const FourierElement& b) { return a += b; }
  friend FourierElement operator-(FourierElement a, const FourierElement& b) { return a -= b; }

  static std::string basis_label(std::size_t index) {
    if (index == 0) return "1";
    const std::size_t m = (index + 1) / 2;
    return (index % 2 == 1 ? "cos" : "sin") + std::to_string(m);
  }

 private:
  std::size_t index_cos(int m) const {
    if (m < 1 || m > modes_) throw std::out_of_range("Fourier mode " + std::to_string(m) + " out of range");
    return static_cast<std::size_t>(2 * m - 1);
  }
  void check(const FourierElement& o) const {
    if (o.modes_ != modes_) throw std::invalid_argument("Fourier elements with different mode counts");
  }

  int modes_ = 0;
  std::vector<double> coeffs_;
};

/// f' + mu f.
inline FourierElement first_order_operator(double mu, const FourierElement& f) { return f.derivative() + mu * f; }

/// The unique periodic f with f' + mu f = h. Each mode is a 2x2 solve:
///   mu f_c + 2 pi m f_s = h_c,   -2 pi m f_c + mu f_s = h_s.
inline FourierElement fourier_solve(double mu, const FourierElement& h, double tolerance = 1e-8) {
  if (std::fabs(mu) <= tolerance) {
    throw NonInvertibleOperator("f' + mu f = h has no unique periodic solution for mu = " + std::to_string(mu));
  }
  FourierElement f(h.modes());
  f.constant_term() = h.constant_term() / mu;
  for (int m = 1; m <= h.modes(); ++m) {
    const double w = 2.0 * std::numbers::pi * m;
    const double det = mu * mu + w * w;
    f.cos(m) = (mu * h.cos(m) - w * h.sin(m)) / det;
    f.sin(m) = (w * h.cos(m) + mu * h.sin(m)) / det;
  }
  return f;
}

}  // namespace folspec
