#pragma once

// The arrowhead matrix A in SL(2n+1, Z), its spectrum, and the suspension
// model: a torus bundle over the circle whose monodromy acts on the coframe
// alpha_i by the eigenvalues of A.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "folspec/matrix.hpp"
#include "folspec/model.hpp"

namespace folspec {

class SuspensionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 1, 2, 3, 7, 43, ...: each term is one plus the product of all previous ones.
inline std::vector<mpz_class> sylvester_diagonal(int count) {
  std::vector<mpz_class> d;
  mpz_class product = 1;
  for (int k = 0; k < count; ++k) {
    d.push_back(k == 0 ? mpz_class(1) : mpz_class(product + 1));
    product *= d.back();
  }
  return d;
}

/// Fraction-free (Bareiss) determinant.
inline mpz_class integer_determinant(Matrix<mpz_class> m) {
  if (m.rows() != m.cols()) throw DimensionError("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  int sign = 1;
  mpz_class prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t swap = k + 1;
      while (swap < n && m(swap, k) == 0) ++swap;
      if (swap == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(swap, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        mpz_class t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        m(i, j) = t;
      }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

struct MatrixA {
  int n = 0;
  std::vector<mpz_class> diagonal;
  Matrix<mpz_class> entries;
  mpz_class determinant;
};

/// Size 2n+1: diagonal from sylvester_diagonal, ones along the first row and
/// column, zeros elsewhere.
inline MatrixA build_matrix_A(int n) {
  if (n < 1) throw std::invalid_argument("matrix A needs n >= 1");
  MatrixA a;
  a.n = n;
  const auto size = static_cast<std::size_t>(2 * n + 1);
  a.diagonal = sylvester_diagonal(static_cast<int>(size));
  a.entries = Matrix<mpz_class>(size, size);
  for (std::size_t i = 0; i < size; ++i) {
    a.entries(i, i) = a.diagonal[i];
    a.entries(0, i) = 1;
    a.entries(i, 0) = 1;
  }
  a.determinant = integer_determinant(a.entries);
  if (a.determinant != 1) throw SuspensionError("det A = " + a.determinant.get_str() + ", expected 1");
  return a;
}

struct SpectralData {
  std::vector<double> eigenvalues;                // ascending
  std::vector<mpf_class> precise_eigenvalues;     // same, 2048-bit
  std::vector<double> mu;                         // log of each eigenvalue
  std::vector<std::vector<double>> eigenvectors;  // unit length, one per eigenvalue
  double lambda = 0.0;                            // product of the two largest eigenvalues
  double eigenvalue_product = 0.0;
};

namespace detail {

inline constexpr mp_bitcnt_t kSpectralPrecision = 2048;

/// x - d_0 - sum_{j>0} 1/(x - d_j); its zeros are the eigenvalues of A.
inline mpf_class secular(const mpf_class& x, const std::vector<mpf_class>& d) {
  mpf_class s(x - d[0], kSpectralPrecision);
  for (std::size_t j = 1; j < d.size(); ++j) s -= mpf_class(1, kSpectralPrecision) / (x - d[j]);
  return s;
}

/// Bisection for the single zero of the increasing branch of `secular` on (lo, hi).
inline mpf_class bisect(mpf_class lo, mpf_class hi, const std::vector<mpf_class>& d) {
  mpf_class mid(0, kSpectralPrecision);
  for (int it = 0; it < 4000; ++it) {
    mid = (lo + hi) / 2;
    if (mid == lo || mid == hi) break;
    mpf_class width(hi - lo, kSpectralPrecision);
    mpf_class scale(abs(mid), kSpectralPrecision);
    if (width <= scale * mpf_class("1e-200", kSpectralPrecision)) break;
    if (sgn(secular(mid, d)) < 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return mid;
}

}  // namespace detail

/// Spectrum of A. The secular function of an arrowhead matrix is increasing
/// between consecutive poles, so every bracket holds exactly one zero.
inline SpectralData eigen_analysis(const MatrixA& a, double tolerance = 1e-8) {
  using detail::kSpectralPrecision;
  const std::size_t size = a.diagonal.size();
  std::vector<mpf_class> d;
  for (const auto& x : a.diagonal) d.emplace_back(x, kSpectralPrecision);

  // brackets: (-inf, d_1), (d_1, d_2), ..., (d_last, +inf) over the poles d_1..d_last
  std::vector<mpf_class> poles(d.begin() + 1, d.end());
  mpf_class bound(0, kSpectralPrecision);
  for (const auto& x : d) bound += abs(x);
  bound += static_cast<double>(2 * size);  // exceeds the spectral radius
  std::vector<mpf_class> roots;
  for (std::size_t i = 0; i <= poles.size(); ++i) {
    mpf_class lo = i == 0 ? mpf_class(-bound, kSpectralPrecision) : poles[i - 1];
    mpf_class hi = i == poles.size() ? bound : poles[i];
    roots.push_back(detail::bisect(lo, hi, d));
  }
  std::sort(roots.begin(), roots.end());

  SpectralData s;
  s.precise_eigenvalues = roots;
  mpf_class product(1, kSpectralPrecision);
  for (const auto& r : roots) {
    if (sgn(r) <= 0) throw SuspensionError("A has a nonpositive eigenvalue; log undefined");
    s.eigenvalues.push_back(r.get_d());
    // log via mantissa/exponent to survive eigenvalues below double range
    long exp2 = 0;
    const double mant = mpf_get_d_2exp(&exp2, r.get_mpf_t());
    s.mu.push_back(std::log(mant) + static_cast<double>(exp2) * std::log(2.0));
    product *= r;

    std::vector<mpf_class> x(size, mpf_class(0, kSpectralPrecision));
    x[0] = 1;
    mpf_class norm2(1, kSpectralPrecision);
    for (std::size_t j = 1; j < size; ++j) {
      x[j] = mpf_class(1, kSpectralPrecision) / (r - d[j]);
      norm2 += x[j] * x[j];
    }
    const mpf_class norm = sqrt(norm2);
    std::vector<double> v;
    for (const auto& xj : x) v.push_back(mpf_class(xj / norm, kSpectralPrecision).get_d());
    s.eigenvectors.push_back(std::move(v));
  }
  s.eigenvalue_product = product.get_d();
  for (std::size_t i = 1; i < roots.size(); ++i) {
    const mpf_class gap = roots[i] - roots[i - 1];
    const double scale = std::max(1.0, std::fabs(s.eigenvalues[i]));
    if (gap.get_d() <= tolerance * scale) throw SuspensionError("eigenvalues of A collide within tolerance");
  }
  s.lambda = mpf_class(roots[size - 2] * roots[size - 1], kSpectralPrecision).get_d();
  if (std::fabs(s.lambda - 1.0) <= tolerance) throw SuspensionError("lambda = 1; monodromy is not hyperbolic");
  return s;
}

/// Intervals (d_1, d_3), (d_3, d_4), ..., (d_last, inf) and how many
/// eigenvalues each holds. The remaining eigenvalue sits in (0, d_1).
struct IntervalCount {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  std::size_t count = 0;
};

inline std::vector<IntervalCount> eigenvalue_intervals(const MatrixA& a, const SpectralData& s) {
  // endpoints compared in full precision: the top eigenvalues sit within
  // 1/d of their poles, far below double resolution
  std::vector<mpz_class> ends;
  for (std::size_t k = 0; k < a.diagonal.size(); ++k)
    if (k != 1) ends.push_back(a.diagonal[k]);
  std::vector<IntervalCount> out;
  for (std::size_t i = 0; i < ends.size(); ++i) {
    IntervalCount ic;
    ic.lower = ends[i].get_d();
    const bool last = i + 1 == ends.size();
    if (!last) ic.upper = ends[i + 1].get_d();
    for (const auto& x : s.precise_eigenvalues)
      if (cmp(x, ends[i]) > 0 && (last || cmp(x, ends[i + 1]) < 0)) ++ic.count;
    out.push_back(ic);
  }
  return out;
}

struct DiophantineReport {
  int height = 0;
  double min_delta1 = 0.0;  // min |<m,v>| * |m|
  double min_delta2 = 0.0;  // min |<m,v>| * |m|^2
  std::vector<long> argmin_delta1;
  std::vector<long> argmin_delta2;
  std::size_t vectors_scanned = 0;
};

/// Scans integer m with 0 < max|m_i| <= height (one of each pair m, -m).
/// Diagnostic only. Throws when the scan would exceed `budget` vectors.
inline DiophantineReport diophantine_probe(const std::vector<double>& v, int height,
                                           std::size_t budget = 50'000'000) {
  if (height < 1) throw std::invalid_argument("diophantine height must be >= 1");
  if (v.empty()) throw std::invalid_argument("diophantine probe of an empty vector");
  const double side = 2.0 * height + 1.0;
  if (std::pow(side, static_cast<double>(v.size())) / 2.0 > static_cast<double>(budget)) {
    throw std::invalid_argument("diophantine scan of height " + std::to_string(height) + " in dimension " +
                                std::to_string(v.size()) + " exceeds the budget of " + std::to_string(budget) +
                                " vectors");
  }
  DiophantineReport r;
  r.height = height;
  r.min_delta1 = r.min_delta2 = std::numeric_limits<double>::infinity();
  std::vector<long> m(v.size(), -height);
  for (;;) {
    // keep m whose first nonzero entry is positive
    std::size_t first = 0;
    while (first < m.size() && m[first] == 0) ++first;
    if (first < m.size() && m[first] > 0) {
      long double dot = 0, norm2 = 0;
      for (std::size_t i = 0; i < m.size(); ++i) {
        dot += static_cast<long double>(m[i]) * static_cast<long double>(v[i]);
        norm2 += static_cast<long double>(m[i]) * static_cast<long double>(m[i]);
      }
      const double a = static_cast<double>(std::fabs(dot));
      const double len = static_cast<double>(std::sqrt(norm2));
      if (a * len < r.min_delta1) {
        r.min_delta1 = a * len;
        r.argmin_delta1 = m;
      }
      if (a * len * len < r.min_delta2) {
        r.min_delta2 = a * len * len;
        r.argmin_delta2 = m;
      }
      ++r.vectors_scanned;
    }
    std::size_t i = 0;
    while (i < m.size() && m[i] == height) m[i++] = -height;
    if (i == m.size()) break;
    ++m[i];
  }
  return r;
}

inline std::string generator_name(int i) { return "alpha" + std::to_string(i); }

/// Float formatting that round-trips through parse_real.
inline std::string exact_decimal(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// alpha0 = dt and alpha_1..alpha_{2n-1} transverse, alpha_{2n}, alpha_{2n+1}
/// leafwise; d alpha_i = log(lambda_i) alpha0 ^ alpha_i; coefficients are
/// trigonometric polynomials in t with `modes` modes.
inline ModelSpec suspension_spec(int n, int modes) {
  if (n < 1) throw std::invalid_argument("suspension model needs n >= 1");
  if (modes < 1) throw std::invalid_argument("suspension model needs at least one Fourier mode");
  const auto spectral = eigen_analysis(build_matrix_A(n));
  ModelSpec s;
  s.scalar = ScalarKind::ApproxReal;
  s.q = 2 * n;
  s.p = 2;
  s.fourier_modes = modes;
  s.generators.push_back({generator_name(0), {1, 0}});
  for (int i = 1; i <= 2 * n + 1; ++i) s.generators.push_back({generator_name(i), i < 2 * n ? Bidegree{1, 0} : Bidegree{0, 1}});
  for (int i = 1; i <= 2 * n + 1; ++i) {
    s.differentials.push_back(
        {generator_name(i), {{exact_decimal(spectral.mu[static_cast<std::size_t>(i - 1)]), {generator_name(0), generator_name(i)}}}});
  }
  return s;
}

inline BigradedComplex<ApproxReal> build_suspension_model(int n, int modes, ApproxReal backend = {}) {
  return build_from_presentation(suspension_spec(n, modes), backend);
}

}  // namespace folspec
