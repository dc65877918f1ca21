#pragma once

// Reference computations for the tests. None of these go through the library's
// linear algebra or assembly code.

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gmpxx.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <vector>

#include "folspec/complex.hpp"
#include "folspec/fourier.hpp"

namespace oracle {

using folspec::Bidegree;
using folspec::Matrix;

/// Column-by-column Gaussian elimination over Q on a dense copy.
inline std::size_t rank(const Matrix<mpq_class>& m) {
  std::vector<std::vector<mpq_class>> a(m.cols(), std::vector<mpq_class>(m.rows()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a[j][i] = m(i, j);
  // eliminate on the transpose: rank(A) = rank(A^T)
  std::size_t r = 0;
  const std::size_t rows = a.size(), cols = m.rows();
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t i = r; i < rows; ++i)
      if (a[i][c] != 0) {
        piv = i;
        break;
      }
    if (piv == rows) continue;
    std::swap(a[r], a[piv]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const mpq_class f = a[i][c] / a[r][c];
      for (std::size_t k = c; k < cols; ++k) a[i][k] -= f * a[r][k];
    }
    ++r;
  }
  return r;
}

inline std::size_t rank(const Matrix<double>& m, double tol = 1e-9) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(e);
  lu.setThreshold(tol);
  return static_cast<std::size_t>(lu.rank());
}

/// Total differential of degree r assembled straight from raw component
/// blocks, with cells ordered by descending u (the library uses ascending).
template <class T>
struct Assembled {
  Matrix<T> d;
  std::vector<Bidegree> source_cells;
  std::vector<std::size_t> source_offsets;
};

template <class T>
std::vector<std::pair<Bidegree, std::size_t>> cells_of_degree(const folspec::ComplexData<T>& data, int r) {
  std::vector<std::pair<Bidegree, std::size_t>> out;
  std::size_t off = 0;
  for (int u = data.q; u >= 0; --u) {
    const int v = r - u;
    if (v < 0 || v > data.p) continue;
    out.push_back({{u, v}, off});
    off += data.cell_dim({u, v});
  }
  return out;
}

template <class T>
std::size_t degree_dim(const folspec::ComplexData<T>& data, int r) {
  std::size_t n = 0;
  for (const auto& [b, off] : cells_of_degree(data, r)) n += data.cell_dim(b);
  return n;
}

template <class T>
Assembled<T> assemble(const folspec::ComplexData<T>& data, int r) {
  Assembled<T> a;
  a.d = Matrix<T>(degree_dim(data, r + 1), degree_dim(data, r));
  const auto targets = cells_of_degree(data, r + 1);
  for (const auto& [s, soff] : cells_of_degree(data, r)) {
    a.source_cells.push_back(s);
    a.source_offsets.push_back(soff);
    for (int c = 0; c < 3; ++c) {
      const Bidegree shift = folspec::shift_of(static_cast<folspec::Component>(c));
      const Bidegree t{s.u + shift.u, s.v + shift.v};
      if (!data.in_range(t) || data.cell_dim(t) == 0 || data.cell_dim(s) == 0) continue;
      std::size_t toff = 0;
      for (const auto& [b, o] : targets)
        if (b == t) toff = o;
      const auto& blk = data.components[static_cast<std::size_t>(c)][data.cell_index(s)];
      for (std::size_t i = 0; i < blk.rows(); ++i)
        for (std::size_t j = 0; j < blk.cols(); ++j) a.d(toff + i, soff + j) += blk(i, j);
    }
  }
  return a;
}

/// Source cells whose columns of d_{r+1} d_r are nonzero (above `threshold`
/// in absolute value for doubles).
template <class T>
std::set<Bidegree> d_squared_failing_cells(const folspec::ComplexData<T>& data, double threshold = 0.0) {
  std::set<Bidegree> failing;
  for (int r = 0; r + 1 <= data.q + data.p; ++r) {
    const auto first = assemble(data, r);
    const auto second = assemble(data, r + 1);
    const auto prod = second.d * first.d;
    for (std::size_t k = 0; k < first.source_cells.size(); ++k) {
      const Bidegree s = first.source_cells[k];
      for (std::size_t j = 0; j < data.cell_dim(s); ++j)
        for (std::size_t i = 0; i < prod.rows(); ++i) {
          const auto& x = prod(i, first.source_offsets[k] + j);
          bool nonzero;
          if constexpr (std::is_same_v<T, double>) {
            nonzero = std::fabs(x) > threshold;
          } else {
            nonzero = x != 0;
          }
          if (nonzero) failing.insert(s);
        }
    }
  }
  return failing;
}

/// Betti numbers of the total complex via oracle ranks.
template <class T>
std::vector<std::size_t> betti(const folspec::ComplexData<T>& data) {
  const int top = data.q + data.p;
  std::vector<std::size_t> ranks;
  for (int r = 0; r <= top; ++r) ranks.push_back(rank(assemble(data, r).d));
  std::vector<std::size_t> b;
  for (int r = 0; r <= top; ++r) {
    const std::size_t in = r > 0 ? ranks[static_cast<std::size_t>(r - 1)] : 0;
    b.push_back(degree_dim(data, r) - ranks[static_cast<std::size_t>(r)] - in);
  }
  return b;
}

/// Periodic solution of f' + mu f = h as
///   f(t) = lambda^{-t} (k + int_0^t lambda^x h(x) dx),  lambda = e^mu,
///   k = (lambda - 1)^{-1} int_0^1 lambda^x h(x) dx,
/// projected back onto the modes of h by quadrature.
inline std::vector<double> closed_form_projection(double mu, const folspec::FourierElement& h) {
  using boost::math::quadrature::gauss_kronrod;
  const double lambda = std::exp(mu);
  auto weighted = [&](double x) { return std::pow(lambda, x) * h(x); };
  const double k = gauss_kronrod<double, 61>::integrate(weighted, 0.0, 1.0, 6, 1e-11) / (lambda - 1.0);
  auto f = [&](double t) {
    const double inner = t == 0.0 ? 0.0 : gauss_kronrod<double, 61>::integrate(weighted, 0.0, t, 6, 1e-11);
    return std::pow(lambda, -t) * (k + inner);
  };
  std::vector<double> coeffs;
  coeffs.push_back(gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 6, 1e-11));
  for (int m = 1; m <= h.modes(); ++m) {
    const double w = 2.0 * std::numbers::pi * m;
    coeffs.push_back(2.0 * gauss_kronrod<double, 61>::integrate([&](double t) { return f(t) * std::cos(w * t); }, 0.0, 1.0, 6, 1e-11));
    coeffs.push_back(2.0 * gauss_kronrod<double, 61>::integrate([&](double t) { return f(t) * std::sin(w * t); }, 0.0, 1.0, 6, 1e-11));
  }
  return coeffs;
}

/// Roots of x^3 + a x^2 + b x + c with three real roots, trigonometric method, ascending.
inline std::vector<double> cubic_roots(double a, double b, double c) {
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const double r = 2.0 * std::sqrt(-p / 3.0);
  const double phi = std::acos(3.0 * q / (p * r));
  std::vector<double> x;
  for (int k = 0; k < 3; ++k) x.push_back(r * std::cos((phi - 2.0 * std::numbers::pi * k) / 3.0) - a / 3.0);
  std::sort(x.begin(), x.end());
  return x;
}

/// Laplace expansion along the first row; exponential, fine for size <= 9.
inline mpz_class cofactor_determinant(const std::vector<std::vector<mpz_class>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  mpz_class det = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j] == 0) continue;
    std::vector<std::vector<mpz_class>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<mpz_class> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      minor.push_back(std::move(row));
    }
    const mpz_class sub = cofactor_determinant(minor);
    det += (j % 2 == 0 ? 1 : -1) * m[0][j] * sub;
  }
  return det;
}

}  // namespace oracle
