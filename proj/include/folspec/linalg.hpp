#pragma once

// Subspace calculus over the two scalar backends. Exact results come from
// row reduction over Q; approximate results from an SVD with the relative
// rank rule documented on ApproxReal.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "folspec/matrix.hpp"
#include "folspec/scalar.hpp"

namespace folspec {

/// Raised when a subquotient is requested for w not contained in v. Either an
/// engine bug or a tolerance that is too tight/loose for the input.
class ContainmentError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A subspace of T^ambient_dim, held as a matrix whose columns are a basis.
/// Factories in this header always produce independent columns; the
/// constructor trusts its caller.
template <class T>
class Subspace {
 public:
  Subspace() = default;
  Subspace(std::size_t ambient_dim, Matrix<T> basis) : ambient_(ambient_dim), basis_(std::move(basis)) {
    if (basis_.rows() != ambient_) throw DimensionError("subspace basis rows != ambient dimension");
  }

  static Subspace zero(std::size_t ambient_dim) { return Subspace(ambient_dim, Matrix<T>(ambient_dim, 0)); }
  static Subspace full(std::size_t ambient_dim) { return Subspace(ambient_dim, Matrix<T>::identity(ambient_dim)); }

  /// Span of the standard basis vectors with the given indices.
  static Subspace coordinate(std::size_t ambient_dim, const std::vector<std::size_t>& indices) {
    Matrix<T> b(ambient_dim, indices.size());
    for (std::size_t j = 0; j < indices.size(); ++j) b(indices[j], j) = T(1);
    return Subspace(ambient_dim, std::move(b));
  }

  std::size_t ambient_dim() const noexcept { return ambient_; }
  std::size_t dim() const noexcept { return basis_.cols(); }
  const Matrix<T>& basis() const noexcept { return basis_; }

 private:
  std::size_t ambient_ = 0;
  Matrix<T> basis_;
};

template <Backend B>
using MatrixOf = Matrix<scalar_t<B>>;
template <Backend B>
using SubspaceOf = Subspace<scalar_t<B>>;

namespace detail {

struct Echelon {
  Matrix<mpq_class> reduced;
  std::vector<std::size_t> pivots;
};

inline Echelon row_reduce(Matrix<mpq_class> m) {
  Echelon e;
  std::size_t row = 0;
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t pivot = row;
    while (pivot < rows && sgn(m(pivot, col)) == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != row)
      for (std::size_t j = 0; j < cols; ++j) std::swap(m(pivot, j), m(row, j));
    const mpq_class inv = 1 / m(row, col);
    for (std::size_t j = col; j < cols; ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == row || sgn(m(i, col)) == 0) continue;
      const mpq_class factor = m(i, col);
      for (std::size_t j = col; j < cols; ++j) m(i, j) -= factor * m(row, j);
    }
    e.pivots.push_back(col);
    ++row;
  }
  e.reduced = std::move(m);
  return e;
}

inline Eigen::MatrixXd to_eigen(const Matrix<double>& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

inline Matrix<double> from_eigen(const Eigen::MatrixXd& e) {
  Matrix<double> m(e.rows(), e.cols());
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
  return m;
}

struct Svd {
  Eigen::MatrixXd u;  // thin
  Eigen::MatrixXd v;  // full
  Eigen::VectorXd singular;
  std::size_t rank = 0;
};

inline Svd svd(const ApproxReal& be, const Matrix<double>& m) {
  Svd out;
  if (m.empty()) {
    out.u = Eigen::MatrixXd(m.rows(), 0);
    out.v = Eigen::MatrixXd::Identity(m.cols(), m.cols());
    return out;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> s(to_eigen(m), Eigen::ComputeFullU | Eigen::ComputeFullV);
  out.u = s.matrixU();
  out.v = s.matrixV();
  out.singular = s.singularValues();
  const double top = out.singular.size() ? out.singular(0) : 0.0;
  if (top > 0.0 && std::isfinite(top)) {
    const double threshold = be.rank_tolerance * top * static_cast<double>(std::max(m.rows(), m.cols()));
    for (Eigen::Index i = 0; i < out.singular.size(); ++i)
      if (out.singular(i) >= threshold) ++out.rank;
  }
  return out;
}

}  // namespace detail

inline std::size_t rank(const ExactRational&, const Matrix<mpq_class>& m) {
  if (m.empty()) return 0;
  return detail::row_reduce(m).pivots.size();
}

inline std::size_t rank(const ApproxReal& be, const Matrix<double>& m) { return detail::svd(be, m).rank; }

inline Subspace<mpq_class> kernel_basis(const ExactRational&, const Matrix<mpq_class>& m) {
  const std::size_t n = m.cols();
  if (m.rows() == 0) return Subspace<mpq_class>::full(n);
  const auto e = detail::row_reduce(m);
  std::vector<bool> is_pivot(n, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  Matrix<mpq_class> k(n, n - e.pivots.size());
  std::size_t col = 0;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    k(f, col) = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) k(e.pivots[r], col) = -e.reduced(r, f);
    ++col;
  }
  return Subspace<mpq_class>(n, std::move(k));
}

inline Subspace<double> kernel_basis(const ApproxReal& be, const Matrix<double>& m) {
  const auto s = detail::svd(be, m);
  const auto n = static_cast<Eigen::Index>(m.cols());
  const auto r = static_cast<Eigen::Index>(s.rank);
  return Subspace<double>(m.cols(), detail::from_eigen(s.v.rightCols(n - r)));
}

/// Column space. Exact: the pivot columns of m itself. Approximate: an
/// orthonormal basis.
inline Subspace<mpq_class> image_basis(const ExactRational&, const Matrix<mpq_class>& m) {
  if (m.empty()) return Subspace<mpq_class>::zero(m.rows());
  const auto e = detail::row_reduce(m);
  return Subspace<mpq_class>(m.rows(), m.select_columns(e.pivots));
}

inline Subspace<double> image_basis(const ApproxReal& be, const Matrix<double>& m) {
  const auto s = detail::svd(be, m);
  return Subspace<double>(m.rows(), detail::from_eigen(s.u.leftCols(static_cast<Eigen::Index>(s.rank))));
}

/// Greedy left-to-right selection of columns that raise the rank.
inline std::vector<std::size_t> independent_columns(const ExactRational&, const Matrix<mpq_class>& m) {
  if (m.empty()) return {};
  return detail::row_reduce(m).pivots;
}

inline std::vector<std::size_t> independent_columns(const ApproxReal& be, const Matrix<double>& m) {
  std::vector<std::size_t> chosen;
  if (m.empty()) return chosen;
  const Eigen::MatrixXd a = detail::to_eigen(m);
  const double scale = a.colwise().norm().maxCoeff();
  if (!(scale > 0.0)) return chosen;
  const double threshold = be.rank_tolerance * scale * static_cast<double>(std::max(m.rows(), m.cols()));
  Eigen::MatrixXd q(a.rows(), 0);
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    Eigen::VectorXd r = a.col(j);
    for (int pass = 0; pass < 2; ++pass) r -= q * (q.transpose() * r);
    const double norm = r.norm();
    if (norm >= threshold) {
      q.conservativeResize(Eigen::NoChange, q.cols() + 1);
      q.col(q.cols() - 1) = r / norm;
      chosen.push_back(static_cast<std::size_t>(j));
    }
  }
  return chosen;
}

template <Backend B>
bool contains(const B& be, const SubspaceOf<B>& v, const SubspaceOf<B>& w) {
  if (v.ambient_dim() != w.ambient_dim()) throw DimensionError("contains: ambient dimension mismatch");
  if (w.dim() == 0) return true;
  if (w.dim() > v.dim()) return false;
  return rank(be, MatrixOf<B>::hcat(v.basis(), w.basis())) == v.dim();
}

template <Backend B>
SubspaceOf<B> subspace_sum(const B& be, const SubspaceOf<B>& a, const SubspaceOf<B>& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw DimensionError("subspace_sum: ambient dimension mismatch");
  return image_basis(be, MatrixOf<B>::hcat(a.basis(), b.basis()));
}

template <Backend B>
SubspaceOf<B> subspace_intersection(const B& be, const SubspaceOf<B>& a, const SubspaceOf<B>& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw DimensionError("subspace_intersection: ambient dimension mismatch");
  const std::size_t n = a.ambient_dim();
  if (a.dim() == 0 || b.dim() == 0) return SubspaceOf<B>::zero(n);
  // x in ker [A | -B]  <=>  A x_a = B x_b.
  const auto k = kernel_basis(be, MatrixOf<B>::hcat(a.basis(), -b.basis()));
  return image_basis(be, a.basis() * k.basis().row_range(0, a.dim()));
}

/// {x : m x in w}.
template <Backend B>
SubspaceOf<B> preimage_subspace(const B& be, const MatrixOf<B>& m, const SubspaceOf<B>& w) {
  if (w.ambient_dim() != m.rows()) throw DimensionError("preimage_subspace: subspace lives in the wrong space");
  if (m.rows() == 0) return SubspaceOf<B>::full(m.cols());
  const auto k = kernel_basis(be, MatrixOf<B>::hcat(m, -w.basis()));
  return image_basis(be, k.basis().row_range(0, m.cols()));
}

/// dim v - dim w, after verifying w is a subspace of v.
template <Backend B>
std::size_t quotient_dim(const B& be, const SubspaceOf<B>& v, const SubspaceOf<B>& w) {
  if (!contains(be, v, w)) {
    std::string msg = "quotient_dim: denominator (dim " + std::to_string(w.dim()) +
                      ") is not contained in numerator (dim " + std::to_string(v.dim()) + ")";
    if constexpr (B::kind == ScalarKind::ApproxReal) msg += " at rank tolerance " + format_scalar(be.rank_tolerance);
    throw ContainmentError(msg);
  }
  return v.dim() - w.dim();
}

template <Backend B>
SubspaceOf<B> span(const B& be, const MatrixOf<B>& generators) {
  return image_basis(be, generators);
}

/// Ascending eigenvalues of a symmetric matrix, with multiplicity.
inline std::vector<double> symmetric_eigenvalues(const ApproxReal& be, const Matrix<double>& m) {
  if (m.rows() != m.cols()) throw DimensionError("symmetric_eigenvalues: matrix is not square");
  if (m.rows() == 0) return {};
  const Eigen::MatrixXd a = detail::to_eigen(m);
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > be.rank_tolerance * scale) {
    throw std::invalid_argument("symmetric_eigenvalues: matrix is not symmetric (max |m - m^T| = " +
                                format_scalar(asym) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 * (a + a.transpose()), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("symmetric_eigenvalues: solver did not converge");
  std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<double> symmetric_eigenvalues(const ExactRational&, const Matrix<mpq_class>&) {
  throw UnsupportedBackend("symmetric_eigenvalues requires the float backend");
}

}  // namespace folspec
