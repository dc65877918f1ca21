#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <sstream>
#include <string>
#include <vector>

#include "folspec/linalg.hpp"

namespace folspec {

/// (transverse degree u, leafwise degree v).
struct Bidegree {
  int u = 0;
  int v = 0;
  friend auto operator<=>(const Bidegree&, const Bidegree&) = default;
  friend Bidegree operator+(Bidegree a, Bidegree b) { return {a.u + b.u, a.v + b.v}; }
  int total() const noexcept { return u + v; }
};

inline std::string to_string(Bidegree b) { return "(" + std::to_string(b.u) + "," + std::to_string(b.v) + ")"; }

/// The three pieces of d on a foliated manifold: leafwise, transverse, and
/// the curvature term.
enum class Component { D01 = 0, D10 = 1, D2m1 = 2 };

inline constexpr std::array<Component, 3> all_components{Component::D01, Component::D10, Component::D2m1};

constexpr Bidegree shift_of(Component c) {
  switch (c) {
    case Component::D01: return {0, 1};
    case Component::D10: return {1, 0};
    case Component::D2m1: return {2, -1};
  }
  return {0, 0};
}

inline std::string to_string(Component c) {
  switch (c) {
    case Component::D01: return "d01";
    case Component::D10: return "d10";
    case Component::D2m1: return "d2m1";
  }
  return "?";
}

/// Raw description of a complex: cell labels and the component matrices,
/// indexed by source cell. Missing component vectors mean "all zero".
template <class T>
struct ComplexData {
  int q = 0;
  int p = 0;
  std::vector<std::vector<std::string>> labels;      // [cell index]
  std::array<std::vector<Matrix<T>>, 3> components;  // [component][source cell index]

  std::size_t cell_index(Bidegree b) const { return static_cast<std::size_t>(b.u * (p + 1) + b.v); }
  bool in_range(Bidegree b) const { return b.u >= 0 && b.u <= q && b.v >= 0 && b.v <= p; }
  std::size_t cell_dim(Bidegree b) const { return in_range(b) ? labels[cell_index(b)].size() : 0; }
};

/// The cells of one total degree, ordered by ascending u, and where each cell
/// starts inside the total-degree coordinate vector.
struct DegreeLayout {
  int degree = 0;
  std::vector<Bidegree> cells;
  std::vector<std::size_t> offsets;
  std::size_t dim = 0;

  std::size_t offset_of(Bidegree b) const {
    for (std::size_t i = 0; i < cells.size(); ++i)
      if (cells[i] == b) return offsets[i];
    throw DimensionError("cell " + to_string(b) + " is not in degree " + std::to_string(degree));
  }
};

/// One failing d^2 = 0 relation, keyed by its source cell.
struct RelationFailure {
  Bidegree cell;
  int relation = 0;  // 1..5, see relation_shift
  double max_residual = 0.0;
};

/// Target shift of relation i (1-based): (0,2), (1,1), (2,0), (3,-1), (4,-2).
constexpr Bidegree relation_shift(int relation) { return {relation - 1, 3 - relation}; }

inline std::string relation_name(int relation) {
  static const char* names[] = {"d01.d01", "d01.d10 + d10.d01", "d10.d10 + d01.d2m1 + d2m1.d01",
                                "d10.d2m1 + d2m1.d10", "d2m1.d2m1"};
  return names[relation - 1];
}

struct ValidationReport {
  std::vector<RelationFailure> failures;
  bool valid() const noexcept { return failures.empty(); }

  std::vector<Bidegree> failing_cells() const {
    std::vector<Bidegree> cells;
    for (const auto& f : failures) cells.push_back(f.cell);
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    return cells;
  }

  std::string describe() const {
    if (valid()) return "valid: all five d^2 = 0 relations hold\n";
    std::ostringstream os;
    os << "invalid: " << failures.size() << " failing relation(s)\n";
    for (const auto& f : failures) {
      os << "  cell " << to_string(f.cell) << " relation " << f.relation << " (" << relation_name(f.relation)
         << ") max residual " << f.max_residual << "\n";
    }
    return os.str();
  }
};

/// A finite bigraded complex with d = d01 + d10 + d2m1. Immutable; the
/// formal adjoints are the transposes (the declared basis is orthonormal).
template <Backend B>
class BigradedComplex {
 public:
  using scalar = scalar_t<B>;
  using matrix = Matrix<scalar>;

  BigradedComplex(B backend, ComplexData<scalar> data) : backend_(backend), data_(std::move(data)) {
    if (data_.q < 0 || data_.p < 0) throw DimensionError("negative q or p");
    const auto ncells = static_cast<std::size_t>((data_.q + 1) * (data_.p + 1));
    if (data_.labels.empty()) data_.labels.resize(ncells);
    if (data_.labels.size() != ncells) throw DimensionError("label table has wrong number of cells");
    for (auto c : all_components) {
      auto& comp = data_.components[static_cast<int>(c)];
      if (comp.empty()) comp.resize(ncells);
      if (comp.size() != ncells) throw DimensionError(to_string(c) + " has wrong number of cells");
      for (int u = 0; u <= data_.q; ++u)
        for (int v = 0; v <= data_.p; ++v) {
          const Bidegree src{u, v};
          auto& m = comp[data_.cell_index(src)];
          const std::size_t rows = data_.cell_dim(src + shift_of(c));
          const std::size_t cols = data_.cell_dim(src);
          if (m.rows() == 0 && m.cols() == 0) m = matrix(rows, cols);
          if (m.rows() != rows || m.cols() != cols) {
            throw DimensionError(to_string(c) + " at " + to_string(src) + " is " + std::to_string(m.rows()) + "x" +
                                 std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" +
                                 std::to_string(cols));
          }
        }
    }
    for (int r = 0; r <= data_.q + data_.p; ++r) {
      DegreeLayout l;
      l.degree = r;
      for (int u = std::max(0, r - data_.p); u <= std::min(data_.q, r); ++u) {
        l.cells.push_back({u, r - u});
        l.offsets.push_back(l.dim);
        l.dim += data_.cell_dim({u, r - u});
      }
      layouts_.push_back(std::move(l));
    }
  }

  const B& backend() const noexcept { return backend_; }
  int q() const noexcept { return data_.q; }
  int p() const noexcept { return data_.p; }
  int max_degree() const noexcept { return data_.q + data_.p; }
  const ComplexData<scalar>& data() const noexcept { return data_; }

  bool in_range(Bidegree b) const { return data_.in_range(b); }
  std::size_t cell_dim(Bidegree b) const { return data_.cell_dim(b); }
  const std::vector<std::string>& labels(Bidegree b) const { return data_.labels.at(data_.cell_index(b)); }

  /// Component c restricted to the source cell; a zero-sized matrix when the
  /// target falls outside the complex.
  const matrix& component(Component c, Bidegree source) const {
    if (!in_range(source)) throw DimensionError("component source " + to_string(source) + " out of range");
    return data_.components[static_cast<int>(c)][data_.cell_index(source)];
  }

  /// Layout of total degree r; empty for r outside 0..p+q.
  DegreeLayout layout(int r) const {
    if (r < 0 || r > max_degree()) return DegreeLayout{r, {}, {}, 0};
    return layouts_[static_cast<std::size_t>(r)];
  }

  std::size_t degree_dim(int r) const { return layout(r).dim; }

  std::size_t total_dim() const {
    std::size_t n = 0;
    for (const auto& l : layouts_) n += l.dim;
    return n;
  }

 private:
  B backend_;
  ComplexData<scalar> data_;
  std::vector<DegreeLayout> layouts_;
};

/// d restricted to total degree r, with component c scaled by weights[c].
template <Backend B>
MatrixOf<B> weighted_total_differential(const BigradedComplex<B>& c, int r, const std::array<scalar_t<B>, 3>& weights) {
  const auto src = c.layout(r);
  const auto dst = c.layout(r + 1);
  MatrixOf<B> m(dst.dim, src.dim);
  for (std::size_t i = 0; i < src.cells.size(); ++i) {
    const Bidegree s = src.cells[i];
    for (auto comp : all_components) {
      const Bidegree t = s + shift_of(comp);
      if (!c.in_range(t) || c.cell_dim(t) == 0 || c.cell_dim(s) == 0) continue;
      const auto& w = weights[static_cast<int>(comp)];
      if (is_zero(w)) continue;
      const auto& block = c.component(comp, s);
      const std::size_t r0 = dst.offset_of(t);
      const std::size_t c0 = src.offsets[i];
      for (std::size_t a = 0; a < block.rows(); ++a)
        for (std::size_t b = 0; b < block.cols(); ++b) m(r0 + a, c0 + b) = w * block(a, b);
    }
  }
  return m;
}

/// The full differential on total degree r (rows: degree r+1, cols: degree r).
template <Backend B>
MatrixOf<B> total_differential(const BigradedComplex<B>& c, int r) {
  using S = scalar_t<B>;
  return weighted_total_differential(c, r, std::array<S, 3>{S(1), S(1), S(1)});
}

/// Omega_k^r: the coordinate subspace of degree r spanned by cells with u >= k.
template <Backend B>
SubspaceOf<B> filtration_subspace(const BigradedComplex<B>& c, int k, int r) {
  const auto l = c.layout(r);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < l.cells.size(); ++i) {
    if (l.cells[i].u < k) continue;
    for (std::size_t j = 0; j < c.cell_dim(l.cells[i]); ++j) idx.push_back(l.offsets[i] + j);
  }
  return SubspaceOf<B>::coordinate(l.dim, idx);
}

/// Rows of the degree-(b.u+b.v) coordinate vector that belong to cell b.
template <Backend B>
MatrixOf<B> project_to_cell(const BigradedComplex<B>& c, Bidegree b, const MatrixOf<B>& total) {
  const auto l = c.layout(b.total());
  if (total.rows() != l.dim) throw DimensionError("project_to_cell: vector has wrong degree");
  if (!c.in_range(b)) return MatrixOf<B>(0, total.cols());
  const std::size_t off = l.offset_of(b);
  return total.row_range(off, off + c.cell_dim(b));
}

/// Embeds cell-coordinate columns into the total-degree space.
template <Backend B>
MatrixOf<B> embed_cell(const BigradedComplex<B>& c, Bidegree b, const MatrixOf<B>& cell_vectors) {
  const auto l = c.layout(b.total());
  MatrixOf<B> out(l.dim, cell_vectors.cols());
  if (cell_vectors.rows() == 0) return out;
  out.set_block(l.offset_of(b), 0, cell_vectors);
  return out;
}

/// Checks the five bidegree pieces of d^2 = 0 on every source cell.
template <Backend B>
ValidationReport validate(const BigradedComplex<B>& c) {
  ValidationReport report;
  double scale = 0.0;
  if constexpr (B::kind == ScalarKind::ApproxReal) {
    for (auto comp : all_components)
      for (const auto& m : c.data().components[static_cast<int>(comp)])
        for (const auto& x : m.data()) scale = std::max(scale, std::fabs(x));
  }
  for (int u = 0; u <= c.q(); ++u)
    for (int v = 0; v <= c.p(); ++v) {
      const Bidegree s{u, v};
      if (c.cell_dim(s) == 0) continue;
      for (int rel = 1; rel <= 5; ++rel) {
        const Bidegree t = s + relation_shift(rel);
        if (!c.in_range(t) || c.cell_dim(t) == 0) continue;
        MatrixOf<B> sum(c.cell_dim(t), c.cell_dim(s));
        for (auto first : all_components)
          for (auto second : all_components) {
            if (shift_of(first) + shift_of(second) != relation_shift(rel)) continue;
            const Bidegree mid = s + shift_of(first);
            if (!c.in_range(mid) || c.cell_dim(mid) == 0) continue;
            sum += c.component(second, mid) * c.component(first, s);
          }
        double residual = 0.0;
        for (const auto& x : sum.data()) residual = std::max(residual, magnitude(x));
        bool failed;
        if constexpr (B::kind == ScalarKind::ExactRational) {
          failed = !sum.is_zero();
        } else {
          failed = residual > c.backend().rank_tolerance * std::max(1.0, scale * scale);
        }
        if (failed) report.failures.push_back({s, rel, residual});
      }
    }
  return report;
}

}  // namespace folspec
