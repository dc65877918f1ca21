#pragma once

// Spectral sequence of the filtration by transverse degree.
//
// Two independent routes:
//  - direct:   E_k^{u,v} = Z_k^{u,v} / (Z_{k-1}^{u+1,v-1} + B_{k-1}^{u,v}), with
//              Z and B built as subspaces of the total-degree space;
//  - iterated: E_{k+1} = H(E_k, d_k), carried cellwise as z_k / b_{k-1} with
//              explicit lifts (zig-zags) into the total complex.

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "folspec/complex.hpp"
#include "folspec/page_table.hpp"

namespace folspec {

class InvalidComplex : public std::invalid_argument {
 public:
  explicit InvalidComplex(const ValidationReport& r) : std::invalid_argument(r.describe()), report(r) {}
  ValidationReport report;
};

template <Backend B>
void require_valid(const BigradedComplex<B>& c) {
  auto report = validate(c);
  if (!report.valid()) throw InvalidComplex(report);
}

/// Past this page every d_k vanishes: d_k raises u by k and u ranges over 0..q.
template <Backend B>
int stabilization_page(const BigradedComplex<B>& c) {
  return c.p() + c.q() + 2;
}

/// Omega_level^r ∩ d^{-1}(Omega_{level+reach}^{r+1}).
template <Backend B>
SubspaceOf<B> filtered_cycles(const BigradedComplex<B>& c, int level, int r, int reach) {
  const auto& be = c.backend();
  const auto source = filtration_subspace(c, level, r);
  if (source.dim() == 0) return source;
  const auto target = filtration_subspace(c, level + reach, r + 1);
  const auto coeffs = preimage_subspace(be, total_differential(c, r) * source.basis(), target);
  return SubspaceOf<B>(source.ambient_dim(), source.basis() * coeffs.basis());
}

/// Omega_level^r ∩ d(Omega_{level-reach}^{r-1}).
template <Backend B>
SubspaceOf<B> filtered_boundaries(const BigradedComplex<B>& c, int level, int r, int reach) {
  const auto& be = c.backend();
  const std::size_t n = c.degree_dim(r);
  if (r <= 0) return SubspaceOf<B>::zero(n);
  const auto source = filtration_subspace(c, level - reach, r - 1);
  const auto image = image_basis(be, total_differential(c, r - 1) * source.basis());
  return subspace_intersection(be, filtration_subspace(c, level, r), image);
}

template <Backend B>
SubspaceOf<B> zk(const BigradedComplex<B>& c, int u, int v, int k) {
  require_valid(c);
  return filtered_cycles(c, u, u + v, k);
}

template <Backend B>
SubspaceOf<B> bk(const BigradedComplex<B>& c, int u, int v, int k) {
  require_valid(c);
  return filtered_boundaries(c, u, u + v, k);
}

namespace detail {

template <Backend B>
PageTable direct_page(const BigradedComplex<B>& c, int k) {
  const auto& be = c.backend();
  PageTable t(k, c.q(), c.p());
  for (int u = 0; u <= c.q(); ++u)
    for (int v = 0; v <= c.p(); ++v) {
      if (c.cell_dim({u, v}) == 0) continue;
      const int r = u + v;
      const auto numerator = filtered_cycles(c, u, r, k);
      const auto denominator =
          subspace_sum(be, filtered_cycles(c, u + 1, r, k - 1), filtered_boundaries(c, u, r, k - 1));
      t.set(u, v, quotient_dim(be, numerator, denominator));
    }
  return t;
}

inline void mark_stabilized(std::vector<PageTable>& pages) {
  const PageTable& last = pages.back();
  for (auto& t : pages) t.set_stabilized(t.same_dims(last));
}

}  // namespace detail

/// Pages 0..k_max by the Z/B formula. The stabilized flag is set on every page
/// already equal to E_infinity.
template <Backend B>
std::vector<PageTable> page_tables_direct(const BigradedComplex<B>& c, int k_max) {
  if (k_max < 0) throw std::invalid_argument("page index must be nonnegative");
  require_valid(c);
  const int k_stop = std::max(k_max, stabilization_page(c));
  std::vector<PageTable> pages;
  for (int k = 0; k <= k_stop; ++k) pages.push_back(detail::direct_page(c, k));
  detail::mark_stabilized(pages);
  pages.resize(static_cast<std::size_t>(k_max) + 1);
  return pages;
}

template <Backend B>
PageTable page_dims_direct(const BigradedComplex<B>& c, int k) {
  if (k < 0) throw std::invalid_argument("page index must be nonnegative");
  require_valid(c);
  PageTable t = detail::direct_page(c, k);
  t.set_stabilized(t.same_dims(detail::direct_page(c, std::max(k, stabilization_page(c)))));
  return t;
}

/// Pages 0..k_max as iterated homology E_{k+1} = H(E_k, d_k).
///
/// Each cell carries z (a basis of z_k in cell coordinates), lifts of those
/// vectors to Z_k in the total complex, and a basis of b_{k-1} together with
/// preimages under d. d_k is lift, apply d, project to the target cell.
template <Backend B>
std::vector<PageTable> page_dims_iterated(const BigradedComplex<B>& c, int k_max) {
  if (k_max < 0) throw std::invalid_argument("page index must be nonnegative");
  require_valid(c);
  using M = MatrixOf<B>;
  const auto& be = c.backend();
  const int q = c.q();
  const int p = c.p();
  const int k_stop = std::max(k_max, stabilization_page(c));

  struct Carrier {
    M z;        // cell_dim x dim z_k
    M lifts;    // degree_dim(r) x dim z_k
    M b_image;  // cell_dim x dim b_{k-1}
    M b_pre;    // degree_dim(r-1) x dim b_{k-1}
  };

  std::vector<M> d;
  for (int r = 0; r <= q + p; ++r) d.push_back(total_differential(c, r));
  auto cell_index = [p](Bidegree b) { return static_cast<std::size_t>(b.u * (p + 1) + b.v); };

  std::vector<Carrier> carriers(static_cast<std::size_t>((q + 1) * (p + 1)));
  for (int u = 0; u <= q; ++u)
    for (int v = 0; v <= p; ++v) {
      const Bidegree b{u, v};
      const std::size_t n = c.cell_dim(b);
      auto& cr = carriers[cell_index(b)];
      cr.z = M::identity(n);
      cr.lifts = embed_cell(c, b, M::identity(n));
      cr.b_image = M(n, 0);
      cr.b_pre = M(c.degree_dim(u + v - 1), 0);
    }

  std::vector<PageTable> pages;
  for (int k = 0;; ++k) {
    PageTable t(k, q, p);
    for (int u = 0; u <= q; ++u)
      for (int v = 0; v <= p; ++v) {
        const auto& cr = carriers[cell_index({u, v})];
        const std::size_t n = c.cell_dim({u, v});
        t.set(u, v, quotient_dim(be, SubspaceOf<B>(n, cr.z), SubspaceOf<B>(n, cr.b_image)));
      }
    pages.push_back(std::move(t));
    if (k == k_stop) break;

    const Bidegree step{k, 1 - k};
    std::vector<M> images(carriers.size());
    for (int u = 0; u <= q; ++u)
      for (int v = 0; v <= p; ++v) {
        const Bidegree s{u, v};
        const Bidegree tg = s + step;
        const auto& cs = carriers[cell_index(s)];
        if (c.cell_dim(s) == 0 || !c.in_range(tg) || c.cell_dim(tg) == 0) {
          images[cell_index(s)] = M(0, cs.z.cols());
          continue;
        }
        images[cell_index(s)] = project_to_cell(c, tg, d[static_cast<std::size_t>(u + v)] * cs.lifts);
      }

    std::vector<Carrier> next = carriers;
    for (int u = 0; u <= q; ++u)
      for (int v = 0; v <= p; ++v) {
        const Bidegree s{u, v};
        const Bidegree tg = s + step;
        const auto& image = images[cell_index(s)];
        if (image.rows() == 0) continue;
        const auto& cs = carriers[cell_index(s)];
        const auto& ct = carriers[cell_index(tg)];
        // Classes whose d_k lands in b_{k-1}^t; the b-coefficients give the
        // correction that pushes the lift one filtration step deeper.
        const auto kernel = kernel_basis(be, M::hcat(image, -ct.b_image)).basis();
        const std::size_t nz = cs.z.cols();
        const M kz = kernel.row_range(0, nz);
        const M kb = kernel.row_range(nz, kernel.rows());
        auto& ns = next[cell_index(s)];
        ns.z = cs.z * kz;
        ns.lifts = cs.lifts * kz - ct.b_pre * kb;
      }
    for (int u = 0; u <= q; ++u)
      for (int v = 0; v <= p; ++v) {
        const Bidegree tg{u, v};
        const Bidegree s{u - step.u, v - step.v};
        if (!c.in_range(s) || c.cell_dim(tg) == 0) continue;
        const auto& image = images[cell_index(s)];
        if (image.rows() == 0 || image.cols() == 0) continue;
        const auto& ct = carriers[cell_index(tg)];
        const M cand_image = M::hcat(ct.b_image, image);
        const M cand_pre = M::hcat(ct.b_pre, carriers[cell_index(s)].lifts);
        const auto keep = independent_columns(be, cand_image);
        auto& nt = next[cell_index(tg)];
        nt.b_image = cand_image.select_columns(keep);
        nt.b_pre = cand_pre.select_columns(keep);
      }
    carriers = std::move(next);
  }
  detail::mark_stabilized(pages);
  pages.resize(static_cast<std::size_t>(k_max) + 1);
  return pages;
}

/// b_r = dim ker d_r - rank d_{r-1}.
template <Backend B>
std::vector<std::size_t> total_cohomology(const BigradedComplex<B>& c) {
  const auto& be = c.backend();
  std::vector<std::size_t> ranks;
  for (int r = 0; r <= c.max_degree(); ++r) ranks.push_back(rank(be, total_differential(c, r)));
  std::vector<std::size_t> betti;
  for (int r = 0; r <= c.max_degree(); ++r) {
    const std::size_t in = r > 0 ? ranks[static_cast<std::size_t>(r - 1)] : 0;
    betti.push_back(c.degree_dim(r) - ranks[static_cast<std::size_t>(r)] - in);
  }
  return betti;
}

struct EInfinityReport {
  PageTable e_infinity;
  std::vector<std::size_t> degree_sums;
  std::vector<std::size_t> betti;
  bool matched = false;
};

/// Convergence check: the E_infinity diagonal sums against de Rham dims.
template <Backend B>
EInfinityReport e_infinity_check(const BigradedComplex<B>& c) {
  EInfinityReport r;
  const int k = stabilization_page(c);
  r.e_infinity = page_dims_iterated(c, k).back();
  r.degree_sums = r.e_infinity.degree_sums();
  r.betti = total_cohomology(c);
  r.matched = r.degree_sums == r.betti;
  return r;
}

template <Backend B>
long euler_per_page(const BigradedComplex<B>& c, int k) {
  return page_dims_iterated(c, k).back().euler_characteristic();
}

/// Cohomology of the basic subcomplex: forms of leafwise degree 0 killed by
/// d01, with differential d10.
template <Backend B>
std::vector<std::size_t> basic_cohomology(const BigradedComplex<B>& c) {
  require_valid(c);
  const auto& be = c.backend();
  std::vector<SubspaceOf<B>> basic;
  for (int u = 0; u <= c.q(); ++u) basic.push_back(kernel_basis(be, c.component(Component::D01, {u, 0})));
  std::vector<std::size_t> cycles, images;
  for (int u = 0; u <= c.q(); ++u) {
    const auto& forms = basic[static_cast<std::size_t>(u)];
    const auto dforms = c.component(Component::D10, {u, 0}) * forms.basis();
    const std::size_t rk = rank(be, dforms);
    cycles.push_back(forms.dim() - rk);
    images.push_back(rk);
  }
  std::vector<std::size_t> h;
  for (int u = 0; u <= c.q(); ++u) h.push_back(cycles[static_cast<std::size_t>(u)] - (u > 0 ? images[static_cast<std::size_t>(u - 1)] : 0));
  return h;
}

}  // namespace folspec
