#pragma once

// Random valid bigraded complexes over Q.
//
// Each basis vector is a source, a sink or free. A source maps to a random
// integer combination of sinks in the cells reachable by the three allowed
// shifts; sinks and free vectors map to zero, so d^2 = 0. A random invertible
// change of basis in every cell then hides the split.

#include <gmpxx.h>

#include <random>
#include <vector>

#include "folspec/complex.hpp"

namespace testing_support {

using folspec::Bidegree;
using folspec::Component;
using folspec::Matrix;

struct RandomComplexOptions {
  int max_q = 3;
  int max_p = 2;
  int max_cell_dim = 4;
  int coefficient_range = 3;
};

/// Unit lower times unit upper triangular, so invertible over Z.
inline std::pair<Matrix<mpq_class>, Matrix<mpq_class>> random_unimodular(std::size_t n, std::mt19937& rng, int range) {
  std::uniform_int_distribution<int> coef(-range, range);
  Matrix<mpq_class> lower = Matrix<mpq_class>::identity(n), upper = Matrix<mpq_class>::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      lower(i, j) = coef(rng);
      upper(j, i) = coef(rng);
    }
  // inverses by forward / back substitution on the identity
  Matrix<mpq_class> linv = Matrix<mpq_class>::identity(n), uinv = Matrix<mpq_class>::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      mpq_class s = i == c ? 1 : 0;
      for (std::size_t k = 0; k < i; ++k) s -= lower(i, k) * linv(k, c);
      linv(i, c) = s;
    }
    for (std::size_t ii = n; ii-- > 0;) {
      mpq_class s = ii == c ? 1 : 0;
      for (std::size_t k = ii + 1; k < n; ++k) s -= upper(ii, k) * uinv(k, c);
      uinv(ii, c) = s;
    }
  }
  return {lower * upper, uinv * linv};
}

inline folspec::ComplexData<mpq_class> random_complex_data(std::mt19937& rng, const RandomComplexOptions& opt = {}) {
  std::uniform_int_distribution<int> qd(1, opt.max_q), pd(0, opt.max_p), dimd(0, opt.max_cell_dim), role(0, 2);
  std::uniform_int_distribution<int> coef(-opt.coefficient_range, opt.coefficient_range);
  folspec::ComplexData<mpq_class> data;
  data.q = qd(rng);
  data.p = pd(rng);
  const auto ncells = static_cast<std::size_t>((data.q + 1) * (data.p + 1));
  data.labels.resize(ncells);
  std::vector<std::vector<int>> roles(ncells);  // 0 source, 1 sink, 2 free
  for (int u = 0; u <= data.q; ++u)
    for (int v = 0; v <= data.p; ++v) {
      const std::size_t ci = data.cell_index({u, v});
      const int n = dimd(rng);
      for (int i = 0; i < n; ++i) {
        data.labels[ci].push_back("x" + std::to_string(u) + std::to_string(v) + "_" + std::to_string(i));
        roles[ci].push_back(role(rng));
      }
    }
  for (int c = 0; c < 3; ++c) data.components[static_cast<std::size_t>(c)].resize(ncells);
  for (int u = 0; u <= data.q; ++u)
    for (int v = 0; v <= data.p; ++v) {
      const Bidegree s{u, v};
      const std::size_t si = data.cell_index(s);
      for (int c = 0; c < 3; ++c) {
        const Bidegree t = s + folspec::shift_of(static_cast<Component>(c));
        Matrix<mpq_class> m(data.cell_dim(t), data.cell_dim(s));
        if (data.in_range(t)) {
          const std::size_t ti = data.cell_index(t);
          for (std::size_t j = 0; j < m.cols(); ++j) {
            if (roles[si][j] != 0) continue;
            for (std::size_t i = 0; i < m.rows(); ++i)
              if (roles[ti][i] == 1) m(i, j) = coef(rng);
          }
        }
        data.components[static_cast<std::size_t>(c)][si] = std::move(m);
      }
    }
  // conjugate: d' = G_t d G_s^{-1}
  std::vector<Matrix<mpq_class>> g(ncells), ginv(ncells);
  for (std::size_t ci = 0; ci < ncells; ++ci) {
    auto [a, b] = random_unimodular(data.labels[ci].size(), rng, 1);
    g[ci] = std::move(a);
    ginv[ci] = std::move(b);
  }
  for (int u = 0; u <= data.q; ++u)
    for (int v = 0; v <= data.p; ++v) {
      const Bidegree s{u, v};
      for (int c = 0; c < 3; ++c) {
        const Bidegree t = s + folspec::shift_of(static_cast<Component>(c));
        if (!data.in_range(t)) continue;
        auto& m = data.components[static_cast<std::size_t>(c)][data.cell_index(s)];
        if (m.rows() == 0 || m.cols() == 0) continue;
        m = g[data.cell_index(t)] * m * ginv[data.cell_index(s)];
      }
    }
  return data;
}

}  // namespace testing_support
