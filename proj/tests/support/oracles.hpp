#pragma once

// Independent reference implementations used by the unit and acceptance
// tests. None of them share code with the library algorithms.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using Pair = std::pair<int, int>;

/// Structure constants of so(n) in the basis L_{ij} = E_ij - E_ji (i < j),
/// read off from explicit matrix commutators.
class SoN {
 public:
  explicit SoN(int n) : n_(n) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) basis_.push_back({i, j});
    }
    const auto dim = basis_.size();
    table_.assign(dim * dim, -1);
    for (std::size_t a = 0; a < dim; ++a) {
      for (std::size_t b = 0; b < dim; ++b) {
        const auto c = commutator(matrix(a), matrix(b));
        table_[a * dim + b] = match(c);
      }
    }
  }

  std::size_t dim() const { return basis_.size(); }
  const std::vector<Pair>& basis() const { return basis_; }

  /// Basis elements of the subalgebra generated by `gens`, obtained by
  /// repeatedly adding every nonzero bracket until nothing changes.
  std::set<Pair> closure(const std::set<Pair>& gens) const {
    std::vector<bool> in(dim(), false);
    for (std::size_t a = 0; a < dim(); ++a) in[a] = gens.count(basis_[a]) > 0;
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t a = 0; a < dim(); ++a) {
        if (!in[a]) continue;
        for (std::size_t b = 0; b < dim(); ++b) {
          if (!in[b]) continue;
          const int c = table_[a * dim() + b];
          if (c >= 0 && !in[static_cast<std::size_t>(c)]) {
            in[static_cast<std::size_t>(c)] = true;
            changed = true;
          }
        }
      }
    }
    std::set<Pair> out;
    for (std::size_t a = 0; a < dim(); ++a) {
      if (in[a]) out.insert(basis_[a]);
    }
    return out;
  }

 private:
  using Matrix = std::vector<int>;

  Matrix matrix(std::size_t a) const {
    Matrix m(static_cast<std::size_t>(n_ * n_), 0);
    const auto [i, j] = basis_[a];
    m[static_cast<std::size_t>(i * n_ + j)] = 1;
    m[static_cast<std::size_t>(j * n_ + i)] = -1;
    return m;
  }

  Matrix commutator(const Matrix& x, const Matrix& y) const {
    Matrix out(x.size(), 0);
    for (int r = 0; r < n_; ++r) {
      for (int c = 0; c < n_; ++c) {
        int v = 0;
        for (int k = 0; k < n_; ++k) {
          v += x[static_cast<std::size_t>(r * n_ + k)] * y[static_cast<std::size_t>(k * n_ + c)] -
               y[static_cast<std::size_t>(r * n_ + k)] * x[static_cast<std::size_t>(k * n_ + c)];
        }
        out[static_cast<std::size_t>(r * n_ + c)] = v;
      }
    }
    return out;
  }

  // Index of the basis element equal to +-m, -1 for zero; the bracket of two
  // basis elements is always one of these.
  int match(const Matrix& m) const {
    bool zero = true;
    for (int v : m) zero = zero && v == 0;
    if (zero) return -1;
    for (std::size_t a = 0; a < dim(); ++a) {
      const auto e = matrix(a);
      bool plus = true;
      bool minus = true;
      for (std::size_t k = 0; k < m.size(); ++k) {
        plus = plus && m[k] == e[k];
        minus = minus && m[k] == -e[k];
      }
      if (plus || minus) return static_cast<int>(a);
    }
    return -2;
  }

  int n_;
  std::vector<Pair> basis_;
  std::vector<int> table_;
};

/// Ordered block assignments of a balanced type by brute force: every
/// labelling of [n] with labels 0..N (0 = unassigned) whose label counts
/// match the lengths. Each result lists the blocks as sorted index vectors.
inline std::vector<std::vector<std::vector<int>>> brute_force_family(
    int n, const std::vector<int>& lengths) {
  const int labels = static_cast<int>(lengths.size()) + 1;
  std::vector<int> label(static_cast<std::size_t>(n), 0);
  std::vector<std::vector<std::vector<int>>> out;
  while (true) {
    std::vector<std::vector<int>> blocks(lengths.size());
    for (int i = 0; i < n; ++i) {
      if (label[static_cast<std::size_t>(i)] > 0) {
        blocks[static_cast<std::size_t>(label[static_cast<std::size_t>(i)] - 1)].push_back(i);
      }
    }
    bool ok = true;
    for (std::size_t b = 0; b < lengths.size(); ++b) {
      ok = ok && static_cast<int>(blocks[b].size()) == lengths[b];
    }
    if (ok) out.push_back(blocks);
    int pos = 0;
    while (pos < n && ++label[static_cast<std::size_t>(pos)] == labels) {
      label[static_cast<std::size_t>(pos)] = 0;
      ++pos;
    }
    if (pos == n) break;
  }
  return out;
}

/// max over edges of #{members whose cliques miss the edge}.
inline std::int64_t brute_force_uniform_exponent(
    int n, const std::vector<std::vector<std::vector<int>>>& family) {
  std::int64_t best = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      std::int64_t c = 0;
      for (const auto& blocks : family) {
        bool inside = false;
        for (const auto& b : blocks) {
          bool hi = false;
          bool hj = false;
          for (int v : b) {
            hi = hi || v == i;
            hj = hj || v == j;
          }
          inside = inside || (hi && hj);
        }
        if (!inside) ++c;
      }
      best = std::max(best, c);
    }
  }
  return best;
}

}  // namespace oracle
