#pragma once

// Multi-indices, subsets of the rotation fields L_{i,j} of so(n), their Lie
// closure and the block decomposition of a maximal subset.
//
// Indices are 0-based everywhere in this header. The JSON layer converts to
// and from the 1-based convention used in files and on the command line.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace spherebl {

inline constexpr int kMinDimension = 3;
inline constexpr int kMaxDimension = 64;

/// Throws InvalidType unless 3 <= n <= 64.
void check_dimension(int n);

/// A 0/1 vector of length n, stored as a bitmask.
class MultiIndex {
 public:
  MultiIndex(int n, std::uint64_t mask);

  static MultiIndex from_bits(const std::vector<int>& bits);
  static MultiIndex from_indices(int n, const std::vector<int>& indices);
  static MultiIndex zeros(int n) { return MultiIndex(n, 0); }
  static MultiIndex ones(int n);

  int n() const noexcept { return n_; }
  std::uint64_t mask() const noexcept { return mask_; }
  int weight() const noexcept;
  bool test(int i) const noexcept { return (mask_ >> i) & 1U; }
  bool empty() const noexcept { return mask_ == 0; }
  /// Smallest index with a 1, or n if the index is empty.
  int lowest() const noexcept;

  std::vector<int> indices() const;
  std::vector<int> bits() const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  int n_;
  std::uint64_t mask_;
};

bool orthogonal(const MultiIndex& a, const MultiIndex& b);
MultiIndex complement(const MultiIndex& a);

struct Edge {
  int i;
  int j;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// A subset A of {L_{i,j}}_{i<j}; the edge (i,j) stands for L_{i,j}.
class EdgeSet {
 public:
  explicit EdgeSet(int n);
  EdgeSet(int n, const std::vector<Edge>& edges);

  static EdgeSet complete(int n);
  /// Union of complete graphs on the given blocks.
  static EdgeSet cliques(int n, const std::vector<MultiIndex>& blocks);

  int n() const noexcept { return n_; }
  void insert(int i, int j);
  bool contains(int i, int j) const noexcept;
  std::size_t size() const noexcept;
  bool empty() const noexcept { return size() == 0; }
  std::vector<Edge> edges() const;
  /// Neighbourhood of vertex i as a bitmask.
  std::uint64_t neighbours(int i) const { return adj_[static_cast<std::size_t>(i)]; }

  friend bool operator==(const EdgeSet&, const EdgeSet&) = default;

 private:
  int n_;
  std::vector<std::uint64_t> adj_;
};

/// Block structure (alpha_1, ..., alpha_N, R) of a maximal subset.
///
/// Equal-length blocks may appear in any order: the balanced families
/// enumerate every ordering separately. `decompose` always returns the
/// canonical order (weight descending, then smallest index first).
class Symmetry {
 public:
  Symmetry(int n, std::vector<MultiIndex> alphas);

  int n() const noexcept { return n_; }
  const std::vector<MultiIndex>& alphas() const noexcept { return alphas_; }
  const MultiIndex& leading() const { return alphas_.front(); }
  const MultiIndex& r_mask() const noexcept { return r_; }
  std::vector<int> lengths() const;

  EdgeSet edges() const;
  bool is_canonical() const;
  Symmetry canonical() const;

  friend bool operator==(const Symmetry&, const Symmetry&) = default;

 private:
  int n_;
  std::vector<MultiIndex> alphas_;
  MultiIndex r_;
};

/// Connected components (as vertex masks) of the graph on [n] with edges A.
std::vector<MultiIndex> components(const EdgeSet& a);

EdgeSet lie_closure(const EdgeSet& a);
bool is_maximal(const EdgeSet& a);
Symmetry decompose(const EdgeSet& a);

std::string to_string(const MultiIndex& a);
std::string to_string(const Symmetry& s);

}  // namespace spherebl
