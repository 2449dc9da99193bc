#include "spherebl/symmetry.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "spherebl/error.hpp"

namespace spherebl {

namespace {

std::uint64_t full_mask(int n) {
  return n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

void check_same_n(int a, int b) {
  if (a != b) {
    throw DimensionMismatch("dimension mismatch: " + std::to_string(a) + " vs " +
                            std::to_string(b));
  }
}

bool canonical_less(const MultiIndex& a, const MultiIndex& b) {
  if (a.weight() != b.weight()) return a.weight() > b.weight();
  return a.lowest() < b.lowest();
}

}  // namespace

void check_dimension(int n) {
  if (n < kMinDimension || n > kMaxDimension) {
    throw InvalidType("dimension must lie in [3, 64], got " + std::to_string(n));
  }
}

// MultiIndex

MultiIndex::MultiIndex(int n, std::uint64_t mask) : n_(n), mask_(mask) {
  check_dimension(n);
  if ((mask & ~full_mask(n)) != 0) throw InvalidType("multi-index has bits beyond n");
}

MultiIndex MultiIndex::from_bits(const std::vector<int>& bits) {
  const int n = static_cast<int>(bits.size());
  check_dimension(n);
  std::uint64_t mask = 0;
  for (int i = 0; i < n; ++i) {
    const int b = bits[static_cast<std::size_t>(i)];
    if (b != 0 && b != 1) throw InvalidType("multi-index entries must be 0 or 1");
    if (b == 1) mask |= std::uint64_t{1} << i;
  }
  return {n, mask};
}

MultiIndex MultiIndex::from_indices(int n, const std::vector<int>& indices) {
  check_dimension(n);
  std::uint64_t mask = 0;
  for (int i : indices) {
    if (i < 0 || i >= n) throw InvalidType("index out of range");
    mask |= std::uint64_t{1} << i;
  }
  return {n, mask};
}

MultiIndex MultiIndex::ones(int n) {
  check_dimension(n);
  return {n, full_mask(n)};
}

int MultiIndex::weight() const noexcept { return std::popcount(mask_); }

int MultiIndex::lowest() const noexcept {
  return mask_ == 0 ? n_ : std::countr_zero(mask_);
}

std::vector<int> MultiIndex::indices() const {
  std::vector<int> out;
  for (std::uint64_t m = mask_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
  return out;
}

std::vector<int> MultiIndex::bits() const {
  std::vector<int> out(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) out[static_cast<std::size_t>(i)] = test(i) ? 1 : 0;
  return out;
}

bool orthogonal(const MultiIndex& a, const MultiIndex& b) {
  check_same_n(a.n(), b.n());
  return (a.mask() & b.mask()) == 0;
}

MultiIndex complement(const MultiIndex& a) {
  return {a.n(), ~a.mask() & full_mask(a.n())};
}

// EdgeSet

EdgeSet::EdgeSet(int n) : n_(n) {
  check_dimension(n);
  adj_.assign(static_cast<std::size_t>(n), 0);
}

EdgeSet::EdgeSet(int n, const std::vector<Edge>& edges) : EdgeSet(n) {
  for (const auto& e : edges) insert(e.i, e.j);
}

EdgeSet EdgeSet::complete(int n) {
  return cliques(n, {MultiIndex::ones(n)});
}

EdgeSet EdgeSet::cliques(int n, const std::vector<MultiIndex>& blocks) {
  EdgeSet out(n);
  for (const auto& b : blocks) {
    check_same_n(n, b.n());
    for (int i : b.indices()) {
      out.adj_[static_cast<std::size_t>(i)] |= b.mask() & ~(std::uint64_t{1} << i);
    }
  }
  return out;
}

void EdgeSet::insert(int i, int j) {
  if (!(0 <= i && i < j && j < n_)) {
    throw InvalidType("edge (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                      ") violates 1 <= i < j <= n");
  }
  adj_[static_cast<std::size_t>(i)] |= std::uint64_t{1} << j;
  adj_[static_cast<std::size_t>(j)] |= std::uint64_t{1} << i;
}

bool EdgeSet::contains(int i, int j) const noexcept {
  if (i < 0 || j < 0 || i >= n_ || j >= n_ || i == j) return false;
  return (adj_[static_cast<std::size_t>(i)] >> j) & 1U;
}

std::size_t EdgeSet::size() const noexcept {
  std::size_t twice = 0;
  for (auto row : adj_) twice += static_cast<std::size_t>(std::popcount(row));
  return twice / 2;
}

std::vector<Edge> EdgeSet::edges() const {
  std::vector<Edge> out;
  for (int i = 0; i < n_; ++i) {
    const std::uint64_t upper = adj_[static_cast<std::size_t>(i)] >> (i + 1);
    for (std::uint64_t m = upper; m != 0; m &= m - 1) {
      out.push_back({i, i + 1 + std::countr_zero(m)});
    }
  }
  return out;
}

// Symmetry

Symmetry::Symmetry(int n, std::vector<MultiIndex> alphas)
    : n_(n), alphas_(std::move(alphas)), r_(MultiIndex::zeros(n)) {
  if (alphas_.empty()) throw EmptySymmetry("a symmetry needs at least one block");
  std::uint64_t used = 0;
  int total = 0;
  int previous = n + 1;
  for (const auto& a : alphas_) {
    check_same_n(n, a.n());
    if (a.weight() < 2) throw InvalidType("every block needs length >= 2");
    if (a.weight() > previous) throw InvalidType("block lengths must be non-increasing");
    if ((used & a.mask()) != 0) throw InvalidType("blocks must be pairwise orthogonal");
    used |= a.mask();
    total += a.weight();
    previous = a.weight();
  }
  if (total > n) throw InvalidType("blocks exceed the dimension");
  r_ = MultiIndex(n, ~used & full_mask(n));
}

std::vector<int> Symmetry::lengths() const {
  std::vector<int> out;
  out.reserve(alphas_.size());
  for (const auto& a : alphas_) out.push_back(a.weight());
  return out;
}

EdgeSet Symmetry::edges() const { return EdgeSet::cliques(n_, alphas_); }

bool Symmetry::is_canonical() const {
  return std::is_sorted(alphas_.begin(), alphas_.end(), canonical_less);
}

Symmetry Symmetry::canonical() const {
  auto sorted = alphas_;
  std::sort(sorted.begin(), sorted.end(), canonical_less);
  return {n_, std::move(sorted)};
}

// Closure and decomposition

std::vector<MultiIndex> components(const EdgeSet& a) {
  const int n = a.n();
  std::vector<MultiIndex> out;
  std::uint64_t seen = 0;
  for (int start = 0; start < n; ++start) {
    if ((seen >> start) & 1U) continue;
    std::uint64_t comp = std::uint64_t{1} << start;
    std::uint64_t frontier = comp;
    while (frontier != 0) {
      const int v = std::countr_zero(frontier);
      frontier &= frontier - 1;
      const std::uint64_t fresh = a.neighbours(v) & ~comp;
      comp |= fresh;
      frontier |= fresh;
    }
    seen |= comp;
    out.emplace_back(n, comp);
  }
  return out;
}

// [L_{i,j}, L_{j,k}] = +-L_{i,k}, so the generated subalgebra meets the basis
// in exactly the union of cliques on the connected components.
EdgeSet lie_closure(const EdgeSet& a) {
  std::vector<MultiIndex> blocks;
  for (auto& c : components(a)) {
    if (c.weight() >= 2) blocks.push_back(c);
  }
  return EdgeSet::cliques(a.n(), blocks);
}

bool is_maximal(const EdgeSet& a) { return lie_closure(a) == a; }

Symmetry decompose(const EdgeSet& a) {
  if (a.empty()) throw EmptySymmetry("cannot decompose the empty edge set");
  if (!is_maximal(a)) throw NotMaximal("edge set is not maximal; take its lie_closure first");
  std::vector<MultiIndex> blocks;
  for (auto& c : components(a)) {
    if (c.weight() >= 2) blocks.push_back(c);
  }
  std::sort(blocks.begin(), blocks.end(), canonical_less);
  return {a.n(), std::move(blocks)};
}

std::string to_string(const MultiIndex& a) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int i : a.indices()) {
    os << (first ? "" : ",") << i + 1;
    first = false;
  }
  os << '}';
  return os.str();
}

std::string to_string(const Symmetry& s) {
  std::ostringstream os;
  for (std::size_t k = 0; k < s.alphas().size(); ++k) {
    os << (k ? "|" : "") << to_string(s.alphas()[k]);
  }
  os << " R=" << to_string(s.r_mask());
  return os.str();
}

}  // namespace spherebl
