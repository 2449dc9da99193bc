#include "spherebl/enumerate.hpp"

#include <bit>
#include <map>

#include "spherebl/error.hpp"

namespace spherebl {

namespace {

class BlockAssigner {
 public:
  BlockAssigner(const BalancedType& t, std::vector<Symmetry>& out)
      : t_(t), out_(out) {}

  void run() { place(0, std::uint64_t{0}); }

 private:
  void place(std::size_t block, std::uint64_t used) {
    if (block == t_.lengths().size()) {
      out_.emplace_back(t_.n(), chosen_);
      return;
    }
    std::vector<int> free;
    for (int i = 0; i < t_.n(); ++i) {
      if (((used >> i) & 1U) == 0) free.push_back(i);
    }
    choose(block, used, free, 0, t_.lengths()[block], std::uint64_t{0});
  }

  // Combinations of `need` elements of free[from..], smallest first.
  void choose(std::size_t block, std::uint64_t used, const std::vector<int>& free,
              std::size_t from, int need, std::uint64_t mask) {
    if (need == 0) {
      chosen_.emplace_back(t_.n(), mask);
      place(block + 1, used | mask);
      chosen_.pop_back();
      return;
    }
    for (std::size_t k = from; k + static_cast<std::size_t>(need) <= free.size(); ++k) {
      choose(block, used, free, k + 1, need - 1, mask | (std::uint64_t{1} << free[k]));
    }
  }

  const BalancedType& t_;
  std::vector<Symmetry>& out_;
  std::vector<MultiIndex> chosen_;
};

}  // namespace

std::vector<Symmetry> enumerate_symmetries(const BalancedType& t, std::int64_t cap) {
  const BigInt count = j_max(t);
  if (count > cap) {
    throw CapExceeded("family size " + count.str() + " exceeds the enumeration cap " +
                          std::to_string(cap),
                      count.str());
  }
  std::vector<Symmetry> out;
  out.reserve(static_cast<std::size_t>(count));
  BlockAssigner(t, out).run();
  return out;
}

std::vector<std::vector<Symmetry>> canonical_classes(std::span<const Symmetry> fams) {
  std::vector<std::vector<Symmetry>> classes;
  std::map<std::vector<std::uint64_t>, std::size_t> index;
  for (const auto& s : fams) {
    std::vector<std::uint64_t> key;
    key.push_back(static_cast<std::uint64_t>(s.n()));
    const auto canon = s.canonical();
    for (const auto& a : canon.alphas()) key.push_back(a.mask());
    auto [it, fresh] = index.try_emplace(std::move(key), classes.size());
    if (fresh) classes.emplace_back();
    classes[it->second].push_back(s);
  }
  return classes;
}

}  // namespace spherebl
