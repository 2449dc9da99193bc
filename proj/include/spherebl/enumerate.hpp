#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spherebl/exponents.hpp"
#include "spherebl/symmetry.hpp"

namespace spherebl {

inline constexpr std::int64_t kDefaultEnumerationCap = 1'000'000;

/// All ordered assignments of disjoint index blocks with the type's lengths,
/// in lexicographic order of block contents. Exactly j_max(t) entries; equal
/// length blocks are listed in every order. Throws CapExceeded when
/// j_max(t) > cap.
std::vector<Symmetry> enumerate_symmetries(const BalancedType& t,
                                           std::int64_t cap = kDefaultEnumerationCap);

/// Groups symmetries that differ only by the order of equal-length blocks.
/// Classes keep first-appearance order.
std::vector<std::vector<Symmetry>> canonical_classes(std::span<const Symmetry> fams);

}  // namespace spherebl
