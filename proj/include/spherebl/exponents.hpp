#pragma once

// Exponent and counting formulas for multilinear inequalities on S^{n-1}.
// Everything here is exact: big integers for multinomials, rationals for
// the local growth exponent.

#include <cstdint>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "spherebl/symmetry.hpp"

namespace spherebl {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Block length profile of a balanced family.
class BalancedType {
 public:
  BalancedType(int n, std::vector<int> lengths);

  int n() const noexcept { return n_; }
  const std::vector<int>& lengths() const noexcept { return lengths_; }
  int r_tilde() const noexcept { return r_tilde_; }
  /// Lengths followed by the remainder, i.e. the parts of the J_max multinomial.
  std::vector<int> parts() const;

  friend bool operator==(const BalancedType&, const BalancedType&) = default;

 private:
  int n_;
  std::vector<int> lengths_;
  int r_tilde_;
};

/// Every valid balanced type in dimension n, lengths in lexicographically
/// decreasing order.
std::vector<BalancedType> all_balanced_types(int n);

BigInt factorial(int k);
/// top! / prod parts!, or zero when some part is negative or the parts do not
/// sum to top.
BigInt multinomial(int top, std::span<const int> parts);

// General families.

/// c(e) = #{J : e not in A^J}, laid out row-major over the upper triangle.
std::vector<std::int64_t> complement_counts(std::span<const Symmetry> fams);

std::int64_t uniform_exponent(std::span<const Symmetry> fams);
std::vector<std::int64_t> per_function_exponents(std::span<const Symmetry> fams);

/// n - sum_J (n - |alpha_1^J|) / exps[J]; throws NonPositiveDelta if <= 0.
Rational local_delta(std::span<const Symmetry> fams, std::span<const std::int64_t> exps);

// Balanced families.

BigInt balanced_exponent(const BalancedType& t);
BigInt j_max(const BalancedType& t);
BigInt edge_membership_count(const BalancedType& t);
BigInt overcount_factor(const BalancedType& t);
Rational balanced_local_delta(const BalancedType& t);

/// sum_i mult(n-1; ..., l_i - 1, ...) + (R/n) J_max, the count of all
/// functions split by where a fixed coordinate sits. Equals J_max.
Rational coordinate_partition_sum(const BalancedType& t);

/// (n-2)! / (prod l_i! R!) * [sum_i (n - l_i) l_i + (n-1) R]. Equals the
/// balanced exponent.
BigInt critical_gamma_bracket(const BalancedType& t);

struct ExponentReport {
  BigInt p_uniform;
  /// One entry per function, or a single shared entry when
  /// `per_function_compressed` is set (large balanced families).
  std::vector<BigInt> p_per_function;
  bool per_function_compressed = false;
  BigInt j_count;
  Rational delta;
  BigInt overcount = 1;
};

/// Balanced reports list per-function exponents explicitly up to this size.
inline constexpr int kExplicitPerFunctionLimit = 4096;

/// Report for an arbitrary family; the overcount factor is computed from the
/// block lengths when every member has the same lengths, else 1.
ExponentReport exponent_report(std::span<const Symmetry> fams);

/// Report for a balanced type straight from the closed forms.
ExponentReport exponent_report(const BalancedType& t);

}  // namespace spherebl
