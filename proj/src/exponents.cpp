#include "spherebl/exponents.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

#include "spherebl/error.hpp"

namespace spherebl {

namespace {

void check_family(std::span<const Symmetry> fams) {
  if (fams.empty()) throw EmptyFamily("the symmetry family is empty");
  const int n = fams.front().n();
  for (const auto& s : fams) {
    if (s.n() != n) {
      throw DimensionMismatch("family mixes dimensions " + std::to_string(n) + " and " +
                              std::to_string(s.n()));
    }
  }
}

std::size_t edge_slot(int n, int i, int j) {
  // Row-major index of (i,j), i<j, in the upper triangle.
  return static_cast<std::size_t>(i * n - i * (i + 1) / 2 + (j - i - 1));
}

BigInt exact_integer(const Rational& q, const char* what) {
  if (boost::multiprecision::denominator(q) != 1) {
    throw std::logic_error(std::string("internal error: ") + what + " is not an integer");
  }
  return boost::multiprecision::numerator(q);
}

BigInt denominator_product(const BalancedType& t) {
  BigInt d = 1;
  for (int part : t.parts()) d *= factorial(part);
  return d;
}

}  // namespace

BalancedType::BalancedType(int n, std::vector<int> lengths)
    : n_(n), lengths_(std::move(lengths)), r_tilde_(0) {
  check_dimension(n);
  if (lengths_.empty()) throw InvalidType("a balanced type needs at least one block length");
  int total = 0;
  int previous = n;
  for (int l : lengths_) {
    if (l < 2) throw InvalidType("block lengths must be >= 2");
    if (l > previous) throw InvalidType("block lengths must be non-increasing");
    previous = l;
    total += l;
  }
  if (total > n) throw InvalidType("block lengths sum past n");
  if (lengths_.front() > n - 1) {
    throw InvalidType("leading block length must be <= n-1 (otherwise every function is constant)");
  }
  r_tilde_ = n - total;
}

std::vector<int> BalancedType::parts() const {
  auto p = lengths_;
  p.push_back(r_tilde_);
  return p;
}

std::vector<BalancedType> all_balanced_types(int n) {
  check_dimension(n);
  std::vector<BalancedType> out;
  std::vector<int> current;
  std::function<void(int, int)> extend = [&](int max_len, int remaining) {
    for (int l = std::min(max_len, remaining); l >= 2; --l) {
      current.push_back(l);
      out.emplace_back(n, current);
      extend(l, remaining - l);
      current.pop_back();
    }
  };
  // The first block is capped at n-1; later blocks by the one before.
  for (int first = n - 1; first >= 2; --first) {
    current = {first};
    out.emplace_back(n, current);
    extend(first, n - first);
  }
  return out;
}

BigInt factorial(int k) {
  if (k < 0) throw std::invalid_argument("factorial of a negative number");
  BigInt f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

BigInt multinomial(int top, std::span<const int> parts) {
  int sum = 0;
  for (int p : parts) {
    if (p < 0) return 0;
    sum += p;
  }
  if (sum != top || top < 0) return 0;
  // Product of binomials keeps the intermediates small.
  BigInt out = 1;
  int placed = 0;
  for (int p : parts) {
    for (int k = 1; k <= p; ++k) {
      out *= placed + k;
      out /= k;
    }
    placed += p;
  }
  return out;
}

std::vector<std::int64_t> complement_counts(std::span<const Symmetry> fams) {
  check_family(fams);
  const int n = fams.front().n();
  std::vector<std::int64_t> counts(static_cast<std::size_t>(n * (n - 1) / 2),
                                   static_cast<std::int64_t>(fams.size()));
  for (const auto& s : fams) {
    for (const auto& e : s.edges().edges()) --counts[edge_slot(n, e.i, e.j)];
  }
  return counts;
}

std::int64_t uniform_exponent(std::span<const Symmetry> fams) {
  const auto counts = complement_counts(fams);
  const std::int64_t best = *std::max_element(counts.begin(), counts.end());
  if (best == 0) {
    throw DegenerateFamily("every member contains every field; all functions are constant");
  }
  return best;
}

std::vector<std::int64_t> per_function_exponents(std::span<const Symmetry> fams) {
  const auto counts = complement_counts(fams);
  const int n = fams.front().n();
  std::vector<std::int64_t> out;
  out.reserve(fams.size());
  for (std::size_t J = 0; J < fams.size(); ++J) {
    const auto edges = fams[J].edges();
    std::int64_t best = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (!edges.contains(i, j)) best = std::max(best, counts[edge_slot(n, i, j)]);
      }
    }
    if (best == 0) {
      throw DegenerateFamily("member " + std::to_string(J) +
                             " contains every field; its function is constant");
    }
    out.push_back(best);
  }
  return out;
}

Rational local_delta(std::span<const Symmetry> fams, std::span<const std::int64_t> exps) {
  check_family(fams);
  if (fams.size() != exps.size()) {
    throw DimensionMismatch("one exponent per symmetry is required");
  }
  const int n = fams.front().n();
  Rational delta = n;
  for (std::size_t J = 0; J < fams.size(); ++J) {
    if (exps[J] <= 0) throw InvalidType("exponents must be positive");
    delta -= Rational(n - fams[J].leading().weight(), exps[J]);
  }
  if (delta <= 0) {
    throw NonPositiveDelta("local growth exponent is not positive; exponents are inconsistent "
                           "with the family");
  }
  return delta;
}

BigInt j_max(const BalancedType& t) {
  const auto parts = t.parts();
  return multinomial(t.n(), parts);
}

BigInt edge_membership_count(const BalancedType& t) {
  auto parts = t.parts();
  BigInt total = 0;
  for (std::size_t i = 0; i < t.lengths().size(); ++i) {
    parts[i] -= 2;
    total += multinomial(t.n() - 2, parts);
    parts[i] += 2;
  }
  return total;
}

BigInt balanced_exponent(const BalancedType& t) {
  const int n = t.n();
  BigInt bracket = BigInt(n) * (n - 1);
  for (int l : t.lengths()) bracket -= BigInt(l) * (l - 1);
  return exact_integer(Rational(factorial(n - 2) * bracket, denominator_product(t)),
                       "balanced exponent");
}

BigInt overcount_factor(const BalancedType& t) {
  std::map<int, int> multiplicity;
  for (int l : t.lengths()) ++multiplicity[l];
  BigInt out = 1;
  for (const auto& [len, count] : multiplicity) out *= factorial(count);
  return out;
}

Rational balanced_local_delta(const BalancedType& t) {
  return Rational(t.n()) -
         Rational(BigInt(t.n() - t.lengths().front()) * j_max(t), balanced_exponent(t));
}

Rational coordinate_partition_sum(const BalancedType& t) {
  auto parts = t.parts();
  Rational total = 0;
  for (std::size_t i = 0; i < t.lengths().size(); ++i) {
    parts[i] -= 1;
    total += multinomial(t.n() - 1, parts);
    parts[i] += 1;
  }
  total += Rational(BigInt(t.r_tilde()) * j_max(t), t.n());
  return total;
}

BigInt critical_gamma_bracket(const BalancedType& t) {
  const int n = t.n();
  BigInt bracket = BigInt(n - 1) * t.r_tilde();
  for (int l : t.lengths()) bracket += BigInt(n - l) * l;
  return exact_integer(Rational(factorial(n - 2) * bracket, denominator_product(t)),
                       "critical bracket");
}

ExponentReport exponent_report(std::span<const Symmetry> fams) {
  ExponentReport r;
  const auto exps = per_function_exponents(fams);
  r.p_uniform = uniform_exponent(fams);
  r.p_per_function.assign(exps.begin(), exps.end());
  r.j_count = static_cast<std::int64_t>(fams.size());
  r.delta = local_delta(fams, exps);
  const auto lengths = fams.front().lengths();
  const bool same = std::all_of(fams.begin(), fams.end(),
                                [&](const Symmetry& s) { return s.lengths() == lengths; });
  if (same && lengths.front() <= fams.front().n() - 1) {
    r.overcount = overcount_factor(BalancedType(fams.front().n(), lengths));
  }
  return r;
}

ExponentReport exponent_report(const BalancedType& t) {
  ExponentReport r;
  r.p_uniform = balanced_exponent(t);
  r.j_count = j_max(t);
  if (r.j_count <= kExplicitPerFunctionLimit) {
    r.p_per_function.assign(static_cast<std::size_t>(r.j_count), r.p_uniform);
  } else {
    r.p_per_function = {r.p_uniform};
    r.per_function_compressed = true;
  }
  r.delta = balanced_local_delta(t);
  r.overcount = overcount_factor(t);
  return r;
}

}  // namespace spherebl
