#include "spherebl/functions.hpp"

#include <cmath>

#include "spherebl/error.hpp"
#include "spherebl/rng.hpp"

namespace spherebl {

namespace {

double block_norm2(std::span<const double> x, const std::vector<int>& idx) {
  double s = 0.0;
  for (int i : idx) s += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
  return s;
}

}  // namespace

Integrand constant_function(const Symmetry& s, double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) throw InvalidType("constant must be >= 0");
  return {s.n(), [value](std::span<const double>) { return value; }, s,
          "constant(" + std::to_string(value) + ")"};
}

Integrand terms_function(const Symmetry& s, double c0, std::vector<Term> terms) {
  if (!(c0 >= 0.0)) throw InvalidType("constant part must be >= 0");
  const auto r_indices = s.r_mask().indices();
  struct Bound {
    std::vector<int> idx;
    Term term;
  };
  std::vector<Bound> bound;
  for (const auto& t : terms) {
    if (!(t.coef >= 0.0)) throw InvalidType("term coefficients must be >= 0");
    if (t.shape == Term::Shape::bump && !(t.width > 0.0)) {
      throw InvalidType("bump width must be positive");
    }
    if (t.shape == Term::Shape::power && !(t.exponent >= 0.0)) {
      throw InvalidType("power exponent must be >= 0");
    }
    if (t.variable == Term::Variable::block) {
      if (t.index < 1 || t.index >= static_cast<int>(s.alphas().size())) {
        throw InvalidType("block terms must refer to alpha_2 .. alpha_N");
      }
      bound.push_back({s.alphas()[static_cast<std::size_t>(t.index)].indices(), t});
    } else {
      if (t.index < 0 || t.index >= s.n() || !s.r_mask().test(t.index)) {
        throw InvalidType("coordinate terms must refer to a coordinate in R");
      }
      bound.push_back({{t.index}, t});
    }
  }
  auto eval = [c0, bound = std::move(bound)](std::span<const double> x) {
    double v = c0;
    for (const auto& b : bound) {
      const double u = block_norm2(x, b.idx);
      if (b.term.shape == Term::Shape::power) {
        v += b.term.coef * std::pow(u, b.term.exponent);
      } else {
        const double z = (u - b.term.center) / b.term.width;
        v += b.term.coef * std::exp(-z * z);
      }
    }
    return v;
  };
  return {s.n(), std::move(eval), s, "terms"};
}

Integrand random_symmetric_function(const Symmetry& s, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<Term> terms;
  auto add_terms = [&](Term::Variable var, int index) {
    const int count = 1 + static_cast<int>(rng.next() % 2);
    for (int k = 0; k < count; ++k) {
      Term t;
      t.variable = var;
      t.index = index;
      t.coef = 0.2 + 3.0 * rng.uniform();
      if (rng.uniform() < 0.5) {
        t.shape = Term::Shape::power;
        t.exponent = 0.5 + 3.5 * rng.uniform();
      } else {
        t.shape = Term::Shape::bump;
        t.center = rng.uniform();
        t.width = 0.05 + 0.4 * rng.uniform();
      }
      terms.push_back(t);
    }
  };
  for (int i = 1; i < static_cast<int>(s.alphas().size()); ++i) add_terms(Term::Variable::block, i);
  for (int k : s.r_mask().indices()) add_terms(Term::Variable::coordinate, k);
  const double c0 = 0.05 + rng.uniform();
  auto f = terms_function(s, c0, std::move(terms));
  f.label = "random(" + std::to_string(seed) + ")";
  return f;
}

}  // namespace spherebl
