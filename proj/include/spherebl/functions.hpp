#pragma once

// Built-in bounded symmetric test functions.
//
// A function tagged with a symmetry depends on x only through the block
// norms |x_{alpha_i}| (i >= 2) and the single coordinates x_k, k in R. Every
// term is even in each coordinate.

#include <cstdint>
#include <vector>

#include "spherebl/quadrature.hpp"
#include "spherebl/symmetry.hpp"

namespace spherebl {

struct Term {
  enum class Variable { block, coordinate };
  enum class Shape { power, bump };

  Variable variable = Variable::block;
  /// Block position in alphas() (>= 1), or coordinate index in R (0-based).
  int index = 1;
  Shape shape = Shape::power;
  double coef = 1.0;
  /// power: coef * u^exponent with u = |x_alpha|^2 or x_k^2.
  double exponent = 1.0;
  /// bump: coef * exp(-((u - center) / width)^2).
  double center = 0.5;
  double width = 0.25;
};

Integrand constant_function(const Symmetry& s, double value);

/// c0 + sum of terms; c0 > 0 and coef >= 0 keep it positive.
Integrand terms_function(const Symmetry& s, double c0, std::vector<Term> terms);

/// Random terms_function drawn deterministically from `seed`.
Integrand random_symmetric_function(const Symmetry& s, std::uint64_t seed);

}  // namespace spherebl
