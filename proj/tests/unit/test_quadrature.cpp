#include <cmath>
#include <cstdlib>

#include "doctest.h"
#include "spherebl/enumerate.hpp"
#include "spherebl/error.hpp"
#include "spherebl/functions.hpp"
#include "spherebl/quadrature.hpp"

using namespace spherebl;

namespace {

QuadConfig config(std::int64_t samples, std::uint64_t seed = 1, int shards = 4) {
  QuadConfig q;
  q.samples = samples;
  q.seed = seed;
  q.shards = shards;
  return q;
}

Integrand lambda(int n, std::function<double(std::span<const double>)> f) {
  return {n, std::move(f), std::nullopt, "lambda"};
}

bool within(const Estimate& e, double target, double sigmas = 3.0) {
  return std::abs(e.value - target) <= sigmas * e.std_error + 1e-12;
}

Symmetry sym(int n, std::vector<std::vector<int>> blocks) {
  std::vector<MultiIndex> out;
  for (auto& b : blocks) out.push_back(MultiIndex::from_indices(n, b));
  return {n, out};
}

}  // namespace

TEST_CASE("counter rng is a pure function of key and counter") {
  CounterRng a(42);
  CounterRng b(42);
  for (int k = 0; k < 100; ++k) CHECK(a.next() == b.next());
  CHECK(a.counter() == 100);
  CounterRng c(43);
  CHECK(CounterRng(42).next() != c.next());
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CounterRng u(5);
  for (int k = 0; k < 10000; ++k) {
    const double v = u.uniform();
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("sphere samples are unit vectors and reproducible") {
  const auto cfg = config(1000, 9, 3);
  const auto pts = sample_sphere(5, cfg);
  REQUIRE(pts.size() == 1000);
  for (const auto& x : pts) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    CHECK(std::abs(std::sqrt(r2) - 1.0) < 1e-12);
  }
  CHECK(sample_sphere(5, cfg) == pts);
}

TEST_CASE("moments of the uniform sphere measure") {
  const auto cfg = config(1'000'000, 3);
  for (int n : {3, 5, 8}) {
    const auto m1 = integrate_sphere(lambda(n, [](auto x) { return x[0] + 1.0; }), cfg);
    CHECK(within(m1, 1.0));
    const auto m2 = integrate_sphere(lambda(n, [](auto x) { return x[0] * x[0]; }), cfg);
    CHECK(within(m2, 1.0 / n));
  }
  const auto one = integrate_sphere(lambda(4, [](auto) { return 1.0; }), cfg);
  CHECK(one.value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(one.std_error < 1e-12);
}

TEST_CASE("ball samples are uniform") {
  // E|y|^2 over the unit ball in R^d is d / (d + 2).
  for (int d : {1, 2, 3, 6}) {
    const auto est = estimate_means(
        d, Domain::ball, 2.0, 1,
        [](std::span<const double> y, std::span<double> out) {
          double r2 = 0.0;
          for (double v : y) r2 += v * v;
          out[0] = r2;
        },
        config(400'000, 5));
    CHECK(within(est[0], 4.0 * d / (d + 2.0)));
  }
  CHECK(unit_ball_volume(1) == doctest::Approx(2.0));
  CHECK(unit_ball_volume(2) == doctest::Approx(M_PI));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * M_PI / 3.0));
}

TEST_CASE("lp norms") {
  const auto cfg = config(200'000, 2);
  const auto c = lambda(4, [](auto) { return 2.5; });
  for (double p : {1.0, 2.0, 7.5}) CHECK(lp_norm_sphere(c, p, cfg).value == doctest::Approx(2.5));

  const auto f = lambda(3, [](auto x) { return 1.0 + x[2] * x[2]; });
  CHECK(lp_norm_sphere(f, 1.0, cfg).value == doctest::Approx(integrate_sphere(f, cfg).value));
  // On S^2, x_3 is uniform on [-1, 1]: ||1 + t^2||_2^2 = 1 + 2/3 + 1/5.
  CHECK(within(lp_moment_sphere(f, 2.0, cfg), 1.0 + 2.0 / 3.0 + 0.2));
  CHECK_THROWS_AS(lp_norm_sphere(f, 0.5, cfg), InvalidType);

  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto g = random_symmetric_function(sym(5, {{0, 1}, {2, 3}}), seed);
    double previous = 0.0;
    for (double p : {1.0, 2.0, 4.0}) {
      const auto e = lp_norm_sphere(g, p, cfg);
      CHECK(e.value >= previous - 3.0 * e.std_error);
      previous = e.value;
    }
  }
}

TEST_CASE("non-finite and negative samples are rejected") {
  const auto cfg = config(1000);
  CHECK_THROWS_AS(integrate_sphere(lambda(3, [](auto) { return NAN; }), cfg), NonFiniteSample);
  CHECK_THROWS_AS(integrate_sphere(lambda(3, [](auto) { return INFINITY; }), cfg),
                  NonFiniteSample);
  CHECK_THROWS_AS(integrate_sphere(lambda(3, [](auto) { return -1.0; }), cfg), NonFiniteSample);
  CHECK_THROWS_AS(config(50).validate(), InvalidType);
  CHECK_THROWS_AS(config(1000, 1, 0).validate(), InvalidType);
}

TEST_CASE("ball reduction") {
  const auto cfg = config(400'000, 8);
  // n = 3, |alpha| = 1: weight (1 - t^2)^0 on [-1, 1].
  const auto one3 = lambda(3, [](auto) { return 1.0; });
  CHECK(ball_reduced_integral(one3, MultiIndex::from_indices(3, {0}), cfg).value ==
        doctest::Approx(2.0));

  // The ratio sphere / ball route is the same for every f of x_alpha.
  const int n = 5;
  const auto alpha = MultiIndex::from_indices(n, {0, 1});
  auto norm2 = [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1]; };
  const std::vector<Integrand> fs{
      lambda(n, [](auto) { return 1.0; }),
      lambda(n, [=](auto x) { return norm2(x); }),
      lambda(n, [=](auto x) { return 1.0 - norm2(x); }),
      lambda(n, [](auto x) { return (x[0] * x[0] < 0.2 ? 1.0 : 0.0) * (x[1] * x[1] < 0.3 ? 1.0 : 0.0); }),
  };
  std::vector<double> ratios, errors;
  for (const auto& f : fs) {
    const auto s = integrate_sphere(f, cfg);
    const auto b = ball_reduced_integral(f, alpha, cfg.substream(1));
    ratios.push_back(s.value / b.value);
    errors.push_back(ratios.back() * std::hypot(s.relative_error(), b.relative_error()));
  }
  for (std::size_t k = 1; k < ratios.size(); ++k) {
    CHECK(std::abs(ratios[k] - ratios[0]) <= 3.0 * std::hypot(errors[k], errors[0]));
  }

  // |alpha| = n - 1: singular weight (1 - |y|^2)^{-1/2}, finite for bounded f.
  const auto a3 = MultiIndex::from_indices(4, {0, 1, 2});
  const auto g = lambda(4, [](auto x) { return 1.0 + x[0] * x[0]; });
  const auto ratio1 = integrate_sphere(g, cfg).value / ball_reduced_integral(g, a3, cfg).value;
  const auto ratio0 = 1.0 / ball_reduced_integral(lambda(4, [](auto) { return 1.0; }), a3, cfg).value;
  CHECK(ratio1 == doctest::Approx(ratio0).epsilon(0.02));
}

TEST_CASE("shard results do not depend on the thread count") {
  const auto f = random_symmetric_function(sym(6, {{0, 1, 2}, {3, 4}}), 17);
  const auto cfg = config(50'000, 21, 7);
  setenv("SPHEREBL_THREADS", "1", 1);
  const auto one = integrate_sphere(f, cfg);
  setenv("SPHEREBL_THREADS", "4", 1);
  const auto four = integrate_sphere(f, cfg);
  unsetenv("SPHEREBL_THREADS");
  CHECK(one.value == four.value);
  CHECK(one.std_error == four.std_error);
  const auto again = integrate_sphere(f, cfg);
  CHECK(again.value == one.value);

  auto other = cfg;
  other.seed = 22;
  CHECK(integrate_sphere(f, other).value != one.value);
  // Different shard counts give a different but statistically equal estimate.
  auto resharded = cfg;
  resharded.shards = 2;
  const auto two = integrate_sphere(f, resharded);
  CHECK(std::abs(two.value - one.value) <= 5.0 * std::hypot(one.std_error, two.std_error));
}

TEST_CASE("symmetric test functions") {
  const auto s = sym(7, {{0, 1, 2}, {3, 4}});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto f = random_symmetric_function(s, seed);
    CHECK(f.symmetry_tag.has_value());
    CHECK(block_rotation_defect(f, 64, seed) < 1e-9);
    CHECK(reflection_even(f, 32, seed));
  }
  const auto c = constant_function(s, 3.0);
  CHECK(c.eval(std::vector<double>(7, 0.1)) == 3.0);
  CHECK_THROWS_AS(constant_function(s, -1.0), InvalidType);

  Term bad;
  bad.variable = Term::Variable::block;
  bad.index = 0;  // alpha_1 carries no information
  CHECK_THROWS_AS(terms_function(s, 1.0, {bad}), InvalidType);
  Term coord;
  coord.variable = Term::Variable::coordinate;
  coord.index = 0;  // not in R
  CHECK_THROWS_AS(terms_function(s, 1.0, {coord}), InvalidType);
  coord.index = 6;
  const auto g = terms_function(s, 1.0, {coord});
  std::vector<double> x{0, 0, 0, 0, 0, 0, 0.5};
  CHECK(g.eval(x) == doctest::Approx(1.25));

  // A function that ignores the block structure is caught.
  Integrand broken{7, [](auto x) { return 1.0 + x[3] * x[3]; }, s, "broken"};
  CHECK(block_rotation_defect(broken, 64, 1) > 1e-3);
}

TEST_CASE("holder verification examples") {
  const auto fam = enumerate_symmetries(BalancedType(3, {2}));
  const auto cfg = config(200'000, 4);
  std::vector<Integrand> ones;
  for (const auto& s : fam) ones.push_back(constant_function(s, 1.0));
  const std::vector<double> p2(3, 2.0);
  const auto r1 = holder_verify(fam, ones, p2, cfg);
  CHECK(r1.pass);
  CHECK(r1.lhs.value == doctest::Approx(1.0));
  CHECK(r1.rhs == doctest::Approx(1.0));

  std::vector<Integrand> quad;
  for (const auto& s : fam) {
    Term t;
    t.variable = Term::Variable::coordinate;
    t.index = s.r_mask().lowest();
    quad.push_back(terms_function(s, 1.0, {t}));
  }
  const auto r2 = holder_verify(fam, quad, p2, cfg);
  CHECK(r2.pass);
  CHECK(r2.margin > 0.0);
  CHECK_FALSE(r2.reflection_flagged);

  // Exponent below the per-function threshold, and wrong tags.
  const std::vector<double> p1(3, 1.5);
  CHECK_THROWS_AS(holder_verify(fam, quad, p1, cfg), InvalidType);
  std::vector<Integrand> swapped{quad[1], quad[0], quad[2]};
  CHECK_THROWS_AS(holder_verify(fam, swapped, p2, cfg), InvalidType);
}

TEST_CASE("holder verification on random families is reproducible") {
  const auto fam = enumerate_symmetries(BalancedType(4, {2, 2}));
  const auto cfg = config(100'000, 12);
  std::vector<Integrand> fs;
  for (std::size_t J = 0; J < fam.size(); ++J) {
    fs.push_back(random_symmetric_function(fam[J], derive_seed(5, J)));
  }
  const std::vector<double> ps(fam.size(), 4.0);
  const auto a = holder_verify(fam, fs, ps, cfg);
  const auto b = holder_verify(fam, fs, ps, cfg);
  CHECK(a.pass);
  CHECK(a.lhs.value == b.lhs.value);
  CHECK(a.rhs == b.rhs);
}
