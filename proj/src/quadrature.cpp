#include "spherebl/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include "spherebl/error.hpp"
#include "spherebl/exponents.hpp"

namespace spherebl {

namespace {

// Welford accumulator; merged with Chan's formula.
struct Moments {
  std::int64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double d = x - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (x - mean);
  }

  void merge(const Moments& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    const double total = static_cast<double>(count + o.count);
    const double d = o.mean - mean;
    mean += d * static_cast<double>(o.count) / total;
    m2 += o.m2 + d * d * static_cast<double>(count) * static_cast<double>(o.count) / total;
    count += o.count;
  }

  double std_error() const {
    if (count < 2) return 0.0;
    const double var = m2 / static_cast<double>(count - 1);
    return std::sqrt(std::max(var, 0.0) / static_cast<double>(count));
  }
};

std::int64_t shard_samples(const QuadConfig& cfg, int shard) {
  const std::int64_t base = cfg.samples / cfg.shards;
  return base + (shard < cfg.samples % cfg.shards ? 1 : 0);
}

// Runs body(shard) for every shard on a small pool; rethrows the first error.
template <class Body>
void for_each_shard(int shards, Body&& body) {
  const int threads = std::min(worker_threads(), shards);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int s = next++; s < shards; s = next++) {
      try {
        body(s);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = shards;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

double checked(double v) {
  if (!std::isfinite(v)) {
    throw NonFiniteSample("integrand returned a non-finite value; singular integrands need "
                          "truncation");
  }
  if (v < 0.0) throw NonFiniteSample("integrand returned a negative value");
  return v;
}

void check_integrand(const Integrand& f) {
  if (!f.eval) throw InvalidType("integrand has no evaluator");
  if (f.n < 2) throw InvalidType("integrand dimension must be >= 2");
}

}  // namespace

int available_parallelism() {
  return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

int worker_threads() {
  if (const char* env = std::getenv("SPHEREBL_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return available_parallelism();
}

void QuadConfig::validate() const {
  if (samples < 100) throw InvalidType("quadrature needs at least 100 samples");
  if (shards < 1) throw InvalidType("quadrature needs at least one shard");
  if (shards > samples) throw InvalidType("more shards than samples");
}

QuadConfig QuadConfig::substream(std::uint64_t stream) const {
  QuadConfig out = *this;
  out.seed = derive_seed(seed, stream);
  return out;
}

void sample_sphere_point(CounterRng& rng, std::span<double> out) {
  // A Gaussian vector has norm zero with probability zero; the loop only
  // guards against underflow.
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (double& x : out) {
      x = rng.normal();
      norm2 += x * x;
    }
  } while (norm2 < 1e-300);
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& x : out) x *= inv;
}

void sample_ball_point(CounterRng& rng, double radius, std::span<double> out) {
  sample_sphere_point(rng, out);
  const double r = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(out.size()));
  for (double& x : out) x *= r;
}

double unit_ball_volume(int dim) {
  const double half = 0.5 * static_cast<double>(dim);
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

std::vector<std::vector<double>> sample_sphere(int n, const QuadConfig& cfg) {
  cfg.validate();
  if (n < 2) throw InvalidType("sphere dimension must be >= 2");
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(cfg.samples));
  for (int s = 0; s < cfg.shards; ++s) {
    CounterRng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(s)));
    for (std::int64_t k = 0; k < shard_samples(cfg, s); ++k) {
      std::vector<double> x(static_cast<std::size_t>(n));
      sample_sphere_point(rng, x);
      out.push_back(std::move(x));
    }
  }
  return out;
}

std::vector<Estimate> estimate_means(int dim, Domain domain, double radius, int outputs,
                                     const SampleKernel& kernel, const QuadConfig& cfg) {
  cfg.validate();
  if (dim < 1) throw InvalidType("domain dimension must be positive");
  if (outputs < 1) throw InvalidType("kernel must produce at least one output");
  const auto k = static_cast<std::size_t>(outputs);
  std::vector<std::vector<Moments>> per_shard(static_cast<std::size_t>(cfg.shards),
                                              std::vector<Moments>(k));
  for_each_shard(cfg.shards, [&](int s) {
    CounterRng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(s)));
    std::vector<double> point(static_cast<std::size_t>(dim));
    std::vector<double> values(k);
    auto& acc = per_shard[static_cast<std::size_t>(s)];
    for (std::int64_t i = 0, count = shard_samples(cfg, s); i < count; ++i) {
      if (domain == Domain::sphere) {
        sample_sphere_point(rng, point);
      } else {
        sample_ball_point(rng, radius, point);
      }
      kernel(point, values);
      for (std::size_t j = 0; j < k; ++j) {
        if (!std::isfinite(values[j])) {
          throw NonFiniteSample("sample produced a non-finite value; singular integrands need "
                                "truncation");
        }
        acc[j].add(values[j]);
      }
    }
  });
  std::vector<Moments> total(k);
  for (const auto& shard : per_shard) {
    for (std::size_t j = 0; j < k; ++j) total[j].merge(shard[j]);
  }
  std::vector<Estimate> out(k);
  for (std::size_t j = 0; j < k; ++j) {
    out[j] = {total[j].mean, total[j].std_error(), cfg.samples, cfg.seed};
  }
  return out;
}

Estimate integrate_sphere(const Integrand& f, const QuadConfig& cfg) {
  check_integrand(f);
  return estimate_means(
      f.n, Domain::sphere, 1.0, 1,
      [&](std::span<const double> x, std::span<double> out) { out[0] = checked(f.eval(x)); },
      cfg)[0];
}

Estimate lp_moment_sphere(const Integrand& f, double p, const QuadConfig& cfg) {
  check_integrand(f);
  if (!(p >= 1.0)) throw InvalidType("Lebesgue exponent must be >= 1");
  return estimate_means(
      f.n, Domain::sphere, 1.0, 1,
      [&](std::span<const double> x, std::span<double> out) {
        out[0] = std::pow(checked(f.eval(x)), p);
      },
      cfg)[0];
}

namespace {

Estimate norm_from_moment(const Estimate& m, double p) {
  Estimate out = m;
  out.value = std::pow(m.value, 1.0 / p);
  // d(m^{1/p})/dm = m^{1/p - 1} / p
  out.std_error = m.value > 0.0 ? out.value / (p * m.value) * m.std_error : 0.0;
  return out;
}

}  // namespace

Estimate lp_norm_sphere(const Integrand& f, double p, const QuadConfig& cfg) {
  return norm_from_moment(lp_moment_sphere(f, p, cfg), p);
}

Estimate ball_reduced_integral(const Integrand& f, const MultiIndex& alpha,
                               const QuadConfig& cfg) {
  check_integrand(f);
  if (alpha.n() != f.n) throw DimensionMismatch("multi-index and integrand dimensions differ");
  const int k = alpha.weight();
  const int n = f.n;
  if (k < 1 || k > n - 1) throw InvalidType("ball reduction needs 1 <= |alpha| <= n-1");
  const auto inside = alpha.indices();
  const int spare = complement(alpha).lowest();
  const double exponent = 0.5 * static_cast<double>(n - 2 - k);
  const double volume = unit_ball_volume(k);
  auto est = estimate_means(
      k, Domain::ball, 1.0, 1,
      [&](std::span<const double> y, std::span<double> out) {
        std::vector<double> x(static_cast<std::size_t>(n), 0.0);
        double r2 = 0.0;
        for (int j = 0; j < k; ++j) {
          x[static_cast<std::size_t>(inside[static_cast<std::size_t>(j)])] = y[static_cast<std::size_t>(j)];
          r2 += y[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(j)];
        }
        const double rest = std::max(0.0, 1.0 - r2);
        x[static_cast<std::size_t>(spare)] = std::sqrt(rest);
        out[0] = checked(f.eval(x)) * std::pow(rest, exponent);
      },
      cfg)[0];
  est.value *= volume;
  est.std_error *= volume;
  return est;
}

VerificationRecord holder_verify(std::span<const Symmetry> fams, std::span<const Integrand> fs,
                                 std::span<const double> ps, const QuadConfig& cfg) {
  if (fams.size() != fs.size() || fams.size() != ps.size()) {
    throw DimensionMismatch("need one function and one exponent per symmetry");
  }
  const auto thresholds = per_function_exponents(fams);
  const int n = fams.front().n();
  for (std::size_t J = 0; J < fams.size(); ++J) {
    check_integrand(fs[J]);
    if (fs[J].n != n) throw DimensionMismatch("integrand dimension differs from the family");
    if (!fs[J].symmetry_tag || !(*fs[J].symmetry_tag == fams[J])) {
      throw InvalidType("function " + std::to_string(J) + " is not tagged with its symmetry");
    }
    if (ps[J] < static_cast<double>(thresholds[J])) {
      throw InvalidType("exponent " + std::to_string(J) + " is below the per-function exponent " +
                        std::to_string(thresholds[J]));
    }
  }
  const auto m = fams.size();
  auto est = estimate_means(
      n, Domain::sphere, 1.0, static_cast<int>(m + 1),
      [&](std::span<const double> x, std::span<double> out) {
        double product = 1.0;
        for (std::size_t J = 0; J < m; ++J) {
          const double v = checked(fs[J].eval(x));
          product *= v;
          out[J + 1] = std::pow(v, ps[J]);
        }
        out[0] = product;
      },
      cfg);

  VerificationRecord rec;
  rec.lhs = est[0];
  rec.exponents.assign(ps.begin(), ps.end());
  rec.rhs = 1.0;
  double rel2 = 0.0;
  for (std::size_t J = 0; J < m; ++J) {
    rec.norms.push_back(norm_from_moment(est[J + 1], ps[J]));
    rec.rhs *= rec.norms.back().value;
    rel2 += std::pow(rec.norms.back().relative_error(), 2);
  }
  rec.rhs_std_error = rec.rhs * std::sqrt(rel2);
  rec.margin = rec.rhs - rec.lhs.value;
  rec.relative_joint_error = std::sqrt(rel2 + std::pow(rec.lhs.relative_error(), 2));
  rec.pass = rec.lhs.value <= rec.rhs * (1.0 + 3.0 * rec.relative_joint_error);
  for (std::size_t J = 0; J < m; ++J) {
    if (!reflection_even(fs[J], 32, derive_seed(cfg.seed, 0x5eed0 + J))) rec.reflection_flagged = true;
  }
  return rec;
}

double block_rotation_defect(const Integrand& f, int trials, std::uint64_t seed) {
  check_integrand(f);
  if (!f.symmetry_tag) return 0.0;
  const auto& blocks = f.symmetry_tag->alphas();
  CounterRng rng(seed);
  std::vector<double> x(static_cast<std::size_t>(f.n));
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    sample_sphere_point(rng, x);
    const auto& block = blocks[static_cast<std::size_t>(rng.next() % blocks.size())];
    const auto idx = block.indices();
    const auto a = static_cast<std::size_t>(rng.next() % idx.size());
    auto b = static_cast<std::size_t>(rng.next() % (idx.size() - 1));
    if (b >= a) ++b;
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    auto y = x;
    const auto ia = static_cast<std::size_t>(idx[a]);
    const auto ib = static_cast<std::size_t>(idx[b]);
    y[ia] = std::cos(theta) * x[ia] - std::sin(theta) * x[ib];
    y[ib] = std::sin(theta) * x[ia] + std::cos(theta) * x[ib];
    const double fx = f.eval(x);
    const double fy = f.eval(y);
    worst = std::max(worst, std::abs(fy - fx) / std::max(std::abs(fx), 1e-300));
  }
  return worst;
}

bool reflection_even(const Integrand& f, int trials, std::uint64_t seed) {
  check_integrand(f);
  if (!f.symmetry_tag) return true;
  const auto lead = f.symmetry_tag->leading().indices();
  CounterRng rng(seed);
  std::vector<double> x(static_cast<std::size_t>(f.n));
  for (int t = 0; t < trials; ++t) {
    sample_sphere_point(rng, x);
    auto y = x;
    for (int i : lead) y[static_cast<std::size_t>(i)] = -y[static_cast<std::size_t>(i)];
    const double fx = f.eval(x);
    const double fy = f.eval(y);
    if (std::abs(fx - fy) > 1e-9 * std::max(std::abs(fx), 1.0)) return false;
  }
  return true;
}

}  // namespace spherebl
