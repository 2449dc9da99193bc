#include "spherebl/json_io.hpp"

#include <cmath>
#include <limits>

#include "spherebl/error.hpp"

namespace spherebl {

namespace {

const Json& field(const Json& j, const std::string& path, const std::string& key) {
  if (!j.is_object()) throw InputError(path, "object expected");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(json_key(path, key), "required field missing");
  return *it;
}

int int_value(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw InputError(path, "integer expected");
  const auto v = j.get<std::int64_t>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw InputError(path, "integer out of range");
  }
  return static_cast<int>(v);
}

int dimension(const Json& j, const std::string& path) {
  const auto key = json_key(path, "n");
  const int n = int_value(field(j, path, "n"), key);
  if (n < kMinDimension || n > kMaxDimension) throw InputError(key, "n must lie in [3, 64]");
  return n;
}

const Json& array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw InputError(path, "array expected");
  return j;
}

MultiIndex bits_from_json(const Json& j, const std::string& path, int n) {
  array(j, path);
  if (static_cast<int>(j.size()) != n) {
    throw InputError(path, "multi-index must have length n = " + std::to_string(n));
  }
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const int b = int_value(j[i], json_index(path, i));
    if (b != 0 && b != 1) throw InputError(json_index(path, i), "entries must be 0 or 1");
    if (b == 1) mask |= std::uint64_t{1} << i;
  }
  return {n, mask};
}

Json big_or_number(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() &&
      v <= std::numeric_limits<std::int64_t>::max()) {
    return v.convert_to<std::int64_t>();
  }
  return v.str();
}

BigInt big_from_json(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return BigInt(j.get<std::string>());
    } catch (const std::exception&) {
      throw InputError(path, "integer string expected");
    }
  }
  throw InputError(path, "integer expected");
}

Json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

std::string json_key(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string json_index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

EdgeSet edge_set_from_json(const Json& j, const std::string& path) {
  const int n = dimension(j, path);
  const auto epath = json_key(path, "edges");
  const Json& edges = array(field(j, path, "edges"), epath);
  EdgeSet out(n);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto p = json_index(epath, k);
    if (!edges[k].is_array() || edges[k].size() != 2) throw InputError(p, "pair [i,j] expected");
    const int i = int_value(edges[k][0], json_index(p, 0));
    const int jj = int_value(edges[k][1], json_index(p, 1));
    if (!(i < jj)) throw InputError(p, "i<j required");
    if (i < 1 || jj > n) throw InputError(p, "indices must lie in [1, n]");
    if (out.contains(i - 1, jj - 1)) throw InputError(p, "duplicate edge");
    out.insert(i - 1, jj - 1);
  }
  return out;
}

Symmetry symmetry_from_json(const Json& j, const std::string& path) {
  const int n = dimension(j, path);
  const auto apath = json_key(path, "alphas");
  const Json& alphas = array(field(j, path, "alphas"), apath);
  std::vector<MultiIndex> blocks;
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    blocks.push_back(bits_from_json(alphas[k], json_index(apath, k), n));
  }
  try {
    Symmetry s(n, std::move(blocks));
    if (j.contains("r")) {
      const auto r = bits_from_json(j["r"], json_key(path, "r"), n);
      if (!(r == s.r_mask())) {
        throw InputError(json_key(path, "r"), "r must equal the complement of all blocks");
      }
    }
    return s;
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    throw InputError(apath, e.what());
  }
}

BalancedType balanced_type_from_json(const Json& j, const std::string& path) {
  const int n = dimension(j, path);
  const auto lpath = json_key(path, "lengths");
  const Json& lengths = array(field(j, path, "lengths"), lpath);
  std::vector<int> ls;
  for (std::size_t k = 0; k < lengths.size(); ++k) {
    ls.push_back(int_value(lengths[k], json_index(lpath, k)));
  }
  try {
    return {n, std::move(ls)};
  } catch (const Error& e) {
    throw InputError(lpath, e.what());
  }
}

std::vector<Symmetry> family_from_json(const Json& j, const std::string& path) {
  array(j, path);
  if (j.empty()) throw InputError(path, "family must not be empty");
  std::vector<Symmetry> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const auto p = json_index(path, k);
    if (j[k].is_object() && j[k].contains("alphas")) {
      out.push_back(symmetry_from_json(j[k], p));
      continue;
    }
    const auto edges = edge_set_from_json(j[k], p);
    if (edges.empty()) throw InputError(json_key(p, "edges"), "edge set is empty");
    if (!is_maximal(edges)) {
      throw InputError(json_key(p, "edges"), "edge set is not maximal");
    }
    out.push_back(decompose(edges));
  }
  return out;
}

QuadConfig quad_config_from_json(const Json& j, const std::string& path, QuadConfig base) {
  if (j.is_null()) return base;
  if (!j.is_object()) throw InputError(path, "object expected");
  if (j.contains("samples")) {
    const auto& v = j["samples"];
    if (!v.is_number_integer()) throw InputError(json_key(path, "samples"), "integer expected");
    base.samples = v.get<std::int64_t>();
  }
  if (j.contains("seed")) {
    const auto& v = j["seed"];
    if (!v.is_number_integer()) throw InputError(json_key(path, "seed"), "integer expected");
    base.seed = v.get<std::uint64_t>();
  }
  if (j.contains("shards")) base.shards = int_value(j["shards"], json_key(path, "shards"));
  try {
    base.validate();
  } catch (const Error& e) {
    throw InputError(path, e.what());
  }
  return base;
}

std::vector<double> grid_from_json(const Json& j, const std::string& path, bool inverse) {
  if (j.is_object()) {
    const auto dpath = json_key(path, "dyadic");
    const Json& d = array(field(j, path, "dyadic"), dpath);
    if (d.size() != 2) throw InputError(dpath, "[first, last] expected");
    const int first = int_value(d[0], json_index(dpath, 0));
    const int last = int_value(d[1], json_index(dpath, 1));
    if (first > last) throw InputError(dpath, "first must not exceed last");
    return dyadic_grid(first, last, inverse);
  }
  array(j, path);
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number()) throw InputError(json_index(path, k), "number expected");
    out.push_back(j[k].get<double>());
  }
  return out;
}

Rational rational_from_json(const Json& j, const std::string& path) {
  const BigInt num = big_from_json(field(j, path, "num"), json_key(path, "num"));
  const BigInt den = big_from_json(field(j, path, "den"), json_key(path, "den"));
  if (den == 0) throw InputError(json_key(path, "den"), "denominator must be nonzero");
  return Rational(num, den);
}

Json to_json(const MultiIndex& a) { return a.bits(); }

Json to_json(const EdgeSet& a) {
  Json edges = Json::array();
  for (const auto& e : a.edges()) edges.push_back({e.i + 1, e.j + 1});
  return {{"n", a.n()}, {"edges", edges}};
}

Json to_json(const Symmetry& s) {
  Json alphas = Json::array();
  for (const auto& a : s.alphas()) alphas.push_back(to_json(a));
  return {{"n", s.n()}, {"alphas", alphas}, {"r", to_json(s.r_mask())}};
}

Json to_json(const BalancedType& t) { return {{"n", t.n()}, {"lengths", t.lengths()}}; }

Json to_json(const BigInt& v) { return big_or_number(v); }

Json to_json(const Rational& q) {
  return {{"num", big_or_number(boost::multiprecision::numerator(q))},
          {"den", big_or_number(boost::multiprecision::denominator(q))}};
}

Json to_json(const Estimate& e) {
  return {{"value", finite_or_null(e.value)},
          {"stderr", finite_or_null(e.std_error)},
          {"samples", e.samples},
          {"seed", e.seed}};
}

Json to_json(const QuadConfig& q) {
  return {{"samples", q.samples}, {"seed", q.seed}, {"shards", q.shards}};
}

Json to_json(const ExponentReport& r) {
  Json per = Json::array();
  for (const auto& p : r.p_per_function) per.push_back(to_json(p));
  Json out = {{"p_uniform", to_json(r.p_uniform)},
              {"p_per_function", per},
              {"j_count", to_json(r.j_count)},
              {"delta", to_json(r.delta)},
              {"overcount", to_json(r.overcount)}};
  if (r.per_function_compressed) out["per_function_compressed"] = true;
  return out;
}

Json to_json(const VerificationRecord& r) {
  Json norms = Json::array();
  for (const auto& e : r.norms) norms.push_back(to_json(e));
  return {{"lhs", to_json(r.lhs)},
          {"norms", norms},
          {"exponents", r.exponents},
          {"rhs", finite_or_null(r.rhs)},
          {"rhs_stderr", finite_or_null(r.rhs_std_error)},
          {"margin", finite_or_null(r.margin)},
          {"relative_joint_stderr", finite_or_null(r.relative_joint_error)},
          {"pass", r.pass},
          {"reflection_flagged", r.reflection_flagged}};
}

Json to_json(const DivergenceReport& r) {
  Json lhs = Json::array();
  for (const auto& e : r.lhs) lhs.push_back(to_json(e));
  Json rhs = Json::array();
  for (const auto& row : r.rhs_norms) {
    Json jrow = Json::array();
    for (const auto& e : row) jrow.push_back(to_json(e));
    rhs.push_back(jrow);
  }
  return {{"eps_grid", r.eps_grid},
          {"lhs", lhs},
          {"rhs_norms", rhs},
          {"fit_model", to_string(r.fit_model)},
          {"slope", finite_or_null(r.slope)},
          {"slope_stderr", finite_or_null(r.slope_std_error)},
          {"gamma", r.gamma},
          {"p", r.p},
          {"predicted_slope", r.predicted_slope},
          {"classification", r.classification},
          {"expected_divergent", r.expected_divergent},
          {"rhs_last_change", finite_or_null(r.rhs_last_change)},
          {"rhs_converged", r.rhs_converged},
          {"pass", r.pass}};
}

Json to_json(const GrowthReport& r) {
  Json lhs = Json::array();
  for (const auto& e : r.lhs) lhs.push_back(to_json(e));
  return {{"r_grid", r.r_grid},
          {"lhs", lhs},
          {"fitted_slope", finite_or_null(r.fitted_slope)},
          {"slope_stderr", finite_or_null(r.slope_std_error)},
          {"fit_from", r.fit_from},
          {"local_slopes", r.local_slopes},
          {"delta_target", to_json(r.delta_target)},
          {"eta", r.eta},
          {"eta_adjusted_target", r.eta_adjusted_target},
          {"pass", r.pass}};
}

}  // namespace spherebl
