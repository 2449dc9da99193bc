#include "spherebl/scenario.hpp"

#include <algorithm>
#include <array>
#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "spherebl/enumerate.hpp"
#include "spherebl/error.hpp"
#include "spherebl/extremal.hpp"
#include "spherebl/functions.hpp"

namespace spherebl {

namespace {

constexpr std::array<std::pair<Mode, const char*>, 7> kModeNames{{
    {Mode::decompose, "decompose"},
    {Mode::exponents, "exponents"},
    {Mode::enumerate, "enumerate"},
    {Mode::identities, "identities"},
    {Mode::verify_holder, "verify-holder"},
    {Mode::verify_sharpness, "verify-sharpness"},
    {Mode::verify_local, "verify-local"},
}};

// Parameter lookup: params first, then the input object itself.
class Params {
 public:
  Params(const Json& params, const Json& input, std::string params_path, std::string input_path)
      : params_(params), input_(input), ppath_(std::move(params_path)),
        ipath_(std::move(input_path)) {}

  const Json* find(const std::string& key, std::string* path = nullptr) const {
    if (params_.is_object() && params_.contains(key)) {
      if (path) *path = json_key(ppath_, key);
      return &params_[key];
    }
    if (input_.is_object() && input_.contains(key)) {
      if (path) *path = json_key(ipath_, key);
      return &input_[key];
    }
    return nullptr;
  }

  std::optional<double> number(const std::string& key) const {
    std::string path;
    const Json* v = find(key, &path);
    if (!v) return std::nullopt;
    if (!v->is_number()) throw InputError(path, "number expected");
    return v->get<double>();
  }

  std::optional<std::int64_t> integer(const std::string& key) const {
    std::string path;
    const Json* v = find(key, &path);
    if (!v) return std::nullopt;
    if (!v->is_number_integer()) throw InputError(path, "integer expected");
    return v->get<std::int64_t>();
  }

  bool flag(const std::string& key) const {
    std::string path;
    const Json* v = find(key, &path);
    if (!v) return false;
    if (!v->is_boolean()) throw InputError(path, "boolean expected");
    return v->get<bool>();
  }

  std::optional<std::vector<double>> grid(const std::string& key, bool inverse) const {
    std::string path;
    const Json* v = find(key, &path);
    if (!v) return std::nullopt;
    return grid_from_json(*v, path, inverse);
  }

 private:
  const Json& params_;
  const Json& input_;
  std::string ppath_;
  std::string ipath_;
};

std::string type_label(const BalancedType& t) {
  std::string s = "n=" + std::to_string(t.n()) + ",(";
  for (std::size_t i = 0; i < t.lengths().size(); ++i) {
    if (i) s += ",";
    s += std::to_string(t.lengths()[i]);
  }
  return s + ")";
}

std::string family_label(std::span<const Symmetry> fams) {
  const auto lengths = fams.front().lengths();
  for (const auto& s : fams) {
    if (s.lengths() != lengths) return "n=" + std::to_string(fams.front().n()) + ",mixed";
  }
  try {
    return type_label(BalancedType(fams.front().n(), lengths));
  } catch (const Error&) {
    return "n=" + std::to_string(fams.front().n()) + ",custom";
  }
}

// Runs `fn`, converting library precondition errors on input-derived
// objects into InputError at `path`.
template <class F>
auto at_path(const std::string& path, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const InputError&) {
    throw;
  } catch (const NonFiniteSample&) {
    throw;
  } catch (const Error& e) {
    throw InputError(path.empty() ? "input" : path, e.what());
  }
}

struct Family {
  std::vector<Symmetry> members;
  std::optional<BalancedType> type;
  std::string label;
};

// "type": BalancedType (enumerated), "symmetries": family list, or the
// input itself being a family list / BalancedType.
Family family_from_input(const Json& in, const std::string& path, std::int64_t cap) {
  Family fam;
  auto from_type = [&](const Json& j, const std::string& p) {
    fam.type = balanced_type_from_json(j, p);
    fam.members = at_path(p, [&] { return enumerate_symmetries(*fam.type, cap); });
    fam.label = type_label(*fam.type);
  };
  if (in.is_array()) {
    fam.members = family_from_json(in, path);
  } else if (in.is_object() && in.contains("type")) {
    from_type(in["type"], json_key(path, "type"));
    return fam;
  } else if (in.is_object() && in.contains("symmetries")) {
    fam.members = family_from_json(in["symmetries"], json_key(path, "symmetries"));
  } else if (in.is_object() && in.contains("lengths")) {
    from_type(in, path);
    return fam;
  } else {
    throw InputError(path.empty() ? "input" : path,
                     "expected \"type\", \"symmetries\" or a family list");
  }
  const int n = fam.members.front().n();
  for (std::size_t k = 0; k < fam.members.size(); ++k) {
    if (fam.members[k].n() != n) {
      throw InputError(json_index(json_key(path, "symmetries"), k), "dimension differs");
    }
  }
  fam.label = family_label(fam.members);
  return fam;
}

std::vector<std::int64_t> exponents_for(const Family& fam, const Params& params,
                                        const std::string& path) {
  std::string p;
  if (const Json* v = params.find("exponents", &p)) {
    if (!v->is_array() || v->size() != fam.members.size()) {
      throw InputError(p, "one exponent per symmetry expected");
    }
    std::vector<std::int64_t> out;
    for (std::size_t k = 0; k < v->size(); ++k) {
      if (!(*v)[k].is_number_integer() || (*v)[k].get<std::int64_t>() < 1) {
        throw InputError(json_index(p, k), "positive integer expected");
      }
      out.push_back((*v)[k].get<std::int64_t>());
    }
    return out;
  }
  return at_path(path, [&] { return per_function_exponents(fam.members); });
}

Term term_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw InputError(path, "object expected");
  Term t;
  if (j.contains("block")) {
    if (!j["block"].is_number_integer()) throw InputError(json_key(path, "block"), "integer expected");
    t.variable = Term::Variable::block;
    t.index = j["block"].get<int>() - 1;
  } else if (j.contains("coord")) {
    if (!j["coord"].is_number_integer()) throw InputError(json_key(path, "coord"), "integer expected");
    t.variable = Term::Variable::coordinate;
    t.index = j["coord"].get<int>() - 1;
  } else {
    throw InputError(path, "\"block\" or \"coord\" required");
  }
  const std::string shape = j.value("shape", "power");
  if (shape == "power") {
    t.shape = Term::Shape::power;
  } else if (shape == "bump") {
    t.shape = Term::Shape::bump;
  } else {
    throw InputError(json_key(path, "shape"), "\"power\" or \"bump\" expected");
  }
  auto num = [&](const char* key, double& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_number()) throw InputError(json_key(path, key), "number expected");
    out = j[key].get<double>();
  };
  num("coef", t.coef);
  num("exponent", t.exponent);
  num("center", t.center);
  num("width", t.width);
  return t;
}

Integrand function_from_json(const Json& j, const std::string& path, const Symmetry& s,
                             std::size_t J) {
  if (!j.is_object()) throw InputError(path, "function spec object expected");
  const std::string kind = j.value("kind", "");
  auto num = [&](const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw InputError(json_key(path, key), "number expected");
    return j[key].get<double>();
  };
  return at_path(path, [&]() -> Integrand {
    if (kind == "constant") return constant_function(s, num("value", 1.0));
    if (kind == "random") {
      std::uint64_t seed = 0;
      if (j.contains("seed")) {
        if (!j["seed"].is_number_integer()) {
          throw InputError(json_key(path, "seed"), "integer expected");
        }
        seed = j["seed"].get<std::uint64_t>();
      }
      return random_symmetric_function(s, derive_seed(seed, J));
    }
    if (kind == "extremal") {
      ExtremalParams ep;
      ep.gamma = num("gamma", ep.gamma);
      ep.trunc = num("trunc", ep.trunc);
      return extremal_function(s, ep);
    }
    if (kind == "terms") {
      std::vector<Term> terms;
      if (j.contains("terms")) {
        const auto tpath = json_key(path, "terms");
        if (!j["terms"].is_array()) throw InputError(tpath, "array expected");
        for (std::size_t k = 0; k < j["terms"].size(); ++k) {
          terms.push_back(term_from_json(j["terms"][k], json_index(tpath, k)));
        }
      }
      return terms_function(s, num("c0", 1.0), std::move(terms));
    }
    throw InputError(json_key(path, "kind"),
                     "one of \"constant\", \"random\", \"extremal\", \"terms\" expected");
  });
}

// A single Hoelder scenario item.
struct HolderOutcome {
  Json json;
  std::vector<std::string> row;
  bool pass;
};

HolderOutcome run_holder_item(const Json& item, const std::string& path, const Json& params,
                              const std::string& params_path, const QuadConfig& quad) {
  const Params par(params, item, params_path, path);
  const auto cap = par.integer("cap").value_or(kDefaultEnumerationCap);
  const Family fam = family_from_input(item, path, cap);
  const auto m = fam.members.size();

  std::vector<double> ps;
  std::string ppath;
  if (const Json* v = par.find("p", &ppath)) {
    if (!v->is_number()) throw InputError(ppath, "number expected");
    ps.assign(m, v->get<double>());
  } else if (par.find("exponents")) {
    for (auto e : exponents_for(fam, par, path)) ps.push_back(static_cast<double>(e));
  } else {
    const auto uniform = at_path(path, [&] { return uniform_exponent(fam.members); });
    ps.assign(m, static_cast<double>(uniform));
  }

  std::vector<Integrand> fs;
  std::string fpath;
  const Json* fspec = par.find("functions", &fpath);
  Json default_spec = {{"kind", "random"}, {"seed", 0}};
  for (std::size_t J = 0; J < m; ++J) {
    if (fspec && fspec->is_array()) {
      if (fspec->size() != m) throw InputError(fpath, "one function spec per symmetry expected");
      fs.push_back(function_from_json((*fspec)[J], json_index(fpath, J), fam.members[J], J));
    } else {
      fs.push_back(function_from_json(fspec ? *fspec : default_spec,
                                      fspec ? fpath : std::string("functions"), fam.members[J], J));
    }
  }

  const auto qpath = json_key(path, "quad");
  const QuadConfig q = item.is_object() && item.contains("quad")
                           ? quad_config_from_json(item["quad"], qpath, quad)
                           : quad;
  const auto rec = at_path(path, [&] { return holder_verify(fam.members, fs, ps, q); });
  Json out = spherebl::to_json(rec);
  out["label"] = fam.label;
  out["quad"] = spherebl::to_json(q);
  const bool uniform_p = std::all_of(ps.begin(), ps.end(), [&](double v) { return v == ps[0]; });
  return {out,
          {fam.label, uniform_p ? format_double(ps[0]) : "mixed", format_double(rec.lhs.value),
           format_double(rec.rhs), format_double(rec.margin), rec.pass ? "true" : "false"},
          rec.pass};
}

// Mode handlers.

void run_decompose(const Scenario& sc, RunRecord& rec) {
  auto one = [](const Json& j, const std::string& path) {
    const auto edges = edge_set_from_json(j, path);
    if (edges.empty()) throw InputError(json_key(path, "edges"), "edge set is empty");
    const auto closure = lie_closure(edges);
    const bool maximal = closure == edges;
    return Json{{"edges", to_json(edges)},
                {"maximal", maximal},
                {"closure", to_json(closure)},
                {"symmetry", to_json(decompose(closure))}};
  };
  if (sc.input.is_array()) {
    Json out = Json::array();
    for (std::size_t k = 0; k < sc.input.size(); ++k) {
      out.push_back(one(sc.input[k], json_index("", k)));
    }
    rec.result = out;
  } else {
    rec.result = one(sc.input, "");
  }
}

void run_exponents(const Scenario& sc, RunRecord& rec) {
  if (sc.input.is_object() && sc.input.contains("lengths")) {
    const auto t = balanced_type_from_json(sc.input);
    const auto report = exponent_report(t);
    rec.result = to_json(report);
    rec.result["type"] = to_json(t);
    rec.result["j_max"] = to_json(j_max(t));
    rec.result["edge_membership_count"] = to_json(edge_membership_count(t));
    rec.result["classes"] = to_json(BigInt(j_max(t) / overcount_factor(t)));
    return;
  }
  if (!sc.input.is_array()) {
    throw InputError("input", "family list or {\"n\",\"lengths\"} expected");
  }
  const auto fams = family_from_json(sc.input);
  rec.result = to_json(at_path("", [&] { return exponent_report(fams); }));
  Json syms = Json::array();
  for (const auto& s : fams) syms.push_back(to_json(s));
  rec.result["symmetries"] = syms;
}

void run_enumerate(const Scenario& sc, RunRecord& rec) {
  const Params par(sc.params, sc.input, "params", "");
  const auto t = balanced_type_from_json(sc.input.contains("type") ? sc.input["type"] : sc.input,
                                         sc.input.contains("type") ? "type" : "");
  const auto cap = par.integer("cap").value_or(kDefaultEnumerationCap);
  const auto fams = at_path("", [&] { return enumerate_symmetries(t, cap); });
  if (par.flag("classes")) {
    Json out = Json::array();
    for (const auto& cls : canonical_classes(fams)) {
      out.push_back({{"representative", to_json(cls.front().canonical())},
                     {"size", cls.size()}});
    }
    rec.result = out;
  } else {
    Json out = Json::array();
    for (const auto& s : fams) out.push_back(to_json(s));
    rec.result = out;
  }
}

void run_identities(const Scenario& sc, RunRecord& rec) {
  const Params par(sc.params, sc.input, "params", "");
  const auto max_n = par.integer("max_n").value_or(10);
  const auto oracle_max_n = par.integer("oracle_max_n").value_or(0);
  if (max_n < kMinDimension || max_n > kMaxDimension) {
    throw InputError("max_n", "must lie in [3, 64]");
  }
  rec.csv.header = {"type", "p_tilde", "j_max", "exponent_count", "partition", "critical_gamma",
                    "oracle"};
  Json rows = Json::array();
  std::size_t failures = 0;
  for (int n = kMinDimension; n <= max_n; ++n) {
    for (const auto& t : all_balanced_types(n)) {
      const BigInt p = balanced_exponent(t);
      const BigInt jm = j_max(t);
      const bool a = p == jm - edge_membership_count(t);
      const bool b = coordinate_partition_sum(t) == Rational(jm);
      const bool c = Rational(1) / critical_gamma(t) == Rational(p) &&
                     critical_gamma_bracket(t) == p;
      Json row = {{"type", to_json(t)},
                  {"p_tilde", to_json(p)},
                  {"j_max", to_json(jm)},
                  {"exponent_count", a},
                  {"partition", b},
                  {"critical_gamma", c}};
      std::string oracle = "";
      bool ok = a && b && c;
      if (n <= oracle_max_n) {
        const auto fams = enumerate_symmetries(t);
        const auto per = per_function_exponents(fams);
        const bool o = BigInt(static_cast<std::int64_t>(fams.size())) == jm &&
                       BigInt(uniform_exponent(fams)) == p &&
                       std::all_of(per.begin(), per.end(),
                                   [&](std::int64_t e) { return BigInt(e) == p; }) &&
                       BigInt(static_cast<std::int64_t>(canonical_classes(fams).size())) ==
                           jm / overcount_factor(t);
        row["oracle"] = o;
        oracle = o ? "true" : "false";
        ok = ok && o;
      }
      if (!ok) ++failures;
      rows.push_back(row);
      rec.csv.rows.push_back({type_label(t), p.str(), jm.str(), a ? "true" : "false",
                              b ? "true" : "false", c ? "true" : "false", oracle});
    }
  }
  rec.result = {{"types", rows.size()}, {"failures", failures}, {"rows", rows}};
  rec.pass = failures == 0;
}

void run_holder(const Scenario& sc, RunRecord& rec) {
  rec.csv.header = {"type", "p", "lhs", "rhs", "margin", "pass"};
  Json out = Json::array();
  bool all = true;
  auto add = [&](const Json& item, const std::string& path) {
    auto r = run_holder_item(item, path, sc.params, "params", sc.quad);
    all = all && r.pass;
    out.push_back(std::move(r.json));
    rec.csv.rows.push_back(std::move(r.row));
  };
  if (sc.input.is_object() && sc.input.contains("scenarios")) {
    const auto& items = sc.input["scenarios"];
    if (!items.is_array() || items.empty()) {
      throw InputError("scenarios", "non-empty array expected");
    }
    for (std::size_t k = 0; k < items.size(); ++k) add(items[k], json_index("scenarios", k));
  } else {
    add(sc.input, "");
  }
  rec.result = out;
  rec.pass = all;
}

void series_csv(const std::vector<double>& grid, const std::vector<Estimate>& lhs, bool pass,
                const char* first, bool with_pass, CsvTable& csv) {
  csv.header = {first, "lhs", "lhs_stderr"};
  if (with_pass) csv.header.push_back("pass");
  for (std::size_t k = 0; k < grid.size() && k < lhs.size(); ++k) {
    std::vector<std::string> row = {format_double(grid[k]), format_double(lhs[k].value),
                                    format_double(lhs[k].std_error)};
    if (with_pass) row.push_back(pass ? "true" : "false");
    csv.rows.push_back(std::move(row));
  }
}

void run_sharpness(const Scenario& sc, RunRecord& rec) {
  const Params par(sc.params, sc.input, "params", "");
  const auto eps = par.grid("eps_grid", true).value_or(default_eps_grid());
  if (eps.size() < 3) throw InputError("eps_grid", "at least three points required");
  for (std::size_t k = 0; k < eps.size(); ++k) {
    if (!(eps[k] > 0.0 && eps[k] < 0.5)) throw InputError(json_index("eps_grid", k), "eps must lie in (0, 1/2)");
  }
  const auto gamma = par.number("gamma");
  const auto p = par.number("p");
  DivergenceReport report;
  if (sc.input.is_object() && sc.input.contains("symmetry")) {
    const auto s = symmetry_from_json(sc.input["symmetry"], "symmetry");
    if (!p) throw InputError("p", "required field missing");
    if (!gamma) throw InputError("gamma", "required field missing");
    report = at_path("", [&] { return norm_boundary_scan(s, *gamma, *p, eps, sc.quad); });
  } else {
    const Json& tj = sc.input.is_object() && sc.input.contains("type") ? sc.input["type"] : sc.input;
    const auto t = balanced_type_from_json(tj, &tj == &sc.input ? "" : "type");
    if (!p) throw InputError("p", "required field missing");
    report = at_path("", [&] { return sharpness_experiment(t, *p, sc.quad, eps, gamma); });
    rec.result["type"] = to_json(t);
  }
  Json r = to_json(report);
  for (auto& [k, v] : r.items()) rec.result[k] = v;
  rec.pass = report.pass;
  series_csv(report.eps_grid, report.lhs, report.pass, "eps", true, rec.csv);
}

void run_local(const Scenario& sc, RunRecord& rec) {
  const Params par(sc.params, sc.input, "params", "");
  const auto cap = par.integer("cap").value_or(kDefaultEnumerationCap);
  const Family fam = family_from_input(sc.input, "", cap);
  const auto exps = exponents_for(fam, par, "");
  const double eta = par.number("eta").value_or(0.1);
  if (!(eta > 0.0)) throw InputError("eta", "must be positive");
  const auto grid = par.grid("r_grid", false).value_or(default_r_grid());
  if (grid.size() < 4) throw InputError("r_grid", "at least four points required");
  const auto report =
      at_path("", [&] { return local_growth_experiment(fam.members, exps, eta, grid, sc.quad); });
  rec.result = to_json(report);
  rec.result["label"] = fam.label;
  rec.result["exponents"] = exps;
  rec.pass = report.pass;
  series_csv(report.r_grid, report.lhs, report.pass, "R", false, rec.csv);
}

}  // namespace

std::string to_string(Mode m) {
  for (const auto& [mode, name] : kModeNames) {
    if (mode == m) return name;
  }
  return "unknown";
}

Mode mode_from_string(const std::string& name) {
  for (const auto& [mode, n] : kModeNames) {
    if (name == n) return mode;
  }
  throw InputError("mode", "unknown mode \"" + name + "\"");
}

Scenario Scenario::from_json(Mode mode, const Json& doc, QuadConfig base) {
  Scenario sc;
  sc.mode = mode;
  if (doc.is_object() && doc.contains("input")) {
    if (doc.contains("mode")) {
      if (!doc["mode"].is_string()) throw InputError("mode", "string expected");
      if (mode_from_string(doc["mode"].get<std::string>()) != mode) {
        throw InputError("mode", "scenario mode differs from the subcommand");
      }
    }
    sc.input = doc["input"];
    if (doc.contains("params")) {
      if (!doc["params"].is_object()) throw InputError("params", "object expected");
      sc.params = doc["params"];
    }
  } else {
    sc.input = doc;
  }
  const Json* quad = nullptr;
  if (doc.is_object() && doc.contains("quad")) {
    quad = &doc["quad"];
  } else if (sc.input.is_object() && sc.input.contains("quad")) {
    quad = &sc.input["quad"];
  }
  sc.quad = quad ? quad_config_from_json(*quad, "quad", base) : base;
  sc.quad.validate();
  return sc;
}

Json Scenario::to_json() const {
  return {{"mode", spherebl::to_string(mode)},
          {"input", input},
          {"params", params},
          {"quad", spherebl::to_json(quad)}};
}

Json RunRecord::to_json() const {
  return {{"scenario", scenario.to_json()},
          {"tool_version", tool_version},
          {"rng", rng},
          {"wall_time_s", wall_time_s},
          {"pass", pass},
          {"result", result}};
}

RunRecord run(const Scenario& scenario) {
  const auto start = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.scenario = scenario;
  rec.result = Json::object();
  switch (scenario.mode) {
    case Mode::decompose:
      run_decompose(scenario, rec);
      break;
    case Mode::exponents:
      run_exponents(scenario, rec);
      break;
    case Mode::enumerate:
      run_enumerate(scenario, rec);
      break;
    case Mode::identities:
      run_identities(scenario, rec);
      break;
    case Mode::verify_holder:
      run_holder(scenario, rec);
      break;
    case Mode::verify_sharpness:
      run_sharpness(scenario, rec);
      break;
    case Mode::verify_local:
      run_local(scenario, rec);
      break;
  }
  rec.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

std::string csv_text(const CsvTable& table) {
  auto field = [](const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + "\"";
  };
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << ',';
      os << field(cells[i]);
    }
    os << "\r\n";
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
  return os.str();
}

void emit_csv(const CsvTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": " + std::strerror(errno));
  out << csv_text(table);
  out.close();
  if (!out) throw std::runtime_error(path + ": " + std::strerror(errno));
}

}  // namespace spherebl
