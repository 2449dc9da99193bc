// Command-line front end: one subcommand per scenario mode.

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "spherebl/error.hpp"
#include "spherebl/scenario.hpp"

namespace {

using spherebl::Json;

Json read_document(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else {
    std::ifstream in(path);
    if (!in) throw spherebl::InputError(path, "cannot open scenario file");
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw spherebl::InputError(path, std::string("malformed JSON: ") + e.what());
  }
}

std::string scalar(const Json& j) {
  if (j.is_object() && j.contains("num") && j.contains("den")) {
    return j["den"] == 1 ? j["num"].dump() : j["num"].dump() + "/" + j["den"].dump();
  }
  if (j.is_object() && j.contains("value") && j.contains("stderr")) {
    return j["value"].dump() + " +- " + j["stderr"].dump();
  }
  return j.dump();
}

void print_summary(const spherebl::RunRecord& rec, std::ostream& os) {
  using spherebl::Mode;
  const Json& r = rec.result;
  os << "mode: " << to_string(rec.scenario.mode) << "\n";
  switch (rec.scenario.mode) {
    case Mode::decompose:
    case Mode::enumerate:
      os << r.dump(2) << "\n";
      break;
    case Mode::exponents:
      for (const char* key : {"p_uniform", "j_count", "delta", "overcount", "classes"}) {
        if (r.contains(key)) os << key << ": " << scalar(r[key]) << "\n";
      }
      break;
    case Mode::identities:
      os << "types: " << r["types"] << "\nfailures: " << r["failures"] << "\n";
      break;
    case Mode::verify_holder:
      for (const auto& item : r) {
        os << item["label"].get<std::string>() << ": lhs " << scalar(item["lhs"]) << ", rhs "
           << item["rhs"] << " +- " << item["rhs_stderr"] << ", pass "
           << item["pass"] << "\n";
      }
      break;
    case Mode::verify_sharpness:
      for (const char* key : {"gamma", "p", "fit_model", "slope", "slope_stderr",
                              "predicted_slope", "classification", "expected_divergent",
                              "rhs_last_change"}) {
        os << key << ": " << scalar(r[key]) << "\n";
      }
      break;
    case Mode::verify_local:
      for (const char* key : {"fitted_slope", "slope_stderr", "delta_target",
                              "eta_adjusted_target"}) {
        os << key << ": " << scalar(r[key]) << "\n";
      }
      break;
  }
  os << "seed: " << rec.scenario.quad.seed << "  samples: " << rec.scenario.quad.samples
     << "  shards: " << rec.scenario.quad.shards << "  rng: " << rec.rng << "\n";
  os << "wall_time_s: " << rec.wall_time_s << "\n";
  os << "pass: " << (rec.pass ? "true" : "false") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sharp exponents and numerical checks for Brascamp-Lieb inequalities on spheres",
               "spherebl"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> samples;
  std::optional<int> shards;
  bool json = false;
  bool classes = false;
  std::string csv_path;
  std::string scenario_path;

  app.add_option("--seed", seed, "Override the scenario seed");
  app.add_option("--samples", samples, "Override the Monte Carlo sample count");
  app.add_option("--shards", shards, "Override the shard count");
  app.add_flag("--json", json, "Print the full run record as JSON");
  app.add_option("--csv", csv_path, "Write the series or scenario table as CSV");

  struct Sub {
    spherebl::Mode mode;
    const char* help;
  };
  const Sub subs[] = {
      {spherebl::Mode::decompose, "Lie closure and block decomposition of edge sets"},
      {spherebl::Mode::exponents, "Sharp exponents for a family or balanced type"},
      {spherebl::Mode::enumerate, "Enumerate the balanced family of a type"},
      {spherebl::Mode::identities, "Check the counting identities over all small types"},
      {spherebl::Mode::verify_holder, "Monte Carlo check of the multilinear inequality"},
      {spherebl::Mode::verify_sharpness, "Divergence and norm-boundary experiments"},
      {spherebl::Mode::verify_local, "R^delta growth of the localised inequality"},
  };
  std::optional<spherebl::Mode> chosen;
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(spherebl::to_string(s.mode), s.help);
    sub->add_option("scenario", scenario_path, "Scenario JSON file, or - for stdin")
        ->required();
    if (s.mode == spherebl::Mode::enumerate) {
      sub->add_flag("--classes", classes, "One representative per block-order class");
    }
    sub->callback([&chosen, mode = s.mode] { chosen = mode; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const Json doc = read_document(scenario_path);
    auto sc = spherebl::Scenario::from_json(*chosen, doc);
    if (seed) sc.quad.seed = *seed;
    if (samples) sc.quad.samples = *samples;
    if (shards) sc.quad.shards = *shards;
    try {
      sc.quad.validate();
    } catch (const spherebl::Error& e) {
      throw spherebl::InputError("quad", e.what());
    }
    if (classes) sc.params["classes"] = true;

    const auto rec = spherebl::run(sc);
    if (json) {
      std::cout << rec.to_json().dump(2) << "\n";
    } else {
      print_summary(rec, std::cout);
    }
    if (!csv_path.empty()) spherebl::emit_csv(rec.csv, csv_path);
    return rec.exit_code();
  } catch (const spherebl::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
