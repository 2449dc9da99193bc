#pragma once

// Scenario files, dispatch to the compute modules, and report emission.
//
// A scenario document is either {"input": ..., "params": {...}, "quad": {...}}
// or a bare input object/array; in the bare form the input object also
// supplies parameters and "quad".

#include <string>
#include <vector>

#include "spherebl/json_io.hpp"
#include "spherebl/quadrature.hpp"

namespace spherebl {

inline constexpr const char* kToolVersion = "0.1.0";

enum class Mode {
  decompose,
  exponents,
  enumerate,
  identities,
  verify_holder,
  verify_sharpness,
  verify_local
};

std::string to_string(Mode m);
/// Throws InputError for unknown names.
Mode mode_from_string(const std::string& name);

struct Scenario {
  Mode mode = Mode::decompose;
  Json input;
  Json params = Json::object();
  QuadConfig quad;

  /// Parses a scenario document for the given mode. `base` supplies quad
  /// defaults not set in the document.
  static Scenario from_json(Mode mode, const Json& doc, QuadConfig base = {});
  Json to_json() const;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct RunRecord {
  Scenario scenario;
  std::string tool_version = kToolVersion;
  std::string rng{kRngAlgorithm};
  double wall_time_s = 0.0;
  Json result;
  bool pass = true;
  CsvTable csv;

  Json to_json() const;
  /// 0 on pass, 2 on a verification failure.
  int exit_code() const { return pass ? 0 : 2; }
};

/// Runs the scenario. Invalid input raises InputError (exit code 1 at the CLI).
RunRecord run(const Scenario& scenario);

/// Full precision decimal, '.' separator.
std::string format_double(double v);
/// RFC 4180 text with CRLF line ends; header only when there are no rows.
std::string csv_text(const CsvTable& table);
/// Writes csv_text to `path`; I/O failures raise std::runtime_error.
void emit_csv(const CsvTable& table, const std::string& path);

}  // namespace spherebl
