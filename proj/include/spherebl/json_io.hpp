#pragma once

// JSON forms of the domain types. Indices are 1-based in every document.
// Parsers throw InputError whose path points at the offending field, e.g.
// "edges[0]: i<j required".

#include <string>
#include <vector>

#include "json.hpp"

#include "spherebl/exponents.hpp"
#include "spherebl/extremal.hpp"
#include "spherebl/quadrature.hpp"
#include "spherebl/symmetry.hpp"

namespace spherebl {

using Json = nlohmann::json;

std::string json_key(const std::string& path, const std::string& key);
std::string json_index(const std::string& path, std::size_t i);

EdgeSet edge_set_from_json(const Json& j, const std::string& path = "");
Symmetry symmetry_from_json(const Json& j, const std::string& path = "");
BalancedType balanced_type_from_json(const Json& j, const std::string& path = "");
/// A list whose items are EdgeSet documents (must be maximal) or Symmetry
/// documents.
std::vector<Symmetry> family_from_json(const Json& j, const std::string& path = "");
QuadConfig quad_config_from_json(const Json& j, const std::string& path, QuadConfig base);
/// Array of numbers, or {"dyadic": [first, last], "inverse": bool}.
std::vector<double> grid_from_json(const Json& j, const std::string& path, bool inverse);

Json to_json(const MultiIndex& a);
Json to_json(const EdgeSet& a);
Json to_json(const Symmetry& s);
Json to_json(const BalancedType& t);
Json to_json(const BigInt& v);
Json to_json(const Rational& q);
Json to_json(const Estimate& e);
Json to_json(const QuadConfig& q);
Json to_json(const ExponentReport& r);
Json to_json(const VerificationRecord& r);
Json to_json(const DivergenceReport& r);
Json to_json(const GrowthReport& r);

Rational rational_from_json(const Json& j, const std::string& path = "");

}  // namespace spherebl
