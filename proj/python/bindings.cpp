#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spherebl/enumerate.hpp"
#include "spherebl/error.hpp"
#include "spherebl/exponents.hpp"
#include "spherebl/extremal.hpp"
#include "spherebl/json_io.hpp"
#include "spherebl/scenario.hpp"
#include "spherebl/symmetry.hpp"

namespace py = pybind11;
using namespace spherebl;

// Structured values cross the boundary as JSON text; the Python package
// converts them with the json module.
namespace {

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError("", std::string("malformed JSON: ") + e.what());
  }
}

BalancedType type_of(int n, const std::vector<int>& lengths) { return {n, lengths}; }

std::string big(const BigInt& v) { return v.str(); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Symmetric spherical Brascamp-Lieb toolkit (native core)";
  m.attr("__version__") = kToolVersion;

  static py::exception<Error> base(m, "SphereblError", PyExc_ValueError);
  static py::exception<InputError> input(m, "InputError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InputError& e) {
      py::set_error(input, e.what());
    } catch (const Error& e) {
      py::set_error(base, e.what());
    }
  });

  m.def("decompose", [](const std::string& edges_json) {
    const auto e = edge_set_from_json(parse(edges_json));
    const auto closure = lie_closure(e);
    Json out{{"maximal", is_maximal(e)},
             {"closure", to_json(closure)},
             {"symmetry", to_json(decompose(closure))}};
    return out.dump();
  });
  m.def("lie_closure", [](const std::string& edges_json) {
    return to_json(lie_closure(edge_set_from_json(parse(edges_json)))).dump();
  });

  m.def("balanced_exponent",
        [](int n, const std::vector<int>& l) { return big(balanced_exponent(type_of(n, l))); });
  m.def("j_max", [](int n, const std::vector<int>& l) { return big(j_max(type_of(n, l))); });
  m.def("edge_membership_count",
        [](int n, const std::vector<int>& l) { return big(edge_membership_count(type_of(n, l))); });
  m.def("overcount_factor",
        [](int n, const std::vector<int>& l) { return big(overcount_factor(type_of(n, l))); });
  m.def("critical_gamma", [](int n, const std::vector<int>& l) {
    return to_json(critical_gamma(type_of(n, l))).dump();
  });
  m.def("balanced_local_delta", [](int n, const std::vector<int>& l) {
    return to_json(balanced_local_delta(type_of(n, l))).dump();
  });
  m.def("exponent_report", [](int n, const std::vector<int>& l) {
    return to_json(exponent_report(type_of(n, l))).dump();
  });
  m.def("family_report", [](const std::string& family_json) {
    return to_json(exponent_report(family_from_json(parse(family_json)))).dump();
  });
  m.def("uniform_exponent", [](const std::string& family_json) {
    return uniform_exponent(family_from_json(parse(family_json)));
  });
  m.def("per_function_exponents", [](const std::string& family_json) {
    return per_function_exponents(family_from_json(parse(family_json)));
  });
  m.def(
      "enumerate",
      [](int n, const std::vector<int>& l, std::int64_t cap) {
        Json out = Json::array();
        for (const auto& s : enumerate_symmetries(type_of(n, l), cap)) out.push_back(to_json(s));
        return out.dump();
      },
      py::arg("n"), py::arg("lengths"), py::arg("cap") = kDefaultEnumerationCap);

  m.def(
      "run",
      [](const std::string& mode, const std::string& doc, py::object seed, py::object samples,
         py::object shards) {
        auto sc = Scenario::from_json(mode_from_string(mode), parse(doc));
        if (!seed.is_none()) sc.quad.seed = seed.cast<std::uint64_t>();
        if (!samples.is_none()) sc.quad.samples = samples.cast<std::int64_t>();
        if (!shards.is_none()) sc.quad.shards = shards.cast<int>();
        sc.quad.validate();
        RunRecord rec;
        {
          py::gil_scoped_release release;
          rec = run(sc);
        }
        return rec.to_json().dump();
      },
      py::arg("mode"), py::arg("scenario"), py::arg("seed") = py::none(),
      py::arg("samples") = py::none(), py::arg("shards") = py::none());
}
