// JSON-shaped bindings: every argument and result is a JSON document as a
// string; the Python package converts to and from dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "coarse/io.hpp"
#include "coarse/suites.hpp"

namespace py = pybind11;
using namespace coarse;
using io::json;

namespace {

json parse(const std::string& s) {
  try {
    return json::parse(s);
  } catch (const json::parse_error& e) {
    throw io::InputError(std::string("malformed JSON argument: ") + e.what());
  }
}

SpacePtr space_of(const std::string& s) {
  return std::make_shared<const FiniteMetricSpace>(io::space_from_json(parse(s)));
}

SearchLimits limits_of(const std::string& s) {
  SearchLimits l;
  if (s.empty()) return l;
  const json j = parse(s);
  l.clique_cap = j.value("clique_cap", l.clique_cap);
  l.exact_cap = j.value("exact_cap", l.exact_cap);
  l.node_budget = j.value("node_budget", l.node_budget);
  l.max_cliques = j.value("max_cliques", l.max_cliques);
  return l;
}

TreeMode mode_of(const std::string& m) {
  if (m == "sfdc") return TreeMode::kSfdc;
  if (m == "casdim") return TreeMode::kCasdim;
  throw io::InputError("mode: expected sfdc or casdim");
}

std::string space_summary(const std::string& space) {
  const auto x = space_of(space);
  return json{{"points", x->size()},
              {"diameter", io::number(x->diameter())},
              {"descriptor", io::space_to_json(*x)}}
      .dump();
}

int dim(const std::string& space, const std::string& cover, double radius) {
  const auto x = space_of(space);
  return dim_at_scale(*x, io::family_from_json(*x, parse(cover)), radius);
}

std::string disjointify(const std::string& space, const std::string& cover, double radius, int n) {
  const auto x = space_of(space);
  const auto r = make_disjoint(*x, io::family_from_json(*x, parse(cover)), radius, n);
  return json{{"family", io::family_to_json(*x, r.family)}, {"n", r.trace.n}}.dump();
}

std::string asdim(const std::string& space, double radius, double mesh_cap, const std::string& limits) {
  const auto x = space_of(space);
  const auto s = asdim_at_scale(*x, radius, mesh_cap, limits_of(limits));
  return json{{"dim", s.dim}, {"exact", s.exact}, {"cover", io::family_to_json(*x, s.cover)}}.dump();
}

std::string control(const std::string& map, int n, const std::string& limits) {
  const auto f = io::map_from_json(parse(map));
  const auto c = n_to_1_control(f, n, kInfinity, limits_of(limits));
  return json{{"control", io::control_to_json(c.control)}, {"refused", c.refused}}.dump();
}

std::string profile(const std::string& map, double r, double big_r, const std::string& limits) {
  const auto f = io::map_from_json(parse(map));
  const auto p = n_to_1_profile(f, r, big_r, limits_of(limits));
  return json{{"max_components", p.max_components},
              {"max_component_diameter", io::number(p.max_component_diameter)},
              {"exact", p.exact}}
      .dump();
}

std::string quotient(const std::string& space, const std::string& action) {
  const auto x = space_of(space);
  const auto q = group_quotient(io::action_from_json(x, parse(action)));
  json orbits = json::array();
  for (const auto& o : q.orbits) orbits.push_back(io::set_to_json(*q.source, o));
  return json{{"orbits", orbits},
              {"quotient", io::space_to_json(*q.quotient)},
              {"lipschitz", q.lipschitz},
              {"n_to_1_verified", q.n_to_1_verified}}
      .dump();
}

std::string verify(const std::string& space, const std::string& tree, const std::string& mode) {
  const auto x = space_of(space);
  const auto v = verify_tree(*x, io::tree_from_json(*x, parse(tree)), mode_of(mode));
  return io::tree_verification_to_json(*x, v).dump();
}

std::string best_mass(const std::string& space, const std::string& measure, double radius, double bound,
                      const std::string& limits) {
  const auto x = space_of(space);
  const auto m = best_mass_family(*x, io::measure_from_json(*x, parse(measure)), radius, bound, limits_of(limits));
  return io::mass_family_to_json(*x, m).dump();
}

std::string suite(const std::string& name, std::uint64_t seed, std::size_t count, std::size_t max_points) {
  suites::SuiteOptions o;
  o.seed = seed;
  o.count = count;
  o.max_points = max_points;
  return suites::run_suite(name, o).body.dump();
}

std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& s : suites::catalog()) out.push_back(s.name);
  return out;
}

}  // namespace

PYBIND11_MODULE(_coarse_kit, m) {
  m.doc() = "coarse-kit core";
  static py::exception<PreconditionError> precondition(m, "PreconditionError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const PreconditionError& e) {
      py::set_error(precondition, e.what());
    } catch (const io::InputError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const MetricError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const json::exception& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.attr("SCHEMA_VERSION") = io::kSchemaVersion;
  m.def("space_summary", &space_summary, py::arg("space"));
  m.def("dim_at_scale", &dim, py::arg("space"), py::arg("cover"), py::arg("radius"));
  m.def("make_disjoint", &disjointify, py::arg("space"), py::arg("cover"), py::arg("radius"), py::arg("n") = -1);
  m.def("asdim_at_scale", &asdim, py::arg("space"), py::arg("radius"), py::arg("mesh_cap"), py::arg("limits") = "");
  m.def("n_to_1_control", &control, py::arg("map"), py::arg("n"), py::arg("limits") = "");
  m.def("n_to_1_profile", &profile, py::arg("map"), py::arg("r"), py::arg("big_r"), py::arg("limits") = "");
  m.def("group_quotient", &quotient, py::arg("space"), py::arg("action"));
  m.def("verify_tree", &verify, py::arg("space"), py::arg("tree"), py::arg("mode"));
  m.def("best_mass_family", &best_mass, py::arg("space"), py::arg("measure"), py::arg("radius"), py::arg("bound"),
        py::arg("limits") = "");
  m.def("run_suite", &suite, py::arg("name"), py::arg("seed") = 1, py::arg("count") = 0, py::arg("max_points") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def("suite_names", &suite_names);
  m.def("digest", [](const std::string& s) { return io::digest(parse(s)); }, py::arg("document"));
}
