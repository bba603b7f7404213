#include "coarse/io.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace coarse::io {

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw InputError(path + ": malformed JSON at byte " + std::to_string(e.byte));
  }
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

std::string digest(const json& value) {
  // Plain json keeps object keys sorted.
  return sha256_hex(nlohmann::json::parse(value.dump()).dump());
}

json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  if (v == std::floor(v) && std::fabs(v) < 1e15) return static_cast<long long>(v);
  return v;
}

double to_number(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "Infinity") return kInfinity;
  }
  throw InputError(where + ": expected a number");
}

json label_json(const std::string& label) {
  if (label.empty()) return label;
  char* end = nullptr;
  const double v = std::strtod(label.c_str(), &end);
  if (end && *end == '\0' && std::isfinite(v) && format_number(v) == label) return number(v);
  return label;
}

std::string label_string(const json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return format_number(v.get<double>());
  throw InputError(where + ": a label must be a string or a number");
}

namespace {

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(where + ": missing field \"" + key + "\"");
  return *it;
}

std::vector<double> numbers(const json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(to_number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<std::vector<double>> rows(const json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of arrays");
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(numbers(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<std::string> labels_of(const json& j, const std::string& where) {
  std::vector<std::string> out;
  auto it = j.find("labels");
  if (it == j.end()) return out;
  if (!it->is_array()) throw InputError(where + ".labels: expected an array");
  for (std::size_t i = 0; i < it->size(); ++i) out.push_back(label_string((*it)[i], where + ".labels"));
  return out;
}

PointId resolve(const std::vector<std::string>& labels, std::size_t n, const json& v, const std::string& where) {
  if (!labels.empty()) {
    const std::string s = label_string(v, where);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == s) return i;
    }
  }
  if (v.is_number_integer() && v.get<long long>() >= 0 && static_cast<std::size_t>(v.get<long long>()) < n) {
    return static_cast<PointId>(v.get<long long>());
  }
  throw InputError(where + ": unknown vertex " + v.dump());
}

template <typename F>
auto wrap_metric(F&& build, const std::string& where) {
  try {
    return build();
  } catch (const MetricError& e) {
    throw InputError(where + ": " + e.what());
  }
}

}  // namespace

FiniteMetricSpace space_from_json(const json& j) {
  const std::string where = "space";
  const std::string kind = field(j, "kind", where).get<std::string>();
  auto labels = labels_of(j, where);
  return wrap_metric(
      [&]() -> FiniteMetricSpace {
        if (kind == "matrix") return FiniteMetricSpace::from_matrix(labels, rows(field(j, "matrix", where), "space.matrix"));
        if (kind == "cloud") {
          const std::string norm = j.value("norm", std::string("l2"));
          Norm nm = Norm::kL2;
          if (norm == "l1") {
            nm = Norm::kL1;
          } else if (norm == "linf") {
            nm = Norm::kLinf;
          } else if (norm != "l2") {
            throw InputError("space.norm: expected l1, l2 or linf");
          }
          return FiniteMetricSpace::from_cloud(labels, rows(field(j, "coords", where), "space.coords"), nm);
        }
        if (kind == "graph") {
          std::size_t n = labels.size();
          if (n == 0) n = field(j, "n", where).get<std::size_t>();
          if (labels.empty()) {
            for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
          }
          const json& edges = field(j, "edges", where);
          if (!edges.is_array()) throw InputError("space.edges: expected an array");
          std::vector<WeightedEdge> es;
          for (std::size_t i = 0; i < edges.size(); ++i) {
            const std::string at = "space.edges[" + std::to_string(i) + "]";
            const json& e = edges[i];
            if (!e.is_array() || e.size() < 2 || e.size() > 3) throw InputError(at + ": expected [u, v, w]");
            es.push_back({resolve(labels, n, e[0], at), resolve(labels, n, e[1], at),
                          e.size() == 3 ? to_number(e[2], at) : 1.0});
          }
          return FiniteMetricSpace::from_graph(labels, es);
        }
        if (kind == "line") return FiniteMetricSpace::on_line(numbers(field(j, "coords", where), "space.coords"));
        if (kind == "interval") {
          return FiniteMetricSpace::integer_interval(field(j, "lo", where).get<long>(), field(j, "hi", where).get<long>());
        }
        if (kind == "cycle") return FiniteMetricSpace::cycle(field(j, "n", where).get<std::size_t>());
        throw InputError("space.kind: unknown kind \"" + kind + "\"");
      },
      where);
}

json space_to_json(const FiniteMetricSpace& space) {
  json labels = json::array();
  for (const auto& l : space.labels()) labels.push_back(label_json(l));
  json m = json::array();
  for (PointId i = 0; i < space.size(); ++i) {
    json row = json::array();
    for (PointId k = 0; k < space.size(); ++k) row.push_back(number(space.dist(i, k)));
    m.push_back(std::move(row));
  }
  return json{{"kind", "matrix"}, {"labels", labels}, {"matrix", m}};
}

PointSet set_from_json(const FiniteMetricSpace& space, const json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of labels");
  PointSet out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string l = label_string(j[i], where);
    const PointId p = space.index_of(l);
    if (p >= space.size()) throw InputError(where + ": unknown label " + l);
    out.push_back(p);
  }
  return make_set(std::move(out));
}

json set_to_json(const FiniteMetricSpace& space, const PointSet& s) {
  json out = json::array();
  for (PointId p : s) out.push_back(label_json(space.label(p)));
  return out;
}

Family family_from_json(const FiniteMetricSpace& space, const json& j) {
  const json& sets = field(j, "sets", "family");
  if (!sets.is_array()) throw InputError("family.sets: expected an array");
  Family f;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    f.sets.push_back(set_from_json(space, sets[i], "family.sets[" + std::to_string(i) + "]"));
  }
  if (auto it = j.find("colors"); it != j.end() && !it->is_null()) {
    if (!it->is_array() || it->size() != f.sets.size()) throw InputError("family.colors: need one color per set");
    for (const auto& c : *it) {
      if (!c.is_number_integer()) throw InputError("family.colors: colors must be integers");
      f.colors.push_back(c.get<int>());
    }
  }
  try {
    validate_family(space, f);
  } catch (const PreconditionError& e) {
    throw InputError(std::string("family: ") + e.what());
  }
  return f;
}

json family_to_json(const FiniteMetricSpace& space, const Family& f) {
  json sets = json::array();
  for (const auto& s : f.sets) sets.push_back(set_to_json(space, s));
  json out{{"sets", sets}};
  if (f.colored()) out["colors"] = f.colors;
  return out;
}

CoarseMap map_from_json(const json& j) {
  auto dom = std::make_shared<const FiniteMetricSpace>(space_from_json(field(j, "domain", "map")));
  auto cod = std::make_shared<const FiniteMetricSpace>(space_from_json(field(j, "codomain", "map")));
  const json& a = field(j, "assign", "map");
  std::vector<PointId> assign(dom->size(), cod->size());
  auto target = [&](const json& v, const std::string& where) {
    const std::string l = label_string(v, where);
    const PointId p = cod->index_of(l);
    if (p >= cod->size()) throw InputError(where + ": unknown codomain label " + l);
    return p;
  };
  if (a.is_array()) {
    if (a.size() != dom->size()) throw InputError("map.assign: need one codomain label per domain point");
    for (std::size_t i = 0; i < a.size(); ++i) assign[i] = target(a[i], "map.assign[" + std::to_string(i) + "]");
  } else if (a.is_object()) {
    for (auto it = a.begin(); it != a.end(); ++it) {
      const PointId x = dom->index_of(it.key());
      if (x >= dom->size()) throw InputError("map.assign: unknown domain label " + it.key());
      assign[x] = target(it.value(), "map.assign." + it.key());
    }
    for (PointId x = 0; x < dom->size(); ++x) {
      if (assign[x] == cod->size()) throw InputError("map.assign: no image for " + dom->label(x));
    }
  } else {
    throw InputError("map.assign: expected an array or an object");
  }
  return CoarseMap::make(dom, cod, std::move(assign));
}

json map_to_json(const CoarseMap& f) {
  json assign = json::array();
  for (PointId x = 0; x < f.domain->size(); ++x) assign.push_back(label_json(f.codomain->label(f(x))));
  return json{{"domain", space_to_json(*f.domain)}, {"codomain", space_to_json(*f.codomain)}, {"assign", assign}};
}

GroupAction action_from_json(SpacePtr space, const json& j) {
  GroupAction g;
  g.space = space;
  const json& table = field(j, "table", "action");
  const json& perms = field(j, "perms", "action");
  if (!table.is_array() || !perms.is_array()) throw InputError("action: table and perms must be arrays");
  for (std::size_t a = 0; a < table.size(); ++a) {
    std::vector<std::size_t> row;
    for (const auto& v : table[a]) {
      if (!v.is_number_integer() || v.get<long long>() < 0) throw InputError("action.table: entries must be group indices");
      row.push_back(v.get<std::size_t>());
    }
    g.table.push_back(std::move(row));
  }
  for (std::size_t a = 0; a < perms.size(); ++a) {
    const std::string where = "action.perms[" + std::to_string(a) + "]";
    if (!perms[a].is_array() || perms[a].size() != space->size()) throw InputError(where + ": need one image per point");
    std::vector<PointId> p;
    for (const auto& v : perms[a]) {
      const std::string l = label_string(v, where);
      const PointId x = space->index_of(l);
      if (x >= space->size()) throw InputError(where + ": unknown label " + l);
      p.push_back(x);
    }
    g.perms.push_back(std::move(p));
  }
  try {
    g.validate();
  } catch (const PreconditionError& e) {
    throw InputError(std::string("action: ") + e.what());
  }
  return g;
}

ControlFunction control_from_json(const json& j) {
  const std::string kind = field(j, "kind", "control").get<std::string>();
  ControlFunction c;
  if (kind == "affine") {
    c = ControlFunction::affine(to_number(field(j, "slope", "control"), "control.slope"),
                                to_number(j.value("offset", json(0)), "control.offset"));
  } else if (kind == "step") {
    std::vector<ControlFunction::Breakpoint> bps;
    for (const auto& row : rows(field(j, "breakpoints", "control"), "control.breakpoints")) {
      if (row.size() != 2) throw InputError("control.breakpoints: expected [r, value] pairs");
      bps.push_back({row[0], row[1]});
    }
    try {
      c = ControlFunction::step(std::move(bps));
    } catch (const PreconditionError& e) {
      throw InputError(std::string("control: ") + e.what());
    }
  } else {
    throw InputError("control.kind: expected affine or step");
  }
  c.strict = j.value("strict", false);
  return c;
}

json control_to_json(const ControlFunction& c) {
  json out;
  if (c.is_affine()) {
    out = json{{"kind", "affine"}, {"slope", number(c.slope())}, {"offset", number(c.offset())}};
  } else {
    json bps = json::array();
    for (const auto& b : c.breakpoints()) bps.push_back(json::array({number(b.r), number(b.value)}));
    out = json{{"kind", "step"}, {"breakpoints", bps}};
  }
  out["strict"] = c.strict;
  if (c.relaxed) out["relaxed"] = true;
  return out;
}

ApcWitness witness_from_json(const FiniteMetricSpace& space, const json& j) {
  ApcWitness w;
  w.scales = numbers(field(j, "scales", "witness"), "witness.scales");
  const json& fams = field(j, "families", "witness");
  if (!fams.is_array()) throw InputError("witness.families: expected an array");
  for (const auto& f : fams) w.families.push_back(family_from_json(space, f));
  if (w.scales.size() != w.families.size()) throw InputError("witness: need one scale per family");
  w.certify(space);
  return w;
}

json witness_to_json(const FiniteMetricSpace& space, const ApcWitness& w) {
  json fams = json::array();
  for (const auto& f : w.families) fams.push_back(family_to_json(space, f));
  json certs = json::array();
  for (std::size_t i = 0; i < w.certificates.size(); ++i) {
    certs.push_back(json{{"scale", number(i < w.scales.size() ? w.scales[i] : 0.0)},
                         {"disjoint", w.certificates[i].disjoint},
                         {"min_gap", number(w.certificates[i].min_gap)},
                         {"mesh", number(w.certificates[i].mesh)}});
  }
  json scales = json::array();
  for (double s : w.scales) scales.push_back(number(s));
  return json{{"scales", scales}, {"families", fams}, {"certificates", certs}};
}

DimSequenceWitness dim_sequence_from_json(const FiniteMetricSpace& space, const json& j) {
  DimSequenceWitness w;
  if (j.contains("scales")) w.scales = numbers(j["scales"], "witness.scales");
  const json& dims = field(j, "dims", "witness");
  if (!dims.is_array()) throw InputError("witness.dims: expected an array");
  for (const auto& d : dims) {
    if (!d.is_number_integer()) throw InputError("witness.dims: dimensions must be integers");
    w.dims.push_back(d.get<int>());
  }
  for (const auto& f : field(j, "families", "witness")) w.families.push_back(family_from_json(space, f));
  if (w.dims.size() != w.families.size()) throw InputError("witness: need one dimension per family");
  return w;
}

DecompositionTree tree_from_json(const FiniteMetricSpace& space, const json& j) {
  DecompositionTree t;
  const json& levels = field(j, "levels", "tree");
  if (!levels.is_array()) throw InputError("tree.levels: expected an array");
  for (const auto& l : levels) t.levels.push_back(family_from_json(space, l));
  t.scales = numbers(j.value("scales", json::array()), "tree.scales");
  for (const auto& b : j.value("branching", json::array())) {
    if (!b.is_number_integer()) throw InputError("tree.branching: entries must be integers");
    t.branching.push_back(b.get<int>());
  }
  if (j.contains("terminal_mesh")) t.terminal_mesh = to_number(j["terminal_mesh"], "tree.terminal_mesh");
  const std::string mode = j.value("split_mode", std::string("union"));
  if (mode == "union") {
    t.mode = SplitMode::kUnion;
  } else if (mode == "containment") {
    t.mode = SplitMode::kContainment;
  } else {
    throw InputError("tree.split_mode: expected union or containment");
  }
  const std::size_t d = t.levels.size();
  t.splits.assign(d > 0 ? d - 1 : 0, {});
  const json splits = j.value("splits", json::object());
  auto read_level = [&](std::size_t i, const json& per_element) {
    const std::string where = "tree.splits[" + std::to_string(i) + "]";
    if (i + 1 >= d) throw InputError(where + ": no level below");
    if (!per_element.is_array()) throw InputError(where + ": expected one entry per element");
    for (const auto& subs : per_element) {
      std::vector<Subfamily> parsed;
      for (const auto& sub : subs) {
        Subfamily s;
        for (const auto& idx : sub) {
          if (!idx.is_number_integer() || idx.get<long long>() < 0) throw InputError(where + ": indices must be non-negative integers");
          s.push_back(idx.get<std::size_t>());
        }
        parsed.push_back(std::move(s));
      }
      t.splits[i].push_back(std::move(parsed));
    }
  };
  if (splits.is_array()) {
    for (std::size_t i = 0; i < splits.size(); ++i) read_level(i, splits[i]);
  } else if (splits.is_object()) {
    for (auto it = splits.begin(); it != splits.end(); ++it) {
      std::size_t i = 0;
      try {
        i = std::stoul(it.key());
      } catch (const std::exception&) {
        throw InputError("tree.splits: keys must be level indices");
      }
      read_level(i, it.value());
    }
  } else {
    throw InputError("tree.splits: expected an object or an array");
  }
  return t;
}

json tree_to_json(const FiniteMetricSpace& space, const DecompositionTree& t, TreeMode mode) {
  json levels = json::array();
  for (const auto& l : t.levels) levels.push_back(family_to_json(space, l));
  json splits = json::object();
  for (std::size_t i = 0; i < t.splits.size(); ++i) splits[std::to_string(i)] = t.splits[i];
  json scales = json::array();
  for (double s : t.scales) scales.push_back(number(s));
  return json{{"levels", levels},
              {"scales", scales},
              {"branching", t.branching},
              {"splits", splits},
              {"terminal_mesh", number(t.terminal_mesh)},
              {"split_mode", t.mode == SplitMode::kUnion ? "union" : "containment"},
              {"mode", mode == TreeMode::kSfdc ? "sfdc" : "casdim"}};
}

json tree_verification_to_json(const FiniteMetricSpace& space, const TreeVerification& v) {
  json violations = json::array();
  for (const auto& x : v.violations) {
    json e{{"level", x.level}, {"element", x.element}, {"condition", x.condition}, {"detail", x.detail}};
    if (x.witness) {
      e["witness"] = json::array({label_json(space.label(x.witness->first)), label_json(space.label(x.witness->second))});
    }
    violations.push_back(std::move(e));
  }
  json mesh = json::array();
  for (double m : v.level_mesh) mesh.push_back(number(m));
  return json{{"valid", v.valid},
              {"bounded_level", v.bounded_level ? json(*v.bounded_level) : json(nullptr)},
              {"level_mesh", mesh},
              {"violations", violations}};
}

ProbMeasure measure_from_json(const FiniteMetricSpace& space, const json& j) {
  const json& w = field(j, "weights", "measure");
  std::vector<double> weights(space.size(), 0.0);
  if (w.is_array()) {
    weights = numbers(w, "measure.weights");
  } else if (w.is_object()) {
    for (auto it = w.begin(); it != w.end(); ++it) {
      const PointId p = space.index_of(it.key());
      if (p >= space.size()) throw InputError("measure.weights: unknown label " + it.key());
      weights[p] = to_number(it.value(), "measure.weights." + it.key());
    }
  } else {
    throw InputError("measure.weights: expected an array or an object");
  }
  try {
    return ProbMeasure::make(std::move(weights), space.size());
  } catch (const PreconditionError& e) {
    throw InputError(std::string("measure: ") + e.what());
  }
}

json measure_to_json(const FiniteMetricSpace& space, const ProbMeasure& mu) {
  (void)space;
  json w = json::array();
  for (double x : mu.weights) w.push_back(number(x));
  json out{{"weights", w}};
  if (mu.renormalized) out["renormalized"] = true;
  return out;
}

MassFamily mass_family_from_json(const FiniteMetricSpace& space, const json& j) {
  MassFamily m;
  m.family = family_from_json(space, field(j, "family", "mass_family"));
  m.radius = to_number(j.value("R", json(0)), "mass_family.R");
  m.bound = to_number(field(j, "S", "mass_family"), "mass_family.S");
  m.mass = to_number(j.value("mass", json(0)), "mass_family.mass");
  return m;
}

json mass_family_to_json(const FiniteMetricSpace& space, const MassFamily& m) {
  return json{{"family", family_to_json(space, m.family)},
              {"R", number(m.radius)},
              {"S", number(m.bound)},
              {"mass", m.mass},
              {"exact", m.exact}};
}

}  // namespace coarse::io
