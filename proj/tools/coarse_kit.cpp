// coarse-kit: batch front door to the library. Every command prints one JSON
// report; exit 0 when its certificate holds, 1 on violation or refusal, 2 on
// usage errors and malformed input.

#include <iostream>
#include <limits>
#include <memory>

#include "cli_support.hpp"
#include "coarse/suites.hpp"

namespace {

using namespace coarse;
using cli::Context;
using cli::Outcome;
using io::json;
using io::number;

// Values bound to flags. One instance serves every subcommand.
struct Args {
  std::string space, cover, map, tree, measure, control, witness, action;
  double scale = 0.0, r = 0.0, big_r = 0.0, radius = 0.0, bound = 0.0;
  double mesh_cap = kInfinity, cap = kInfinity, component_bound = kInfinity;
  double c = 0.5, k = 0.0, min_mass = -1.0, threshold = -1.0;
  std::optional<double> y_radius, y_bound, fiber_bound;
  int n = 1, disjoint_n = -1, max_dim = -1, order = 0;
  std::optional<int> profile_n;
  std::vector<double> scales, targets, gaps;
  std::vector<std::string> set, generator;
  std::string mode;
  bool trace = false, disjointify = false, greedy = false, emit = false, list = false;
  std::string suite;
  std::uint64_t seed = 1;
  std::size_t count = 0, max_points = 0;
};

SpacePtr share(FiniteMetricSpace s) { return std::make_shared<const FiniteMetricSpace>(std::move(s)); }

json unwrap(const json& j, const char* key) { return j.contains(key) ? j[key] : j; }

SpacePtr load_space(Context& ctx, const std::string& path) {
  return share(io::space_from_json(unwrap(ctx.load("space", path), "space")));
}

CoarseMap load_map(Context& ctx, const std::string& path) {
  return io::map_from_json(unwrap(ctx.load("map", path), "map"));
}

json family_json(const FiniteMetricSpace& s, const Family& f) { return io::family_to_json(s, f); }

json labels(const FiniteMetricSpace& s, const PointSet& p) { return io::set_to_json(s, p); }

json pair_json(const FiniteMetricSpace& s, const std::optional<std::pair<PointId, PointId>>& w) {
  if (!w) return nullptr;
  return json::array({io::label_json(s.label(w->first)), io::label_json(s.label(w->second))});
}

// Control for an n-to-1 map: the given file, or the least one computed from f.
ControlFunction control_for(Context& ctx, const Args& a, const CoarseMap& f, json& out) {
  if (!a.control.empty()) {
    auto c = io::control_from_json(ctx.load("control", a.control));
    out["control"] = io::control_to_json(c);
    out["control_source"] = "file";
    return c;
  }
  const auto c = n_to_1_control(f, a.n, kInfinity, ctx.limits());
  out["control"] = io::control_to_json(c.control);
  out["control_source"] = "computed";
  if (c.refused) {
    throw PreconditionError("map is not coarsely " + std::to_string(a.n) + "-to-1 at scale " +
                            format_number(c.refusal_scale));
  }
  return c.control;
}

TreeMode parse_mode(const std::string& m) {
  if (m == "sfdc") return TreeMode::kSfdc;
  if (m == "casdim") return TreeMode::kCasdim;
  throw io::InputError("--mode: expected sfdc or casdim");
}

std::string mode_name(TreeMode m) { return m == TreeMode::kSfdc ? "sfdc" : "casdim"; }

// Flag, else the tree file's "mode", else the fallback.
TreeMode tree_mode(const Args& a, const json& tree, TreeMode fallback) {
  if (!a.mode.empty()) return parse_mode(a.mode);
  if (tree.contains("mode")) return parse_mode(tree["mode"].get<std::string>());
  return fallback;
}

// A tree file may carry its own "space"; --space wins when both are present.
struct LoadedTree {
  SpacePtr space;
  json raw;
  DecompositionTree tree;
};

LoadedTree load_tree(Context& ctx, const Args& a) {
  LoadedTree t;
  t.raw = unwrap(ctx.load("tree", a.tree), "tree");
  if (!a.space.empty()) {
    t.space = load_space(ctx, a.space);
  } else if (t.raw.contains("space")) {
    t.space = share(io::space_from_json(t.raw["space"]));
  } else {
    throw io::InputError("tree: no embedded \"space\"; pass --space");
  }
  t.tree = io::tree_from_json(*t.space, t.raw);
  return t;
}

json mass_json(const FiniteMetricSpace& s, const MassFamily& m) { return io::mass_family_to_json(s, m); }

// ---- space ----

Outcome cmd_space(Context& ctx, const Args& a) {
  const auto x = load_space(ctx, a.space);
  Outcome o;
  const auto ds = x->distinct_distances();
  o.result["points"] = x->size();
  o.result["diameter"] = number(x->diameter());
  o.result["distinct_distances"] = ds.size();
  o.result["min_positive_distance"] = ds.size() > 1 ? number(ds[1]) : json(nullptr);
  if (a.emit) o.result["descriptor"] = io::space_to_json(*x);
  if (a.scale > 0.0) {
    ctx.param("scale", number(a.scale));
    ctx.param("mesh_cap", number(a.mesh_cap));
    const auto s = asdim_at_scale(*x, a.scale, a.mesh_cap, ctx.limits());
    o.result["asdim"] = json{{"dim", s.dim},
                             {"exact", s.exact},
                             {"budget_exhausted", s.budget_exhausted},
                             {"cover", family_json(*x, s.cover)},
                             {"cover_mesh", number(mesh(*x, s.cover))}};
    if (a.max_dim >= 0) {
      ctx.param("max_dim", a.max_dim);
      o.holds = s.dim <= a.max_dim;
    }
  }
  return o;
}

// ---- cover ----

Outcome cmd_cover_dim(Context& ctx, const Args& a) {
  const auto x = load_space(ctx, a.space);
  const auto u = io::family_from_json(*x, unwrap(ctx.load("cover", a.cover), "cover"));
  ctx.param("scale", number(a.scale));
  Outcome o;
  const int d = dim_at_scale(*x, u, a.scale);
  o.result["dim"] = d;
  o.result["members"] = u.size();
  o.result["covers"] = covers(u, x->all());
  o.result["mesh"] = number(mesh(*x, u));
  if (a.max_dim >= 0) {
    ctx.param("max_dim", a.max_dim);
    o.holds = d <= a.max_dim;
  }
  return o;
}

Outcome cmd_cover_disjointify(Context& ctx, const Args& a) {
  const auto x = load_space(ctx, a.space);
  const auto u = io::family_from_json(*x, unwrap(ctx.load("cover", a.cover), "cover"));
  ctx.param("scale", number(a.scale));
  ctx.param("n", a.disjoint_n);
  const auto res = make_disjoint(*x, u, a.scale, a.disjoint_n);
  const int n = res.trace.n;
  const double gap = a.scale / (n + 1);
  const auto dis = colors_r_disjoint(*x, res.family, gap);
  const double in_mesh = mesh(*x, u);
  const double out_mesh = mesh(*x, res.family);
  bool inside = true;
  for (std::size_t i = 0; i < res.family.size(); ++i) {
    for (std::size_t t : res.trace.output_index_sets[i]) {
      inside = inside && is_subset(res.family.sets[i], neighborhood(*x, u.sets[t], a.scale));
    }
  }
  Outcome o;
  o.result["family"] = family_json(*x, res.family);
  o.result["n"] = n;
  json cert;
  cert["covers"] = covers(res.family, x->all());
  cert["colors"] = res.family.color_count();
  cert["colors_allowed"] = n + 1;
  cert["disjointness"] = number(gap);
  cert["disjoint"] = dis.disjoint;
  cert["min_gap"] = number(dis.min_gap);
  cert["disjoint_witness"] = pair_json(*x, dis.witness);
  cert["mesh"] = number(out_mesh);
  cert["mesh_bound"] = number(in_mesh + 2 * a.scale);
  cert["inside_expansions"] = inside;
  o.holds = cert["covers"].get<bool>() && res.family.color_count() <= n + 1 && dis.disjoint &&
            out_mesh <= in_mesh + 2 * a.scale && inside;
  o.result["certificate"] = cert;
  if (a.trace) {
    json idx = json::array();
    for (const auto& t : res.trace.output_index_sets) idx.push_back(t);
    json w = json::array();
    for (const auto& [t, s] : res.trace.w_sets) w.push_back(json{{"T", t}, {"points", labels(*x, s)}});
    o.result["trace"] = json{{"output_index_sets", idx}, {"w_sets", w}};
  }
  return o;
}

Outcome cmd_cover_lebesgue(Context& ctx, const Args& a) {
  const auto x = load_space(ctx, a.space);
  const auto u = io::family_from_json(*x, unwrap(ctx.load("cover", a.cover), "cover"));
  Outcome o;
  o.result["lebesgue"] = number(lebesgue_number(*x, u));
  return o;
}

// ---- map ----

Outcome cmd_map_control(Context& ctx, const Args& a) {
  const auto f = load_map(ctx, a.map);
  ctx.param("n", a.n);
  ctx.param("cap", number(a.cap));
  const auto c = n_to_1_control(f, a.n, a.cap, ctx.limits());
  Outcome o;
  o.result["control"] = io::control_to_json(c.control);
  o.result["upper_control"] = io::control_to_json(control_upper(f));
  o.result["refused"] = c.refused;
  if (c.refused) {
    o.result["refusal_witness"] = labels(*f.codomain, c.refusal_witness);
    o.result["refusal_scale"] = number(c.refusal_scale);
  }
  o.holds = !c.refused;
  return o;
}

Outcome cmd_map_profile(Context& ctx, const Args& a) {
  const auto f = load_map(ctx, a.map);
  ctx.param("r", number(a.r));
  ctx.param("big_r", number(a.big_r));
  const auto p = n_to_1_profile(f, a.r, a.big_r, ctx.limits());
  Outcome o;
  o.result["max_components"] = p.max_components;
  o.result["max_component_diameter"] = number(p.max_component_diameter);
  o.result["worst_subset"] = labels(*f.codomain, p.worst_subset);
  o.result["exact"] = p.exact;
  if (a.profile_n) {
    const int n = *a.profile_n;
    ctx.param("n", n);
    const double limit = 2.0 * n * a.big_r;
    o.result["diameter_bound"] = number(limit);
    o.holds = n >= 0 && p.max_components <= static_cast<std::size_t>(n) && p.max_component_diameter <= limit;
  }
  return o;
}

Outcome cmd_map_push(Context& ctx, const Args& a) {
  const auto f = load_map(ctx, a.map);
  const auto u = io::family_from_json(*f.domain, unwrap(ctx.load("cover", a.cover), "cover"));
  ctx.param("r", number(a.r));
  ctx.param("n", a.n);
  Outcome o;
  const auto control = control_for(ctx, a, f, o.result);
  const auto p = pushforward_cover(f, u, a.r, a.n, control, ctx.limits());
  o.result["image"] = family_json(*f.codomain, p.image);
  o.result["source_dim"] = p.source_dim;
  o.result["source_scale"] = number(p.source_scale);
  o.result["image_dim"] = p.image_dim;
  o.result["bound"] = p.bound;
  o.holds = p.holds;
  if (a.disjointify) {
    ctx.param("disjointify", true);
    const auto d = pushforward_disjointify(f, u, a.r, a.n, control, ctx.limits());
    const auto dis = colors_r_disjoint(*f.codomain, d.family, d.disjointness);
    const double m = mesh(*f.codomain, d.family);
    o.result["disjointified"] = json{{"family", family_json(*f.codomain, d.family)},
                                     {"colors", d.family.color_count()},
                                     {"colors_allowed", d.colors_allowed},
                                     {"disjointness", number(d.disjointness)},
                                     {"disjoint", dis.disjoint},
                                     {"mesh", number(m)},
                                     {"mesh_bound", number(d.mesh_bound)},
                                     {"image_mesh", number(d.image_mesh)}};
    o.holds = o.holds && dis.disjoint && d.family.color_count() <= d.colors_allowed && m <= d.mesh_bound;
  }
  return o;
}

Outcome cmd_map_factor(Context& ctx, const Args& a) {
  const auto f = load_map(ctx, a.map);
  ctx.param("big_r", number(a.big_r));
  ctx.param("n", a.n);
  const auto fz = factorize(f, a.big_r, a.n);
  Outcome o;
  json classes = json::array();
  for (const auto& c : fz.classes) classes.push_back(labels(*f.domain, c));
  json sel = json::array();
  for (PointId s : fz.selection) sel.push_back(io::label_json(f.domain->label(s)));
  o.result["classes"] = classes;
  o.result["quotient"] = io::space_to_json(*fz.quotient);
  o.result["p"] = io::map_to_json(fz.p)["assign"];
  o.result["q"] = io::map_to_json(fz.q)["assign"];
  o.result["selection"] = sel;
  o.result["class_diameter"] = number(fz.class_diameter);
  o.result["max_q_fiber"] = fz.max_q_fiber;
  o.result["selection_closeness"] = number(fz.selection_closeness);
  o.result["sandwich_holds"] = fz.sandwich_holds;
  o.holds = fz.sandwich_holds && fz.max_q_fiber <= static_cast<std::size_t>(a.n);
  return o;
}

// ---- quotient ----

Outcome cmd_quotient(Context& ctx, const Args& a) {
  const auto x = load_space(ctx, a.space);
  GroupAction g;
  if (!a.action.empty()) {
    g = io::action_from_json(x, unwrap(ctx.load("action", a.action), "action"));
  } else if (!a.generator.empty()) {
    if (a.generator.size() != x->size()) throw io::InputError("--generator: need one image label per point");
    std::vector<PointId> perm;
    for (const auto& l : a.generator) {
      const PointId p = x->index_of(l);
      if (p >= x->size()) throw io::InputError("--generator: unknown label " + l);
      perm.push_back(p);
    }
    if (a.order < 1) throw io::InputError("--order: must be at least 1");
    ctx.param("generator", a.generator);
    ctx.param("order", a.order);
    try {
      g = GroupAction::cyclic(x, perm, static_cast<std::size_t>(a.order));
    } catch (const PreconditionError& e) {
      throw io::InputError(std::string("--generator: ") + e.what());
    }
  } else {
    throw io::InputError("quotient: pass --action or --generator with --order");
  }
  const auto q = group_quotient(g, ctx.limits());
  Outcome o;
  json orbits = json::array();
  for (const auto& orb : q.orbits) orbits.push_back(labels(*q.source, orb));
  o.result["group_order"] = g.order();
  o.result["symmetrized"] = q.symmetrized;
  o.result["orbits"] = orbits;
  o.result["quotient"] = io::space_to_json(*q.quotient);
  o.result["projection"] = io::map_to_json(q.projection)["assign"];
  if (q.symmetrized) o.result["source"] = io::space_to_json(*q.source);
  o.result["lipschitz"] = q.lipschitz;
  o.result["n_to_1_verified"] = q.n_to_1_verified;
  if (!q.n_to_1_verified) {
    o.result["n_to_1_witness"] = labels(*q.quotient, q.n_to_1_witness);
    o.result["n_to_1_scale"] = number(q.n_to_1_scale);
  }
  o.holds = q.lipschitz && q.n_to_1_verified;
  return o;
}

// ---- apc ----

bool all_disjoint(const ApcWitness& w) {
  for (const auto& c : w.certificates) {
    if (!c.disjoint) return false;
  }
  return true;
}

Outcome cmd_apc_witness(Context& ctx, const Args& a) {
  const auto x = load_space(ctx, a.space);
  ctx.param("scales", cli::numbers(a.scales));
  ctx.param("mesh_cap", number(a.mesh_cap));
  const auto s = apc_witness(*x, a.scales, a.mesh_cap, ctx.limits());
  Outcome o;
  const char* status = s.status == SearchStatus::kFound        ? "found"
                       : s.status == SearchStatus::kImpossible ? "impossible"
                                                               : "budget_exhausted";
  o.result["status"] = status;
  o.result["greedy"] = s.greedy;
  if (s.witness) o.result["witness"] = io::witness_to_json(*x, *s.witness);
  if (!s.residue.empty()) o.result["residue"] = labels(*x, s.residue);
  o.holds = s.status == SearchStatus::kFound && s.witness && s.witness->valid(*x, a.mesh_cap);
  return o;
}

Outcome cmd_apc_normalize(Context& ctx, const Args& a) {
  const auto x = load_space(ctx, a.space);
  const auto w = io::dim_sequence_from_json(*x, unwrap(ctx.load("witness", a.witness), "witness"));
  ctx.param("gaps", cli::numbers(a.gaps));
  const auto out = apc_normalize(*x, w, a.gaps);
  Outcome o;
  json prov = json::array();
  for (const auto& [lvl, color] : out.origin) prov.push_back(json{{"level", lvl}, {"color", color}});
  o.result["input_scales"] = cli::numbers(apc_normalize_scales(w.dims, a.gaps));
  o.result["witness"] = io::witness_to_json(*x, out.witness);
  o.result["origin"] = prov;
  o.holds = out.witness.valid(*x);
  return o;
}

json audit_json(const std::vector<ScaleAudit>& audit) {
  json out = json::array();
  for (const auto& s : audit) {
    out.push_back(json{{"output", s.output_index},
                       {"input_family", s.input_family},
                       {"certified_scale", number(s.certified_scale)},
                       {"target_scale", number(s.target_scale)}});
  }
  return out;
}

Outcome cmd_apc_push(Context& ctx, const Args& a) {
  const auto f = load_map(ctx, a.map);
  const auto w = io::witness_from_json(*f.domain, unwrap(ctx.load("witness", a.witness), "witness"));
  ctx.param("n", a.n);
  ctx.param("targets", cli::numbers(a.targets));
  Outcome o;
  const auto control = control_for(ctx, a, f, o.result);
  const auto t = apc_pushforward(f, a.n, control, w, a.targets);
  o.result["witness"] = io::witness_to_json(*f.codomain, t.witness);
  o.result["audit"] = audit_json(t.audit);
  PointSet sup;
  for (const auto& fam : t.witness.families) sup = set_union(sup, fam.support());
  const bool cov = is_subset(f.image(), sup);
  o.result["covers_image"] = cov;
  o.holds = cov && all_disjoint(t.witness);
  return o;
}

Outcome cmd_apc_pull(Context& ctx, const Args& a) {
  const auto f = load_map(ctx, a.map);
  const auto w = io::witness_from_json(*f.codomain, unwrap(ctx.load("witness", a.witness), "witness"));
  ctx.param("targets", cli::numbers(a.targets));
  ctx.param("component_bound", number(a.component_bound));
  const auto t = apc_pullback(f, w, a.targets, a.component_bound);
  Outcome o;
  o.result["witness"] = io::witness_to_json(*f.domain, t.witness);
  o.result["audit"] = audit_json(t.audit);
  const bool cov = t.witness.covers_space(*f.domain);
  o.result["covers"] = cov;
  o.holds = cov && all_disjoint(t.witness);
  return o;
}

// ---- tree ----

json tree_out(const FiniteMetricSpace& s, const DecompositionTree& t, TreeMode m) {
  json j = io::tree_to_json(s, t, m);
  j["space"] = io::space_to_json(s);
  return j;
}

Outcome cmd_tree_verify(Context& ctx, const Args& a) {
  const auto t = load_tree(ctx, a);
  const auto mode = tree_mode(a, t.raw, TreeMode::kSfdc);
  ctx.param("mode", mode_name(mode));
  const auto v = verify_tree(*t.space, t.tree, mode);
  Outcome o;
  o.result["verification"] = io::tree_verification_to_json(*t.space, v);
  o.holds = v.valid;
  return o;
}

Outcome cmd_tree_refine(Context& ctx, const Args& a) {
  const auto t = load_tree(ctx, a);
  const auto mode = tree_mode(a, t.raw, TreeMode::kSfdc);
  ctx.param("mode", mode_name(mode));
  const auto r = partition_refine(*t.space, t.tree);
  const auto v = verify_tree(*t.space, r, mode);
  const bool parts = levels_are_partitions(*t.space, r);
  Outcome o;
  o.result["tree"] = tree_out(*t.space, r, mode);
  o.result["partitions"] = parts;
  o.result["verification"] = io::tree_verification_to_json(*t.space, v);
  o.holds = parts && v.valid;
  return o;
}

Outcome cmd_tree_convert(Context& ctx, const Args& a) {
  const auto t = load_tree(ctx, a);
  const auto in = verify_tree(*t.space, t.tree, TreeMode::kCasdim);
  if (!in.valid) throw PreconditionError("input is not a valid casdim tree: " + in.violations.front().detail);
  const auto s = casdim_to_sfdc(*t.space, t.tree);
  const auto v = verify_tree(*t.space, s, TreeMode::kSfdc);
  Outcome o;
  o.result["tree"] = tree_out(*t.space, s, TreeMode::kSfdc);
  o.result["verification"] = io::tree_verification_to_json(*t.space, v);
  o.holds = v.valid;
  return o;
}

Outcome cmd_tree_cover(Context& ctx, const Args& a) {
  const auto t = load_tree(ctx, a);
  ctx.param("scale", number(a.scale));
  const auto f = tree_to_cover(*t.space, t.tree, a.scale);
  Outcome o;
  const bool cov = covers(f, t.space->all());
  o.result["family"] = family_json(*t.space, f);
  o.result["colors"] = f.color_count();
  o.result["covers"] = cov;
  o.result["mesh"] = number(mesh(*t.space, f));
  const auto dis = colors_r_disjoint(*t.space, f, a.scale);
  o.result["disjoint"] = dis.disjoint;
  o.holds = cov && dis.disjoint;
  return o;
}

Outcome cmd_tree_push(Context& ctx, const Args& a) {
  const auto f = load_map(ctx, a.map);
  const auto raw = unwrap(ctx.load("tree", a.tree), "tree");
  const auto t = io::tree_from_json(*f.domain, raw);
  ctx.param("n", a.n);
  ctx.param("targets", cli::numbers(a.targets));
  Outcome o;
  const auto control = control_for(ctx, a, f, o.result);
  const auto p = tree_pushforward(f, t, a.n, control, a.targets);
  const auto mode = tree_mode(a, json::object(), TreeMode::kCasdim);
  const auto v = verify_tree(*f.codomain, p.tree, mode);
  json audit = json::array();
  for (const auto& l : p.audit) {
    audit.push_back(json{{"level", l.level},
                         {"slack_before", number(l.slack_before)},
                         {"slack_after", number(l.slack_after)},
                         {"required_input_scale", number(l.required_input_scale)},
                         {"input_scale", number(l.input_scale)},
                         {"containments", l.containments}});
  }
  o.result["tree"] = tree_out(*f.codomain, p.tree, mode);
  o.result["audit"] = audit;
  o.result["verification"] = io::tree_verification_to_json(*f.codomain, v);
  o.holds = v.valid;
  return o;
}

Outcome cmd_tree_pull(Context& ctx, const Args& a) {
  const auto f = load_map(ctx, a.map);
  const auto raw = unwrap(ctx.load("tree", a.tree), "tree");
  const auto t = io::tree_from_json(*f.codomain, raw);
  ctx.param("n", a.n);
  ctx.param("targets", cli::numbers(a.targets));
  Outcome o;
  const auto control = control_for(ctx, a, f, o.result);
  const auto p = tree_pullback(f, t, a.n, control, a.targets, ctx.limits());
  const auto mode = tree_mode(a, raw, TreeMode::kSfdc);
  const auto v = verify_tree(*f.domain, p.tree, mode);
  o.result["tree"] = tree_out(*f.domain, p.tree, mode);
  o.result["extra_level"] = p.extra_level;
  o.result["piece_bound"] = number(p.piece_bound);
  o.result["max_pieces"] = p.max_pieces;
  o.result["verification"] = io::tree_verification_to_json(*f.domain, v);
  o.holds = v.valid && p.max_pieces <= static_cast<std::size_t>(a.n);
  return o;
}

// ---- msp ----

Outcome cmd_msp_family(Context& ctx, const Args& a) {
  const auto x = load_space(ctx, a.space);
  const auto mu = io::measure_from_json(*x, unwrap(ctx.load("measure", a.measure), "measure"));
  ctx.param("radius", number(a.radius));
  MassFamily m;
  if (a.threshold >= 0.0) {
    ctx.param("threshold", number(a.threshold));
    m = min_bound_for_mass(*x, x->all(), mu, a.radius, a.threshold, ctx.limits());
  } else if (a.greedy) {
    ctx.param("bound", number(a.bound));
    ctx.param("greedy", true);
    m = greedy_mass_family(*x, x->all(), mu, a.radius, a.bound);
  } else {
    ctx.param("bound", number(a.bound));
    m = best_mass_family(*x, mu, a.radius, a.bound, ctx.limits());
  }
  Outcome o;
  const auto dis = is_r_disjoint(*x, m.family, m.radius);
  o.result["mass_family"] = mass_json(*x, m);
  o.result["disjoint"] = dis.disjoint;
  o.result["mesh"] = number(mesh(*x, m.family));
  o.holds = dis.disjoint && mesh(*x, m.family) <= m.bound;
  if (a.threshold >= 0.0) o.holds = o.holds && m.mass > a.threshold;
  if (a.min_mass >= 0.0) {
    ctx.param("min_mass", number(a.min_mass));
    o.holds = o.holds && m.mass >= a.min_mass - kMassSlack;
  }
  return o;
}

Outcome cmd_msp_push(Context& ctx, const Args& a) {
  const auto f = load_map(ctx, a.map);
  const auto mu = io::measure_from_json(*f.codomain, unwrap(ctx.load("measure", a.measure), "measure"));
  ctx.param("n", a.n);
  ctx.param("radius", number(a.radius));
  std::optional<MassFamily> w;
  if (!a.witness.empty()) w = io::mass_family_from_json(*f.domain, unwrap(ctx.load("witness", a.witness), "witness"));
  Outcome o;
  const auto control = control_for(ctx, a, f, o.result);
  const auto p = msp_pushforward(f, a.n, control, mu, a.radius, w, {}, ctx.limits());
  o.result["family"] = mass_json(*f.codomain, p.result);
  o.result["from_search"] = p.from_search;
  o.result["constructed"] = mass_json(*f.codomain, p.constructed);
  o.result["witness"] = mass_json(*f.domain, p.witness);
  o.result["transferred"] = io::measure_to_json(*f.domain, p.transferred);
  o.result["witness_radius"] = number(p.witness_radius);
  o.result["stated_bound"] = number(p.stated_bound);
  o.result["construction_bound"] = number(p.construction_bound);
  o.result["mesh"] = number(p.mesh);
  o.result["guaranteed"] = number(p.guaranteed);
  o.result["colors"] = p.colors;
  o.result["disjoint"] = p.disjoint;
  o.result["mass_holds"] = p.mass_holds;
  o.result["mesh_holds"] = p.mesh_holds;
  o.result["at_bound"] = p.at_bound;
  o.holds = p.disjoint && p.mass_holds && p.mesh_holds;
  return o;
}

Outcome cmd_msp_pull(Context& ctx, const Args& a) {
  const auto f = load_map(ctx, a.map);
  const auto mu = io::measure_from_json(*f.domain, unwrap(ctx.load("measure", a.measure), "measure"));
  ctx.param("radius", number(a.radius));
  MspPullOptions opt;
  opt.y_radius = a.y_radius;
  opt.y_bound = a.y_bound;
  opt.fiber_bound = a.fiber_bound;
  if (a.y_radius) ctx.param("y_radius", number(*a.y_radius));
  if (a.y_bound) ctx.param("y_bound", number(*a.y_bound));
  if (a.fiber_bound) ctx.param("fiber_bound", number(*a.fiber_bound));
  const auto p = msp_pullback(f, mu, a.radius, opt, ctx.limits());
  Outcome o;
  json stages = json::array();
  for (const auto& s : p.stages) {
    stages.push_back(json{{"component", labels(*f.codomain, s.component)},
                          {"fiber_mass", s.fiber_mass},
                          {"found_mass", s.found_mass},
                          {"bound", number(s.bound)}});
  }
  o.result["family"] = mass_json(*f.domain, p.result);
  o.result["y_family"] = mass_json(*f.codomain, p.y_family);
  o.result["y_radius"] = number(p.y_radius);
  o.result["y_bound"] = number(p.y_bound);
  o.result["lambda_mass"] = p.lambda_mass;
  o.result["stages"] = stages;
  o.result["component_bound"] = number(p.component_bound);
  o.result["mass_holds"] = p.mass_holds;
  o.result["components_bounded"] = p.components_bounded;
  o.result["at_bound"] = p.at_bound;
  o.holds = p.mass_holds && p.components_bounded;
  return o;
}

Outcome cmd_msp_check(Context& ctx, const Args& a) {
  const auto f = load_map(ctx, a.map);
  PointSet set;
  for (const auto& l : a.set) {
    const PointId p = f.codomain->index_of(l);
    if (p >= f.codomain->size()) throw io::InputError("--set: unknown codomain label " + l);
    set.push_back(p);
  }
  set = make_set(std::move(set));
  if (!(a.c > 0.0 && a.c < 1.0)) throw io::InputError("--c: must lie in (0, 1)");
  ctx.param("set", labels(*f.codomain, set));
  ctx.param("radius", number(a.radius));
  ctx.param("bound", number(a.bound));
  ctx.param("c", number(a.c));
  ctx.param("k", number(a.k));
  const auto r = map_msp_check(f, set, a.radius, a.bound, a.c, a.k, ctx.limits());
  Outcome o;
  o.result["game_value"] = r.game_value;
  o.result["achievable"] = r.achievable;
  o.result["at_bound"] = r.at_bound;
  o.result["exact"] = r.exact;
  o.result["inconclusive"] = r.inconclusive;
  o.result["worst_support"] = labels(*f.domain, r.worst_support);
  o.result["worst_measure"] = r.worst_measure;
  o.result["feasible_unions"] = r.feasible_unions;
  o.holds = r.achievable;
  return o;
}

// ---- suite ----

Outcome cmd_suite(Context& ctx, const Args& a) {
  Outcome o;
  if (a.list || a.suite.empty()) {
    json list = json::array();
    for (const auto& s : suites::catalog()) {
      list.push_back(json{{"name", s.name},
                          {"summary", s.summary},
                          {"default_count", s.default_count},
                          {"default_max_points", s.default_max_points}});
    }
    o.result["suites"] = list;
    if (!a.list) throw io::InputError("suite: name a suite (see --list)");
    return o;
  }
  suites::SuiteOptions opt;
  opt.seed = a.seed;
  opt.count = a.count;
  opt.max_points = a.max_points;
  opt.limits = ctx.limits();
  ctx.param("suite", a.suite);
  ctx.param("seed", a.seed);
  try {
    const auto r = suites::run_suite(a.suite, opt);
    o.result = r.body;
    o.holds = r.ok();
  } catch (const PreconditionError& e) {
    throw io::InputError(e.what());
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coarse-kit: finite-scale coarse geometry workbench"};
  app.require_subcommand(1);
  Args a;
  cli::CommonOptions common;
  std::string command;
  std::function<Outcome(Context&)> action;

  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& desc, const std::string& full,
                  Outcome (*fn)(Context&, const Args&)) {
    CLI::App* sub = parent->add_subcommand(name, desc);
    cli::add_common(sub, common);
    sub->callback([&, full, fn] {
      command = full;
      action = [&a, fn](Context& ctx) { return fn(ctx, a); };
    });
    return sub;
  };
  auto group = [&](const std::string& name, const std::string& desc) {
    CLI::App* g = app.add_subcommand(name, desc);
    g->require_subcommand(1);
    return g;
  };
  auto file = [](CLI::App* s, const std::string& flag, std::string& dst, const std::string& desc, bool required) {
    auto* opt = s->add_option(flag, dst, desc);
    if (required) opt->required();
    return opt;
  };
  auto list = [](CLI::App* s, const std::string& flag, std::vector<double>& dst, const std::string& desc) {
    return s->add_option(flag, dst, desc)->delimiter(',')->required();
  };

  {
    auto* s = leaf(&app, "space", "Summarize a space; with --scale, search its dimension at that scale", "space",
                   cmd_space);
    file(s, "--space", a.space, "Space descriptor", true);
    s->add_option("--scale", a.scale, "Expansion radius for the dimension search");
    s->add_option("--mesh-cap", a.mesh_cap, "Mesh cap for the dimension search");
    s->add_option("--max-dim", a.max_dim, "Fail when the dimension exceeds this");
    s->add_flag("--emit", a.emit, "Include the canonical matrix descriptor");
  }

  {
    auto* g = group("cover", "Covers: dimension at a scale, disjointification, Lebesgue number");
    auto* d = leaf(g, "dim", "Nerve dimension of the R-expansions", "cover dim", cmd_cover_dim);
    file(d, "--space", a.space, "Space descriptor", true);
    file(d, "--cover", a.cover, "Family JSON", true);
    d->add_option("--scale", a.scale, "Expansion radius R")->required();
    d->add_option("--max-dim", a.max_dim, "Fail when the dimension exceeds this");
    auto* j = leaf(g, "disjointify", "Split into n+1 colors, each R/(n+1)-disjoint", "cover disjointify",
                   cmd_cover_disjointify);
    file(j, "--space", a.space, "Space descriptor", true);
    file(j, "--cover", a.cover, "Family JSON", true);
    j->add_option("--scale", a.scale, "Scale R")->required();
    j->add_option("--n", a.disjoint_n, "Dimension bound (default: the dimension at R)");
    j->add_flag("--trace", a.trace, "Include the W_T audit");
    auto* l = leaf(g, "lebesgue", "Lebesgue number of a cover", "cover lebesgue", cmd_cover_lebesgue);
    file(l, "--space", a.space, "Space descriptor", true);
    file(l, "--cover", a.cover, "Family JSON", true);
  }

  {
    auto* g = group("map", "Coarsely n-to-1 maps");
    auto* c = leaf(g, "control", "Least n-to-1 control function", "map control", cmd_map_control);
    file(c, "--map", a.map, "Map JSON", true);
    c->add_option("--n", a.n, "Parts per preimage")->required();
    c->add_option("--cap", a.cap, "Refuse when a control value exceeds this");
    auto* p = leaf(g, "profile", "Components of preimages of r-bounded sets", "map profile", cmd_map_profile);
    file(p, "--map", a.map, "Map JSON", true);
    p->add_option("--r", a.r, "Codomain scale r")->required();
    p->add_option("--big-r", a.big_r, "Component scale R")->required();
    p->add_option("--n", a.profile_n, "Check <= n components of diameter <= 2nR");
    auto* u = leaf(g, "push", "Image cover and its dimension bound", "map push", cmd_map_push);
    file(u, "--map", a.map, "Map JSON", true);
    file(u, "--cover", a.cover, "Cover of the domain", true);
    file(u, "--control", a.control, "Control JSON (default: computed)", false);
    u->add_option("--r", a.r, "Codomain scale r")->required();
    u->add_option("--n", a.n, "Map is coarsely n-to-1")->required();
    u->add_flag("--disjointify", a.disjointify, "Also disjointify the image");
    auto* f = leaf(g, "factor", "Factor through fiber components", "map factor", cmd_map_factor);
    file(f, "--map", a.map, "Map JSON", true);
    f->add_option("--big-r", a.big_r, "Component scale R")->required();
    f->add_option("--n", a.n, "Map is coarsely n-to-1")->required();
  }

  {
    auto* q = leaf(&app, "quotient", "Orbit space of a group action with the Hausdorff metric", "quotient",
                   cmd_quotient);
    file(q, "--space", a.space, "Space descriptor", true);
    file(q, "--action", a.action, "Action JSON {table, perms}", false);
    q->add_option("--generator", a.generator, "Image label of each point under a generator")->delimiter(',');
    q->add_option("--order", a.order, "Order of the cyclic group");
  }

  {
    auto* g = group("apc", "Asymptotic Property C witnesses");
    auto* w = leaf(g, "witness", "Search a witness for the given scales", "apc witness", cmd_apc_witness);
    file(w, "--space", a.space, "Space descriptor", true);
    list(w, "--scales", a.scales, "Disjointness scales, increasing");
    w->add_option("--mesh-cap", a.mesh_cap, "Mesh cap")->required();
    auto* n = leaf(g, "normalize", "Dimension sequence to disjoint families", "apc normalize", cmd_apc_normalize);
    file(n, "--space", a.space, "Space descriptor", true);
    file(n, "--witness", a.witness, "Dimension-sequence witness {dims, families}", true);
    list(n, "--gaps", a.gaps, "Increasing scales M_1, M_2, ...");
    auto* p = leaf(g, "push", "Push a witness through an n-to-1 map", "apc push", cmd_apc_push);
    file(p, "--map", a.map, "Map JSON", true);
    file(p, "--witness", a.witness, "Witness on the domain", true);
    file(p, "--control", a.control, "Control JSON (default: computed)", false);
    p->add_option("--n", a.n, "Map is coarsely n-to-1")->required();
    list(p, "--targets", a.targets, "Target scales R_1..R_{mn}");
    auto* l = leaf(g, "pull", "Pull a witness back along a map", "apc pull", cmd_apc_pull);
    file(l, "--map", a.map, "Map JSON", true);
    file(l, "--witness", a.witness, "Witness on the codomain", true);
    list(l, "--targets", a.targets, "Target scales on the domain");
    l->add_option("--component-bound", a.component_bound, "Reject wider components");
  }

  {
    auto* g = group("tree", "Decomposition trees");
    auto tree_opts = [&](CLI::App* s) {
      file(s, "--tree", a.tree, "Tree JSON (may embed \"space\")", true);
      file(s, "--space", a.space, "Space descriptor", false);
      s->add_option("--mode", a.mode, "sfdc or casdim");
    };
    tree_opts(leaf(g, "verify", "Check the tree conditions", "tree verify", cmd_tree_verify));
    tree_opts(leaf(g, "refine", "Refine every level to a partition", "tree refine", cmd_tree_refine));
    auto* c = leaf(g, "convert", "casdim tree to binary sfdc tree", "tree convert", cmd_tree_convert);
    file(c, "--tree", a.tree, "Tree JSON (may embed \"space\")", true);
    file(c, "--space", a.space, "Space descriptor", false);
    auto* v = leaf(g, "cover", "Colored cover from the tree", "tree cover", cmd_tree_cover);
    file(v, "--tree", a.tree, "Tree JSON (may embed \"space\")", true);
    file(v, "--space", a.space, "Space descriptor", false);
    v->add_option("--scale", a.scale, "Disjointness demanded of each color")->required();
    for (auto [name, desc, fn] : {std::tuple{"push", "Push a partition tree through an n-to-1 map", cmd_tree_push},
                                  std::tuple{"pull", "Pull a tree back along an n-to-1 map", cmd_tree_pull}}) {
      auto* s = leaf(g, name, desc, std::string("tree ") + name, fn);
      file(s, "--map", a.map, "Map JSON", true);
      file(s, "--tree", a.tree, "Tree JSON", true);
      file(s, "--control", a.control, "Control JSON (default: computed)", false);
      s->add_option("--n", a.n, "Map is coarsely n-to-1")->required();
      list(s, "--targets", a.targets, "Target scales of the output tree");
      s->add_option("--mode", a.mode, "sfdc or casdim for the output check");
    }
  }

  {
    auto* g = group("msp", "Metric sparsification");
    auto* f = leaf(g, "family", "Best R-disjoint family of S-bounded sets", "msp family", cmd_msp_family);
    file(f, "--space", a.space, "Space descriptor", true);
    file(f, "--measure", a.measure, "Measure JSON {weights}", true);
    f->add_option("--radius", a.radius, "Disjointness R")->required();
    f->add_option("--bound", a.bound, "Mesh bound S");
    f->add_option("--threshold", a.threshold, "Instead find the least S with mass above this");
    f->add_option("--min-mass", a.min_mass, "Fail below this mass");
    f->add_flag("--greedy", a.greedy, "Greedy lower bound only");
    auto* p = leaf(g, "push", "Push an MSP witness through an n-to-1 surjection", "msp push", cmd_msp_push);
    file(p, "--map", a.map, "Map JSON", true);
    file(p, "--measure", a.measure, "Measure on the codomain", true);
    file(p, "--witness", a.witness, "Mass family on the domain (default: searched)", false);
    file(p, "--control", a.control, "Control JSON (default: computed)", false);
    p->add_option("--n", a.n, "Map is coarsely n-to-1")->required();
    p->add_option("--radius", a.radius, "Disjointness R on the codomain")->required();
    auto* l = leaf(g, "pull", "Pull MSP back along a map", "msp pull", cmd_msp_pull);
    file(l, "--map", a.map, "Map JSON", true);
    file(l, "--measure", a.measure, "Measure on the domain", true);
    l->add_option("--radius", a.radius, "Component scale R_X")->required();
    l->add_option("--y-radius", a.y_radius, "Codomain scale R_Y");
    l->add_option("--y-bound", a.y_bound, "Codomain bound K");
    l->add_option("--fiber-bound", a.fiber_bound, "Fiber bound S");
    auto* c = leaf(g, "check", "Worst-case mass over measures on a preimage", "msp check", cmd_msp_check);
    file(c, "--map", a.map, "Map JSON", true);
    c->add_option("--set", a.set, "Codomain labels of A")->delimiter(',')->required();
    c->add_option("--radius", a.radius, "Component scale R")->required();
    c->add_option("--bound", a.bound, "Component bound S")->required();
    c->add_option("--c", a.c, "Mass threshold in (0, 1)")->required();
    c->add_option("--k", a.k, "Bound on the image support")->required();
  }

  {
    auto* s = leaf(&app, "suite", "Run a seeded property suite", "suite", cmd_suite);
    s->add_option("name", a.suite, "Suite name");
    s->add_option("--seed", a.seed, "Master seed")->capture_default_str();
    s->add_option("--count", a.count, "Instances (default: the suite's)");
    s->add_option("--max-points", a.max_points, "Largest space (default: the suite's)");
    s->add_flag("--list", a.list, "List the suites");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (!action) return 2;
  return cli::execute(command, action, common);
}
