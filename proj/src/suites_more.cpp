#include <algorithm>
#include <functional>
#include <numeric>

#include "suite_support.hpp"

namespace coarse::suites::detail {

namespace {

ControlFunction strict_twice() {
  auto c = ControlFunction::affine(2, 0);
  c.strict = true;
  return c;
}

std::vector<double> positive_distances(const FiniteMetricSpace& space) {
  auto d = space.distinct_distances();
  d.erase(d.begin(), std::upper_bound(d.begin(), d.end(), 0.0));
  return d;
}

double pick(gen::Rng& rng, const std::vector<double>& values) { return values[gen::below(rng, values.size())]; }

}  // namespace

// asdim X <= asdim Y <= (asdim X + 1) |G| - 1 for Y = X/G, at fixed scales.
//   lower: the 2r-components of p^{-1}(V) for a Y cover V of mesh <= K <= r
//          have r-dimension <= dim_r V and mesh <= 4|G|r;
//   upper: p(U) for an X cover U of mesh <= K has mesh <= K and
//          r-dimension <= (dim U at the scale strictly above C(r) = 2r + 1)|G| - 1.
SuiteReport asdim_sandwich(const SuiteOptions& o) {
  Recorder rec("sandwich", o, 0, 16);
  rec.parameters()["settings_per_fixture"] = 3;
  for (const auto& fx : gen::group_fixtures()) {
    if (fx.action.space->size() > rec.max_points()) continue;
    auto rng = rec.next_rng();
    const auto q = group_quotient(fx.action, rec.options().limits);
    const auto& x = *q.source;
    const auto& y = *q.quotient;
    const int g = static_cast<int>(fx.action.order());
    auto ys = positive_distances(y);
    if (ys.empty()) ys.push_back(1.0);
    for (int setting = 0; setting < 3; ++setting) {
      const double r = pick(rng, ys);
      std::vector<double> ks{0.0};
      for (double v : ys)
        if (v <= r) ks.push_back(v);
      const double k = pick(rng, ks);
      rec.run([&](Instance& inst, json& dump) {
        dump["fixture"] = fx.name;
        dump["r"] = io::number(r);
        dump["K"] = io::number(k);
        const auto& lim = rec.options().limits;
        const auto ay = asdim_at_scale(y, r, k, lim);
        const double lower_cap = 4.0 * g * r;
        const double rho = strict_scale_above(x, 2 * r);
        const auto ax_up = asdim_at_scale(x, rho, k, lim);
        const int upper = (ax_up.dim + 1) * g - 1;

        // Constructive halves. The lower search runs at the lifted cover's
        // own mesh, which is at most 4|G|r.
        Family lifted;
        for (const auto& v : ay.cover.sets) {
          for (auto& c : r_components(x, q.projection.preimage(v), 2 * r)) lifted.sets.push_back(std::move(c));
        }
        const int lifted_dim = dim_at_scale(x, lifted, r);
        const double lifted_mesh = mesh(x, lifted);
        const auto ax_low = asdim_at_scale(x, r, lifted_mesh, lim);
        Family pushed;
        for (const auto& u : ax_up.cover.sets) pushed.sets.push_back(q.projection.image(u));
        const int pushed_dim = dim_at_scale(y, pushed, r);

        inst["fixture"] = fx.name;
        inst["group_order"] = g;
        inst["r"] = io::number(r);
        inst["K"] = io::number(k);
        inst["asdim_Y"] = ay.dim;
        inst["asdim_X_lower"] = ax_low.dim;
        inst["lower_mesh"] = io::number(lifted_mesh);
        inst["lower_mesh_cap"] = io::number(lower_cap);
        inst["upper_scale"] = io::number(rho);
        inst["asdim_X_upper"] = ax_up.dim;
        inst["upper_bound"] = upper;
        inst["lifted_dim"] = lifted_dim;
        inst["pushed_dim"] = pushed_dim;
        inst.check("exact searches", ay.exact && ax_low.exact && ax_up.exact);
        inst.check("lower", ax_low.dim <= ay.dim);
        inst.check("lifted cover", covers(lifted, x.all()) && lifted_dim <= ay.dim && lifted_mesh <= lower_cap);
        inst.check("upper", ay.dim <= upper);
        inst.check("pushed cover", covers(pushed, y.all()) && pushed_dim <= upper && mesh(y, pushed) <= k);
      });
    }
  }
  return rec.finish();
}

// Countable-asdim trees become sFDC trees; the subtraction rule yields partitions.
SuiteReport sfdc_equivalence(const SuiteOptions& o) {
  Recorder rec("sfdc-equivalence", o, 200, 128);
  for (std::size_t i = 0; i < rec.count(); ++i) {
    auto rng = rec.next_rng();
    rec.run([&](Instance& inst, json& dump) {
      const auto x = gen::random_space(rng, rec.max_points());
      gen::TreeShape shape;
      shape.max_depth = 2 + gen::below(rng, 3);
      shape.max_branching = static_cast<int>(2 + gen::below(rng, 4));
      shape.overlap = gen::coin(rng, 1, 3);
      const auto t = gen::random_tree(rng, *x, shape);
      dump["space"] = io::space_to_json(*x);
      dump["tree"] = io::tree_to_json(*x, t, TreeMode::kCasdim);
      inst["points"] = x->size();
      inst["depth"] = t.depth();
      inst["branching"] = t.branching;
      inst["overlap"] = shape.overlap;
      inst.check("input valid", verify_tree(*x, t, TreeMode::kCasdim).valid);

      const auto s = casdim_to_sfdc(*x, t);
      const auto vs = verify_tree(*x, s, TreeMode::kSfdc);
      inst["sfdc_depth"] = s.depth();
      inst.check("sfdc valid", vs.valid);
      inst.check("binary", std::all_of(s.branching.begin(), s.branching.end(), [](int b) { return b <= 2; }));
      if (!vs.valid) dump["sfdc"] = io::tree_to_json(*x, s, TreeMode::kSfdc);

      for (const auto* src : {&t, &s}) {
        const auto mode = src == &t ? TreeMode::kCasdim : TreeMode::kSfdc;
        const auto p = partition_refine(*x, *src);
        inst.check("partition", levels_are_partitions(*x, p));
        inst.check("refined valid", verify_tree(*x, p, mode).valid);
        bool inside = p.depth() == src->depth();
        for (std::size_t l = 0; inside && l < p.depth(); ++l) {
          for (const auto& e : p.levels[l].sets) {
            bool found = false;
            for (const auto& old : src->levels[l].sets) found = found || is_subset(e, old);
            inside = inside && found;
          }
        }
        inst.check("refined inside", inside);
      }
    });
  }
  return rec.finish();
}

namespace {

struct TransferFixture {
  std::string name;
  CoarseMap map;
  int n = 1;
  ControlFunction control;
};

std::vector<TransferFixture> transfer_fixtures() {
  std::vector<TransferFixture> out;
  auto line = [](long lo, long hi) {
    return std::make_shared<const FiniteMetricSpace>(FiniteMetricSpace::integer_interval(lo, hi));
  };
  auto strict_id = ControlFunction::identity();
  strict_id.strict = true;
  out.push_back({"identity {0..15}", CoarseMap::identity(line(0, 15)), 1, strict_id});
  {
    auto x = line(-15, 15);
    auto y = line(0, 15);
    std::vector<PointId> a;
    for (long v = -15; v <= 15; ++v) a.push_back(static_cast<PointId>(std::labs(v)));
    out.push_back({"fold {-15..15}", CoarseMap::make(x, y, a), 2, strict_id});
  }
  for (const auto& fx : gen::group_fixtures()) {
    if (!fx.action.isometric()) continue;
    auto q = group_quotient(fx.action);
    out.push_back({fx.name, q.projection, static_cast<int>(fx.action.order()), strict_twice()});
  }
  return out;
}

void transfer_case(Instance& inst, json& dump, gen::Rng& rng, const CoarseMap& f, int n,
                   const ControlFunction& control, const SearchLimits& limits) {
  dump["map"] = io::map_to_json(f);
  dump["n"] = n;
  dump["control"] = io::control_to_json(control);
  const auto& x = *f.domain;
  const auto& y = *f.codomain;
  auto xs = positive_distances(x);
  auto ys = positive_distances(y);
  if (xs.empty()) xs.push_back(1.0);
  if (ys.empty()) ys.push_back(1.0);

  // Pullback: Y tree at scales strictly above E(R_i).
  {
    const auto e = control_upper(f);
    const std::size_t levels = 1 + gen::below(rng, 3);
    std::vector<double> targets;
    for (std::size_t l = 0; l < levels; ++l) targets.push_back(pick(rng, xs));
    std::sort(targets.begin(), targets.end(), std::greater<>());
    gen::TreeShape shape;
    shape.max_depth = levels + 1;
    for (double t : targets) shape.scales.push_back(strict_scale_above(y, e(t)));
    const auto yt = gen::random_tree(rng, y, shape);
    const auto vy = verify_tree(y, yt, TreeMode::kCasdim);
    const std::size_t cut = vy.bounded_level ? *vy.bounded_level + 1 : yt.depth();
    targets.resize(std::max<std::size_t>(cut, 2) - 1);
    dump["pull_tree"] = io::tree_to_json(y, yt, TreeMode::kCasdim);
    dump["pull_targets"] = targets;
    const auto back = tree_pullback(f, yt, n, control, targets, limits);
    const auto v = verify_tree(x, back.tree, TreeMode::kCasdim);
    inst["pull_targets"] = targets.size();
    inst["pull_depth"] = back.tree.depth();
    inst["pull_extra_level"] = back.extra_level;
    inst["pull_max_pieces"] = back.max_pieces;
    inst.check("pullback input valid", vy.valid);
    inst.check("pullback valid", v.valid);
    inst.check("pullback pieces", back.max_pieces <= static_cast<std::size_t>(n));
  }

  // Pushforward: a partition tree on X at the demanded input scales.
  {
    const std::size_t levels = 1 + gen::below(rng, 2);
    std::vector<double> targets;
    // Small targets keep the demanded input scales below the diameter of X.
    const std::vector<double> small(ys.begin(), ys.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(2, ys.size())));
    for (std::size_t l = 0; l < levels; ++l) targets.push_back(pick(rng, small));
    std::sort(targets.begin(), targets.end(), std::greater<>());
    gen::TreeShape shape;
    shape.max_depth = levels + 1;
    shape.max_branching = 2;
    shape.scales = tree_pushforward_input_scales(x, n, control, std::vector<int>(levels, 2), targets);
    auto src = partition_refine(x, gen::random_tree(rng, x, shape));
    bool fallback = false;
    if (src.depth() < 2 || std::any_of(src.branching.begin(), src.branching.end(), [](int b) { return b > 2; })) {
      // The coloring fell back to components; keep the levels that fit.
      std::size_t keep = 1;
      while (keep < src.depth() && src.branching[keep - 1] <= 2) ++keep;
      src.levels.resize(keep);
      src.scales.resize(keep - 1);
      src.branching.resize(keep - 1);
      src.splits.resize(keep - 1);
      src.terminal_mesh = mesh(x, src.levels.back());
      fallback = true;
    }
    const auto vx = verify_tree(x, src, TreeMode::kSfdc);
    const std::size_t cut = vx.bounded_level ? *vx.bounded_level + 1 : src.depth();
    targets.resize(src.depth() - 1);
    dump["push_tree"] = io::tree_to_json(x, src, TreeMode::kSfdc);
    dump["push_targets"] = targets;
    const auto push = tree_pushforward(f, src, n, control, targets);
    const auto v = verify_tree(y, push.tree, TreeMode::kCasdim);
    bool audited = push.audit.size() + 1 == cut;
    for (const auto& a : push.audit) audited = audited && a.input_scale >= a.required_input_scale;
    std::size_t containments = 0;
    for (const auto& a : push.audit) containments += a.containments;
    inst["push_depth"] = push.tree.depth();
    inst["push_branching"] = push.tree.branching;
    inst["push_containments"] = containments;
    inst["push_truncated"] = fallback;
    inst.check("pushforward input valid", vx.valid && levels_are_partitions(x, src));
    inst.check("pushforward valid", v.valid);
    inst.check("pushforward audit", audited);
  }
}

}  // namespace

// Tree pullback and pushforward on the map fixtures and random maps.
SuiteReport tree_transfer(const SuiteOptions& o) {
  Recorder rec("tree-transfer", o, 20, 24);
  for (const auto& fx : transfer_fixtures()) {
    auto rng = rec.next_rng();
    rec.run([&](Instance& inst, json& dump) {
      inst["fixture"] = fx.name;
      transfer_case(inst, dump, rng, fx.map, fx.n, fx.control, rec.options().limits);
    });
  }
  for (std::size_t i = 0; i < rec.count(); ++i) {
    auto rng = rec.next_rng();
    rec.run([&](Instance& inst, json& dump) {
      const auto mi = gen::random_map(rng, rec.max_points());
      const auto ctl = n_to_1_control(mi.map, mi.n, kInfinity, rec.options().limits);
      inst["fixture"] = "random " + mi.kind;
      inst.check("control", !ctl.refused);
      if (ctl.refused) return;
      transfer_case(inst, dump, rng, mi.map, mi.n, ctl.control, rec.options().limits);
    });
  }
  return rec.finish();
}

// Mass constants of the three sparsification pipelines.
SuiteReport msp_pipelines(const SuiteOptions& o) {
  Recorder rec("msp-pipelines", o, 50, 16);
  const gen::MeasureKind kinds[] = {gen::MeasureKind::kUniform, gen::MeasureKind::kRandom, gen::MeasureKind::kPoint,
                                    gen::MeasureKind::kFarPair, gen::MeasureKind::kOnSet};
  for (std::size_t i = 0; i < rec.count(); ++i) {
    auto rng = rec.next_rng();
    const auto kind = kinds[i % 5];
    rec.run([&](Instance& inst, json& dump) {
      const auto& lim = rec.options().limits;
      const auto mi = gen::random_map(rng, rec.max_points());
      const auto& f = mi.map;
      const auto& x = *f.domain;
      const auto& y = *f.codomain;
      const int n = mi.n;
      dump["map"] = io::map_to_json(f);
      dump["n"] = n;
      inst["kind"] = mi.kind;
      inst["measure"] = gen::measure_kind_name(kind);
      inst["points"] = x.size();
      inst["n"] = n;

      // asdim -> MSP on X.
      {
        const auto mu = gen::random_measure(rng, x, kind, gen::random_cover(rng, x, 1, gen::random_distance(rng, x)).sets[0]);
        const double r = gen::random_distance(rng, x);
        const Family u = gen::random_cover(rng, x, 1 + gen::below(rng, x.size() / 2 + 1),
                                           gen::random_distance(rng, x) / 2);
        const int m = dim_at_scale(x, u, r);
        const auto colored = make_disjoint(x, u, r, m).family;
        const auto a = asdim_to_msp(x, colored, r / (m + 1), mu);
        dump["asdim_measure"] = io::measure_to_json(x, mu);
        inst["asdim_colors"] = a.colors;
        inst["asdim_mass"] = io::number(a.best.mass);
        inst.check("asdim mass", a.holds && a.colors <= m + 1 && a.best.mass >= 1.0 / (m + 1) - kMassSlack);
      }

      const auto ctl = n_to_1_control(f, n, kInfinity, lim);
      inst.check("control", !ctl.refused);
      if (ctl.refused) return;

      // Pushforward: the measure lives on Y.
      {
        const auto nu = gen::random_measure(rng, y, kind, f.image(gen::random_cover(rng, x, 1, gen::random_distance(rng, x)).sets[0]));
        const double r = gen::random_distance(rng, y);
        const auto p = msp_pushforward(f, n, ctl.control, nu, r, std::nullopt, {}, lim);
        dump["push_measure"] = io::measure_to_json(y, nu);
        dump["push_radius"] = io::number(r);
        inst["push_mass"] = io::number(p.result.mass);
        inst["push_guaranteed"] = io::number(p.guaranteed);
        inst["push_mesh"] = io::number(p.mesh);
        inst["push_stated_bound"] = io::number(p.stated_bound);
        inst["push_construction_bound"] = io::number(p.construction_bound);
        inst.check("push disjoint", p.disjoint && is_r_disjoint(y, p.result.family, r).disjoint);
        inst.check("push mass", p.mass_holds && p.result.mass >= 1.0 / (2 * n) - kMassSlack);
        inst["push_constructed_mass"] = io::number(p.constructed.mass);
        inst["push_constructed_mesh"] = io::number(mesh(y, p.constructed.family));
        inst["push_from_search"] = p.from_search;
        inst.check("push mesh", p.mesh_holds && mesh(y, p.result.family) <= p.stated_bound);
        inst.check("push construction", p.constructed.mass >= 1.0 / (2 * n) - kMassSlack &&
                                            mesh(y, p.constructed.family) <= p.construction_bound &&
                                            is_r_disjoint(y, p.constructed.family, r).disjoint);
      }

      // Pullback: the measure lives on X.
      {
        const auto mu = gen::random_measure(rng, x, kind, gen::random_cover(rng, x, 1, gen::random_distance(rng, x)).sets[0]);
        const double r = gen::random_distance(rng, x);
        const auto p = msp_pullback(f, mu, r, {}, lim);
        dump["pull_measure"] = io::measure_to_json(x, mu);
        dump["pull_radius"] = io::number(r);
        bool bounded = true;
        for (const auto& c : open_components(x, p.result.family.support(), r))
          bounded = bounded && diameter(x, c) <= p.component_bound;
        inst["pull_mass"] = io::number(p.result.mass);
        inst["pull_component_bound"] = io::number(p.component_bound);
        inst.check("pull mass", p.mass_holds && p.result.mass >= 0.25 - kMassSlack);
        inst.check("pull disjoint", is_r_disjoint(x, p.result.family, r).disjoint);
        inst.check("pull bounded", p.components_bounded && bounded);
      }
    });
  }
  return rec.finish();
}

namespace {

// Independent brute-force helpers: union-find on a threshold graph.
std::vector<std::vector<PointId>> brute_components(const FiniteMetricSpace& x, const std::vector<PointId>& pts,
                                                   double r) {
  std::vector<std::size_t> parent(pts.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> root = [&](std::size_t a) {
    return parent[a] == a ? a : parent[a] = root(parent[a]);
  };
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b)
      if (x.dist(pts[a], pts[b]) < r) parent[root(a)] = root(b);
  std::vector<std::vector<PointId>> out(pts.size());
  for (std::size_t a = 0; a < pts.size(); ++a) out[root(a)].push_back(pts[a]);
  out.erase(std::remove_if(out.begin(), out.end(), [](const auto& c) { return c.empty(); }), out.end());
  return out;
}

double brute_diam(const FiniteMetricSpace& x, const std::vector<PointId>& s) {
  double d = 0.0;
  for (PointId a : s)
    for (PointId b : s) d = std::max(d, x.dist(a, b));
  return d;
}

bool components_bounded(const FiniteMetricSpace& x, const std::vector<PointId>& pts, double r, double s) {
  for (const auto& c : brute_components(x, pts, r))
    if (brute_diam(x, c) > s) return false;
  return true;
}

double brute_mass(const FiniteMetricSpace& x, const std::vector<double>& w, double r, double s) {
  const std::size_t n = x.size();
  double best = 0.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<PointId> pts;
    double m = 0.0;
    for (PointId p = 0; p < n; ++p)
      if (mask >> p & 1) pts.push_back(p), m += w[p];
    if (m > best && components_bounded(x, pts, r, s)) best = m;
  }
  return best;
}

// Least k admitting a partition into blocks of diameter <= cap whose strict
// r-expansions cover every point at most k+1 times.
int brute_asdim(const FiniteMetricSpace& x, double r, double cap) {
  const std::size_t n = x.size();
  std::vector<std::vector<PointId>> ball(n);
  for (PointId a = 0; a < n; ++a)
    for (PointId b = 0; b < n; ++b)
      if (a == b || x.dist(a, b) < r) ball[a].push_back(b);
  for (int k = 0;; ++k) {
    std::vector<std::vector<PointId>> blocks;
    std::vector<std::vector<char>> covered;
    std::vector<int> mult(n, 0);
    std::function<bool(PointId)> rec = [&](PointId i) -> bool {
      if (i == n) return true;
      for (std::size_t b = 0; b <= blocks.size(); ++b) {
        if (b < blocks.size() &&
            std::any_of(blocks[b].begin(), blocks[b].end(), [&](PointId p) { return x.dist(i, p) > cap; }))
          continue;
        const bool fresh_block = b == blocks.size();
        if (fresh_block) {
          blocks.emplace_back();
          covered.emplace_back(n, 0);
        }
        std::vector<PointId> fresh;
        for (PointId p : ball[i])
          if (!covered[b][p]) fresh.push_back(p);
        bool ok = true;
        for (PointId p : fresh) {
          covered[b][p] = 1;
          if (++mult[p] > k + 1) ok = false;
        }
        blocks[b].push_back(i);
        if (ok && rec(i + 1)) return true;
        blocks[b].pop_back();
        for (PointId p : fresh) covered[b][p] = 0, --mult[p];
        if (fresh_block) {
          blocks.pop_back();
          covered.pop_back();
        }
      }
      return false;
    };
    if (rec(0)) return k;
  }
}

bool brute_apc(const FiniteMetricSpace& x, const std::vector<double>& scales, double cap) {
  const std::size_t n = x.size();
  const std::size_t k = scales.size();
  std::vector<std::size_t> label(n, 0);
  for (;;) {
    bool ok = true;
    for (std::size_t s = 0; ok && s < k; ++s) {
      std::vector<PointId> cls;
      for (PointId p = 0; p < n; ++p)
        if (label[p] == s) cls.push_back(p);
      ok = components_bounded(x, cls, scales[s], cap);
    }
    if (ok) return true;
    std::size_t i = 0;
    while (i < n && ++label[i] == k) label[i++] = 0;
    if (i == n) return false;
  }
}

}  // namespace

// Exact searches equal brute force; forced heuristic paths say so.
SuiteReport oracle_equivalence(const SuiteOptions& o) {
  Recorder rec("oracle-equivalence", o, 60, 12);
  for (std::size_t i = 0; i < rec.count(); ++i) {
    auto rng = rec.next_rng();
    rec.run([&](Instance& inst, json& dump) {
      const auto& lim = rec.options().limits;
      SearchLimits forced = lim;
      forced.exact_cap = 0;
      const auto x = gen::random_space(rng, std::min<std::size_t>(rec.max_points(), 12));
      dump["space"] = io::space_to_json(*x);
      inst["points"] = x->size();
      const auto ds = x->distinct_distances();

      // Mass.
      const auto kind = static_cast<gen::MeasureKind>(gen::below(rng, 4));
      const auto mu = gen::random_measure(rng, *x, kind);
      const double r = gen::random_distance(rng, *x);
      const double s = pick(rng, ds);
      const auto exact = best_mass_family(*x, mu, r, s, lim);
      const double brute = brute_mass(*x, mu.weights, r, s);
      const auto heur = best_mass_family(*x, mu, r, s, forced);
      dump["measure"] = io::measure_to_json(*x, mu);
      dump["mass_R"] = io::number(r);
      dump["mass_S"] = io::number(s);
      inst["mass_exact"] = io::number(exact.mass);
      inst["mass_brute"] = io::number(brute);
      inst["mass_heuristic"] = io::number(heur.mass);
      inst.check("mass exact", exact.exact && std::abs(exact.mass - brute) <= kMassSlack);
      inst.check("mass family valid", is_r_disjoint(*x, exact.family, r).disjoint && mesh(*x, exact.family) <= s);
      inst["mass_heuristic_exact"] = heur.exact;
      inst.check("mass heuristic flagged", heur.exact ? std::abs(heur.mass - brute) <= kMassSlack
                                                      : heur.mass <= brute + kMassSlack);

      // asdim at a scale.
      const double ar = gen::random_distance(rng, *x);
      const double cap = pick(rng, ds);
      const auto ad = asdim_at_scale(*x, ar, cap, lim);
      const int ab = brute_asdim(*x, ar, cap);
      const auto ah = asdim_at_scale(*x, ar, cap, forced);
      dump["asdim_R"] = io::number(ar);
      dump["asdim_cap"] = io::number(cap);
      inst["asdim_exact"] = ad.dim;
      inst["asdim_brute"] = ab;
      inst["asdim_heuristic"] = ah.dim;
      inst.check("asdim exact", ad.exact && ad.dim == ab);
      inst.check("asdim cover valid", covers(ad.cover, x->all()) && mesh(*x, ad.cover) <= cap &&
                                          dim_at_scale(*x, ad.cover, ar) == ad.dim);
      inst["asdim_heuristic_exact"] = ah.exact;
      inst.check("asdim heuristic flagged", ah.exact ? ah.dim == ab : ah.dim >= ab);

      // APC feasibility.
      const auto pos = positive_distances(*x);
      std::vector<double> scales{pick(rng, pos)};
      if (pos.size() > 1) {
        double other = scales[0];
        while (other == scales[0]) other = pick(rng, pos);
        scales.push_back(other);
      }
      std::sort(scales.begin(), scales.end());
      const double pcap = pick(rng, ds);
      const auto ap = apc_witness(*x, scales, pcap, lim);
      const bool feasible = brute_apc(*x, scales, pcap);
      dump["apc_scales"] = json::array();
      for (double v : scales) dump["apc_scales"].push_back(io::number(v));
      dump["apc_cap"] = io::number(pcap);
      inst["apc_status"] = ap.status == SearchStatus::kFound        ? "found"
                           : ap.status == SearchStatus::kImpossible ? "impossible"
                                                                    : "budget exhausted";
      inst["apc_brute"] = feasible;
      inst["apc_greedy"] = ap.greedy;
      if (ap.status == SearchStatus::kFound) {
        inst.check("apc witness valid", ap.witness && ap.witness->valid(*x, pcap));
        inst.check("apc agrees", feasible);
      } else if (ap.status == SearchStatus::kImpossible) {
        inst.check("apc agrees", !feasible);
      }
    });
  }
  return rec.finish();
}

// Each suite twice with the same seed; the two reports must be byte-identical.
SuiteReport determinism(const SuiteOptions& o) {
  Recorder rec("determinism", o, 3, 0);
  for (const auto& info : catalog()) {
    if (info.name == "determinism") continue;
    rec.next_rng();
    rec.run([&](Instance& inst, json&) {
      SuiteOptions small = o;
      small.count = rec.count();
      small.max_points = info.name == "sandwich" ? 8 : std::min<std::size_t>(info.default_max_points, 12);
      const auto a = run_suite(info.name, small).body.dump();
      const auto b = run_suite(info.name, small).body.dump();
      inst["suite"] = info.name;
      inst["bytes"] = a.size();
      inst["digest"] = io::sha256_hex(a);
      inst.check("identical", a == b);
    });
  }
  return rec.finish();
}

}  // namespace coarse::suites::detail
