#include "coarse/suites.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "suite_support.hpp"

namespace coarse::suites {

namespace detail {

Recorder::Recorder(std::string name, const SuiteOptions& options, std::size_t count, std::size_t max_points)
    : name_(std::move(name)),
      options_(options),
      count_(options.count ? options.count : count),
      max_points_(options.max_points ? options.max_points : max_points),
      master_(options.seed) {}

void Recorder::run(const std::function<void(Instance&, json& dump)>& body) {
  Instance inst(results_.size());
  json dump = json::object();
  try {
    body(inst, dump);
  } catch (const std::exception& e) {
    inst.check("threw", false);
    inst["error"] = e.what();
  }
  const bool ok = inst.ok();
  json rec = inst.finish();
  if (ok) {
    ++passed_;
  } else if (counterexamples_.size() < 5) {
    json ce = json::object();
    ce["id"] = rec["id"];
    ce["failed_checks"] = rec["failed_checks"];
    if (rec.contains("error")) ce["error"] = rec["error"];
    ce["instance"] = std::move(dump);
    counterexamples_.push_back(std::move(ce));
  }
  results_.push_back(std::move(rec));
}

SuiteReport Recorder::finish() {
  SuiteReport r;
  r.name = name_;
  r.instances = results_.size();
  r.passed = passed_;
  json body = json::object();
  body["suite"] = name_;
  body["seed"] = options_.seed;
  json p = json::object();
  p["count"] = count_;
  p["max_points"] = max_points_;
  p["clique_cap"] = options_.limits.clique_cap;
  p["max_cliques"] = options_.limits.max_cliques;
  p["exact_cap"] = options_.limits.exact_cap;
  p["node_budget"] = options_.limits.node_budget;
  for (auto it = params_.begin(); it != params_.end(); ++it) p[it.key()] = it.value();
  body["parameters"] = std::move(p);
  body["instances"] = r.instances;
  body["passed"] = r.passed;
  body["failed"] = r.instances - r.passed;
  body["holds"] = r.ok();
  body["counterexamples"] = std::move(counterexamples_);
  body["results"] = std::move(results_);
  r.body = std::move(body);
  return r;
}

ControlValue control_at(const CoarseMap& f, int n, double r, const SearchLimits& limits) {
  ControlValue out;
  const auto blocks = bounded_subsets(*f.codomain, f.image(), r, limits);
  out.exact = blocks.exact;
  for (const auto& b : blocks.sets) {
    const auto part = min_max_partition(*f.domain, f.preimage(b), static_cast<std::size_t>(n), limits);
    out.exact = out.exact && part.exact;
    out.value = std::max(out.value, part.max_diameter);
  }
  return out;
}

ControlFunction attained(double r, double value) {
  auto c = ControlFunction::step({{r, value}});
  c.strict = true;
  return c;
}

namespace {

json set_list(const FiniteMetricSpace& space, const Family& f) { return io::family_to_json(space, f)["sets"]; }

}  // namespace

// Disjointification: cover, color count, per-color disjointness, mesh bound
// and containment in the intersection of the indexed expansions.
SuiteReport lemma_disjointify(const SuiteOptions& o) {
  Recorder rec("lemma-disjointify", o, 200, 128);
  for (std::size_t i = 0; i < rec.count(); ++i) {
    auto rng = rec.next_rng();
    rec.run([&](Instance& inst, json& dump) {
      const auto x = gen::random_space(rng, rec.max_points());
      Family u;
      double r = 0.0;
      int dim = 0;
      for (int attempt = 0;; ++attempt) {
        const double ball = gen::random_distance(rng, *x) / static_cast<double>(1 + gen::below(rng, 3));
        u = gen::random_cover(rng, *x, 1 + gen::below(rng, x->size() / 2 + 1), ball);
        auto ds = x->distinct_distances();
        r = gen::random_distance(rng, *x);
        dim = dim_at_scale(*x, u, r);
        while (dim > 3) {
          auto it = std::lower_bound(ds.begin(), ds.end(), r);
          if (it == ds.begin() + 1 || it == ds.begin()) break;
          r = *(it - 1);
          dim = dim_at_scale(*x, u, r);
        }
        if (dim <= 3) break;
        if (attempt >= 20) {
          // Fall back to a partition at the smallest positive distance, where dim is 0.
          Family part;
          part.sets.resize(u.size());
          for (PointId p = 0; p < x->size(); ++p) {
            for (std::size_t k = 0; k < u.size(); ++k) {
              if (contains(u.sets[k], p)) {
                part.sets[k].push_back(p);
                break;
              }
            }
          }
          std::erase_if(part.sets, [](const PointSet& s) { return s.empty(); });
          u = std::move(part);
          r = ds.size() > 1 ? ds[1] : 1.0;
          dim = dim_at_scale(*x, u, r);
          break;
        }
      }
      const int n = dim > 3 ? dim : dim + static_cast<int>(gen::below(rng, static_cast<std::size_t>(4 - dim)));
      dump["space"] = io::space_to_json(*x);
      dump["cover"] = set_list(*x, u);
      dump["radius"] = io::number(r);
      dump["n"] = n;
      inst["points"] = x->size();
      inst["members"] = u.size();
      inst["radius"] = io::number(r);
      inst["dim"] = dim;
      inst["n"] = n;
      inst.check("dim at most 3", dim <= 3);
      if (dim > 3) return;

      const auto out = make_disjoint(*x, u, r, n);
      const double gap = r / (n + 1);
      const double bound = mesh(*x, u) + 2 * r;
      const double m = mesh(*x, out.family);
      inst["colors"] = out.family.color_count();
      inst["sets"] = out.family.size();
      inst["mesh"] = io::number(m);
      inst["mesh_bound"] = io::number(bound);
      inst.check("covers", covers(out.family, x->all()));
      inst.check("colors", out.family.color_count() <= n + 1);
      const auto dj = colors_r_disjoint(*x, out.family, gap);
      inst["min_gap"] = io::number(dj.min_gap);
      inst.check("disjoint", dj.disjoint);
      inst.check("mesh", m <= bound);
      bool inside = out.trace.output_index_sets.size() == out.family.size();
      for (std::size_t k = 0; inside && k < out.family.size(); ++k) {
        for (std::size_t t : out.trace.output_index_sets[k]) {
          inside = inside && is_subset(out.family.sets[k], neighborhood(*x, u.sets[t], r));
        }
      }
      inst.check("containment", inside);
      if (!inst.ok()) dump["output"] = io::family_to_json(*x, out.family);
    });
  }
  return rec.finish();
}

// Fibers: over every maximal r-bounded B and R >= C(r), the R-components of
// f^{-1}(B) number at most n and have diameter at most 2nR.
SuiteReport fibers(const SuiteOptions& o) {
  Recorder rec("fibers", o, 100, 48);
  for (std::size_t i = 0; i < rec.count(); ++i) {
    auto rng = rec.next_rng();
    rec.run([&](Instance& inst, json& dump) {
      const auto mi = gen::random_map(rng, rec.max_points());
      const auto& f = mi.map;
      const int n = mi.n;
      dump["map"] = io::map_to_json(f);
      dump["n"] = n;
      inst["kind"] = mi.kind;
      inst["points"] = f.domain->size();
      inst["n"] = n;
      std::vector<double> scales{0.0};
      for (int k = 0; k < 3; ++k) scales.push_back(gen::random_distance(rng, *f.codomain));
      std::sort(scales.begin(), scales.end());
      scales.erase(std::unique(scales.begin(), scales.end()), scales.end());
      json rows = json::array();
      bool exact = true;
      for (double r : scales) {
        const auto c = control_at(f, n, r, rec.options().limits);
        exact = exact && c.exact;
        for (double big : {c.value, c.value + gen::random_distance(rng, *f.domain)}) {
          std::size_t worst_count = 0;
          double worst_diam = 0.0;
          for (const auto& b : bounded_subsets(*f.codomain, f.image(), r, rec.options().limits).sets) {
            const auto comps = r_components(*f.domain, f.preimage(b), big);
            worst_count = std::max(worst_count, comps.size());
            for (const auto& comp : comps) worst_diam = std::max(worst_diam, diameter(*f.domain, comp));
          }
          const double bound = 2.0 * n * big;
          inst.check("component count", worst_count <= static_cast<std::size_t>(n));
          inst.check("component diameter", worst_diam <= bound);
          const auto lib = asdim_zero_witness(f, n, attained(r, c.value), r, big, rec.options().limits);
          inst.check("library agrees", lib.holds == (worst_count <= static_cast<std::size_t>(n) && worst_diam <= bound));
          rows.push_back(json{{"r", io::number(r)},
                              {"C", io::number(c.value)},
                              {"R", io::number(big)},
                              {"components", worst_count},
                              {"diameter", io::number(worst_diam)},
                              {"bound", io::number(bound)}});
        }
      }
      inst["exact_control"] = exact;
      inst["scales"] = std::move(rows);
    });
  }
  return rec.finish();
}

// Pushforward dimension bound dim_r f(U) <= (dim_{C(r)} U + 1) n - 1.
SuiteReport pushforward_bound(const SuiteOptions& o) {
  Recorder rec("pushforward-bound", o, 500, 128);
  for (std::size_t i = 0; i < rec.count(); ++i) {
    auto rng = rec.next_rng();
    rec.run([&](Instance& inst, json& dump) {
      const auto mi = gen::random_map(rng, rec.max_points());
      const auto& f = mi.map;
      const int n = mi.n;
      const double ball = gen::random_distance(rng, *f.domain) / static_cast<double>(1 + gen::below(rng, 3));
      const Family u = gen::random_cover(rng, *f.domain, 1 + gen::below(rng, f.domain->size() / 2 + 1), ball);
      const double r = gen::random_distance(rng, *f.codomain);
      const auto c = control_at(f, n, r, rec.options().limits);
      dump["map"] = io::map_to_json(f);
      dump["cover"] = set_list(*f.domain, u);
      dump["r"] = io::number(r);
      dump["n"] = n;
      dump["C(r)"] = io::number(c.value);
      const auto push = pushforward_cover(f, u, r, n, attained(r, c.value), rec.options().limits);
      // Recompute both sides directly.
      const double scale = strict_scale_above(*f.domain, c.value);
      const int source = dim_at_scale(*f.domain, u, scale);
      const int image = dim_at_scale(*f.codomain, f.image(), push.image, r);
      const int bound = (source + 1) * n - 1;
      inst["kind"] = mi.kind;
      inst["points"] = f.domain->size();
      inst["n"] = n;
      inst["r"] = io::number(r);
      inst["C"] = io::number(c.value);
      inst["exact_control"] = c.exact;
      inst["source_scale"] = io::number(scale);
      inst["source_dim"] = source;
      inst["image_dim"] = image;
      inst["bound"] = bound;
      inst.check("bound", image <= bound);
      inst.check("library agrees", push.holds == (image <= bound) && push.image_dim == image &&
                                       push.source_dim == source);
    });
  }
  return rec.finish();
}

namespace {

// d - 2D <= d_H(p x, p y) <= d + 2D over all pairs.
bool sandwich_all_pairs(const FiniteMetricSpace& x, const FiniteMetricSpace& z, const CoarseMap& p, double d,
                        double* worst_low, double* worst_high) {
  bool ok = true;
  for (PointId a = 0; a < x.size(); ++a) {
    for (PointId b = a + 1; b < x.size(); ++b) {
      const double dx = x.dist(a, b);
      const double dh = z.dist(p(a), p(b));
      *worst_low = std::min(*worst_low, dh - (dx - 2 * d));
      *worst_high = std::min(*worst_high, (dx + 2 * d) - dh);
      ok = ok && dx - 2 * d <= dh && dh <= dx + 2 * d;
    }
  }
  return ok;
}

void check_group(Instance& inst, json& dump, const std::string& name, const GroupAction& action,
                 const SearchLimits& limits) {
  dump["fixture"] = name;
  const auto q = group_quotient(action, limits);
  const auto& x = *q.source;
  double orbit_diam = 0.0;
  for (const auto& o : q.orbits) orbit_diam = std::max(orbit_diam, diameter(x, o));
  double low = kInfinity, high = kInfinity;
  const bool sandwich = sandwich_all_pairs(x, *q.quotient, q.projection, orbit_diam, &low, &high);
  bool lipschitz = true;
  for (PointId a = 0; a < x.size(); ++a)
    for (PointId b = 0; b < x.size(); ++b)
      lipschitz = lipschitz && q.quotient->dist(q.projection(a), q.projection(b)) <= x.dist(a, b);
  const std::size_t g = action.order();
  bool n_to_1 = true;
  for (double r : q.quotient->distinct_distances()) {
    n_to_1 = n_to_1 && verify_n_to_1(q.projection, static_cast<int>(g), r, 2 * r, limits).holds;
  }
  inst["fixture"] = name;
  inst["points"] = x.size();
  inst["orbits"] = q.orbits.size();
  inst["group_order"] = g;
  inst["symmetrized"] = q.symmetrized;
  inst["orbit_diameter"] = io::number(orbit_diam);
  inst["slack_low"] = io::number(low);
  inst["slack_high"] = io::number(high);
  inst.check("sandwich", sandwich);
  inst.check("lipschitz", lipschitz && q.lipschitz);
  inst.check("n-to-1 with C(r)=2r", n_to_1 && q.n_to_1_verified);
  if (!inst.ok()) dump["space"] = io::space_to_json(x);
}

}  // namespace

// Hausdorff quotient sandwich on every group fixture, random group actions
// and random factorizations.
SuiteReport quotient_sandwich(const SuiteOptions& o) {
  Recorder rec("quotient-sandwich", o, 40, 16);
  const auto fixtures = gen::group_fixtures();
  for (const auto& fx : fixtures) {
    rec.next_rng();
    rec.run([&](Instance& inst, json& dump) { check_group(inst, dump, fx.name, fx.action, rec.options().limits); });
  }
  for (std::size_t i = 0; i < rec.count(); ++i) {
    auto rng = rec.next_rng();
    if (i % 2 == 0) {
      rec.run([&](Instance& inst, json& dump) {
        // A random involution or rotation of a random space.
        const auto x = gen::random_space(rng, rec.max_points());
        std::vector<PointId> g(x->size());
        for (PointId p = 0; p < g.size(); ++p) g[p] = p;
        std::string name;
        if (gen::coin(rng, 1, 2)) {
          for (std::size_t k = 0; k + 1 < g.size(); k += 2) {
            if (gen::coin(rng, 1, 2)) std::swap(g[k], g[k + 1]);
          }
          name = "random involution";
          check_group(inst, dump, name, GroupAction::cyclic(x, g, 2), rec.options().limits);
        } else {
          const std::size_t shift = 1 + gen::below(rng, g.size() - 1);
          for (PointId p = 0; p < g.size(); ++p) g[p] = (p + shift) % g.size();
          std::size_t k = 1;
          for (std::vector<PointId> cur = g; !std::is_sorted(cur.begin(), cur.end()); ++k) {
            for (auto& v : cur) v = g[v];
          }
          name = "random rotation";
          check_group(inst, dump, name, GroupAction::cyclic(x, g, k), rec.options().limits);
        }
        dump["space"] = io::space_to_json(*x);
        dump["generator"] = g;
      });
    } else {
      rec.run([&](Instance& inst, json& dump) {
        const auto mi = gen::random_map(rng, rec.max_points());
        const auto& f = mi.map;
        const double big = gen::random_distance(rng, *f.domain);
        // Smallest n the fibers allow at this R.
        int n = 1;
        std::optional<Factorization> found;
        for (; !found && n <= static_cast<int>(f.domain->size()); ++n) {
          try {
            found = factorize(f, big, n);
          } catch (const PreconditionError&) {
          }
        }
        --n;
        dump["map"] = io::map_to_json(f);
        dump["R"] = io::number(big);
        dump["n"] = n;
        inst.check("factorizes", found.has_value());
        if (!found) return;
        const auto& z = *found;
        double low = kInfinity, high = kInfinity;
        const bool sandwich = sandwich_all_pairs(*z.adjusted, *z.quotient, z.p, z.class_diameter, &low, &high);
        bool composes = true;
        for (PointId x = 0; x < f.domain->size(); ++x) composes = composes && z.q(z.p(x)) == f(x);
        bool section = true;
        double closeness = 0.0;
        for (PointId c = 0; c < z.classes.size(); ++c) section = section && z.p(z.selection[c]) == c;
        for (PointId x = 0; x < f.domain->size(); ++x)
          closeness = std::max(closeness, z.adjusted->dist(x, z.selection[z.p(x)]));
        inst["kind"] = mi.kind;
        inst["points"] = f.domain->size();
        inst["classes"] = z.classes.size();
        inst["R"] = io::number(big);
        inst["class_diameter"] = io::number(z.class_diameter);
        inst["slack_low"] = io::number(low);
        inst["slack_high"] = io::number(high);
        inst.check("sandwich", sandwich && z.sandwich_holds);
        inst.check("q after p is f", composes);
        inst.check("selection is a section", section);
        inst.check("selection closeness", closeness <= z.class_diameter);
        inst.check("q fibers", z.max_q_fiber <= static_cast<std::size_t>(n));
      });
    }
  }
  return rec.finish();
}

}  // namespace detail

const std::vector<SuiteInfo>& catalog() {
  static const std::vector<SuiteInfo> list{
      {"lemma-disjointify", "multiplicity-to-disjointness lemma on random covers", 200, 128},
      {"fibers", "component count and diameter of preimages of bounded sets", 100, 48},
      {"pushforward-bound", "dimension bound for images of covers", 500, 128},
      {"quotient-sandwich", "Hausdorff quotient metric sandwich, Lipschitz and n-to-1 checks", 40, 16},
      {"sandwich", "finite asdim sandwich for group quotients", 0, 16},
      {"sfdc-equivalence", "countable asdim trees converted to sFDC trees and partitions", 200, 128},
      {"tree-transfer", "tree pullback and pushforward on map fixtures", 20, 24},
      {"msp-pipelines", "mass bounds of the three sparsification pipelines", 50, 16},
      {"oracle-equivalence", "searches against brute force on small spaces", 60, 12},
      {"determinism", "every suite rerun with the same seed", 3, 0},
  };
  return list;
}

SuiteReport run_suite(const std::string& name, const SuiteOptions& options) {
  using namespace detail;
  if (name == "lemma-disjointify") return lemma_disjointify(options);
  if (name == "fibers") return fibers(options);
  if (name == "pushforward-bound") return pushforward_bound(options);
  if (name == "quotient-sandwich") return quotient_sandwich(options);
  if (name == "sandwich") return asdim_sandwich(options);
  if (name == "sfdc-equivalence") return sfdc_equivalence(options);
  if (name == "tree-transfer") return tree_transfer(options);
  if (name == "msp-pipelines") return msp_pipelines(options);
  if (name == "oracle-equivalence") return oracle_equivalence(options);
  if (name == "determinism") return determinism(options);
  throw PreconditionError("unknown suite \"" + name + "\"");
}

}  // namespace coarse::suites
