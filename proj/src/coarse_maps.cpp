#include "coarse/coarse_maps.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace coarse {

// ---------------------------------------------------------------- controls

ControlFunction ControlFunction::step(std::vector<Breakpoint> breakpoints) {
  std::sort(breakpoints.begin(), breakpoints.end(),
            [](const Breakpoint& a, const Breakpoint& b) { return a.r < b.r; });
  ControlFunction f;
  f.affine_ = false;
  double running = 0.0;
  for (const auto& bp : breakpoints) {
    if (bp.r < 0.0) throw PreconditionError("control breakpoint at negative r");
    running = std::max(running, bp.value);
    if (!f.points_.empty() && f.points_.back().r == bp.r) {
      f.points_.back().value = running;
    } else {
      f.points_.push_back({bp.r, running});
    }
  }
  return f;
}

ControlFunction ControlFunction::affine(double slope, double offset) {
  if (slope < 0.0 || offset < 0.0) throw PreconditionError("affine control needs nonnegative coefficients");
  ControlFunction f;
  f.affine_ = true;
  f.slope_ = slope;
  f.offset_ = offset;
  return f;
}

double ControlFunction::operator()(double r) const {
  if (affine_) return slope_ * r + offset_;
  double v = 0.0;
  for (const auto& bp : points_) {
    if (bp.r > r) break;
    v = bp.value;
  }
  return v;
}

// ---------------------------------------------------------------- maps

CoarseMap CoarseMap::make(SpacePtr domain, SpacePtr codomain, std::vector<PointId> assign) {
  if (!domain || !codomain) throw PreconditionError("map needs a domain and a codomain");
  if (assign.size() != domain->size()) throw PreconditionError("map assignment is not total on the domain");
  for (PointId y : assign) {
    if (y >= codomain->size()) throw PreconditionError("map assigns a point outside the codomain");
  }
  return CoarseMap{std::move(domain), std::move(codomain), std::move(assign)};
}

CoarseMap CoarseMap::identity(SpacePtr space) {
  std::vector<PointId> assign(space->size());
  std::iota(assign.begin(), assign.end(), PointId{0});
  return make(space, space, std::move(assign));
}

PointSet CoarseMap::image(const PointSet& a) const {
  std::vector<PointId> out;
  for (PointId x : a) out.push_back(assign[x]);
  return make_set(std::move(out));
}

PointSet CoarseMap::preimage(const PointSet& b) const {
  PointSet out;
  for (PointId x = 0; x < assign.size(); ++x) {
    if (contains(b, assign[x])) out.push_back(x);
  }
  return out;
}

bool CoarseMap::surjective() const { return image().size() == codomain->size(); }

ControlFunction control_upper(const CoarseMap& f) {
  const auto& x = *f.domain;
  const auto& y = *f.codomain;
  std::vector<ControlFunction::Breakpoint> bps{{0.0, 0.0}};
  for (PointId a = 0; a < x.size(); ++a) {
    for (PointId b = a + 1; b < x.size(); ++b) bps.push_back({x.dist(a, b), y.dist(f(a), f(b))});
  }
  return ControlFunction::step(std::move(bps));
}

double control_upper_open(const CoarseMap& f, double r) {
  double v = 0.0;
  for (PointId a = 0; a < f.domain->size(); ++a) {
    for (PointId b = a + 1; b < f.domain->size(); ++b) {
      if (f.domain->dist(a, b) < r) v = std::max(v, f.codomain->dist(f(a), f(b)));
    }
  }
  return v;
}

Family pullback_family(const CoarseMap& f, const Family& family, double d) {
  validate_family(*f.codomain, family);
  const double e = control_upper(f)(d);
  const auto pre = is_r_disjoint(*f.codomain, family, e);
  if (!pre.disjoint) {
    throw PreconditionError("family is not E(d)-disjoint (E(d)=" + std::to_string(e) + "): points " +
                            f.codomain->label(pre.witness->first) + " and " +
                            f.codomain->label(pre.witness->second));
  }
  Family out;
  for (std::size_t i = 0; i < family.size(); ++i) {
    PointSet p = f.preimage(family.sets[i]);
    if (p.empty()) continue;
    out.sets.push_back(std::move(p));
    if (family.colored()) out.colors.push_back(family.colors[i]);
  }
  const auto post = is_r_disjoint(*f.domain, out, d);
  if (!post.disjoint) {
    throw PreconditionError("preimages are not d-disjoint at the boundary E(d) = gap: points " +
                            f.domain->label(post.witness->first) + " and " +
                            f.domain->label(post.witness->second));
  }
  if (out.colored()) {
    // Renumber so colors stay contiguous after dropping empty preimages.
    std::vector<int> seen;
    for (int c : out.colors) {
      if (std::find(seen.begin(), seen.end(), c) == seen.end()) seen.push_back(c);
    }
    std::sort(seen.begin(), seen.end());
    for (int& c : out.colors) c = static_cast<int>(std::find(seen.begin(), seen.end(), c) - seen.begin());
  }
  return out;
}

// ---------------------------------------------------------------- n-to-1

NToOneProfile n_to_1_profile(const CoarseMap& f, double r, double big_r, const SearchLimits& limits) {
  NToOneProfile out;
  const auto subsets = bounded_subsets(*f.codomain, f.image(), r, limits);
  out.exact = subsets.exact;
  for (const auto& b : subsets.sets) {
    const PointSet pre = f.preimage(b);
    const auto comps = r_components(*f.domain, pre, big_r);
    if (out.worst_subset.empty() || comps.size() > out.max_components) {
      out.worst_subset = b;
      out.max_components = comps.size();
    }
    for (const auto& c : comps) out.max_component_diameter = std::max(out.max_component_diameter, diameter(*f.domain, c));
  }
  return out;
}

NToOneControl n_to_1_control(const CoarseMap& f, int n, double cap, const SearchLimits& limits) {
  if (n < 1) throw PreconditionError("n_to_1_control needs n >= 1");
  NToOneControl out;
  const PointSet img = f.image();
  std::vector<double> scales{0.0};
  for (std::size_t i = 0; i < img.size(); ++i) {
    for (std::size_t j = i + 1; j < img.size(); ++j) scales.push_back(f.codomain->dist(img[i], img[j]));
  }
  std::sort(scales.begin(), scales.end());
  scales.erase(std::unique(scales.begin(), scales.end()), scales.end());

  std::vector<ControlFunction::Breakpoint> bps;
  bool relaxed = false;
  for (double r : scales) {
    const auto subsets = bounded_subsets(*f.codomain, img, r, limits);
    relaxed = relaxed || !subsets.exact;
    double value = 0.0;
    for (const auto& b : subsets.sets) {
      const auto part = min_max_partition(*f.domain, f.preimage(b), static_cast<std::size_t>(n), limits);
      relaxed = relaxed || !part.exact;
      if (part.max_diameter > cap && !out.refused) {
        out.refused = true;
        out.refusal_witness = b;
        out.refusal_scale = r;
      }
      value = std::max(value, part.max_diameter);
    }
    bps.push_back({r, value});
  }
  out.control = ControlFunction::step(std::move(bps));
  out.control.strict = true;
  out.control.relaxed = relaxed;
  return out;
}

NToOneVerification verify_n_to_1(const CoarseMap& f, int n, double r, double bound, const SearchLimits& limits) {
  NToOneVerification out;
  out.scale = r;
  const auto subsets = bounded_subsets(*f.codomain, f.image(), r, limits);
  out.exact = subsets.exact;
  for (const auto& b : subsets.sets) {
    const PointSet pre = f.preimage(b);
    bool exhausted = false;
    if (partition_bounded(*f.domain, pre, static_cast<std::size_t>(n), bound, limits.node_budget, &exhausted)) {
      continue;
    }
    if (exhausted) {
      out.exact = false;
      const auto comps = r_components(*f.domain, pre, bound);
      bool ok = comps.size() <= static_cast<std::size_t>(n);
      for (const auto& c : comps) ok = ok && diameter(*f.domain, c) <= bound;
      if (ok) continue;
    }
    out.holds = false;
    out.witness = b;
    return out;
  }
  return out;
}

double strict_scale_above(const FiniteMetricSpace& space, double c) {
  for (double d : space.distinct_distances()) {
    if (d > c) return d;
  }
  return c + 1.0;
}

namespace {

double strict_scale_below(const FiniteMetricSpace& space, double c) {
  double best = 0.0;
  for (double d : space.distinct_distances()) {
    if (d < c) best = d;
  }
  return best;
}

}  // namespace

double part_cap(const FiniteMetricSpace& space, const ControlFunction& control, double c) {
  return control.strict ? c : strict_scale_below(space, c);
}

double source_scale(const FiniteMetricSpace& space, const ControlFunction& control, double c) {
  return control.strict ? strict_scale_above(space, c) : c;
}

PushforwardCover pushforward_cover(const CoarseMap& f, const Family& cover, double r, int n,
                                   const ControlFunction& control, const SearchLimits& limits) {
  validate_family(*f.domain, cover);
  if (n < 1) throw PreconditionError("pushforward_cover needs n >= 1");
  if (const auto x = uncovered_point(cover, f.domain->all())) {
    throw PreconditionError("family does not cover point " + f.domain->label(*x));
  }
  const double c = control(r);
  const auto check = verify_n_to_1(f, n, r, part_cap(*f.domain, control, c), limits);
  if (!check.holds) {
    throw PreconditionError("map is not " + std::to_string(n) + "-to-1 with the supplied control at r=" +
                            std::to_string(r));
  }
  PushforwardCover out;
  for (const auto& s : cover.sets) out.image.sets.push_back(f.image(s));
  out.source_scale = source_scale(*f.domain, control, c);
  out.source_dim = dim_at_scale(*f.domain, cover, out.source_scale);
  out.image_dim = dim_at_scale(*f.codomain, f.image(), out.image, r);
  out.bound = (out.source_dim + 1) * n - 1;
  out.holds = out.image_dim <= out.bound;
  return out;
}

PushforwardDisjoint pushforward_disjointify(const CoarseMap& f, const Family& cover, double r, int n,
                                            const ControlFunction& control, const SearchLimits& limits) {
  validate_family(*f.domain, cover);
  if (n < 1) throw PreconditionError("pushforward_disjointify needs n >= 1");
  if (!(r > 0.0)) throw PreconditionError("pushforward_disjointify needs r > 0");
  const double c = control(r);
  const auto check = verify_n_to_1(f, n, r, part_cap(*f.domain, control, c), limits);
  if (!check.holds) {
    throw PreconditionError("map is not " + std::to_string(n) + "-to-1 with the supplied control at r=" +
                            std::to_string(r));
  }
  const PointSet support = cover.support();
  PushforwardDisjoint out;
  out.source_dim = std::max(0, dim_at_scale(*f.domain, support, cover, source_scale(*f.domain, control, c)));
  out.colors_allowed = n * (out.source_dim + 1);
  out.disjointness = r / out.colors_allowed;
  Family image;
  for (const auto& s : cover.sets) image.sets.push_back(f.image(s));
  out.image_mesh = cover.sets.empty() ? 0.0 : control_upper(f)(mesh(*f.domain, cover));
  out.mesh_bound = out.image_mesh + 2.0 * r;
  out.family = make_disjoint(*f.codomain, f.image(support), image, r, out.colors_allowed - 1).family;
  return out;
}

// ---------------------------------------------------------------- factorization

Factorization factorize(const CoarseMap& f, double big_r, int n) {
  if (n < 1) throw PreconditionError("factorize needs n >= 1");
  const auto& rho = *f.domain;
  std::vector<std::vector<double>> adj(rho.size(), std::vector<double>(rho.size(), 0.0));
  for (PointId a = 0; a < rho.size(); ++a) {
    for (PointId b = 0; b < rho.size(); ++b) adj[a][b] = (a == b) ? 0.0 : std::max(1.0, rho.dist(a, b));
  }
  Factorization out;
  out.adjusted = std::make_shared<const FiniteMetricSpace>(FiniteMetricSpace::from_matrix(rho.labels(), adj));
  const auto& d = *out.adjusted;

  for (PointId y : f.image()) {
    const auto comps = r_components(d, f.preimage({y}), big_r);
    if (comps.size() > static_cast<std::size_t>(n)) {
      throw PreconditionError("fiber over " + f.codomain->label(y) + " has " + std::to_string(comps.size()) +
                              " R-components, more than n=" + std::to_string(n) + "; R is too small");
    }
    for (const auto& c : comps) {
      if (diameter(d, c) > 2.0 * n * big_r) {
        throw PreconditionError("fiber component over " + f.codomain->label(y) + " is wider than 2nR");
      }
      out.classes.push_back(c);
    }
  }
  std::sort(out.classes.begin(), out.classes.end());
  const std::size_t k = out.classes.size();
  std::vector<std::string> labels;
  std::vector<PointId> p_assign(rho.size());
  std::vector<PointId> q_assign(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::string lbl = "[";
    for (std::size_t j = 0; j < out.classes[i].size(); ++j) {
      lbl += (j ? "|" : "") + rho.label(out.classes[i][j]);
      p_assign[out.classes[i][j]] = i;
    }
    labels.push_back(lbl + "]");
    out.selection.push_back(out.classes[i].front());
    q_assign[i] = f(out.classes[i].front());
    out.class_diameter = std::max(out.class_diameter, diameter(d, out.classes[i]));
  }
  std::vector<std::vector<double>> zm(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) zm[i][j] = zm[j][i] = hausdorff_distance(d, out.classes[i], out.classes[j]);
  }
  out.quotient = std::make_shared<const FiniteMetricSpace>(FiniteMetricSpace::from_matrix(labels, zm));
  out.p = CoarseMap::make(out.adjusted, out.quotient, p_assign);
  out.q = CoarseMap::make(out.quotient, f.codomain, q_assign);

  std::vector<std::size_t> fiber_size(f.codomain->size(), 0);
  for (PointId z : q_assign) out.max_q_fiber = std::max(out.max_q_fiber, ++fiber_size[z]);
  const double slack = 2.0 * out.class_diameter;
  for (PointId a = 0; a < d.size(); ++a) {
    out.selection_closeness = std::max(out.selection_closeness, d.dist(a, out.selection[p_assign[a]]));
    for (PointId b = 0; b < d.size(); ++b) {
      const double dh = out.quotient->dist(p_assign[a], p_assign[b]);
      if (d.dist(a, b) - slack > dh || dh > d.dist(a, b) + slack) out.sandwich_holds = false;
    }
  }
  return out;
}

// ---------------------------------------------------------------- group actions

void GroupAction::validate() const {
  if (!space) throw PreconditionError("group action needs a space");
  const std::size_t k = table.size();
  if (k == 0) throw PreconditionError("group must be nonempty");
  if (perms.size() != k) throw PreconditionError("one permutation per group element is required");
  for (const auto& row : table) {
    if (row.size() != k) throw PreconditionError("composition table is not square");
    for (std::size_t v : row) {
      if (v >= k) throw PreconditionError("composition table entry out of range");
    }
  }
  const std::size_t e = identity_element();
  for (std::size_t g = 0; g < k; ++g) {
    bool has_inverse = false;
    for (std::size_t h = 0; h < k; ++h) has_inverse = has_inverse || (table[g][h] == e && table[h][g] == e);
    if (!has_inverse) throw PreconditionError("element " + std::to_string(g) + " has no inverse");
    for (std::size_t h = 0; h < k; ++h) {
      for (std::size_t l = 0; l < k; ++l) {
        if (table[table[g][h]][l] != table[g][table[h][l]]) throw PreconditionError("composition is not associative");
      }
    }
  }
  for (const auto& p : perms) {
    if (p.size() != space->size()) throw PreconditionError("permutation length differs from space size");
    std::vector<char> hit(p.size(), 0);
    for (PointId x : p) {
      if (x >= p.size() || hit[x]) throw PreconditionError("action element is not a permutation");
      hit[x] = 1;
    }
  }
  for (PointId x = 0; x < space->size(); ++x) {
    if (perms[e][x] != x) throw PreconditionError("identity does not act as the identity");
    for (std::size_t g = 0; g < k; ++g) {
      for (std::size_t h = 0; h < k; ++h) {
        if (perms[table[g][h]][x] != perms[g][perms[h][x]]) throw PreconditionError("action is not a homomorphism");
      }
    }
  }
}

std::size_t GroupAction::identity_element() const {
  for (std::size_t e = 0; e < table.size(); ++e) {
    bool ok = true;
    for (std::size_t g = 0; g < table.size() && ok; ++g) ok = table[e][g] == g && table[g][e] == g;
    if (ok) return e;
  }
  throw PreconditionError("composition table has no identity");
}

bool GroupAction::isometric() const {
  for (const auto& p : perms) {
    for (PointId x = 0; x < space->size(); ++x) {
      for (PointId y = 0; y < space->size(); ++y) {
        if (space->dist(p[x], p[y]) != space->dist(x, y)) return false;
      }
    }
  }
  return true;
}

std::vector<PointSet> GroupAction::orbits() const {
  std::vector<PointSet> out;
  std::vector<char> seen(space->size(), 0);
  for (PointId x = 0; x < space->size(); ++x) {
    if (seen[x]) continue;
    std::vector<PointId> orbit;
    for (const auto& p : perms) orbit.push_back(p[x]);
    PointSet o = make_set(std::move(orbit));
    for (PointId y : o) seen[y] = 1;
    out.push_back(std::move(o));
  }
  return out;
}

GroupAction GroupAction::trivial(SpacePtr space) {
  std::vector<PointId> id(space->size());
  std::iota(id.begin(), id.end(), PointId{0});
  return GroupAction{std::move(space), {{0}}, {id}};
}

GroupAction GroupAction::cyclic(SpacePtr space, const std::vector<PointId>& generator, std::size_t k) {
  GroupAction a;
  a.space = std::move(space);
  std::vector<PointId> cur(a.space->size());
  std::iota(cur.begin(), cur.end(), PointId{0});
  for (std::size_t i = 0; i < k; ++i) {
    a.perms.push_back(cur);
    std::vector<PointId> next(cur.size());
    for (PointId x = 0; x < cur.size(); ++x) next[x] = generator[cur[x]];
    cur = std::move(next);
    std::vector<std::size_t> row(k);
    for (std::size_t j = 0; j < k; ++j) row[j] = (i + j) % k;
    a.table.push_back(row);
  }
  a.validate();
  return a;
}

FiniteMetricSpace symmetrize_metric(const GroupAction& action) {
  action.validate();
  const auto& rho = *action.space;
  std::vector<std::vector<double>> m(rho.size(), std::vector<double>(rho.size(), 0.0));
  for (PointId x = 0; x < rho.size(); ++x) {
    for (PointId y = 0; y < rho.size(); ++y) {
      for (const auto& p : action.perms) m[x][y] += rho.dist(p[x], p[y]);
    }
  }
  return FiniteMetricSpace::from_matrix(rho.labels(), m);
}

GroupQuotient group_quotient(const GroupAction& action, const SearchLimits& limits) {
  action.validate();
  GroupQuotient out;
  out.symmetrized = !action.isometric();
  out.source = out.symmetrized ? std::make_shared<const FiniteMetricSpace>(symmetrize_metric(action)) : action.space;
  out.orbits = action.orbits();
  const auto& x = *out.source;
  const std::size_t k = out.orbits.size();
  std::vector<std::string> labels;
  std::vector<PointId> assign(x.size());
  for (std::size_t i = 0; i < k; ++i) {
    std::string lbl = "{";
    for (std::size_t j = 0; j < out.orbits[i].size(); ++j) {
      lbl += (j ? "|" : "") + x.label(out.orbits[i][j]);
      assign[out.orbits[i][j]] = i;
    }
    labels.push_back(lbl + "}");
  }
  std::vector<std::vector<double>> m(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) m[i][j] = m[j][i] = hausdorff_distance(x, out.orbits[i], out.orbits[j]);
  }
  out.quotient = std::make_shared<const FiniteMetricSpace>(FiniteMetricSpace::from_matrix(labels, m));
  out.projection = CoarseMap::make(out.source, out.quotient, assign);

  for (PointId a = 0; a < x.size() && out.lipschitz; ++a) {
    for (PointId b = 0; b < x.size(); ++b) {
      if (out.quotient->dist(assign[a], assign[b]) > x.dist(a, b)) {
        out.lipschitz = false;
        break;
      }
    }
  }
  const std::size_t group_order = action.order();
  for (double r : out.quotient->distinct_distances()) {
    for (const auto& b : bounded_subsets(*out.quotient, out.quotient->all(), r, limits).sets) {
      const auto pieces = orbit_decomposition(out, b);
      bool ok = pieces.size() <= group_order;
      for (const auto& p : pieces) ok = ok && diameter(x, p) <= 2.0 * r;
      if (!ok && out.n_to_1_verified) {
        out.n_to_1_verified = false;
        out.n_to_1_witness = b;
        out.n_to_1_scale = r;
      }
    }
  }
  return out;
}

std::vector<PointSet> orbit_decomposition(const GroupQuotient& q, const PointSet& orbit_set) {
  const PointSet pre = q.projection.preimage(orbit_set);
  if (pre.empty()) return {};
  const auto& x = *q.source;
  const PointSet& centers = q.orbits[q.projection(pre.front())];
  std::vector<PointSet> pieces(centers.size());
  for (PointId z : pre) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < centers.size(); ++i) {
      if (x.dist(z, centers[i]) < x.dist(z, centers[best])) best = i;
    }
    pieces[best].push_back(z);
  }
  std::vector<PointSet> out;
  for (auto& p : pieces) {
    if (!p.empty()) out.push_back(std::move(p));
  }
  return out;
}

AsdimZeroReport asdim_zero_witness(const CoarseMap& f, int n, const ControlFunction& control, double r,
                                   double big_r, const SearchLimits& limits) {
  if (n < 1) throw PreconditionError("asdim_zero_witness needs n >= 1");
  if (big_r < control(r)) throw PreconditionError("asdim_zero_witness needs R >= C(r)");
  AsdimZeroReport out;
  out.diameter_bound = 2.0 * n * big_r;
  const auto subsets = bounded_subsets(*f.codomain, f.image(), r, limits);
  out.exact = subsets.exact;
  for (const auto& b : subsets.sets) {
    const auto comps = r_components(*f.domain, f.preimage(b), big_r);
    double widest = 0.0;
    for (const auto& c : comps) widest = std::max(widest, diameter(*f.domain, c));
    if (comps.size() > out.worst_components) out.worst_components = comps.size();
    out.worst_diameter = std::max(out.worst_diameter, widest);
    if ((comps.size() > static_cast<std::size_t>(n) || widest > out.diameter_bound) && out.holds) {
      out.holds = false;
      out.witness = b;
    }
  }
  return out;
}

}  // namespace coarse
