#include "coarse/generators.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <set>

namespace coarse::gen {

std::size_t below(Rng& rng, std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(rng() % n); }

long between(Rng& rng, long lo, long hi) {
  return lo + static_cast<long>(below(rng, static_cast<std::size_t>(hi - lo + 1)));
}

bool coin(Rng& rng, std::size_t num, std::size_t den) { return below(rng, den) < num; }

namespace {

std::vector<std::string> index_labels(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

SpacePtr share(FiniteMetricSpace s) { return std::make_shared<const FiniteMetricSpace>(std::move(s)); }

SpacePtr subspace(const FiniteMetricSpace& space, const PointSet& pts) {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> m(pts.size(), std::vector<double>(pts.size()));
  for (std::size_t a = 0; a < pts.size(); ++a) {
    labels.push_back(space.label(pts[a]));
    for (std::size_t b = 0; b < pts.size(); ++b) m[a][b] = space.dist(pts[a], pts[b]);
  }
  return share(FiniteMetricSpace::from_matrix(labels, m));
}

std::vector<double> distinct_coords(Rng& rng, std::size_t points, long spread) {
  spread = std::max<long>(spread, static_cast<long>(points) - 1);
  std::set<long> seen;
  while (seen.size() < points) seen.insert(between(rng, 0, spread));
  return {seen.begin(), seen.end()};
}

GroupAction rotation(SpacePtr space, std::size_t step, std::size_t k) {
  const std::size_t n = space->size();
  std::vector<PointId> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = (i + step) % n;
  return GroupAction::cyclic(std::move(space), g, k);
}

GroupAction reflection(long m) {
  auto space = share(FiniteMetricSpace::integer_interval(-m, m));
  std::vector<PointId> g(space->size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = g.size() - 1 - i;
  return GroupAction::cyclic(space, g, 2);
}

}  // namespace

SpacePtr random_line(Rng& rng, std::size_t points, long spread) {
  return share(FiniteMetricSpace::on_line(distinct_coords(rng, points, spread)));
}

SpacePtr random_cloud(Rng& rng, std::size_t points, long side, Norm norm) {
  side = std::max<long>(side, 1);
  while (static_cast<std::size_t>((side + 1) * (side + 1)) < points) ++side;
  std::set<std::pair<long, long>> seen;
  std::vector<std::vector<double>> coords;
  while (coords.size() < points) {
    std::pair<long, long> p{between(rng, 0, side), between(rng, 0, side)};
    if (seen.insert(p).second) coords.push_back({static_cast<double>(p.first), static_cast<double>(p.second)});
  }
  return share(FiniteMetricSpace::from_cloud(index_labels(points), coords, norm));
}

SpacePtr random_graph(Rng& rng, std::size_t points, std::size_t extra_edges, long max_weight) {
  std::vector<WeightedEdge> edges;
  std::set<std::pair<PointId, PointId>> seen;
  for (PointId i = 1; i < points; ++i) {
    const PointId j = below(rng, i);
    edges.push_back({j, i, static_cast<double>(between(rng, 1, max_weight))});
    seen.insert({j, i});
  }
  for (std::size_t e = 0; e < extra_edges && points > 2; ++e) {
    PointId a = below(rng, points);
    PointId b = below(rng, points);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (!seen.insert({a, b}).second) continue;
    edges.push_back({a, b, static_cast<double>(between(rng, 1, max_weight))});
  }
  return share(FiniteMetricSpace::from_graph(index_labels(points), edges));
}

SpacePtr random_space(Rng& rng, std::size_t max_points) {
  const std::size_t n = 2 + below(rng, std::max<std::size_t>(max_points, 2) - 1);
  switch (below(rng, 4)) {
    case 0:
      return random_line(rng, n, static_cast<long>(3 * n));
    case 1:
      return random_cloud(rng, n, static_cast<long>(n / 2 + 2), coin(rng, 1, 2) ? Norm::kL1 : Norm::kLinf);
    case 2:
      return random_graph(rng, n, below(rng, n), 3);
    default:
      return share(FiniteMetricSpace::cycle(std::max<std::size_t>(n, 3)));
  }
}

Family random_cover(Rng& rng, const FiniteMetricSpace& space, std::size_t centers, double radius) {
  Family f;
  PointSet covered;
  for (std::size_t c = 0; c < centers; ++c) {
    const PointId x = below(rng, space.size());
    PointSet ball;
    for (PointId y = 0; y < space.size(); ++y) {
      if (space.dist(x, y) <= radius) ball.push_back(y);
    }
    covered = set_union(covered, ball);
    f.sets.push_back(std::move(ball));
  }
  for (PointId x = 0; x < space.size(); ++x) {
    if (contains(covered, x)) continue;
    PointSet ball;
    for (PointId y = 0; y < space.size(); ++y) {
      if (space.dist(x, y) <= radius) ball.push_back(y);
    }
    covered = set_union(covered, ball);
    f.sets.push_back(std::move(ball));
  }
  std::sort(f.sets.begin(), f.sets.end());
  f.sets.erase(std::unique(f.sets.begin(), f.sets.end()), f.sets.end());
  return f;
}

double random_distance(Rng& rng, const FiniteMetricSpace& space) {
  auto d = space.distinct_distances();
  if (d.size() <= 1) return 1.0;
  return d[1 + below(rng, d.size() - 1)];
}

MapInstance random_map(Rng& rng, std::size_t max_points) {
  max_points = std::max<std::size_t>(max_points, 4);
  MapInstance out;
  switch (below(rng, 5)) {
    case 0: {
      out.kind = "stack";
      const std::size_t copies = 1 + below(rng, 3);
      const std::size_t m = 2 + below(rng, std::max<std::size_t>(max_points / copies, 3) - 1);
      const auto ys = distinct_coords(rng, m, static_cast<long>(3 * m));
      long shift = between(rng, 1, static_cast<long>(4 * m));
      for (;;) {
        std::set<double> seen;
        bool clash = false;
        for (std::size_t k = 0; k < copies && !clash; ++k) {
          for (double y : ys) clash = clash || !seen.insert(y + static_cast<double>(k * shift)).second;
        }
        if (!clash) break;
        ++shift;
      }
      std::vector<std::pair<double, PointId>> xs;
      for (std::size_t k = 0; k < copies; ++k) {
        for (PointId i = 0; i < m; ++i) xs.push_back({ys[i] + static_cast<double>(k * shift), i});
      }
      std::sort(xs.begin(), xs.end());
      std::vector<double> coords;
      std::vector<PointId> assign;
      for (auto& [c, i] : xs) {
        coords.push_back(c);
        assign.push_back(i);
      }
      out.map = CoarseMap::make(share(FiniteMetricSpace::on_line(coords)), share(FiniteMetricSpace::on_line(ys)), assign);
      out.n = static_cast<int>(copies);
      break;
    }
    case 1: {
      out.kind = "fold";
      const long m = 1 + static_cast<long>(below(rng, std::min<std::size_t>((max_points - 1) / 2, 30)));
      std::vector<PointId> assign;
      for (long v = -m; v <= m; ++v) assign.push_back(static_cast<PointId>(v < 0 ? -v : v));
      out.map = CoarseMap::make(share(FiniteMetricSpace::integer_interval(-m, m)),
                                share(FiniteMetricSpace::integer_interval(0, m)), assign);
      out.n = 2;
      break;
    }
    case 2: {
      std::vector<GroupFixture> fits;
      for (auto& g : group_fixtures()) {
        if (g.action.space->size() <= max_points) fits.push_back(std::move(g));
      }
      if (fits.empty()) return random_map(rng, max_points);
      auto& g = fits[below(rng, fits.size())];
      out.kind = "quotient " + g.name;
      out.map = group_quotient(g.action).projection;
      out.n = static_cast<int>(g.action.order());
      break;
    }
    case 3: {
      out.kind = "collapse";
      auto x = random_space(rng, max_points);
      const std::size_t k = 1 + below(rng, x->size());
      PointSet centers;
      while (centers.size() < k) centers = set_union(centers, {below(rng, x->size())});
      std::vector<PointId> assign(x->size());
      for (PointId p = 0; p < x->size(); ++p) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < centers.size(); ++c) {
          if (x->dist(p, centers[c]) < x->dist(p, centers[best])) best = c;
        }
        assign[p] = best;
      }
      out.map = CoarseMap::make(x, subspace(*x, centers), assign);
      out.n = 1 + static_cast<int>(below(rng, 3));
      break;
    }
    default: {
      out.kind = "arbitrary";
      auto x = random_space(rng, max_points);
      auto y = random_space(rng, x->size());
      std::vector<PointId> order(x->size());
      for (PointId i = 0; i < order.size(); ++i) order[i] = i;
      for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[below(rng, i)]);
      std::vector<PointId> assign(x->size());
      for (std::size_t i = 0; i < order.size(); ++i) assign[order[i]] = i < y->size() ? i : below(rng, y->size());
      // y may be larger than x; keep only the image.
      PointSet image(assign.begin(), assign.end());
      image = make_set(image);
      for (auto& a : assign) a = static_cast<PointId>(std::lower_bound(image.begin(), image.end(), a) - image.begin());
      out.map = CoarseMap::make(x, subspace(*y, image), assign);
      out.n = 1 + static_cast<int>(below(rng, 3));
      break;
    }
  }
  return out;
}

std::vector<GroupFixture> group_fixtures() {
  std::vector<GroupFixture> out;
  auto c6 = share(FiniteMetricSpace::cycle(6));
  out.push_back({"C6/Z2", GroupAction::cyclic(c6, {3, 4, 5, 0, 1, 2}, 2)});
  out.push_back({"{-3..3}/reflection", reflection(3)});
  out.push_back({"C8/Z4", rotation(share(FiniteMetricSpace::cycle(8)), 2, 4)});
  out.push_back({"C9/Z3", rotation(share(FiniteMetricSpace::cycle(9)), 3, 3)});
  out.push_back({"C10/Z5", rotation(share(FiniteMetricSpace::cycle(10)), 2, 5)});
  out.push_back({"C12/Z3", rotation(share(FiniteMetricSpace::cycle(12)), 4, 3)});
  out.push_back({"C16/Z2", rotation(share(FiniteMetricSpace::cycle(16)), 8, 2)});
  out.push_back({"{-7..7}/reflection", reflection(7)});
  {
    std::vector<std::vector<double>> coords;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) coords.push_back({static_cast<double>(a), static_cast<double>(b)});
    auto grid = share(FiniteMetricSpace::from_cloud(index_labels(16), coords, Norm::kL1));
    std::vector<PointId> g(16);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) g[static_cast<std::size_t>(a * 4 + b)] = static_cast<PointId>((3 - b) * 4 + a);
    out.push_back({"grid4x4/Z4", GroupAction::cyclic(grid, g, 4)});
  }
  {
    auto line = share(FiniteMetricSpace::integer_interval(0, 7));
    out.push_back({"{0..7}/swap01", GroupAction::cyclic(line, {1, 0, 2, 3, 4, 5, 6, 7}, 2)});
  }
  return out;
}

DecompositionTree random_tree(Rng& rng, const FiniteMetricSpace& space, const TreeShape& shape) {
  DecompositionTree t;
  t.levels.push_back(Family{{space.all()}, {}});
  for (std::size_t level = 0; level + 1 < shape.max_depth; ++level) {
    const Family& cur = t.levels.back();
    if (mesh(space, cur) <= shape.stop_mesh) break;
    const double r = level < shape.scales.size() ? shape.scales[level]
                     : shape.scales.empty()      ? random_distance(rng, space)
                                                 : shape.scales.back();
    Family next;
    std::vector<std::vector<Subfamily>> splits;
    int width = 1;
    for (const auto& u : cur.sets) {
      const std::size_t want = std::min<std::size_t>(u.size(), 1 + below(rng, 4));
      PointSet centers;
      while (centers.size() < want) centers = set_union(centers, {u[below(rng, u.size())]});
      std::vector<PointSet> pieces(centers.size());
      for (PointId p : u) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < centers.size(); ++c) {
          if (space.dist(p, centers[c]) < space.dist(p, centers[best])) best = c;
        }
        pieces[best].push_back(p);
      }
      if (shape.overlap && pieces.size() > 1) {
        const auto d = space.distinct_distances();
        const double hop = d.size() > 1 ? d[1] : 0.0;
        for (auto& piece : pieces) {
          PointSet grown;
          for (PointId p : u) {
            if (point_set_distance(space, p, piece) <= hop) grown.push_back(p);
          }
          piece = grown;
        }
      }
      // Greedy coloring of the pieces' conflict graph (distance < r).
      std::vector<int> color(pieces.size(), -1);
      int used = 0;
      for (std::size_t a = 0; a < pieces.size(); ++a) {
        std::vector<char> taken(pieces.size() + 1, 0);
        for (std::size_t b = 0; b < a; ++b) {
          if (set_distance(space, pieces[a], pieces[b]) < r) taken[static_cast<std::size_t>(color[b])] = 1;
        }
        int c = 0;
        while (taken[static_cast<std::size_t>(c)]) ++c;
        color[a] = c;
        used = std::max(used, c + 1);
      }
      if (used > shape.max_branching) {
        pieces = open_components(space, u, r);
        color.assign(pieces.size(), 0);
        used = 1;
      }
      std::vector<Subfamily> subs(static_cast<std::size_t>(used));
      for (std::size_t a = 0; a < pieces.size(); ++a) {
        subs[static_cast<std::size_t>(color[a])].push_back(next.sets.size());
        next.sets.push_back(pieces[a]);
      }
      width = std::max(width, used);
      splits.push_back(std::move(subs));
    }
    t.levels.push_back(std::move(next));
    t.splits.push_back(std::move(splits));
    t.scales.push_back(r);
    t.branching.push_back(width);
  }
  t.terminal_mesh = mesh(space, t.levels.back());
  return t;
}

ProbMeasure random_measure(Rng& rng, const FiniteMetricSpace& space, MeasureKind kind, const PointSet& on) {
  const std::size_t n = space.size();
  switch (kind) {
    case MeasureKind::kUniform:
      return ProbMeasure::uniform(n);
    case MeasureKind::kRandom: {
      std::vector<double> w(n);
      double total = 0.0;
      for (auto& v : w) total += (v = static_cast<double>(between(rng, 1, 10)));
      for (auto& v : w) v /= total;
      return ProbMeasure::make(w, n);
    }
    case MeasureKind::kPoint:
      return ProbMeasure::point_mass(n, below(rng, n));
    case MeasureKind::kFarPair: {
      PointId a = 0, b = 0;
      for (PointId i = 0; i < n; ++i)
        for (PointId j = i + 1; j < n; ++j)
          if (space.dist(i, j) > space.dist(a, b)) a = i, b = j;
      return ProbMeasure::uniform_on(n, make_set({a, b}));
    }
    case MeasureKind::kOnSet:
      return ProbMeasure::uniform_on(n, on.empty() ? space.all() : on);
  }
  return ProbMeasure::uniform(n);
}

std::string measure_kind_name(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::kUniform: return "uniform";
    case MeasureKind::kRandom: return "random";
    case MeasureKind::kPoint: return "point";
    case MeasureKind::kFarPair: return "far-pair";
    case MeasureKind::kOnSet: return "on-set";
  }
  return "uniform";
}

}  // namespace coarse::gen
