#include "coarse/search.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace coarse {

namespace {

void bron_kerbosch(const std::vector<std::vector<char>>& adj, std::vector<std::size_t>& current,
                   std::vector<std::size_t> candidates, std::vector<std::size_t> excluded,
                   std::vector<std::vector<std::size_t>>& out, std::size_t limit) {
  if (out.size() > limit) return;
  if (candidates.empty() && excluded.empty()) {
    out.push_back(current);
    return;
  }
  // Pivot on the vertex with the most neighbours among the candidates.
  std::size_t pivot = candidates.empty() ? excluded.front() : candidates.front();
  std::size_t best = 0;
  for (const auto* pool : {&candidates, &excluded}) {
    for (std::size_t u : *pool) {
      std::size_t deg = 0;
      for (std::size_t v : candidates) deg += adj[u][v];
      if (deg > best) {
        best = deg;
        pivot = u;
      }
    }
  }
  const std::vector<std::size_t> snapshot = candidates;
  for (std::size_t v : snapshot) {
    if (adj[pivot][v]) continue;
    std::vector<std::size_t> next_c;
    std::vector<std::size_t> next_x;
    for (std::size_t u : candidates) {
      if (adj[v][u]) next_c.push_back(u);
    }
    for (std::size_t u : excluded) {
      if (adj[v][u]) next_x.push_back(u);
    }
    current.push_back(v);
    bron_kerbosch(adj, current, std::move(next_c), std::move(next_x), out, limit);
    current.pop_back();
    candidates.erase(std::find(candidates.begin(), candidates.end(), v));
    excluded.push_back(v);
  }
}

}  // namespace

std::vector<PointSet> maximal_bounded_subsets(const FiniteMetricSpace& space, const PointSet& domain,
                                              double r) {
  return *maximal_bounded_subsets(space, domain, r, static_cast<std::size_t>(-1) - 1);
}

std::optional<std::vector<PointSet>> maximal_bounded_subsets(const FiniteMetricSpace& space,
                                                             const PointSet& domain, double r,
                                                             std::size_t max_sets) {
  const std::size_t n = domain.size();
  if (n == 0) return std::vector<PointSet>{};
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      adj[i][j] = (i != j && space.dist(domain[i], domain[j]) <= r) ? 1 : 0;
    }
  }
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  std::vector<std::vector<std::size_t>> cliques;
  std::vector<std::size_t> current;
  bron_kerbosch(adj, current, all, {}, cliques, max_sets);
  if (cliques.size() > max_sets) return std::nullopt;
  std::vector<PointSet> out;
  for (const auto& c : cliques) {
    PointSet s;
    for (std::size_t i : c) s.push_back(domain[i]);
    out.push_back(make_set(std::move(s)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PointSet> closed_balls(const FiniteMetricSpace& space, const PointSet& domain, double r) {
  std::vector<PointSet> out;
  for (PointId c : domain) {
    PointSet ball;
    for (PointId y : domain) {
      if (space.dist(c, y) <= r) ball.push_back(y);
    }
    out.push_back(std::move(ball));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

BoundedSubsets bounded_subsets(const FiniteMetricSpace& space, const PointSet& domain, double r,
                               const SearchLimits& limits) {
  if (domain.size() <= limits.clique_cap) {
    if (auto sets = maximal_bounded_subsets(space, domain, r, limits.max_cliques)) return {std::move(*sets), true};
  }
  return {closed_balls(space, domain, r), false};
}

std::optional<std::vector<PointSet>> partition_bounded(const FiniteMetricSpace& space,
                                                       const PointSet& points, std::size_t parts,
                                                       double cap, std::uint64_t node_budget,
                                                       bool* exhausted) {
  if (exhausted) *exhausted = false;
  const std::size_t n = points.size();
  if (n == 0) return std::vector<PointSet>{};
  if (parts == 0) return std::nullopt;
  std::vector<std::vector<char>> conflict(n, std::vector<char>(n, 0));
  std::vector<std::size_t> degree(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && space.dist(points[i], points[j]) > cap) {
        conflict[i][j] = 1;
        ++degree[i];
      }
    }
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return degree[a] > degree[b]; });

  std::vector<int> color(n, -1);
  std::uint64_t nodes = 0;
  bool out_of_budget = false;
  std::function<bool(std::size_t, int)> assign = [&](std::size_t pos, int used) -> bool {
    if (pos == n) return true;
    if (++nodes > node_budget) {
      out_of_budget = true;
      return false;
    }
    const std::size_t v = order[pos];
    // Symmetry breaking: a fresh color is only ever the next unused one.
    const int limit = std::min<int>(used + 1, static_cast<int>(parts));
    for (int c = 0; c < limit; ++c) {
      bool ok = true;
      for (std::size_t u = 0; u < n && ok; ++u) {
        if (color[u] == c && conflict[v][u]) ok = false;
      }
      if (!ok) continue;
      color[v] = c;
      if (assign(pos + 1, std::max(used, c + 1))) return true;
      color[v] = -1;
      if (out_of_budget) return false;
    }
    return false;
  };
  if (!assign(0, 0)) {
    if (exhausted) *exhausted = out_of_budget;
    return std::nullopt;
  }
  int used = 0;
  for (int c : color) used = std::max(used, c + 1);
  std::vector<PointSet> blocks(static_cast<std::size_t>(used));
  for (std::size_t i = 0; i < n; ++i) blocks[static_cast<std::size_t>(color[i])].push_back(points[i]);
  for (auto& b : blocks) b = make_set(std::move(b));
  std::sort(blocks.begin(), blocks.end());
  return blocks;
}

MinMaxPartition min_max_partition(const FiniteMetricSpace& space, const PointSet& points, std::size_t parts,
                                  const SearchLimits& limits) {
  MinMaxPartition out;
  if (points.empty()) return out;
  std::vector<double> cand{0.0};
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) cand.push_back(space.dist(points[i], points[j]));
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  if (points.size() > limits.exact_cap) {
    // The component count only drops as the scale grows.
    out.exact = false;
    std::size_t lo = 0;
    std::size_t hi = cand.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (r_components(space, points, cand[mid]).size() <= parts) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    out.blocks = r_components(space, points, cand[lo]);
    for (const auto& b : out.blocks) out.max_diameter = std::max(out.max_diameter, diameter(space, b));
    return out;
  }
  // Feasibility is monotone in the cap; binary search over realized distances.
  std::size_t lo = 0;
  std::size_t hi = cand.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (partition_bounded(space, points, parts, cand[mid], limits.node_budget)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  out.max_diameter = cand[lo];
  out.blocks = *partition_bounded(space, points, parts, cand[lo], limits.node_budget);
  return out;
}

CoveringLpResult solve_covering_lp(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                                   const std::vector<double>& c) {
  // Solve the packing dual  max b.y  s.t.  A^T y <= c, y >= 0  by the tableau
  // simplex method with Bland's rule; slack basis is feasible since c >= 0.
  const std::size_t m = a.size();       // dual variables
  const std::size_t ncols = c.size();   // dual constraints
  const std::size_t width = m + ncols + 1;
  std::vector<std::vector<double>> t(ncols + 1, std::vector<double>(width, 0.0));
  for (std::size_t j = 0; j < ncols; ++j) {
    for (std::size_t i = 0; i < m; ++i) t[j][i] = a[i][j];
    t[j][m + j] = 1.0;
    t[j][width - 1] = c[j];
  }
  for (std::size_t i = 0; i < m; ++i) t[ncols][i] = -b[i];
  std::vector<std::size_t> basis(ncols);
  for (std::size_t j = 0; j < ncols; ++j) basis[j] = m + j;

  constexpr double eps = 1e-12;
  for (;;) {
    std::size_t enter = width;
    for (std::size_t k = 0; k + 1 < width; ++k) {
      if (t[ncols][k] < -eps) {
        enter = k;
        break;
      }
    }
    if (enter == width) break;
    std::size_t leave = ncols;
    double best_ratio = kInfinity;
    for (std::size_t j = 0; j < ncols; ++j) {
      if (t[j][enter] > eps) {
        const double ratio = t[j][width - 1] / t[j][enter];
        if (ratio < best_ratio - eps || (std::fabs(ratio - best_ratio) <= eps && basis[j] < basis[leave])) {
          best_ratio = ratio;
          leave = j;
        }
      }
    }
    if (leave == ncols) throw Error("covering LP dual is unbounded (a row of A has no positive entry)");
    const double piv = t[leave][enter];
    for (double& v : t[leave]) v /= piv;
    for (std::size_t r = 0; r <= ncols; ++r) {
      if (r == leave || t[r][enter] == 0.0) continue;
      const double factor = t[r][enter];
      for (std::size_t k = 0; k < width; ++k) t[r][k] -= factor * t[leave][k];
    }
    basis[leave] = enter;
  }
  CoveringLpResult out;
  out.value = t[ncols][width - 1];
  out.x.resize(ncols);
  for (std::size_t j = 0; j < ncols; ++j) out.x[j] = std::max(0.0, t[ncols][m + j]);
  out.dual.assign(m, 0.0);
  for (std::size_t j = 0; j < ncols; ++j) {
    if (basis[j] < m) out.dual[basis[j]] = std::max(0.0, t[j][width - 1]);
  }
  return out;
}

}  // namespace coarse
