#include "coarse/covers.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace coarse {

namespace {

// Membership masks of the R-expansions of each member, restricted to `domain`.
std::vector<std::vector<char>> expansion_masks(const FiniteMetricSpace& space, const PointSet& domain,
                                               const Family& family, double radius) {
  std::vector<std::vector<char>> masks(family.size(), std::vector<char>(domain.size(), 0));
  for (std::size_t s = 0; s < family.size(); ++s) {
    for (std::size_t k = 0; k < domain.size(); ++k) {
      const PointId x = domain[k];
      for (PointId u : family.sets[s]) {
        if (u == x || space.dist(x, u) < radius) {
          masks[s][k] = 1;
          break;
        }
      }
    }
  }
  return masks;
}

}  // namespace

int Family::color_count() const {
  if (!colored()) return sets.empty() ? 0 : 1;
  return colors.empty() ? 0 : *std::max_element(colors.begin(), colors.end()) + 1;
}

Family Family::color_class(int c) const {
  Family out;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (!colored() ? c == 0 : colors[i] == c) out.sets.push_back(sets[i]);
  }
  return out;
}

PointSet Family::support() const {
  PointSet out;
  for (const auto& s : sets) out = set_union(out, s);
  return out;
}

void validate_family(const FiniteMetricSpace& space, const Family& family) {
  for (const auto& s : family.sets) check_subset(space, s);
  if (!family.colored()) return;
  if (family.colors.size() != family.sets.size()) {
    throw PreconditionError("color list length differs from set count");
  }
  const int k = family.color_count();
  std::vector<char> seen(static_cast<std::size_t>(std::max(k, 0)), 0);
  for (int c : family.colors) {
    if (c < 0) throw PreconditionError("negative color");
    seen[static_cast<std::size_t>(c)] = 1;
  }
  for (int c = 0; c < k; ++c) {
    if (!seen[static_cast<std::size_t>(c)]) {
      throw PreconditionError("colors are not contiguous: missing " + std::to_string(c));
    }
  }
}

std::optional<PointId> uncovered_point(const Family& family, const PointSet& domain) {
  const PointSet sup = family.support();
  for (PointId x : domain) {
    if (!contains(sup, x)) return x;
  }
  return std::nullopt;
}

bool covers(const Family& family, const PointSet& domain) { return !uncovered_point(family, domain); }

int dim_at_scale(const FiniteMetricSpace& space, const Family& family, double radius) {
  return dim_at_scale(space, space.all(), family, radius);
}

int dim_at_scale(const FiniteMetricSpace& space, const PointSet& domain, const Family& family,
                 double radius) {
  check_subset(space, domain);
  validate_family(space, family);
  const auto masks = expansion_masks(space, domain, family, radius);
  int best = 0;
  for (std::size_t k = 0; k < domain.size(); ++k) {
    int count = 0;
    for (const auto& m : masks) count += m[k];
    best = std::max(best, count);
  }
  return best - 1;
}

DisjointnessCheck is_r_disjoint(const FiniteMetricSpace& space, const Family& family, double radius) {
  for (const auto& s : family.sets) check_subset(space, s);
  DisjointnessCheck out;
  for (std::size_t a = 0; a < family.size(); ++a) {
    for (std::size_t b = a + 1; b < family.size(); ++b) {
      for (PointId x : family.sets[a]) {
        for (PointId y : family.sets[b]) {
          const double d = (x == y) ? 0.0 : space.dist(x, y);
          if (d < out.min_gap) out.min_gap = d;
          if (d < radius && out.disjoint) {
            out.disjoint = false;
            out.witness = std::make_pair(std::min(x, y), std::max(x, y));
          }
        }
      }
    }
  }
  return out;
}

DisjointnessCheck colors_r_disjoint(const FiniteMetricSpace& space, const Family& family, double radius) {
  DisjointnessCheck out;
  for (int c = 0; c < family.color_count(); ++c) {
    const auto check = is_r_disjoint(space, family.color_class(c), radius);
    out.min_gap = std::min(out.min_gap, check.min_gap);
    if (!check.disjoint && out.disjoint) {
      out.disjoint = false;
      out.witness = check.witness;
    }
  }
  return out;
}

double mesh(const FiniteMetricSpace& space, const Family& family) {
  for (const auto& s : family.sets) check_subset(space, s);
  double m = 0.0;
  for (const auto& s : family.sets) m = std::max(m, diameter(space, s));
  return m;
}

double lebesgue_number(const FiniteMetricSpace& space, const Family& family) {
  validate_family(space, family);
  if (const auto x = uncovered_point(family, space.all())) {
    throw PreconditionError("family does not cover point " + space.label(*x));
  }
  double result = kInfinity;
  for (PointId x = 0; x < space.size(); ++x) {
    double best = 0.0;
    for (const auto& u : family.sets) {
      if (!contains(u, x)) continue;
      // sup{L : B(x, L) in U} is the distance to the nearest point outside U.
      double reach = kInfinity;
      for (PointId y = 0; y < space.size(); ++y) {
        if (!contains(u, y)) reach = std::min(reach, space.dist(x, y));
      }
      best = std::max(best, reach);
    }
    result = std::min(result, best);
  }
  return result;
}

DisjointifyResult make_disjoint(const FiniteMetricSpace& space, const Family& cover, double radius, int n) {
  return make_disjoint(space, space.all(), cover, radius, n);
}

DisjointifyResult make_disjoint(const FiniteMetricSpace& space, const PointSet& domain,
                                const Family& cover, double radius, int n) {
  check_subset(space, domain);
  validate_family(space, cover);
  if (!(radius > 0.0)) throw PreconditionError("make_disjoint needs a positive scale");
  if (const auto x = uncovered_point(cover, domain)) {
    throw PreconditionError("family does not cover point " + space.label(*x));
  }
  // Members are only relevant through their trace on the domain.
  Family local;
  for (const auto& s : cover.sets) local.sets.push_back(set_intersection(s, domain));
  const int dim = dim_at_scale(space, domain, local, radius);
  if (n < 0) n = std::max(dim, 0);
  if (dim > n) {
    throw PreconditionError("dimension at scale " + std::to_string(radius) + " is " + std::to_string(dim) +
                            ", above the supplied bound " + std::to_string(n));
  }

  const std::size_t members = local.size();
  const std::size_t npts = domain.size();
  const double shrink = radius / (2.0 * (n + 1));
  const double gap_needed = radius / (n + 1);

  DisjointificationTrace trace;
  trace.radius = radius;
  trace.n = n;
  trace.domain = domain;
  trace.level_values.assign(members, std::vector<double>(npts, kInfinity));
  const auto masks = expansion_masks(space, domain, local, radius);
  for (std::size_t s = 0; s < members; ++s) {
    for (std::size_t k = 0; k < npts; ++k) {
      double v = kInfinity;
      for (std::size_t j = 0; j < npts; ++j) {
        if (!masks[s][j]) v = std::min(v, space.dist(domain[k], domain[j]));
      }
      trace.level_values[s][k] = v;
    }
  }

  // Per point: sort the positive level values descending and cut at every
  // strict descent (the appended 0 closes the list). A cut after position k
  // puts the point in W_T for T = the first k indices. The output set for T
  // keeps the points whose cut gap is at least R/(n+1).
  std::map<std::vector<std::size_t>, PointSet> cores;
  auto gap = [](double hi, double lo) { return (hi == kInfinity && lo == kInfinity) ? 0.0 : hi - lo; };
  for (std::size_t k = 0; k < npts; ++k) {
    std::vector<std::size_t> order;
    for (std::size_t s = 0; s < members; ++s) {
      if (trace.level_values[s][k] > 0.0) order.push_back(s);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return trace.level_values[a][k] > trace.level_values[b][k];
    });
    double best_gap = -1.0;
    std::vector<std::size_t> best_t;
    bool placed = false;
    for (std::size_t cut = 1; cut <= order.size(); ++cut) {
      const double hi = trace.level_values[order[cut - 1]][k];
      const double lo = cut < order.size() ? trace.level_values[order[cut]][k] : 0.0;
      const double g = gap(hi, lo);
      if (!(g > 0.0)) continue;
      std::vector<std::size_t> t(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(cut));
      std::sort(t.begin(), t.end());
      trace.w_sets[t].push_back(domain[k]);
      if (g >= gap_needed) {
        cores[t].push_back(domain[k]);
        placed = true;
      }
      if (g > best_gap) {
        best_gap = g;
        best_t = t;
      }
    }
    // The largest gap is >= R/(n+1) in exact arithmetic; this only triggers on
    // rounding in the subtraction.
    if (!placed && !best_t.empty()) cores[best_t].push_back(domain[k]);
  }

  for (const auto& [t, w] : trace.w_sets) {
    if (t.size() > static_cast<std::size_t>(n) + 1) {
      throw PreconditionError("point multiplicity exceeds n+1 during disjointification");
    }
    // Inner neighborhoods are taken inside the domain.
    PointSet inner;
    for (PointId x : w) {
      bool inside = true;
      for (PointId y : domain) {
        if (space.dist(x, y) < shrink && !contains(w, y)) {
          inside = false;
          break;
        }
      }
      if (inside) inner.push_back(x);
    }
    trace.inner_sets[t] = inner;
  }

  DisjointifyResult result;
  for (int color = 0; color <= n; ++color) {
    for (const auto& [t, core] : cores) {
      if (t.size() != static_cast<std::size_t>(color) + 1 || core.empty()) continue;
      result.family.sets.push_back(make_set(core));
      result.family.colors.push_back(color);
      trace.output_index_sets.push_back(t);
    }
  }
  // Keep colors contiguous: drop unused color values while preserving order.
  std::vector<int> remap(static_cast<std::size_t>(n) + 1, -1);
  int next = 0;
  for (int& c : result.family.colors) {
    if (remap[static_cast<std::size_t>(c)] < 0) remap[static_cast<std::size_t>(c)] = next++;
    c = remap[static_cast<std::size_t>(c)];
  }
  result.trace = std::move(trace);
  return result;
}

}  // namespace coarse
