#include "coarse/trees.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "coarse/search.hpp"

namespace coarse {

std::vector<PointSet> DecompositionTree::subfamily_sets(std::size_t level, std::size_t element,
                                                        std::size_t j) const {
  std::vector<PointSet> out;
  for (std::size_t idx : splits[level][element][j]) out.push_back(levels[level + 1].sets[idx]);
  return out;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

TreeVerification check_shape(const FiniteMetricSpace& space, const DecompositionTree& t) {
  TreeVerification out;
  auto fail = [&](std::size_t level, std::size_t element, std::string cond, std::string detail) {
    out.valid = false;
    out.violations.push_back({level, element, std::move(cond), std::move(detail), std::nullopt});
  };
  const std::size_t d = t.depth();
  if (d == 0) {
    fail(0, 0, "shape", "tree has no levels");
    return out;
  }
  if (t.scales.size() + 1 != d || t.branching.size() + 1 != d || t.splits.size() + 1 != d) {
    fail(0, 0, "shape", "scales, branching and splits must have one entry per level below the root");
    return out;
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (const auto& s : t.levels[i].sets) {
      for (PointId p : s) {
        if (p >= space.size()) {
          fail(i, 0, "shape", "set member out of range");
          return out;
        }
      }
    }
  }
  for (std::size_t i = 0; i + 1 < d; ++i) {
    if (t.splits[i].size() != t.levels[i].size()) {
      fail(i, 0, "shape", "split map must have one entry per element");
      return out;
    }
    for (std::size_t u = 0; u < t.splits[i].size(); ++u) {
      for (const auto& sub : t.splits[i][u]) {
        for (std::size_t idx : sub) {
          if (idx >= t.levels[i + 1].size()) {
            fail(i, u, "shape", "subfamily index out of range");
            return out;
          }
        }
      }
    }
  }
  return out;
}

}  // namespace

TreeVerification verify_tree(const FiniteMetricSpace& space, const DecompositionTree& t, TreeMode mode) {
  TreeVerification out = check_shape(space, t);
  if (!out.valid) return out;
  auto fail = [&](std::size_t level, std::size_t element, std::string cond, std::string detail,
                  std::optional<std::pair<PointId, PointId>> w = std::nullopt) {
    out.valid = false;
    out.violations.push_back({level, element, std::move(cond), std::move(detail), w});
  };
  const std::size_t d = t.depth();
  if (t.levels[0].size() != 1 || t.levels[0].sets[0] != space.all()) fail(0, 0, "root", "first level must be {X}");

  for (std::size_t i = 0; i + 1 < d; ++i) {
    const int cap = mode == TreeMode::kSfdc ? std::min(2, t.branching[i]) : t.branching[i];
    if (mode == TreeMode::kSfdc && t.branching[i] > 2) {
      fail(i, 0, "branching", "sFDC allows at most 2 subfamilies, level declares " + std::to_string(t.branching[i]));
    }
    for (std::size_t u = 0; u < t.levels[i].size(); ++u) {
      const auto& subs = t.splits[i][u];
      if (static_cast<int>(subs.size()) > cap) {
        fail(i, u, "branching",
             std::to_string(subs.size()) + " subfamilies exceed the bound " + std::to_string(cap));
      }
      PointSet un;
      for (std::size_t j = 0; j < subs.size(); ++j) {
        Family fam{t.subfamily_sets(i, u, j), {}};
        const auto check = is_r_disjoint(space, fam, t.scales[i]);
        if (!check.disjoint) {
          fail(i, u, "disjoint",
               "subfamily " + std::to_string(j) + " is not " + fmt(t.scales[i]) + "-disjoint", check.witness);
        }
        un = set_union(un, fam.support());
      }
      const PointSet& elem = t.levels[i].sets[u];
      const bool ok = t.mode == SplitMode::kUnion ? un == elem : is_subset(elem, un);
      if (!ok) {
        fail(i, u, "union",
             t.mode == SplitMode::kUnion ? "subfamilies do not union to the element"
                                         : "subfamilies do not contain the element");
      }
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    const double m = t.levels[i].size() == 0 ? 0.0 : mesh(space, t.levels[i]);
    out.level_mesh.push_back(m);
    if (!out.bounded_level && m <= t.terminal_mesh) out.bounded_level = i;
  }
  if (mode == TreeMode::kSfdc) {
    if (out.level_mesh.back() > t.terminal_mesh) {
      fail(d - 1, 0, "bounded", "terminal level mesh " + fmt(out.level_mesh.back()) + " exceeds " + fmt(t.terminal_mesh));
    }
  } else if (!out.bounded_level) {
    fail(d - 1, 0, "bounded", "no level has mesh <= " + fmt(t.terminal_mesh));
  }
  return out;
}

DecompositionTree canonical_tree(const DecompositionTree& t) {
  DecompositionTree out = t;
  std::vector<std::vector<std::size_t>> remap(t.depth());
  for (std::size_t i = 0; i < t.depth(); ++i) {
    std::vector<std::size_t> order(t.levels[i].size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return t.levels[i].sets[a] < t.levels[i].sets[b]; });
    remap[i].assign(order.size(), 0);
    for (std::size_t k = 0; k < order.size(); ++k) {
      remap[i][order[k]] = k;
      out.levels[i].sets[k] = t.levels[i].sets[order[k]];
    }
    out.levels[i].colors.clear();
  }
  for (std::size_t i = 0; i + 1 < t.depth() && i < t.splits.size(); ++i) {
    for (std::size_t u = 0; u < t.splits[i].size(); ++u) {
      auto subs = t.splits[i][u];
      for (auto& sub : subs) {
        for (auto& idx : sub) idx = remap[i + 1][idx];
        std::sort(sub.begin(), sub.end());
      }
      out.splits[i][remap[i][u]] = std::move(subs);
    }
  }
  return out;
}

bool levels_are_partitions(const FiniteMetricSpace& space, const DecompositionTree& t) {
  for (const auto& level : t.levels) {
    std::vector<int> seen(space.size(), 0);
    for (const auto& s : level.sets) {
      for (PointId p : s) {
        if (seen[p]++) return false;
      }
    }
    for (int c : seen) {
      if (c != 1) return false;
    }
  }
  return true;
}

namespace {

void require_valid(const FiniteMetricSpace& space, const DecompositionTree& t, TreeMode mode) {
  const auto v = verify_tree(space, t, mode);
  if (!v.valid) {
    const auto& first = v.violations.front();
    std::ostringstream os;
    os << "invalid input tree: level " << first.level << " element " << first.element << " (" << first.condition
       << "): " << first.detail;
    throw PreconditionError(os.str());
  }
}

// Levels after the first bounded one are dropped.
DecompositionTree cut_at_bounded(const FiniteMetricSpace& space, const DecompositionTree& t) {
  const auto v = verify_tree(space, t, TreeMode::kCasdim);
  const std::size_t keep = *v.bounded_level + 1;
  DecompositionTree out = t;
  out.levels.resize(keep);
  out.scales.resize(keep - 1);
  out.branching.resize(keep - 1);
  out.splits.resize(keep - 1);
  return out;
}

}  // namespace

DecompositionTree partition_refine(const FiniteMetricSpace& space, const DecompositionTree& t) {
  require_valid(space, t, TreeMode::kCasdim);
  DecompositionTree out;
  out.scales = t.scales;
  out.branching = t.branching;
  out.terminal_mesh = t.terminal_mesh;
  out.mode = SplitMode::kUnion;
  out.levels.push_back(Family{{space.all()}, {}});
  std::vector<std::size_t> origin{0};  // old element each new element lies in
  for (std::size_t i = 0; i + 1 < t.depth(); ++i) {
    Family next;
    std::vector<std::size_t> next_origin;
    std::vector<std::vector<Subfamily>> level_splits;
    for (std::size_t u = 0; u < out.levels[i].size(); ++u) {
      const PointSet& parent = out.levels[i].sets[u];
      const auto& subs = t.splits[i][origin[u]];
      std::vector<Subfamily> mine(subs.size());
      PointSet taken;
      for (std::size_t j = 0; j < subs.size(); ++j) {
        PointSet layer;
        for (std::size_t idx : subs[j]) {
          PointSet piece = set_difference(set_intersection(parent, t.levels[i + 1].sets[idx]), taken);
          layer = set_union(layer, piece);
          if (piece.empty()) continue;
          mine[j].push_back(next.sets.size());
          next.sets.push_back(std::move(piece));
          next_origin.push_back(idx);
        }
        taken = set_union(taken, layer);
      }
      level_splits.push_back(std::move(mine));
    }
    out.levels.push_back(std::move(next));
    out.splits.push_back(std::move(level_splits));
    origin = std::move(next_origin);
  }
  return canonical_tree(out);
}

DecompositionTree casdim_to_sfdc(const FiniteMetricSpace& space, const DecompositionTree& input) {
  require_valid(space, input, TreeMode::kCasdim);
  const DecompositionTree t = cut_at_bounded(space, input);
  DecompositionTree out;
  out.terminal_mesh = t.terminal_mesh;
  out.mode = t.mode;
  out.levels.push_back(t.levels[0]);
  // Node in out.levels.back() of each reachable element of t.levels[i].
  std::map<std::size_t, std::size_t> where{{0, 0}};
  for (std::size_t i = 0; i + 1 < t.depth(); ++i) {
    const std::size_t steps = static_cast<std::size_t>(std::max(t.branching[i] - 1, 1));
    std::map<std::size_t, std::size_t> pending = where;  // parent -> node still to be peeled
    std::map<std::size_t, std::size_t> carried;          // original element of level i+1 -> node
    for (std::size_t s = 0; s < steps; ++s) {
      const bool last = s + 1 == steps;
      Family next;
      std::vector<std::vector<Subfamily>> level_splits(out.levels.back().size());
      std::map<std::size_t, std::size_t> next_carried;
      auto original_node = [&](std::size_t idx) {
        auto it = next_carried.find(idx);
        if (it != next_carried.end()) return it->second;
        next_carried[idx] = next.sets.size();
        next.sets.push_back(t.levels[i + 1].sets[idx]);
        return next.sets.size() - 1;
      };
      auto mapped = [&](const Subfamily& sub) {
        Subfamily m;
        for (std::size_t idx : sub) m.push_back(original_node(idx));
        return m;
      };
      for (const auto& [idx, node] : carried) level_splits[node].push_back({original_node(idx)});
      std::map<std::size_t, std::size_t> next_pending;
      for (const auto& [u, node] : pending) {
        const auto& subs = t.splits[i][u];
        auto& split = level_splits[node];
        if (s < subs.size()) split.push_back(mapped(subs[s]));
        if (last) {
          for (std::size_t j = s + 1; j < subs.size(); ++j) split.push_back(mapped(subs[j]));
          continue;
        }
        PointSet rest;
        for (std::size_t j = s + 1; j < subs.size(); ++j) {
          for (std::size_t idx : subs[j]) rest = set_union(rest, t.levels[i + 1].sets[idx]);
        }
        if (rest.empty()) continue;
        next_pending[u] = next.sets.size();
        split.push_back({next.sets.size()});
        next.sets.push_back(std::move(rest));
      }
      for (auto& sp : level_splits) {
        sp.erase(std::remove_if(sp.begin(), sp.end(), [](const Subfamily& f) { return f.empty(); }), sp.end());
      }
      out.levels.push_back(std::move(next));
      out.splits.push_back(std::move(level_splits));
      out.scales.push_back(t.scales[i]);
      out.branching.push_back(std::min(2, std::max(1, t.branching[i])));
      carried = std::move(next_carried);
      pending = std::move(next_pending);
    }
    where = carried;
  }
  return out;
}

Family tree_to_cover(const FiniteMetricSpace& space, const DecompositionTree& input, double radius) {
  require_valid(space, input, TreeMode::kCasdim);
  const DecompositionTree t = cut_at_bounded(space, input);
  for (std::size_t i = 0; i < t.scales.size(); ++i) {
    if (t.scales[i] < radius) {
      throw PreconditionError("scale R_" + std::to_string(i + 1) + " = " + fmt(t.scales[i]) + " is below " +
                              fmt(radius));
    }
  }
  std::map<std::vector<std::size_t>, std::vector<PointSet>> by_path;
  std::vector<std::size_t> path;
  // Depth-first over subfamily paths; each set is cut down to its ancestors.
  auto walk = [&](auto&& self, std::size_t level, std::size_t element, const PointSet& set) -> void {
    if (level + 1 == t.depth()) {
      by_path[path].push_back(set);
      return;
    }
    const auto& subs = t.splits[level][element];
    for (std::size_t j = 0; j < subs.size(); ++j) {
      path.push_back(j);
      for (std::size_t idx : subs[j]) {
        PointSet child = set_intersection(set, t.levels[level + 1].sets[idx]);
        if (!child.empty()) self(self, level + 1, idx, child);
      }
      path.pop_back();
    }
  };
  walk(walk, 0, 0, t.levels[0].sets[0]);
  Family out;
  int color = 0;
  for (auto& [p, sets] : by_path) {
    std::sort(sets.begin(), sets.end());
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
    for (auto& s : sets) {
      out.sets.push_back(std::move(s));
      out.colors.push_back(color);
    }
    ++color;
  }
  return out;
}

TreePullback tree_pullback(const CoarseMap& f, const DecompositionTree& input, int n,
                           const ControlFunction& control, const std::vector<double>& targets,
                           const SearchLimits& limits) {
  if (n < 1) throw PreconditionError("n must be at least 1");
  const FiniteMetricSpace& x = *f.domain;
  const FiniteMetricSpace& y = *f.codomain;
  require_valid(y, input, TreeMode::kCasdim);
  const DecompositionTree t = cut_at_bounded(y, input);
  const std::size_t d = t.depth();
  if (targets.empty() || (targets.size() + 1 != d && targets.size() != d)) {
    throw PreconditionError("scale bookkeeping mismatch: tree of depth " + std::to_string(d) + " needs " +
                            std::to_string(d - 1) + " scales (plus an optional terminal one), got " +
                            std::to_string(targets.size()));
  }
  const double extra = targets.back();

  TreePullback out;
  DecompositionTree& r = out.tree;
  r.mode = t.mode;
  std::vector<std::vector<std::size_t>> index(d);
  for (std::size_t i = 0; i < d; ++i) {
    index[i].assign(t.levels[i].size(), static_cast<std::size_t>(-1));
    Family level;
    for (std::size_t u = 0; u < t.levels[i].size(); ++u) {
      PointSet pre = f.preimage(t.levels[i].sets[u]);
      if (pre.empty()) continue;
      index[i][u] = level.sets.size();
      level.sets.push_back(std::move(pre));
    }
    r.levels.push_back(std::move(level));
  }
  for (std::size_t i = 0; i + 1 < d; ++i) {
    std::vector<std::vector<Subfamily>> level_splits(r.levels[i].size());
    for (std::size_t u = 0; u < t.levels[i].size(); ++u) {
      if (index[i][u] == static_cast<std::size_t>(-1)) continue;
      for (std::size_t j = 0; j < t.splits[i][u].size(); ++j) {
        try {
          pullback_family(f, Family{t.subfamily_sets(i, u, j), {}}, targets[i]);
        } catch (const PreconditionError& e) {
          throw PreconditionError("level " + std::to_string(i) + " element " + std::to_string(u) + " subfamily " +
                                  std::to_string(j) + ": " + e.what());
        }
        Subfamily sub;
        for (std::size_t idx : t.splits[i][u][j]) {
          if (index[i + 1][idx] != static_cast<std::size_t>(-1)) sub.push_back(index[i + 1][idx]);
        }
        if (!sub.empty()) level_splits[index[i][u]].push_back(std::move(sub));
      }
    }
    r.splits.push_back(std::move(level_splits));
    r.scales.push_back(targets[i]);
    r.branching.push_back(t.branching[i]);
  }

  // Terminal fix-up: <= n parts of diameter <= D(b), merged at distance < R.
  const double b = t.levels.back().size() == 0 ? 0.0 : mesh(y, t.levels.back());
  const double db = control(b);
  const double cap = part_cap(x, control, db);
  out.piece_bound = n * db + (n - 1) * extra;
  Family pieces;
  std::vector<std::vector<Subfamily>> last_splits;
  for (std::size_t u = 0; u < r.levels.back().size(); ++u) {
    const PointSet& pre = r.levels.back().sets[u];
    bool exhausted = false;
    auto parts = partition_bounded(x, pre, static_cast<std::size_t>(n), cap, limits.node_budget, &exhausted);
    if (!parts) {
      throw PreconditionError(std::string(exhausted ? "search budget exhausted splitting" : "more than n parts needed for") +
                              " the preimage of terminal element " + std::to_string(u) + " at diameter " + fmt(cap));
    }
    out.max_pieces = std::max(out.max_pieces, parts->size());
    // Union-find over parts: merge when closer than the extra scale.
    std::vector<std::size_t> root(parts->size());
    for (std::size_t k = 0; k < root.size(); ++k) root[k] = k;
    auto find = [&](std::size_t k) {
      while (root[k] != k) k = root[k] = root[root[k]];
      return k;
    };
    for (std::size_t a = 0; a < parts->size(); ++a) {
      for (std::size_t c = a + 1; c < parts->size(); ++c) {
        if (set_distance(x, (*parts)[a], (*parts)[c]) < extra) root[find(c)] = find(a);
      }
    }
    std::map<std::size_t, PointSet> merged;
    for (std::size_t k = 0; k < parts->size(); ++k) merged[find(k)] = set_union(merged[find(k)], (*parts)[k]);
    Subfamily sub;
    for (auto& [k, set] : merged) {
      if (diameter(x, set) > out.piece_bound) {
        throw PreconditionError("merged piece of terminal element " + std::to_string(u) + " exceeds " +
                                fmt(out.piece_bound));
      }
      sub.push_back(pieces.sets.size());
      pieces.sets.push_back(set);
    }
    if (merged.size() > 1) out.extra_level = true;
    last_splits.push_back({sub});
  }
  r.terminal_mesh = out.piece_bound;
  if (out.extra_level) {
    r.levels.push_back(std::move(pieces));
    r.splits.push_back(std::move(last_splits));
    r.scales.push_back(extra);
    r.branching.push_back(1);
  }
  return out;
}

std::vector<double> tree_pushforward_input_scales(const FiniteMetricSpace& source, int n, const ControlFunction& control,
                                                  const std::vector<int>& branching,
                                                  const std::vector<double>& targets) {
  if (targets.size() < branching.size()) {
    throw PreconditionError("scale-derivation mismatch: " + std::to_string(branching.size()) +
                            " levels need as many target scales, got " + std::to_string(targets.size()));
  }
  std::vector<double> out;
  double slack = 0.0;
  for (std::size_t i = 0; i < branching.size(); ++i) {
    // Grown images near one point are pairwise closer than 2 (r + L).
    const double r = static_cast<double>(n) * branching[i] * targets[i];
    out.push_back(source_scale(source, control, control(2.0 * r + 2.0 * slack)));
    slack += r;
  }
  return out;
}

TreePushforward tree_pushforward(const CoarseMap& f, const DecompositionTree& input, int n,
                                 const ControlFunction& control, const std::vector<double>& targets) {
  if (n < 1) throw PreconditionError("n must be at least 1");
  const FiniteMetricSpace& x = *f.domain;
  const FiniteMetricSpace& y = *f.codomain;
  if (!f.surjective()) throw PreconditionError("map must be onto its codomain (restrict the codomain first)");
  require_valid(x, input, TreeMode::kCasdim);
  if (input.mode != SplitMode::kUnion || !levels_are_partitions(x, input)) {
    throw PreconditionError("input tree must be a partition tree (apply partition_refine first)");
  }
  const DecompositionTree t = cut_at_bounded(x, input);
  const std::size_t d = t.depth();
  const auto required = tree_pushforward_input_scales(x, n, control, t.branching, targets);
  for (std::size_t i = 0; i + 1 < d; ++i) {
    if (t.scales[i] < required[i]) {
      throw PreconditionError("scale-derivation mismatch at level " + std::to_string(i + 1) + ": input scale " +
                              fmt(t.scales[i]) + " is below the scale above D(2 n n_i R_i + 2 L), " + fmt(required[i]));
    }
  }

  TreePushforward out;
  DecompositionTree& r = out.tree;
  r.mode = SplitMode::kUnion;
  r.levels.push_back(Family{{y.all()}, {}});
  std::vector<std::size_t> source{0};
  double slack = 0.0;
  for (std::size_t i = 0; i + 1 < d; ++i) {
    const int colors = n * t.branching[i];
    const double scale = static_cast<double>(colors) * targets[i];
    PushforwardLevelAudit audit{i, slack, slack + scale, required[i], t.scales[i], 0};
    Family next;
    std::vector<std::size_t> next_source;
    std::vector<std::vector<Subfamily>> level_splits;
    for (std::size_t v = 0; v < r.levels[i].size(); ++v) {
      const PointSet& parent = r.levels[i].sets[v];
      const std::size_t u = source[v];
      const PointSet zone = neighborhood(y, f.image(t.levels[i].sets[u]), slack);
      if (!is_subset(parent, zone)) {
        throw PreconditionError("containment audit failure at level " + std::to_string(i) + " element " +
                                std::to_string(v));
      }
      Family cover;
      std::vector<std::size_t> cover_source;
      for (const auto& sub : t.splits[i][u]) {
        for (std::size_t idx : sub) {
          PointSet grown = neighborhood(y, f.image(t.levels[i + 1].sets[idx]), slack);
          if (std::find(cover.sets.begin(), cover.sets.end(), grown) != cover.sets.end()) continue;
          cover.sets.push_back(std::move(grown));
          cover_source.push_back(idx);
        }
      }
      DisjointifyResult res;
      try {
        res = make_disjoint(y, zone, cover, scale, colors - 1);
      } catch (const PreconditionError& e) {
        throw PreconditionError("level " + std::to_string(i) + " element " + std::to_string(v) + ": " + e.what());
      }
      std::vector<Subfamily> subs(static_cast<std::size_t>(colors));
      for (std::size_t s = 0; s < res.family.size(); ++s) {
        PointSet child = set_intersection(res.family.sets[s], parent);
        if (child.empty()) continue;
        const std::size_t src = cover_source[res.trace.output_index_sets[s].front()];
        const PointSet reach = neighborhood(y, f.image(t.levels[i + 1].sets[src]), slack + scale);
        if (!is_subset(child, reach)) {
          throw PreconditionError("containment audit failure at level " + std::to_string(i + 1) + ": child of element " +
                                  std::to_string(v) + " leaves the neighborhood of its source");
        }
        ++audit.containments;
        subs[static_cast<std::size_t>(res.family.colors[s])].push_back(next.sets.size());
        next.sets.push_back(std::move(child));
        next_source.push_back(src);
      }
      subs.erase(std::remove_if(subs.begin(), subs.end(), [](const Subfamily& q) { return q.empty(); }), subs.end());
      level_splits.push_back(std::move(subs));
    }
    r.levels.push_back(std::move(next));
    r.splits.push_back(std::move(level_splits));
    r.scales.push_back(targets[i]);
    r.branching.push_back(colors);
    source = std::move(next_source);
    slack += scale;
    out.audit.push_back(audit);
  }
  const double b = mesh(x, t.levels.back());
  r.terminal_mesh = control_upper(f)(b) + 2.0 * slack;
  return out;
}

}  // namespace coarse
