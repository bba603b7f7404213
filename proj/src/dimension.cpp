#include "coarse/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>

namespace coarse {

void ApcWitness::certify(const FiniteMetricSpace& space) {
  certificates.clear();
  for (std::size_t i = 0; i < families.size(); ++i) {
    const auto check = is_r_disjoint(space, families[i], i < scales.size() ? scales[i] : 0.0);
    certificates.push_back({check.disjoint, check.min_gap, mesh(space, families[i])});
  }
}

bool ApcWitness::covers_space(const FiniteMetricSpace& space) const {
  PointSet all;
  for (const auto& fam : families) all = set_union(all, fam.support());
  return all.size() == space.size();
}

bool ApcWitness::valid(const FiniteMetricSpace& space, double mesh_cap) const {
  if (scales.size() != families.size()) return false;
  if (!covers_space(space)) return false;
  for (std::size_t i = 0; i < families.size(); ++i) {
    if (!is_r_disjoint(space, families[i], scales[i]).disjoint) return false;
    if (mesh(space, families[i]) > mesh_cap) return false;
  }
  return true;
}

namespace {

Family as_family(std::vector<PointSet> sets) {
  std::sort(sets.begin(), sets.end());
  return Family{std::move(sets), {}};
}

// Sequential greedy partition: each point joins the first block it keeps within the cap.
std::vector<PointSet> greedy_blocks(const FiniteMetricSpace& space, double cap) {
  std::vector<PointSet> blocks;
  for (PointId x = 0; x < space.size(); ++x) {
    bool placed = false;
    for (auto& b : blocks) {
      bool ok = true;
      for (PointId y : b) {
        if (space.dist(x, y) > cap) {
          ok = false;
          break;
        }
      }
      if (ok) {
        b.push_back(x);
        placed = true;
        break;
      }
    }
    if (!placed) blocks.push_back({x});
  }
  return blocks;
}

bool blocks_within(const FiniteMetricSpace& space, const std::vector<PointSet>& blocks, double cap) {
  for (const auto& b : blocks) {
    if (diameter(space, b) > cap) return false;
  }
  return true;
}

void check_increasing(const std::vector<double>& scales, const char* what) {
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] > 0.0)) throw PreconditionError(std::string(what) + " must be positive");
    if (i > 0 && !(scales[i] > scales[i - 1])) {
      std::ostringstream os;
      os << what << " must be strictly increasing (index " << i << ")";
      throw PreconditionError(os.str());
    }
  }
}

}  // namespace

AsdimAtScale asdim_at_scale(const FiniteMetricSpace& space, double radius, double mesh_cap,
                            const SearchLimits& limits) {
  if (mesh_cap < 0.0) throw PreconditionError("mesh_cap must be non-negative");
  if (radius < 0.0) throw PreconditionError("scale must be non-negative");
  AsdimAtScale out;
  const std::size_t n = space.size();
  if (n == 0) {
    out.dim = -1;
    return out;
  }
  if (space.diameter() <= mesh_cap) {
    out.cover = Family{{space.all()}, {}};
    return out;
  }

  // Upper bound: best of the sequential greedy and the open-component partitions.
  out.cover = as_family(greedy_blocks(space, mesh_cap));
  out.dim = dim_at_scale(space, out.cover, radius);
  for (double t : space.distinct_distances()) {
    auto comps = open_components(space, space.all(), t);
    if (!blocks_within(space, comps, mesh_cap)) break;
    Family f = as_family(std::move(comps));
    const int d = dim_at_scale(space, f, radius);
    if (d < out.dim) {
      out.dim = d;
      out.cover = std::move(f);
    }
  }
  if (out.dim == 0) return out;
  if (n > limits.exact_cap) {
    out.exact = false;
    return out;
  }

  std::vector<std::uint32_t> ball(n, 0);
  for (PointId x = 0; x < n; ++x) {
    for (PointId y = 0; y < n; ++y) {
      if (x == y || space.dist(x, y) < radius) ball[x] |= (1u << y);
    }
  }
  std::uint64_t nodes = 0;
  bool exhausted = false;
  std::vector<PointSet> blocks;
  std::vector<std::uint32_t> covered;
  std::vector<int> mult(n, 0);

  // Is there a partition with every point in at most k + 1 block expansions?
  std::function<bool(PointId, int)> place = [&](PointId x, int k) -> bool {
    if (x == n) return true;
    if (++nodes > limits.node_budget) {
      exhausted = true;
      return false;
    }
    const std::size_t existing = blocks.size();
    for (std::size_t b = 0; b <= existing; ++b) {
      if (b < existing) {
        bool ok = true;
        for (PointId y : blocks[b]) {
          if (space.dist(x, y) > mesh_cap) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
      } else {
        blocks.emplace_back();
        covered.push_back(0);
      }
      const std::uint32_t fresh = ball[x] & ~covered[b];
      bool ok = true;
      for (PointId y = 0; y < n; ++y) {
        if ((fresh >> y) & 1u) {
          if (++mult[y] > k + 1) ok = false;
        }
      }
      blocks[b].push_back(x);
      covered[b] |= fresh;
      if (ok && place(x + 1, k)) return true;
      blocks[b].pop_back();
      covered[b] &= ~fresh;
      for (PointId y = 0; y < n; ++y) {
        if ((fresh >> y) & 1u) --mult[y];
      }
      if (b == existing) {
        blocks.pop_back();
        covered.pop_back();
      }
      if (exhausted) return false;
    }
    return false;
  };

  for (int k = 0; k < out.dim; ++k) {
    blocks.clear();
    covered.clear();
    std::fill(mult.begin(), mult.end(), 0);
    if (place(0, k)) {
      out.dim = k;
      out.cover = as_family(blocks);
      return out;
    }
    if (exhausted) {
      out.exact = false;
      out.budget_exhausted = true;
      return out;
    }
  }
  return out;
}

ApcSearch apc_witness(const FiniteMetricSpace& space, const std::vector<double>& scales, double mesh_cap,
                      const SearchLimits& limits) {
  if (scales.empty()) throw PreconditionError("at least one scale is required");
  check_increasing(scales, "scales");
  if (mesh_cap < 0.0) throw PreconditionError("mesh_cap must be non-negative");
  const std::size_t n = space.size();
  const std::size_t k = scales.size();
  std::vector<PointSet> classes(k);

  // Does adding x to class i keep every open R_i-component within the cap?
  auto fits = [&](std::size_t i, PointId x) {
    PointSet comp{x};
    std::vector<char> seen(classes[i].size(), 0);
    for (std::size_t head = 0; head < comp.size(); ++head) {
      for (std::size_t j = 0; j < classes[i].size(); ++j) {
        if (!seen[j] && space.dist(comp[head], classes[i][j]) < scales[i]) {
          seen[j] = 1;
          for (PointId c : comp) {
            if (space.dist(c, classes[i][j]) > mesh_cap) return false;
          }
          comp.push_back(classes[i][j]);
        }
      }
    }
    return true;
  };
  auto build = [&]() {
    ApcWitness w;
    w.scales = scales;
    for (std::size_t i = 0; i < k; ++i) {
      w.families.push_back(as_family(open_components(space, make_set(classes[i]), scales[i])));
    }
    w.certify(space);
    return w;
  };

  ApcSearch out;
  for (PointId x = 0; x < n; ++x) {
    bool placed = false;
    for (std::size_t i = 0; i < k && !placed; ++i) {
      if (fits(i, x)) {
        classes[i].push_back(x);
        placed = true;
      }
    }
    if (!placed) out.residue.push_back(x);
  }
  if (out.residue.empty()) {
    out.witness = build();
    return out;
  }

  out.greedy = false;
  for (auto& c : classes) c.clear();
  std::uint64_t nodes = 0;
  bool exhausted = false;
  std::function<bool(PointId)> place = [&](PointId x) -> bool {
    if (x == n) return true;
    if (++nodes > limits.node_budget) {
      exhausted = true;
      return false;
    }
    for (std::size_t i = 0; i < k; ++i) {
      if (!fits(i, x)) continue;
      classes[i].push_back(x);
      if (place(x + 1)) return true;
      classes[i].pop_back();
      if (exhausted) return false;
    }
    return false;
  };
  if (place(0)) {
    out.witness = build();
    out.status = SearchStatus::kFound;
    return out;
  }
  out.status = exhausted ? SearchStatus::kBudgetExhausted : SearchStatus::kImpossible;
  return out;
}

std::vector<double> apc_normalize_scales(const std::vector<int>& dims, const std::vector<double>& gaps) {
  check_increasing(gaps, "target gaps");
  std::vector<double> out;
  std::size_t m = 0;
  double acc = 0.0;
  for (std::size_t j = 0; j < dims.size(); ++j) {
    if (dims[j] < 0) throw PreconditionError("dimensions must be non-negative");
    m += static_cast<std::size_t>(dims[j]);
    const std::size_t index = m + j + 1;  // 1-based M_{m_j + j}
    if (index > gaps.size()) {
      std::ostringstream os;
      os << "target gaps too short: level " << j + 1 << " needs M_" << index << ", " << gaps.size()
         << " supplied";
      throw PreconditionError(os.str());
    }
    acc += static_cast<double>(dims[j] + 1) * gaps[index - 1];
    out.push_back(acc);
  }
  return out;
}

ApcNormalized apc_normalize(const FiniteMetricSpace& space, const DimSequenceWitness& w,
                            const std::vector<double>& gaps) {
  if (w.dims.size() != w.families.size()) throw PreconditionError("dims and families differ in length");
  const auto radii = apc_normalize_scales(w.dims, gaps);
  if (!w.scales.empty()) {
    if (w.scales.size() != radii.size()) throw PreconditionError("scale bookkeeping mismatch: wrong number of scales");
    for (std::size_t i = 0; i < radii.size(); ++i) {
      if (std::abs(w.scales[i] - radii[i]) > 1e-9 * std::max(1.0, radii[i])) {
        std::ostringstream os;
        os << "scale bookkeeping mismatch at level " << i + 1 << ": supplied " << w.scales[i] << ", expected "
           << radii[i];
        throw PreconditionError(os.str());
      }
    }
  }
  ApcNormalized out;
  PointSet covered;
  for (std::size_t i = 0; i < w.families.size(); ++i) {
    const Family& v = w.families[i];
    validate_family(space, v);
    const int d = dim_at_scale(space, v, radii[i]);
    if (d > w.dims[i]) {
      std::ostringstream os;
      os << "dimension certificate failure at level " << i + 1 << ": dim at scale " << radii[i] << " is " << d
         << " > " << w.dims[i];
      throw PreconditionError(os.str());
    }
    covered = set_union(covered, v.support());
    std::vector<Family> split(static_cast<std::size_t>(w.dims[i] + 1));
    if (v.size() > 0) {
      const auto res = make_disjoint(space, v.support(), v, radii[i], w.dims[i]);
      for (std::size_t s = 0; s < res.family.size(); ++s) {
        split[static_cast<std::size_t>(res.family.colors[s])].sets.push_back(res.family.sets[s]);
      }
    }
    for (std::size_t c = 0; c < split.size(); ++c) {
      out.witness.families.push_back(std::move(split[c]));
      out.origin.emplace_back(i, static_cast<int>(c));
    }
  }
  if (covered.size() != space.size()) throw PreconditionError("the levels do not jointly cover the space");
  out.witness.scales.assign(gaps.begin(), gaps.begin() + static_cast<std::ptrdiff_t>(out.witness.families.size()));
  out.witness.certify(space);
  return out;
}

ApcTransfer apc_pushforward(const CoarseMap& f, int n, const ControlFunction& control, const ApcWitness& w,
                            const std::vector<double>& targets) {
  if (n < 1) throw PreconditionError("n must be at least 1");
  const std::size_t m = w.families.size();
  const auto un = static_cast<std::size_t>(n);
  if (targets.size() != m * un) {
    std::ostringstream os;
    os << "scale bookkeeping mismatch: " << m << " input families and n=" << n << " need " << m * un
       << " target scales, got " << targets.size();
    throw PreconditionError(os.str());
  }
  check_increasing(targets, "target scales");
  const FiniteMetricSpace& x = *f.domain;
  const FiniteMetricSpace& y = *f.codomain;
  PointSet covered;
  for (const auto& fam : w.families) covered = set_union(covered, fam.support());
  if (covered.size() != x.size()) throw PreconditionError("input witness does not cover the domain");

  ApcTransfer out;
  for (std::size_t i = 0; i < m; ++i) {
    const double top = targets[(i + 1) * un - 1];  // R_{i n}
    const double r = static_cast<double>(n) * top;
    // Images within r of one point are pairwise closer than 2r.
    const double need = source_scale(x, control, control(2.0 * r));
    const auto check = is_r_disjoint(x, w.families[i], need);
    if (!check.disjoint) {
      std::ostringstream os;
      os << "input family " << i + 1 << " is not disjoint strictly above C(2 n R_" << (i + 1) * un
         << "), i.e. " << need << "-disjoint (points " << x.label(check.witness->first) << ", " << x.label(check.witness->second) << ")";
      throw PreconditionError(os.str());
    }
    std::vector<PointSet> images;
    for (const auto& u : w.families[i].sets) {
      if (!u.empty()) images.push_back(f.image(u));
    }
    std::sort(images.begin(), images.end());
    images.erase(std::unique(images.begin(), images.end()), images.end());
    Family image{images, {}};
    const PointSet zone = image.support();
    std::vector<Family> split(un);
    if (!images.empty()) {
      const int mult = dim_at_scale(y, zone, image, r) + 1;
      if (mult > n) {
        std::ostringstream os;
        os << "image of input family " << i + 1 << " has multiplicity " << mult << " > n=" << n << " at scale "
           << r;
        throw PreconditionError(os.str());
      }
      const auto res = make_disjoint(y, zone, image, r, n - 1);
      for (std::size_t s = 0; s < res.family.size(); ++s) {
        split[static_cast<std::size_t>(res.family.colors[s])].sets.push_back(res.family.sets[s]);
      }
    }
    for (std::size_t j = 0; j < un; ++j) {
      const std::size_t t = i * un + j;
      out.witness.families.push_back(std::move(split[j]));
      out.audit.push_back({t, i, top, targets[t]});
    }
  }
  out.witness.scales = targets;
  out.witness.certify(y);
  return out;
}

ApcTransfer apc_pullback(const CoarseMap& f, const ApcWitness& w, const std::vector<double>& targets,
                         double component_bound) {
  const std::size_t m = w.families.size();
  if (targets.size() != m) {
    std::ostringstream os;
    os << "scale bookkeeping mismatch: " << m << " families but " << targets.size() << " scales";
    throw PreconditionError(os.str());
  }
  if (m == 0) throw PreconditionError("empty witness");
  check_increasing(targets, "target scales");
  const FiniteMetricSpace& x = *f.domain;
  const double top = targets.back();
  ApcTransfer out;
  PointSet covered;
  for (std::size_t i = 0; i < m; ++i) {
    Family pre;
    try {
      pre = pullback_family(f, w.families[i], targets[i]);
    } catch (const PreconditionError& e) {
      std::ostringstream os;
      os << "family " << i + 1 << ": " << e.what();
      throw PreconditionError(os.str());
    }
    std::vector<PointSet> parts;
    for (const auto& p : pre.sets) {
      for (auto& c : r_components(x, p, top)) {
        const double dm = diameter(x, c);
        if (dm > component_bound) {
          std::ostringstream os;
          os << "unbounded component in family " << i + 1 << ": diameter " << dm << " exceeds bound "
             << component_bound;
          throw PreconditionError(os.str());
        }
        covered = set_union(covered, c);
        parts.push_back(std::move(c));
      }
    }
    out.witness.families.push_back(as_family(std::move(parts)));
    out.audit.push_back({i, i, targets[i], targets[i]});
  }
  if (covered.size() != x.size()) throw PreconditionError("the pulled-back families do not cover the domain");
  out.witness.scales = targets;
  out.witness.certify(x);
  return out;
}

}  // namespace coarse
