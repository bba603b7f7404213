#include "coarse/msp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

namespace coarse {

ProbMeasure ProbMeasure::make(std::vector<double> weights, std::size_t points) {
  if (weights.size() != points) {
    throw PreconditionError("measure has " + std::to_string(weights.size()) + " weights for " +
                            std::to_string(points) + " points");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw PreconditionError("measure weights must be finite and non-negative");
    sum += w;
  }
  if (!(sum > 0.0)) throw PreconditionError("measure has zero total mass");
  ProbMeasure out;
  if (std::fabs(sum - 1.0) > 1e-9) {
    for (double& w : weights) w /= sum;
    out.renormalized = true;
  }
  out.weights = std::move(weights);
  return out;
}

ProbMeasure ProbMeasure::uniform(std::size_t points) {
  ProbMeasure out;
  out.weights.assign(points, 1.0 / static_cast<double>(points));
  return out;
}

ProbMeasure ProbMeasure::uniform_on(std::size_t points, const PointSet& support) {
  if (support.empty()) throw PreconditionError("empty support");
  ProbMeasure out;
  out.weights.assign(points, 0.0);
  for (PointId p : support) out.weights[p] = 1.0 / static_cast<double>(support.size());
  return out;
}

ProbMeasure ProbMeasure::point_mass(std::size_t points, PointId x) {
  ProbMeasure out;
  out.weights.assign(points, 0.0);
  out.weights.at(x) = 1.0;
  return out;
}

double ProbMeasure::mass(const PointSet& a) const {
  double m = 0.0;
  for (PointId p : a) m += weights[p];
  return m;
}

double ProbMeasure::total() const {
  double m = 0.0;
  for (double w : weights) m += w;
  return m;
}

PointSet ProbMeasure::support() const {
  PointSet out;
  for (PointId p = 0; p < weights.size(); ++p) {
    if (weights[p] > 0.0) out.push_back(p);
  }
  return out;
}

namespace {

Family sorted_family(std::vector<PointSet> sets) {
  std::sort(sets.begin(), sets.end());
  return Family{std::move(sets), {}};
}

double family_mass(const ProbMeasure& mu, const Family& f) { return mu.mass(f.support()); }

// Subsets of `points` (bitmasks) whose open R-components are all S-bounded.
class FeasibleUnions {
 public:
  FeasibleUnions(const FiniteMetricSpace& space, const PointSet& points, double radius, double bound)
      : k_(points.size()), near_(k_, 0), far_(k_, 0) {
    for (std::size_t i = 0; i < k_; ++i) {
      for (std::size_t j = 0; j < k_; ++j) {
        if (i == j) continue;
        const double d = space.dist(points[i], points[j]);
        if (d < radius) near_[i] |= (1u << j);
        if (d > bound) far_[i] |= (1u << j);
      }
    }
  }

  bool feasible(std::uint32_t mask) const {
    std::uint32_t left = mask;
    while (left) {
      std::uint32_t comp = left & (~left + 1);
      std::uint32_t frontier = comp;
      while (frontier) {
        const std::size_t i = static_cast<std::size_t>(__builtin_ctz(frontier));
        frontier &= frontier - 1;
        const std::uint32_t grow = near_[i] & mask & ~comp;
        comp |= grow;
        frontier |= grow;
      }
      for (std::uint32_t c = comp; c; c &= c - 1) {
        if (far_[static_cast<std::size_t>(__builtin_ctz(c))] & comp) return false;
      }
      left &= ~comp;
    }
    return true;
  }

 private:
  std::size_t k_;
  std::vector<std::uint32_t> near_;
  std::vector<std::uint32_t> far_;
};

PointSet from_mask(const PointSet& points, std::uint32_t mask) {
  PointSet out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if ((mask >> i) & 1u) out.push_back(points[i]);
  }
  return out;
}

}  // namespace

MassFamily greedy_mass_family(const FiniteMetricSpace& space, const PointSet& domain, const ProbMeasure& mu,
                              double radius, double bound) {
  MassFamily out;
  out.radius = radius;
  out.bound = bound;
  out.exact = false;
  PointSet avail = domain;
  std::vector<PointSet> chosen;
  while (!avail.empty()) {
    PointSet best;
    double best_mass = 0.0;
    for (PointId c : avail) {
      std::vector<PointId> order = avail;
      std::stable_sort(order.begin(), order.end(),
                       [&](PointId a, PointId b) { return space.dist(c, a) < space.dist(c, b); });
      PointSet cand;
      for (PointId y : order) {
        bool ok = true;
        for (PointId z : cand) {
          if (space.dist(y, z) > bound) {
            ok = false;
            break;
          }
        }
        if (ok) cand.push_back(y);
      }
      cand = make_set(std::move(cand));
      const double m = mu.mass(cand);
      if (m > best_mass) {
        best_mass = m;
        best = std::move(cand);
      }
    }
    if (best.empty()) break;
    PointSet next;
    for (PointId y : avail) {
      if (!contains(best, y) && point_set_distance(space, y, best) >= radius) next.push_back(y);
    }
    chosen.push_back(std::move(best));
    avail = std::move(next);
  }
  out.family = sorted_family(std::move(chosen));
  out.mass = family_mass(mu, out.family);
  return out;
}

MassFamily best_mass_family(const FiniteMetricSpace& space, const PointSet& domain, const ProbMeasure& mu,
                            double radius, double bound, const SearchLimits& limits) {
  if (radius < 0.0 || bound < 0.0) throw PreconditionError("R and S must be non-negative");
  if (mu.weights.size() != space.size()) throw PreconditionError("measure does not match the space");
  if (domain.size() > limits.exact_cap || domain.size() > 31) {
    return greedy_mass_family(space, domain, mu, radius, bound);
  }
  const std::size_t k = domain.size();
  const FeasibleUnions feas(space, domain, radius, bound);
  const std::uint32_t full = k == 0 ? 0u : static_cast<std::uint32_t>((std::uint64_t{1} << k) - 1);
  std::vector<double> mass(static_cast<std::size_t>(full) + 1, 0.0);
  std::uint32_t best = 0;
  double best_mass = 0.0;
  for (std::uint32_t mask = 1; mask <= full && mask != 0; ++mask) {
    const std::uint32_t low = mask & (~mask + 1);
    mass[mask] = mass[mask & (mask - 1)] + mu.weights[domain[static_cast<std::size_t>(__builtin_ctz(low))]];
    if (mass[mask] > best_mass && feas.feasible(mask)) {
      best_mass = mass[mask];
      best = mask;
    }
  }
  MassFamily out;
  out.radius = radius;
  out.bound = bound;
  out.family = sorted_family(open_components(space, from_mask(domain, best), radius));
  out.mass = family_mass(mu, out.family);
  return out;
}

MassFamily best_mass_family(const FiniteMetricSpace& space, const ProbMeasure& mu, double radius, double bound,
                            const SearchLimits& limits) {
  return best_mass_family(space, space.all(), mu, radius, bound, limits);
}

MassFamily min_bound_for_mass(const FiniteMetricSpace& space, const PointSet& domain, const ProbMeasure& mu,
                              double radius, double threshold, const SearchLimits& limits) {
  std::vector<double> cand{0.0};
  for (std::size_t i = 0; i < domain.size(); ++i) {
    for (std::size_t j = i + 1; j < domain.size(); ++j) cand.push_back(space.dist(domain[i], domain[j]));
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  auto at = [&](std::size_t i) { return best_mass_family(space, domain, mu, radius, cand[i], limits); };
  MassFamily top = at(cand.size() - 1);
  if (!(top.mass > threshold)) {
    std::ostringstream os;
    os << "mass threshold " << threshold << " unattainable: the whole domain carries " << top.mass;
    throw PreconditionError(os.str());
  }
  std::size_t lo = 0;
  std::size_t hi = cand.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    MassFamily m = at(mid);
    if (m.mass > threshold) {
      hi = mid;
      top = std::move(m);
    } else {
      lo = mid + 1;
    }
  }
  return top;
}

AsdimMsp asdim_to_msp(const FiniteMetricSpace& space, const Family& cover, double radius, const ProbMeasure& mu) {
  validate_family(space, cover);
  if (mu.weights.size() != space.size()) throw PreconditionError("measure does not match the space");
  if (const auto x = uncovered_point(cover, space.all())) {
    throw PreconditionError("invalid cover certificate: point " + space.label(*x) + " is not covered");
  }
  const auto check = colors_r_disjoint(space, cover, radius);
  if (!check.disjoint) {
    throw PreconditionError("invalid cover certificate: a color class is not R-disjoint (points " +
                            space.label(check.witness->first) + ", " + space.label(check.witness->second) + ")");
  }
  AsdimMsp out;
  out.colors = cover.color_count();
  out.guaranteed = 1.0 / out.colors;
  const double s = cover.size() == 0 ? 0.0 : mesh(space, cover);
  out.best.mass = -1.0;
  for (int c = 0; c < out.colors; ++c) {
    Family cls = cover.colored() ? cover.color_class(c) : Family{cover.sets, {}};
    const double m = family_mass(mu, cls);
    if (m > out.best.mass) {
      out.best.family = std::move(cls);
      out.best.mass = m;
    }
  }
  out.best.radius = radius;
  out.best.bound = s;
  out.holds = out.best.mass >= out.guaranteed - kMassSlack;
  out.at_bound = std::fabs(out.best.mass - out.guaranteed) <= kMassSlack;
  return out;
}

std::vector<PointId> least_selection(const CoarseMap& f) {
  std::vector<PointId> sel(f.codomain->size(), f.domain->size());
  for (PointId x = f.domain->size(); x-- > 0;) sel[f(x)] = x;
  for (PointId y = 0; y < sel.size(); ++y) {
    if (sel[y] == f.domain->size()) throw PreconditionError("map is not surjective: " + f.codomain->label(y) + " has no preimage");
  }
  return sel;
}

ProbMeasure transfer_measure_selection(const CoarseMap& f, const ProbMeasure& mu,
                                       const std::vector<PointId>& selection) {
  if (mu.weights.size() != f.codomain->size()) throw PreconditionError("measure does not match the codomain");
  if (!f.surjective()) throw PreconditionError("map is not surjective");
  if (selection.size() != f.codomain->size()) throw PreconditionError("selection must pick one point per codomain point");
  ProbMeasure out;
  out.weights.assign(f.domain->size(), 0.0);
  for (PointId y = 0; y < selection.size(); ++y) {
    if (selection[y] >= f.domain->size() || f(selection[y]) != y) {
      throw PreconditionError("selection is not a right inverse at " + f.codomain->label(y));
    }
    out.weights[selection[y]] += mu.weights[y];
  }
  return out;
}

ProbMeasure pushforward_measure(const CoarseMap& f, const ProbMeasure& mu) {
  if (mu.weights.size() != f.domain->size()) throw PreconditionError("measure does not match the domain");
  ProbMeasure out;
  out.weights.assign(f.codomain->size(), 0.0);
  for (PointId x = 0; x < f.domain->size(); ++x) out.weights[f(x)] += mu.weights[x];
  return out;
}

MspPush msp_pushforward(const CoarseMap& f, int n, const ControlFunction& control, const ProbMeasure& mu,
                        double radius, const std::optional<MassFamily>& witness,
                        const std::vector<PointId>& selection, const SearchLimits& limits) {
  if (n < 1) throw PreconditionError("n must be at least 1");
  if (!(radius > 0.0)) throw PreconditionError("R must be positive");
  const FiniteMetricSpace& x = *f.domain;
  const FiniteMetricSpace& y = *f.codomain;
  MspPush out;
  out.transferred = transfer_measure_selection(f, mu, selection.empty() ? least_selection(f) : selection);
  const double big = static_cast<double>(n) * radius;
  out.witness_radius = source_scale(x, control, control(2.0 * big));
  if (witness) {
    validate_family(x, witness->family);
    const auto check = is_r_disjoint(x, witness->family, out.witness_radius);
    if (!check.disjoint) {
      std::ostringstream os;
      os << "witness certificate failure: not " << out.witness_radius << "-disjoint";
      throw PreconditionError(os.str());
    }
    if (witness->family.size() > 0 && mesh(x, witness->family) > witness->bound) {
      throw PreconditionError("witness certificate failure: a set exceeds the bound B");
    }
    out.witness = *witness;
    out.witness.radius = out.witness_radius;
    out.witness.mass = family_mass(out.transferred, witness->family);
    if (out.witness.mass < 0.5 - kMassSlack) {
      std::ostringstream os;
      os << "witness certificate failure: transferred mass " << out.witness.mass << " is below 1/2";
      throw PreconditionError(os.str());
    }
  } else {
    out.witness = min_bound_for_mass(x, x.all(), out.transferred, out.witness_radius, 0.5, limits);
  }
  const double b = out.witness.bound;
  const double eb = control_upper(f)(b);
  out.stated_bound = eb + big;
  out.construction_bound = eb + 2.0 * big;
  out.guaranteed = 1.0 / (2.0 * n);

  std::vector<PointSet> images;
  for (const auto& s : out.witness.family.sets) images.push_back(f.image(s));
  std::sort(images.begin(), images.end());
  images.erase(std::unique(images.begin(), images.end()), images.end());
  const Family image{images, {}};
  const PointSet zone = image.support();
  const int mult = dim_at_scale(y, zone, image, big) + 1;
  if (mult > n) {
    std::ostringstream os;
    os << "image family has multiplicity " << mult << " > n=" << n << " at scale " << big;
    throw PreconditionError(os.str());
  }
  const auto split = make_disjoint(y, zone, image, big, n - 1).family;
  out.colors = split.color_count();
  out.constructed.mass = -1.0;
  for (int c = 0; c < out.colors; ++c) {
    Family cls = split.color_class(c);
    const double m = family_mass(mu, cls);
    if (m > out.constructed.mass) {
      out.constructed.family = std::move(cls);
      out.constructed.mass = m;
    }
  }
  out.constructed.radius = radius;
  out.constructed.bound = out.construction_bound;
  out.result = out.constructed;
  if (mesh(y, out.constructed.family) > out.stated_bound) {
    auto searched = best_mass_family(y, mu, radius, out.stated_bound, limits);
    if (searched.mass >= out.guaranteed - kMassSlack) {
      out.result = std::move(searched);
      out.from_search = true;
    }
  }
  out.result.radius = radius;
  out.result.bound = out.stated_bound;
  out.mesh = mesh(y, out.result.family);
  out.disjoint = is_r_disjoint(y, out.result.family, radius).disjoint;
  out.mass_holds = out.result.mass >= out.guaranteed - kMassSlack;
  out.at_bound = std::fabs(out.result.mass - out.guaranteed) <= kMassSlack;
  out.mesh_holds = out.mesh <= out.stated_bound;
  return out;
}

MspPull msp_pullback(const CoarseMap& f, const ProbMeasure& mu, double radius, const MspPullOptions& options,
                     const SearchLimits& limits) {
  if (!(radius > 0.0)) throw PreconditionError("R_X must be positive");
  const FiniteMetricSpace& x = *f.domain;
  const FiniteMetricSpace& y = *f.codomain;
  if (mu.weights.size() != x.size()) throw PreconditionError("measure does not match the domain");
  MspPull out;
  out.y_radius = options.y_radius ? *options.y_radius : strict_scale_above(y, control_upper(f)(radius));
  if (!(out.y_radius > control_upper(f)(radius))) {
    throw PreconditionError("R_Y must exceed E(R_X) so that R_X-chains never join distinct Y components");
  }
  const ProbMeasure lambda = pushforward_measure(f, mu);
  if (options.y_bound) {
    out.y_family = best_mass_family(y, lambda, out.y_radius, *options.y_bound, limits);
  } else {
    out.y_family = min_bound_for_mass(y, y.all(), lambda, out.y_radius, 0.5, limits);
  }
  out.y_bound = out.y_family.bound;
  out.lambda_mass = out.y_family.mass;
  if (out.lambda_mass < 0.5 - kMassSlack) {
    std::ostringstream os;
    os << "Y stage: mass " << out.lambda_mass << " is below 1/2";
    throw PreconditionError(os.str());
  }
  // Fiber families are made strictly more than R_X apart so their R_X-components are the sets.
  const double fiber_radius = strict_scale_above(x, radius);
  PointSet omega;
  for (const auto& comp : out.y_family.family.sets) {
    MspPullStage stage;
    stage.component = comp;
    const PointSet fiber = f.preimage(comp);
    stage.fiber_mass = mu.mass(fiber);
    if (!(stage.fiber_mass > 0.0)) continue;
    ProbMeasure local;
    local.weights.assign(x.size(), 0.0);
    for (PointId p : fiber) local.weights[p] = mu.weights[p] / stage.fiber_mass;
    MassFamily found = options.fiber_bound
                           ? best_mass_family(x, fiber, local, fiber_radius, *options.fiber_bound, limits)
                           : min_bound_for_mass(x, fiber, local, fiber_radius, 0.5, limits);
    if (found.mass < 0.5 - kMassSlack) {
      std::ostringstream os;
      os << "fiber stage over component " << out.stages.size() << ": relative mass " << found.mass
         << " is below 1/2";
      throw PreconditionError(os.str());
    }
    const PointSet part = found.family.support();
    stage.found_mass = mu.mass(part);
    stage.bound = found.bound;
    out.component_bound = std::max(out.component_bound, found.bound);
    omega = set_union(omega, part);
    out.stages.push_back(std::move(stage));
  }
  out.result.radius = radius;
  out.result.bound = out.component_bound;
  out.result.family = sorted_family(r_components(x, omega, radius));
  out.result.mass = mu.mass(omega);
  for (const auto& c : out.result.family.sets) {
    if (diameter(x, c) > out.component_bound) out.components_bounded = false;
  }
  out.mass_holds = out.result.mass >= 0.25 - kMassSlack;
  out.at_bound = std::fabs(out.result.mass - 0.25) <= kMassSlack;
  return out;
}

MapMspCheck map_msp_check(const CoarseMap& f, const PointSet& a, double radius, double bound, double c, double k,
                          const SearchLimits& limits) {
  if (radius < 0.0 || bound < 0.0 || k < 0.0) throw PreconditionError("R, S and K must be non-negative");
  if (!(c > 0.0 && c < 1.0)) throw PreconditionError("c must lie strictly between 0 and 1");
  check_subset(*f.codomain, a);
  const FiniteMetricSpace& x = *f.domain;
  constexpr std::size_t kExactGame = 12;
  MapMspCheck out;
  out.game_value = 1.0;
  const auto blocks = bounded_subsets(*f.codomain, a, k, limits);
  if (!blocks.exact) out.exact = false;
  for (const auto& block : blocks.sets) {
    const PointSet q = f.preimage(block);
    if (q.empty()) continue;
    double value = 1.0;
    std::vector<double> worst(x.size(), 0.0);
    if (q.size() <= kExactGame) {
      const FeasibleUnions feas(x, q, radius, bound);
      const std::uint32_t full = static_cast<std::uint32_t>((1u << q.size()) - 1);
      std::vector<std::uint32_t> ok;
      for (std::uint32_t mask = 1; mask <= full; ++mask) {
        if (feas.feasible(mask)) ok.push_back(mask);
      }
      std::vector<std::uint32_t> maximal;
      for (std::uint32_t m : ok) {
        bool dominated = false;
        for (std::uint32_t o : ok) {
          if (o != m && (o & m) == m) {
            dominated = true;
            break;
          }
        }
        if (!dominated) maximal.push_back(m);
      }
      out.feasible_unions += maximal.size();
      std::vector<std::vector<double>> rows(q.size(), std::vector<double>(maximal.size(), 0.0));
      for (std::size_t i = 0; i < q.size(); ++i) {
        for (std::size_t j = 0; j < maximal.size(); ++j) rows[i][j] = (maximal[j] >> i) & 1u ? 1.0 : 0.0;
      }
      const auto lp = solve_covering_lp(rows, std::vector<double>(q.size(), 1.0),
                                        std::vector<double>(maximal.size(), 1.0));
      value = 1.0 / lp.value;
      for (std::size_t i = 0; i < q.size(); ++i) worst[q[i]] = lp.dual[i] / lp.value;
    } else {
      out.exact = false;
      out.inconclusive = true;
      std::vector<ProbMeasure> samples{ProbMeasure::uniform_on(x.size(), q)};
      std::vector<std::pair<double, std::pair<PointId, PointId>>> pairs;
      for (std::size_t i = 0; i < q.size(); ++i) {
        for (std::size_t j = i + 1; j < q.size(); ++j) pairs.push_back({-x.dist(q[i], q[j]), {q[i], q[j]}});
      }
      std::sort(pairs.begin(), pairs.end());
      for (std::size_t i = 0; i < pairs.size() && i < 8; ++i) {
        samples.push_back(ProbMeasure::uniform_on(x.size(), make_set({pairs[i].second.first, pairs[i].second.second})));
      }
      for (const auto& mu : samples) {
        const double m = best_mass_family(x, q, mu, radius, bound, limits).mass;
        if (m < value) {
          value = m;
          worst = mu.weights;
        }
      }
    }
    if (value < out.game_value || out.worst_support.empty()) {
      if (value <= out.game_value) {
        out.game_value = value;
        out.worst_support = q;
        out.worst_measure = worst;
      }
    }
  }
  out.at_bound = std::fabs(out.game_value - c) <= kMassSlack;
  out.achievable = out.game_value > c && !out.at_bound;
  return out;
}

}  // namespace coarse
