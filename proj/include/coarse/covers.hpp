#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "coarse/metric.hpp"

namespace coarse {

/// Indexed collection of subsets of one space. When `colors` is non-empty it
/// has one entry per set and groups the sets into subfamilies 0..k-1.
struct Family {
  std::vector<PointSet> sets;
  std::vector<int> colors;

  std::size_t size() const { return sets.size(); }
  bool colored() const { return !colors.empty(); }
  /// Number of colors (max color + 1), or 1 for an uncolored non-empty family.
  int color_count() const;
  /// Sets carrying color c, in index order.
  Family color_class(int c) const;
  PointSet support() const;

  bool operator==(const Family&) const = default;
};

/// Throws PreconditionError when a set is out of range or unsorted, or when
/// the colors are not a contiguous range starting at 0.
void validate_family(const FiniteMetricSpace& space, const Family& family);

bool covers(const Family& family, const PointSet& domain);
/// First point of `domain` lying in no member, if any.
std::optional<PointId> uncovered_point(const Family& family, const PointSet& domain);

/// Nerve dimension of {B(U, R)}: max point multiplicity minus one, -1 when empty.
/// Expansions are taken inside `domain` (the whole space by default).
int dim_at_scale(const FiniteMetricSpace& space, const Family& family, double radius);
int dim_at_scale(const FiniteMetricSpace& space, const PointSet& domain, const Family& family,
                 double radius);

struct DisjointnessCheck {
  bool disjoint = true;
  /// On failure, a pair of points from different members at distance < R.
  std::optional<std::pair<PointId, PointId>> witness;
  /// Smallest distance between points of distinct members (+inf if none).
  double min_gap = kInfinity;
};

DisjointnessCheck is_r_disjoint(const FiniteMetricSpace& space, const Family& family, double radius);
/// Checks each color class separately; uncolored families are one class.
DisjointnessCheck colors_r_disjoint(const FiniteMetricSpace& space, const Family& family, double radius);

/// Largest member diameter; 0 for an empty family.
double mesh(const FiniteMetricSpace& space, const Family& family);

/// Largest L with every open L-ball inside some member; +inf when a member is
/// the whole space. Throws PreconditionError when the family is not a cover.
double lebesgue_number(const FiniteMetricSpace& space, const Family& family);

/// Audit record of the multiplicity-to-disjointness construction.
struct DisjointificationTrace {
  double radius = 0.0;
  int n = 0;
  PointSet domain;
  /// level_values[s][k] = dist(domain[k], domain \ B(U_s, R)), +inf if that complement is empty.
  std::vector<std::vector<double>> level_values;
  /// Every nonempty W_T keyed by the sorted index set T.
  std::map<std::vector<std::size_t>, PointSet> w_sets;
  /// B(W_T, -R/(2n+2)) for every nonempty W_T.
  std::map<std::vector<std::size_t>, PointSet> inner_sets;
  /// Output set index -> the index set T that produced it.
  std::vector<std::vector<std::size_t>> output_index_sets;
};

struct DisjointifyResult {
  Family family;  // colored 0..n
  DisjointificationTrace trace;
};

/// Splits a cover of R-dimension <= n into n+1 color classes, each
/// R/(n+1)-disjoint, every output set lying in the intersection of the
/// R-expansions of the members indexed by its T. Negative n means "use
/// dim_at_scale". Throws PreconditionError when the family does not cover,
/// R <= 0, or the R-dimension exceeds n.
DisjointifyResult make_disjoint(const FiniteMetricSpace& space, const Family& cover, double radius,
                                int n = -1);
/// Same construction inside the subspace `domain`, which the cover must cover.
DisjointifyResult make_disjoint(const FiniteMetricSpace& space, const PointSet& domain,
                                const Family& cover, double radius, int n = -1);

}  // namespace coarse
