#pragma once

// Exact small-instance search primitives shared by the transfer modules.

#include <cstdint>
#include <optional>
#include <vector>

#include "coarse/metric.hpp"

namespace coarse {

/// Search limits. Defaults follow the documented CLI defaults.
struct SearchLimits {
  std::size_t clique_cap = 64;        // exact maximal-subset enumeration up to this many points
  std::size_t exact_cap = 16;         // exhaustive partition / cover searches up to this size
  std::uint64_t node_budget = 1000000;
  std::size_t max_cliques = 4096;     // beyond this, closed balls stand in for maximal subsets
};

/// Maximal subsets of `domain` whose pairwise distances are all <= r
/// (maximal cliques of the threshold graph), each sorted, listed in
/// lexicographic order.
std::vector<PointSet> maximal_bounded_subsets(const FiniteMetricSpace& space, const PointSet& domain,
                                              double r);
/// Same, or nullopt once more than `max_sets` subsets turn up.
std::optional<std::vector<PointSet>> maximal_bounded_subsets(const FiniteMetricSpace& space,
                                                             const PointSet& domain, double r,
                                                             std::size_t max_sets);

/// Closed r-balls around each point of `domain`, restricted to `domain`.
/// Every r-bounded subset lies in one of them.
std::vector<PointSet> closed_balls(const FiniteMetricSpace& space, const PointSet& domain, double r);

struct BoundedSubsets {
  std::vector<PointSet> sets;
  /// False when the clique cap forced the ball cover (sets of diameter up to 2r).
  bool exact = true;
};

BoundedSubsets bounded_subsets(const FiniteMetricSpace& space, const PointSet& domain, double r,
                               const SearchLimits& limits = {});

/// Partition of `points` into at most `parts` blocks of diameter <= cap, found by
/// exact backtracking (coloring of the d > cap conflict graph). nullopt when
/// impossible. `exhausted` is set when the node budget ran out first.
std::optional<std::vector<PointSet>> partition_bounded(const FiniteMetricSpace& space,
                                                       const PointSet& points, std::size_t parts,
                                                       double cap, std::uint64_t node_budget,
                                                       bool* exhausted = nullptr);

struct MinMaxPartition {
  double max_diameter = 0.0;
  std::vector<PointSet> blocks;
  bool exact = true;
};

/// Minimum over partitions of `points` into <= parts blocks of the largest
/// block diameter. Exact for |points| <= exact_cap; above that the smallest
/// R whose R-components number <= parts is used and `exact` is false.
MinMaxPartition min_max_partition(const FiniteMetricSpace& space, const PointSet& points,
                                  std::size_t parts, const SearchLimits& limits = {});

/// Dense LP: minimize c.x subject to A x >= b, x >= 0 (b >= 0, A >= 0, every
/// row with a positive entry). Returns the optimal value and solution.
struct CoveringLpResult {
  double value = 0.0;
  std::vector<double> x;
  std::vector<double> dual;  // optimal packing weights, one per row of A
};
CoveringLpResult solve_covering_lp(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                                   const std::vector<double>& c);

}  // namespace coarse
