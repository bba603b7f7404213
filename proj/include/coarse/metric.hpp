#pragma once

// Finite metric spaces and the set-level primitives every other module uses.
//
// Three strictness conventions are used throughout the library and never mixed:
//   * neighborhood(A, R) is the open expansion {x : d(x, a) < R for some a in A}
//     together with A itself, so neighborhood(A, 0) == A;
//   * a family is R-disjoint when distinct members are at distance >= R;
//   * R-chains (and therefore R-components) take steps of length <= R.
// All comparisons are exact comparisons on the stored doubles.

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace coarse {

using PointId = std::size_t;

/// Sorted, duplicate-free list of point indices of one space.
using PointSet = std::vector<PointId>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an ingested descriptor does not describe a metric space.
class MetricError : public Error {
 public:
  using Error::Error;
};

/// Raised when an operation's documented precondition does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

enum class Norm { kL1, kL2, kLinf };

struct WeightedEdge {
  PointId u = 0;
  PointId v = 0;
  double weight = 0.0;
};

class FiniteMetricSpace {
 public:
  FiniteMetricSpace() = default;

  /// Explicit distance matrix. Checks symmetry, zero diagonal, positivity off
  /// the diagonal and (for up to kTriangleCheckLimit points) every triangle.
  static FiniteMetricSpace from_matrix(std::vector<std::string> labels,
                                       const std::vector<std::vector<double>>& matrix);
  static FiniteMetricSpace from_cloud(std::vector<std::string> labels,
                                      const std::vector<std::vector<double>>& coords, Norm norm);
  /// Shortest-path metric of a connected undirected graph with positive weights.
  static FiniteMetricSpace from_graph(std::vector<std::string> labels,
                                      const std::vector<WeightedEdge>& edges);

  /// Points of the real line at the given coordinates, labelled by coordinate.
  static FiniteMetricSpace on_line(const std::vector<double>& coords);
  /// The integers lo..hi with the usual metric.
  static FiniteMetricSpace integer_interval(long lo, long hi);
  /// Unit-edge cycle graph on n vertices labelled 0..n-1.
  static FiniteMetricSpace cycle(std::size_t n);

  static constexpr std::size_t kTriangleCheckLimit = 512;

  std::size_t size() const { return n_; }
  double dist(PointId a, PointId b) const { return d_[a * n_ + b]; }
  const std::string& label(PointId i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }
  /// Index of a label, or size() when absent.
  PointId index_of(const std::string& label) const;

  PointSet all() const;
  double diameter() const;
  /// Distinct pairwise distances in increasing order, including 0.
  std::vector<double> distinct_distances() const;
  const std::vector<double>& matrix() const { return d_; }

 private:
  FiniteMetricSpace(std::vector<std::string> labels, std::vector<double> d);
  void validate() const;

  std::size_t n_ = 0;
  std::vector<std::string> labels_;
  std::vector<double> d_;
};

/// Integral values without a decimal point, others with 17 significant digits.
std::string format_number(double v);

// ---- subset algebra (inputs and outputs are sorted PointSets) ----

PointSet make_set(std::vector<PointId> members);
PointSet set_union(const PointSet& a, const PointSet& b);
PointSet set_intersection(const PointSet& a, const PointSet& b);
PointSet set_difference(const PointSet& a, const PointSet& b);
bool is_subset(const PointSet& a, const PointSet& b);
bool contains(const PointSet& a, PointId x);
/// Throws PreconditionError unless every member indexes a point of `space`.
void check_subset(const FiniteMetricSpace& space, const PointSet& a);

// ---- metric operations ----

PointSet neighborhood(const FiniteMetricSpace& space, const PointSet& a, double radius);
/// Points of `a` whose open radius-ball (in the ambient space) stays inside `a`.
PointSet inner_neighborhood(const FiniteMetricSpace& space, const PointSet& a, double radius);
/// Throws PreconditionError on empty input.
double hausdorff_distance(const FiniteMetricSpace& space, const PointSet& a, const PointSet& b);
/// Throws PreconditionError on empty input; 0 for singletons.
double diameter(const FiniteMetricSpace& space, const PointSet& a);
/// Smallest distance between a point of `a` and a point of `b`; +inf when either is empty.
double set_distance(const FiniteMetricSpace& space, const PointSet& a, const PointSet& b);
/// Distance from x to the set; +inf for the empty set.
double point_set_distance(const FiniteMetricSpace& space, PointId x, const PointSet& a);

/// Classes of the transitive closure of d <= R on `a`, ordered by least member.
std::vector<PointSet> r_components(const FiniteMetricSpace& space, const PointSet& a, double radius);
/// Classes of the transitive closure of d < R. Two points in different classes
/// are at distance >= R, so these are the finest R-disjoint grouping of `a`.
std::vector<PointSet> open_components(const FiniteMetricSpace& space, const PointSet& a,
                                      double radius);

}  // namespace coarse
