#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "coarse/covers.hpp"
#include "coarse/metric.hpp"
#include "coarse/search.hpp"

namespace coarse {

/// Nondecreasing control function on [0, inf). Either a right-constant step
/// function through sorted breakpoints (value 0 before the first one) or an
/// affine function slope * r + offset.
class ControlFunction {
 public:
  struct Breakpoint {
    double r = 0.0;
    double value = 0.0;
  };

  ControlFunction() = default;
  static ControlFunction step(std::vector<Breakpoint> breakpoints);
  static ControlFunction affine(double slope, double offset);
  static ControlFunction identity() { return affine(1.0, 0.0); }
  static ControlFunction zero() { return affine(0.0, 0.0); }

  double operator()(double r) const;
  bool is_affine() const { return affine_; }
  const std::vector<Breakpoint>& breakpoints() const { return points_; }
  double slope() const { return slope_; }
  double offset() const { return offset_; }

  /// Set when values are infima of admissible bounds and the strict bound
  /// "diameter < C(r)" needs any value above the reported one.
  bool strict = false;
  /// Set when some value came from the component relaxation rather than an
  /// exact partition search.
  bool relaxed = false;

 private:
  bool affine_ = true;
  double slope_ = 0.0;
  double offset_ = 0.0;
  std::vector<Breakpoint> points_;
};

using SpacePtr = std::shared_ptr<const FiniteMetricSpace>;

/// A function between finite spaces, stored as the codomain index of each
/// domain point.
struct CoarseMap {
  SpacePtr domain;
  SpacePtr codomain;
  std::vector<PointId> assign;

  static CoarseMap make(SpacePtr domain, SpacePtr codomain, std::vector<PointId> assign);
  static CoarseMap identity(SpacePtr space);

  PointId operator()(PointId x) const { return assign[x]; }
  PointSet image(const PointSet& a) const;
  PointSet image() const { return image(domain->all()); }
  PointSet preimage(const PointSet& b) const;
  bool surjective() const;
};

/// E(r) = max{ d_Y(f x, f y) : d_X(x, y) <= r }, breakpoints at realized domain distances.
ControlFunction control_upper(const CoarseMap& f);
/// The strict variant max{ d_Y(f x, f y) : d_X(x, y) < r }.
double control_upper_open(const CoarseMap& f, double r);

/// {f^{-1}(V)} with empty preimages dropped. Throws PreconditionError naming a
/// violating pair when V is not E(d)-disjoint or when the preimages are not
/// d-disjoint (the latter only at the boundary where some image distance equals E(d)).
Family pullback_family(const CoarseMap& f, const Family& family, double d);

struct NToOneProfile {
  std::size_t max_components = 0;
  double max_component_diameter = 0.0;
  /// The maximal r-bounded subset realizing max_components.
  PointSet worst_subset;
  bool exact = true;
};

/// Worst case over maximal r-bounded B in the codomain of the number of
/// R-components of f^{-1}(B) and their largest diameter.
NToOneProfile n_to_1_profile(const CoarseMap& f, double r, double big_r, const SearchLimits& limits = {});

struct NToOneControl {
  ControlFunction control;  // strict infimum values, breakpoints at realized codomain distances
  bool refused = false;
  PointSet refusal_witness;
  double refusal_scale = 0.0;
};

/// For each realized codomain distance r, the least C such that every maximal
/// r-bounded B has f^{-1}(B) splitting into <= n parts of diameter <= C.
/// Refuses (with the witness B) when some value exceeds `cap`.
NToOneControl n_to_1_control(const CoarseMap& f, int n, double cap = kInfinity,
                             const SearchLimits& limits = {});

struct NToOneVerification {
  bool holds = true;
  PointSet witness;  // offending maximal bounded subset
  double scale = 0.0;
  bool exact = true;
};

/// Checks that every r-bounded subset of the codomain has preimage splitting
/// into <= n parts of diameter <= bound.
NToOneVerification verify_n_to_1(const CoarseMap& f, int n, double r, double bound,
                                 const SearchLimits& limits = {});

/// Scale at which the dimension of the source cover is evaluated for a control
/// value c: the smallest realized domain distance above c (c + 1 if none), so
/// that parts of diameter <= c fall strictly inside the expansion radius.
double strict_scale_above(const FiniteMetricSpace& space, double c);

/// Largest part diameter a control value c certifies: c itself for strict
/// controls, otherwise the largest realized distance below c.
double part_cap(const FiniteMetricSpace& space, const ControlFunction& control, double c);
/// Expansion radius at which parts of diameter <= part_cap touch every member they meet.
double source_scale(const FiniteMetricSpace& space, const ControlFunction& control, double c);

struct PushforwardCover {
  Family image;               // f(U), on the codomain
  int source_dim = 0;         // dim at scale of the control value (strictly above C(r))
  double source_scale = 0.0;
  int image_dim = 0;          // dim_r(f(U)) inside f(X)
  int bound = 0;              // (source_dim + 1) * n - 1
  bool holds = true;
};

/// f(U) with the multiplicity bound evaluated. Throws PreconditionError when
/// U does not cover X or the n-to-1 control fails at scale r.
PushforwardCover pushforward_cover(const CoarseMap& f, const Family& cover, double r, int n,
                                   const ControlFunction& control, const SearchLimits& limits = {});

struct PushforwardDisjoint {
  Family family;  // colored, on the codomain, covering f(X) (or f of the cover's support)
  int source_dim = 0;
  int colors_allowed = 0;  // n (m+1)
  double disjointness = 0.0;  // r / (n (m+1))
  double mesh_bound = 0.0;    // E(b) + 2r from the disjointification bound
  double image_mesh = 0.0;    // E(b)
};

/// pushforward_cover followed by make_disjoint inside f(support of U).
PushforwardDisjoint pushforward_disjointify(const CoarseMap& f, const Family& cover, double r, int n,
                                            const ControlFunction& control, const SearchLimits& limits = {});

struct Factorization {
  SpacePtr adjusted;     // X with d = max(1, rho) off the diagonal
  SpacePtr quotient;     // Z = X / ~ with the Hausdorff metric of the adjusted metric
  CoarseMap p;           // adjusted X -> Z
  CoarseMap q;           // Z -> Y
  std::vector<PointSet> classes;
  std::vector<PointId> selection;  // least member of each class
  double class_diameter = 0.0;     // max class diameter (adjusted metric)
  std::size_t max_q_fiber = 0;
  double selection_closeness = 0.0;  // max_x d(x, s(p(x)))
  bool sandwich_holds = true;        // d - 2D <= d_H <= d + 2D for all pairs
};

/// Splits each fiber of f into R-components of the adjusted metric. Throws
/// PreconditionError when some fiber has more than n components or a
/// component is wider than 2nR.
Factorization factorize(const CoarseMap& f, double big_r, int n);

struct GroupAction {
  SpacePtr space;
  std::vector<std::vector<std::size_t>> table;  // table[g][h] = g*h
  std::vector<std::vector<PointId>> perms;      // perms[g][x] = g.x

  std::size_t order() const { return table.size(); }
  /// Throws PreconditionError unless the table is a group with a homomorphic action.
  void validate() const;
  std::size_t identity_element() const;
  bool isometric() const;
  std::vector<PointSet> orbits() const;

  /// The trivial group acting on `space`.
  static GroupAction trivial(SpacePtr space);
  /// Z_k generated by a permutation of order dividing k.
  static GroupAction cyclic(SpacePtr space, const std::vector<PointId>& generator, std::size_t k);
};

/// Same points, d(x, y) = sum over g of rho(g x, g y).
FiniteMetricSpace symmetrize_metric(const GroupAction& action);

struct GroupQuotient {
  SpacePtr source;          // space the action is isometric on (symmetrized when needed)
  bool symmetrized = false;
  SpacePtr quotient;        // orbits with the Hausdorff metric
  CoarseMap projection;     // source -> quotient
  std::vector<PointSet> orbits;
  bool lipschitz = true;                // d_H(p x, p y) <= d(x, y)
  bool n_to_1_verified = true;          // |G| parts of diameter <= 2r at every realized r
  PointSet n_to_1_witness;
  double n_to_1_scale = 0.0;
};

/// Orbit space with the Hausdorff metric, checked 1-Lipschitz and coarsely
/// |G|-to-1 with C(r) = 2r at every realized quotient distance.
GroupQuotient group_quotient(const GroupAction& action, const SearchLimits& limits = {});

/// Orbit-based certificate: f^{-1}(B) for a set B of orbits pairwise within r
/// splits into at most |orbit| parts of diameter <= 2r.
std::vector<PointSet> orbit_decomposition(const GroupQuotient& q, const PointSet& orbit_set);

struct AsdimZeroReport {
  bool holds = true;
  std::size_t worst_components = 0;
  double worst_diameter = 0.0;
  double diameter_bound = 0.0;  // 2 n R
  PointSet witness;
  bool exact = true;
};

/// Over every maximal r-bounded B: R-components of f^{-1}(B) number <= n and
/// have diameter <= 2nR. Throws PreconditionError when R < C(r).
AsdimZeroReport asdim_zero_witness(const CoarseMap& f, int n, const ControlFunction& control, double r,
                                   double big_r, const SearchLimits& limits = {});

}  // namespace coarse
