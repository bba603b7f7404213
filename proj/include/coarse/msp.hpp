#pragma once

// Metric sparsification at fixed parameters: for a probability measure, find
// an R-disjoint family of S-bounded sets carrying as much mass as possible.

#include <optional>
#include <vector>

#include "coarse/coarse_maps.hpp"
#include "coarse/covers.hpp"
#include "coarse/search.hpp"

namespace coarse {

inline constexpr double kMassSlack = 1e-12;

struct ProbMeasure {
  std::vector<double> weights;
  bool renormalized = false;  // input did not sum to 1 and was rescaled

  /// Validates non-negative finite weights, one per point; rescales when the
  /// sum is off by more than 1e-9.
  static ProbMeasure make(std::vector<double> weights, std::size_t points);
  static ProbMeasure uniform(std::size_t points);
  static ProbMeasure uniform_on(std::size_t points, const PointSet& support);
  static ProbMeasure point_mass(std::size_t points, PointId x);

  double mass(const PointSet& a) const;
  double total() const;
  PointSet support() const;
};

struct MassFamily {
  Family family;
  double radius = 0.0;   // R
  double bound = 0.0;    // S
  double mass = 0.0;
  bool exact = true;     // false: greedy lower bound
};

/// Best R-disjoint family of S-bounded subsets of `domain`: an exhaustive
/// search over unions whose open R-components are S-bounded when
/// |domain| <= limits.exact_cap, otherwise the greedy lower bound.
MassFamily best_mass_family(const FiniteMetricSpace& space, const ProbMeasure& mu, double radius, double bound,
                            const SearchLimits& limits = {});
MassFamily best_mass_family(const FiniteMetricSpace& space, const PointSet& domain, const ProbMeasure& mu,
                            double radius, double bound, const SearchLimits& limits = {});

/// Largest-mass S-bounded set first, excise its open R-neighborhood, repeat.
MassFamily greedy_mass_family(const FiniteMetricSpace& space, const PointSet& domain, const ProbMeasure& mu,
                              double radius, double bound);

/// Smallest realized distance S for which best_mass_family exceeds `threshold`.
MassFamily min_bound_for_mass(const FiniteMetricSpace& space, const PointSet& domain, const ProbMeasure& mu,
                              double radius, double threshold, const SearchLimits& limits = {});

struct AsdimMsp {
  MassFamily best;      // heaviest color class
  int colors = 0;
  double guaranteed = 0.0;  // 1 / colors
  bool holds = true;
  bool at_bound = false;
};

/// Picks the heaviest color of a colored cover whose classes are R-disjoint.
AsdimMsp asdim_to_msp(const FiniteMetricSpace& space, const Family& cover, double radius, const ProbMeasure& mu);

/// lambda(A) = mu({ y : x_y in A }). Throws unless f(selection[y]) == y for all y.
ProbMeasure transfer_measure_selection(const CoarseMap& f, const ProbMeasure& mu,
                                       const std::vector<PointId>& selection);
/// Least preimage of every codomain point; throws when f is not onto.
std::vector<PointId> least_selection(const CoarseMap& f);

/// lambda(y) = mu(f^{-1}(y)).
ProbMeasure pushforward_measure(const CoarseMap& f, const ProbMeasure& mu);

struct MspPush {
  MassFamily result;           // on Y: the constructed family, or the search at stated_bound when that is wider
  MassFamily constructed;      // heaviest color of the disjointified images
  bool from_search = false;    // result came from the search at stated_bound
  MassFamily witness;          // on X, for the transferred measure
  ProbMeasure transferred;
  double witness_radius = 0.0; // disjointness demanded of the witness
  double stated_bound = 0.0;    // E(B) + n R
  double construction_bound = 0.0;  // E(B) + 2 n R, what the disjointification guarantees
  double mesh = 0.0;
  double guaranteed = 0.0;     // 1 / (2n)
  int colors = 0;
  bool disjoint = true;
  bool mass_holds = true;
  bool mesh_holds = true;      // mesh <= stated_bound
  bool at_bound = false;
};

/// Pushes an MSP witness for the transferred measure through a coarsely
/// n-to-1 surjection. The witness must be disjoint strictly above D(2nR):
/// an open nR-ball has diameter up to 2nR, and that is what bounds the image
/// multiplicity by n. Without `witness`, the smallest bound B giving
/// transferred mass > 1/2 is searched exactly. When the constructed family is
/// wider than E(B) + nR, the best family with that bound is searched on Y.
MspPush msp_pushforward(const CoarseMap& f, int n, const ControlFunction& control, const ProbMeasure& mu,
                        double radius, const std::optional<MassFamily>& witness = std::nullopt,
                        const std::vector<PointId>& selection = {}, const SearchLimits& limits = {});

struct MspPullStage {
  PointSet component;        // Lambda_i
  double fiber_mass = 0.0;   // mu(f^{-1}(Lambda_i))
  double found_mass = 0.0;   // mu(Omega_i)
  double bound = 0.0;        // S used for this fiber
};

struct MspPull {
  MassFamily result;          // on X: R_X-components of Omega
  MassFamily y_family;        // Lambda
  double y_radius = 0.0;      // R_Y
  double y_bound = 0.0;       // K
  double lambda_mass = 0.0;
  std::vector<MspPullStage> stages;
  double component_bound = 0.0;  // S
  bool mass_holds = true;     // mass >= 0.25
  bool components_bounded = true;
  bool at_bound = false;
};

struct MspPullOptions {
  std::optional<double> y_radius;  // default: smallest realized Y distance above E(R_X)
  std::optional<double> y_bound;   // default: smallest K with Y mass > 1/2
  std::optional<double> fiber_bound;  // default: per fiber, smallest S with mass > 1/2
};

MspPull msp_pullback(const CoarseMap& f, const ProbMeasure& mu, double radius, const MspPullOptions& options = {},
                     const SearchLimits& limits = {});

struct MapMspCheck {
  double game_value = 0.0;     // worst case over admissible measures of the best feasible mass
  bool achievable = false;     // game_value > c
  bool at_bound = false;
  bool exact = true;
  bool inconclusive = false;
  PointSet worst_support;      // preimage of the worst K-bounded block
  std::vector<double> worst_measure;
  std::size_t feasible_unions = 0;
};

/// Over measures on f^{-1}(A) whose image support is K-bounded, the least
/// attainable mass of a union with S-bounded open R-components.
MapMspCheck map_msp_check(const CoarseMap& f, const PointSet& a, double radius, double bound, double c, double k,
                          const SearchLimits& limits = {});

}  // namespace coarse
