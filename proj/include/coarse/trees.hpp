#pragma once

// Decomposition trees: level i+1 refines each element of level i into at most
// n_i subfamilies, each R_i-disjoint, until some level is uniformly bounded.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coarse/coarse_maps.hpp"
#include "coarse/covers.hpp"

namespace coarse {

/// kUnion: an element is the union of its subfamilies. kContainment: it is
/// contained in that union.
enum class SplitMode { kUnion, kContainment };

/// Subfamily = indices into the next level.
using Subfamily = std::vector<std::size_t>;

struct DecompositionTree {
  std::vector<Family> levels;      // V_1 .. V_d
  std::vector<double> scales;      // R_1 .. R_{d-1}
  std::vector<int> branching;      // n_1 .. n_{d-1}
  /// splits[i][u] = subfamilies of levels[i+1] assigned to element u of levels[i].
  std::vector<std::vector<std::vector<Subfamily>>> splits;
  double terminal_mesh = kInfinity;
  SplitMode mode = SplitMode::kUnion;

  std::size_t depth() const { return levels.size(); }
  /// The sets of one subfamily.
  std::vector<PointSet> subfamily_sets(std::size_t level, std::size_t element, std::size_t j) const;
};

enum class TreeMode { kSfdc, kCasdim };

struct TreeViolation {
  std::size_t level = 0;     // 0-based level of the offending element
  std::size_t element = 0;
  std::string condition;     // "root", "shape", "branching", "disjoint", "union", "bounded"
  std::string detail;
  std::optional<std::pair<PointId, PointId>> witness;
};

struct TreeVerification {
  bool valid = true;
  std::vector<TreeViolation> violations;
  /// First level whose mesh is <= terminal_mesh, if any.
  std::optional<std::size_t> bounded_level;
  std::vector<double> level_mesh;
};

TreeVerification verify_tree(const FiniteMetricSpace& space, const DecompositionTree& t, TreeMode mode);

/// Sorts each level and remaps splits, so equal trees compare equal.
DecompositionTree canonical_tree(const DecompositionTree& t);

/// True when every level is pairwise disjoint with union X.
bool levels_are_partitions(const FiniteMetricSpace& space, const DecompositionTree& t);

/// Subtraction rule level by level: every level becomes a partition of X,
/// each new element inside an old one. Output is in union mode.
DecompositionTree partition_refine(const FiniteMetricSpace& space, const DecompositionTree& t);

/// Peels subfamilies one per binary level (W_1 | rest, then W_2 | rest, ...).
/// A level of branching n_i becomes max(n_i - 1, 1) binary levels, all at
/// scale R_i; the input is first cut at its first bounded level.
DecompositionTree casdim_to_sfdc(const FiniteMetricSpace& space, const DecompositionTree& t);

/// Colors by the subfamily path down to the first bounded level, each set
/// intersected with its ancestors. Throws when some scale is below R.
Family tree_to_cover(const FiniteMetricSpace& space, const DecompositionTree& t, double radius);

struct TreePullback {
  DecompositionTree tree;
  bool extra_level = false;
  double piece_bound = 0.0;   // n D(b) + (n - 1) R
  std::size_t max_pieces = 0;
};

/// Preimage tree on X. `targets` holds the X scales R_1..R_{d-1} (optionally one
/// more for the terminal fix-up, default the last). The bounded level's
/// preimages are split into D(b)-bounded parts and merged at distance < R.
TreePullback tree_pullback(const CoarseMap& f, const DecompositionTree& t, int n,
                           const ControlFunction& control, const std::vector<double>& targets,
                           const SearchLimits& limits = {});

struct PushforwardLevelAudit {
  std::size_t level = 0;
  double slack_before = 0.0;     // L_{i-1}
  double slack_after = 0.0;      // L_i
  double required_input_scale = 0.0;  // source scale for D(2 n n_i R_i + 2 L_{i-1})
  double input_scale = 0.0;
  std::size_t containments = 0;  // children checked to lie in the L_i-neighborhood of f(source)
};

struct TreePushforward {
  DecompositionTree tree;
  std::vector<PushforwardLevelAudit> audit;
};

/// Input scale sequence demanded of the source tree: the disjointness that
/// keeps parts of diameter D(2 n n_i R_i + 2 L_{i-1}) inside one member
/// (source_scale). The factor 2 is what an open n n_i R_i-ball needs: its
/// points are pairwise closer than twice the radius.
std::vector<double> tree_pushforward_input_scales(const FiniteMetricSpace& source, int n, const ControlFunction& control,
                                                  const std::vector<int>& branching,
                                                  const std::vector<double>& targets);

/// Pushes a partition tree on X to a tree on f(X)'s ambient space Y with branching n n_i.
TreePushforward tree_pushforward(const CoarseMap& f, const DecompositionTree& t, int n,
                                 const ControlFunction& control, const std::vector<double>& targets);

}  // namespace coarse
