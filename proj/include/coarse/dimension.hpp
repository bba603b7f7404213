#pragma once

// Finite-scale analogs of asymptotic dimension and asymptotic Property C.
// Every asymptotic statement becomes a claim about one space at explicit
// scales and an explicit mesh cap.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coarse/coarse_maps.hpp"
#include "coarse/covers.hpp"
#include "coarse/search.hpp"

namespace coarse {

struct FamilyCertificate {
  bool disjoint = true;      // at the family's scale
  double min_gap = kInfinity;
  double mesh = 0.0;
};

/// Families U_1..U_k with U_i meant to be scales[i]-disjoint.
struct ApcWitness {
  std::vector<double> scales;
  std::vector<Family> families;
  std::vector<FamilyCertificate> certificates;

  /// Recomputes the certificates against `space`.
  void certify(const FiniteMetricSpace& space);
  bool covers_space(const FiniteMetricSpace& space) const;
  /// Covers, every family disjoint at its scale, every mesh <= mesh_cap.
  bool valid(const FiniteMetricSpace& space, double mesh_cap = kInfinity) const;
};

/// Families V_i with dim at scale scales[i] at most dims[i].
struct DimSequenceWitness {
  std::vector<double> scales;
  std::vector<int> dims;
  std::vector<Family> families;
};

struct AsdimAtScale {
  int dim = 0;
  Family cover;
  bool exact = true;            // false: greedy upper bound
  bool budget_exhausted = false;
};

/// Minimum of dim_R over covers with mesh <= mesh_cap. Exhaustive (over
/// partitions, which suffice because shrinking members never raises the
/// multiplicity) when |X| <= limits.exact_cap, greedy upper bound otherwise.
AsdimAtScale asdim_at_scale(const FiniteMetricSpace& space, double radius, double mesh_cap,
                            const SearchLimits& limits = {});

enum class SearchStatus { kFound, kImpossible, kBudgetExhausted };

struct ApcSearch {
  SearchStatus status = SearchStatus::kFound;
  std::optional<ApcWitness> witness;
  PointSet residue;       // points the greedy pass could not place
  bool greedy = true;     // witness came from the greedy pass
};

/// Families U_i, each scales[i]-disjoint with mesh <= mesh_cap, jointly covering X.
ApcSearch apc_witness(const FiniteMetricSpace& space, const std::vector<double>& scales, double mesh_cap,
                      const SearchLimits& limits = {});

/// R_i = sum_{j<=i} (n_j + 1) * M_{m_j + j} with m_j = n_1 + ... + n_j (1-based M).
/// Throws PreconditionError unless M has at least m_k + k entries and is increasing.
std::vector<double> apc_normalize_scales(const std::vector<int>& dims, const std::vector<double>& gaps);

struct ApcNormalized {
  ApcWitness witness;  // scales are M_1..M_{m_k + k}
  /// For each output family: (input level i, color within level).
  std::vector<std::pair<std::size_t, int>> origin;
};

/// Splits each V_i into n_i + 1 families that are R_i/(n_i+1)-disjoint and
/// concatenates them level by level; output family t is M_t-disjoint.
ApcNormalized apc_normalize(const FiniteMetricSpace& space, const DimSequenceWitness& w,
                            const std::vector<double>& gaps);

struct ScaleAudit {
  std::size_t output_index = 0;
  std::size_t input_family = 0;
  double certified_scale = 0.0;   // disjointness actually guaranteed
  double target_scale = 0.0;      // R_t demanded of output family t
};

struct ApcTransfer {
  ApcWitness witness;
  std::vector<ScaleAudit> audit;
};

/// Pushes an APC witness through a coarsely n-to-1 map: family i of `w` must be
/// disjoint strictly above C(2 n R_{i n}) (images meeting an open n R-ball are
/// pairwise within 2 n R); targets holds R_1..R_{m n}. Output family (i-1)n + j
/// is certified R_{i n}-disjoint, hence R_{(i-1)n+j}-disjoint.
ApcTransfer apc_pushforward(const CoarseMap& f, int n, const ControlFunction& control, const ApcWitness& w,
                            const std::vector<double>& targets);

/// Pulls an APC witness on Y back to X: family i becomes the R_m-components of
/// the preimages of its members (R_m the largest target scale). `w` family i
/// must be E(R_i)-disjoint; components wider than component_bound are rejected.
ApcTransfer apc_pullback(const CoarseMap& f, const ApcWitness& w, const std::vector<double>& targets,
                         double component_bound = kInfinity);

}  // namespace coarse
