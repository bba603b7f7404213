#pragma once

// Seeded instance generators for the property suites. Every draw is the raw
// output of std::mt19937_64 reduced modulo the range, so a seed fixes the
// instance stream on every platform.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "coarse/coarse_maps.hpp"
#include "coarse/msp.hpp"
#include "coarse/trees.hpp"

namespace coarse::gen {

using Rng = std::mt19937_64;

std::size_t below(Rng& rng, std::size_t n);
long between(Rng& rng, long lo, long hi);  // inclusive
bool coin(Rng& rng, std::size_t num, std::size_t den);

SpacePtr random_line(Rng& rng, std::size_t points, long spread);
SpacePtr random_cloud(Rng& rng, std::size_t points, long side, Norm norm);
SpacePtr random_graph(Rng& rng, std::size_t points, std::size_t extra_edges, long max_weight);
/// One of the above with 2..max_points points.
SpacePtr random_space(Rng& rng, std::size_t max_points);

/// Closed balls of one radius around random centers, plus a ball for every
/// point left uncovered.
Family random_cover(Rng& rng, const FiniteMetricSpace& space, std::size_t centers, double radius);

/// A positive realized distance of the space, uniformly among the distinct ones.
double random_distance(Rng& rng, const FiniteMetricSpace& space);

struct MapInstance {
  std::string kind;
  CoarseMap map;
  int n = 1;  // fiber part count the instance is meant to be n-to-1 for
};

/// Surjective maps: stacked copies, folds, group quotients, nearest-center
/// collapses and arbitrary assignments, with at most max_points domain points.
MapInstance random_map(Rng& rng, std::size_t max_points);

struct GroupFixture {
  std::string name;
  GroupAction action;
};

/// C6/Z2, {-3..3}/reflection, C8/Z4 and a few more isometric and
/// non-isometric actions on at most 16 points.
std::vector<GroupFixture> group_fixtures();

struct TreeShape {
  std::size_t max_depth = 4;
  int max_branching = 4;
  std::vector<double> scales;  // per split level; random realized distances when empty
  bool overlap = false;        // children of one element may overlap across subfamilies
  double stop_mesh = 0.0;      // stop splitting once the level mesh is at most this
};

/// A valid tree in union mode: each element is cut into nearest-center
/// pieces, pieces closer than the scale are colored apart, and a level whose
/// coloring needs more than max_branching colors falls back to the open
/// components. terminal_mesh is the mesh of the last level.
DecompositionTree random_tree(Rng& rng, const FiniteMetricSpace& space, const TreeShape& shape);

enum class MeasureKind { kUniform, kRandom, kPoint, kFarPair, kOnSet };
ProbMeasure random_measure(Rng& rng, const FiniteMetricSpace& space, MeasureKind kind, const PointSet& on = {});
std::string measure_kind_name(MeasureKind kind);

}  // namespace coarse::gen
