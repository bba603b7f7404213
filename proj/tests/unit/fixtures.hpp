#pragma once

#include <fstream>
#include <memory>
#include <string>

#include <json.hpp>

#include "coarse/coarse_maps.hpp"

namespace fx {

inline const nlohmann::json& frozen() {
  static const nlohmann::json j = [] {
    std::ifstream in(COARSE_FROZEN_JSON);
    return nlohmann::json::parse(in);
  }();
  return j;
}

inline coarse::SpacePtr interval(long lo, long hi) {
  return std::make_shared<coarse::FiniteMetricSpace>(coarse::FiniteMetricSpace::integer_interval(lo, hi));
}

inline coarse::SpacePtr cycle(std::size_t n) {
  return std::make_shared<coarse::FiniteMetricSpace>(coarse::FiniteMetricSpace::cycle(n));
}

// x -> |x| from {-m..m} onto {0..m}.
inline coarse::CoarseMap abs_map(long m) {
  auto x = interval(-m, m);
  auto y = interval(0, m);
  std::vector<coarse::PointId> assign;
  for (long v = -m; v <= m; ++v) assign.push_back(static_cast<coarse::PointId>(v < 0 ? -v : v));
  return coarse::CoarseMap::make(x, y, assign);
}

// Points of {lo..hi} given by value.
inline coarse::PointSet vals(long lo, std::initializer_list<long> v) {
  coarse::PointSet s;
  for (long x : v) s.push_back(static_cast<coarse::PointId>(x - lo));
  return coarse::make_set(s);
}

inline coarse::PointSet range(long lo, long a, long b) {
  coarse::PointSet s;
  for (long x = a; x <= b; ++x) s.push_back(static_cast<coarse::PointId>(x - lo));
  return s;
}

}  // namespace fx
