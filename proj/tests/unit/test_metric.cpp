#include <doctest.h>

#include "coarse/metric.hpp"
#include "fixtures.hpp"

using namespace coarse;

TEST_CASE("matrix ingestion and triangle check") {
  auto two = FiniteMetricSpace::from_matrix({"a", "b"}, {{0, 1}, {1, 0}});
  CHECK(two.size() == 2);
  CHECK(two.diameter() == 1.0);
  CHECK_THROWS_AS(FiniteMetricSpace::from_matrix({"0", "1", "2"}, {{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}), MetricError);
  CHECK_THROWS_AS(FiniteMetricSpace::from_matrix({"0", "1"}, {{0, 1}, {2, 0}}), MetricError);
  CHECK_THROWS_AS(FiniteMetricSpace::from_matrix({"0", "1"}, {{0, 0}, {0, 0}}), MetricError);
}

TEST_CASE("path graph is isometric to an interval") {
  std::vector<std::string> labels;
  std::vector<WeightedEdge> edges;
  for (std::size_t i = 0; i < 10; ++i) labels.push_back(std::to_string(i));
  for (std::size_t i = 0; i + 1 < 10; ++i) edges.push_back({i, i + 1, 1.0});
  auto g = FiniteMetricSpace::from_graph(labels, edges);
  auto line = FiniteMetricSpace::integer_interval(0, 9);
  bool iso = true;
  for (PointId a = 0; a < 10; ++a)
    for (PointId b = 0; b < 10; ++b) iso = iso && g.dist(a, b) == line.dist(a, b);
  CHECK(iso == fx::frozen()["path10_isometric"].get<bool>());
}

TEST_CASE("open neighborhoods") {
  auto x = FiniteMetricSpace::integer_interval(0, 10);
  CHECK(neighborhood(x, {5}, 2) == PointSet{4, 5, 6});
  CHECK(neighborhood(x, {}, 3).empty());
  CHECK(neighborhood(x, fx::range(0, 0, 3), 1) == fx::range(0, 0, 3));
  CHECK(neighborhood(x, {5}, 0) == PointSet{5});
}

TEST_CASE("inner neighborhoods") {
  auto x = FiniteMetricSpace::integer_interval(0, 10);
  auto a = fx::range(0, 0, 5);
  CHECK(inner_neighborhood(x, a, 1.5) == fx::frozen()["inner_neighborhood_0_5_r1.5"].get<PointSet>());
  CHECK(inner_neighborhood(x, a, 0) == a);
  CHECK(inner_neighborhood(x, x.all(), 7) == x.all());
}

TEST_CASE("hausdorff distance") {
  auto x = FiniteMetricSpace::integer_interval(0, 10);
  CHECK(hausdorff_distance(x, {0}, {3}) == 3.0);
  CHECK(hausdorff_distance(x, {0, 1, 2, 3}, {1, 2}) == fx::frozen()["hausdorff_0123_12"].get<double>());
  CHECK(hausdorff_distance(x, {2, 4}, {2, 4}) == 0.0);
  CHECK_THROWS_AS(hausdorff_distance(x, {}, {1}), PreconditionError);
}

TEST_CASE("components") {
  auto x = FiniteMetricSpace::integer_interval(0, 12);
  PointSet a{0, 1, 2, 10, 11, 12};
  auto comps = r_components(x, a, 1);
  CHECK(comps == fx::frozen()["r_components_0_1_2_10_11_12"].get<std::vector<PointSet>>());
  CHECK(r_components(x, a, 12).size() == 1);
  CHECK(r_components(x, a, 0.5).size() == 6);
  // d <= R chains versus d < R chains
  CHECK(r_components(x, {0, 2}, 2).size() == 1);
  CHECK(open_components(x, {0, 2}, 2).size() == 2);
}

TEST_CASE("diameters") {
  auto x = FiniteMetricSpace::integer_interval(0, 10);
  CHECK(diameter(x, {5}) == 0.0);
  CHECK(diameter(x, {0, 3, 7}) == 7.0);
  auto c6 = FiniteMetricSpace::cycle(6);
  CHECK(c6.diameter() == fx::frozen()["c6_diameter"].get<double>());
}

TEST_CASE("set algebra stays sorted") {
  CHECK(make_set({3, 1, 3, 2}) == PointSet{1, 2, 3});
  CHECK(set_union({1, 4}, {2, 4}) == PointSet{1, 2, 4});
  CHECK(set_intersection({1, 2, 4}, {2, 4, 5}) == PointSet{2, 4});
  CHECK(set_difference({1, 2, 4}, {2}) == PointSet{1, 4});
  CHECK(is_subset({2}, {1, 2}));
  CHECK_FALSE(is_subset({3}, {1, 2}));
}

TEST_CASE("cloud norms") {
  auto l1 = FiniteMetricSpace::from_cloud({"a", "b"}, {{0, 0}, {3, 4}}, Norm::kL1);
  auto l2 = FiniteMetricSpace::from_cloud({"a", "b"}, {{0, 0}, {3, 4}}, Norm::kL2);
  auto li = FiniteMetricSpace::from_cloud({"a", "b"}, {{0, 0}, {3, 4}}, Norm::kLinf);
  CHECK(l1.dist(0, 1) == 7.0);
  CHECK(l2.dist(0, 1) == 5.0);
  CHECK(li.dist(0, 1) == 4.0);
}

TEST_CASE("format_number") {
  CHECK(format_number(3.0) == "3");
  CHECK(format_number(0.5) == "0.5");
}
