#include <doctest.h>

#include "coarse/io.hpp"
#include "fixtures.hpp"

using namespace coarse;
using coarse::io::json;

TEST_CASE("space descriptors") {
  auto path = io::space_from_json(json::parse(R"({"kind":"graph","n":4,"edges":[[0,1],[1,2],[2,3,2.5]]})"));
  CHECK(path.dist(0, 3) == 4.5);
  auto line = io::space_from_json(json::parse(R"({"kind":"line","coords":[0,1.5,4]})"));
  CHECK(line.label(1) == "1.5");
  auto round = io::space_from_json(io::space_to_json(line));
  CHECK(round.matrix() == line.matrix());
  CHECK(round.labels() == line.labels());
  CHECK_THROWS_AS(io::space_from_json(json::parse(R"({"kind":"matrix","matrix":[[0,1,5],[1,0,1],[5,1,0]]})")),
                  io::InputError);
  CHECK_THROWS_AS(io::space_from_json(json::parse(R"({"kind":"torus"})")), io::InputError);
  CHECK_THROWS_AS(io::space_from_json(json::parse(R"({"matrix":[[0]]})")), io::InputError);
}

TEST_CASE("labels and numbers") {
  CHECK(io::label_json("3") == json(3));
  CHECK(io::label_json("-2") == json(-2));
  CHECK(io::label_json("a") == json("a"));
  CHECK(io::label_json("03") == json("03"));
  CHECK(io::number(kInfinity) == json("inf"));
  CHECK(io::number(2.0) == json(2));
  CHECK(io::to_number(json("inf"), "x") == kInfinity);
  CHECK_THROWS_AS(io::to_number(json("x"), "x"), io::InputError);
}

TEST_CASE("families resolve labels") {
  auto x = FiniteMetricSpace::integer_interval(-3, 3);
  auto f = io::family_from_json(x, json::parse(R"({"sets":[[-3,-2],["3"]],"colors":[0,1]})"));
  CHECK(f.sets[0] == PointSet{0, 1});
  CHECK(f.sets[1] == PointSet{6});
  CHECK(io::family_to_json(x, f).dump() == R"({"sets":[[-3,-2],[3]],"colors":[0,1]})");
  CHECK_THROWS_AS(io::family_from_json(x, json::parse(R"({"sets":[[9]]})")), io::InputError);
  CHECK_THROWS_AS(io::family_from_json(x, json::parse(R"({"sets":[[1]],"colors":[1]})")), io::InputError);
}

TEST_CASE("maps and controls") {
  auto f = io::map_from_json(json::parse(
      R"({"domain":{"kind":"interval","lo":-2,"hi":2},"codomain":{"kind":"interval","lo":0,"hi":2},
          "assign":{"-2":2,"-1":1,"0":0,"1":1,"2":2}})"));
  CHECK(f.assign == std::vector<PointId>{2, 1, 0, 1, 2});
  auto arr = io::map_from_json(json::parse(
      R"({"domain":{"kind":"interval","lo":-2,"hi":2},"codomain":{"kind":"interval","lo":0,"hi":2},
          "assign":[2,1,0,1,2]})"));
  CHECK(arr.assign == f.assign);
  auto c = io::control_from_json(json::parse(R"({"kind":"step","breakpoints":[[0,0],[2,3]],"strict":true})"));
  CHECK(c(1) == 0);
  CHECK(c(2) == 3);
  CHECK(c.strict);
  auto back = io::control_from_json(io::control_to_json(c));
  CHECK(back(5) == 3);
  auto a = io::control_from_json(json::parse(R"({"kind":"affine","slope":2,"offset":1})"));
  CHECK(a(3) == 7);
}

TEST_CASE("trees round trip") {
  auto x = FiniteMetricSpace::integer_interval(0, 15);
  auto j = json::parse(R"({
    "levels":[{"sets":[[0,1,2,3,4,5,6,7,8,9,10,11,12,13,14,15]]},
              {"sets":[[0,1,2,3,4,5,6],[9,10,11,12,13,14,15],[7,8]]}],
    "scales":[2],"branching":[2],"splits":{"0":[[[0,1],[2]]]},"terminal_mesh":6})");
  auto t = io::tree_from_json(x, j);
  CHECK(verify_tree(x, t, TreeMode::kSfdc).valid);
  auto again = io::tree_from_json(x, io::tree_to_json(x, t, TreeMode::kSfdc));
  CHECK(again.levels == t.levels);
  CHECK(again.splits == t.splits);
  CHECK(again.terminal_mesh == 6);
  j["splits"] = json::parse(R"({"4":[]})");
  CHECK_THROWS_AS(io::tree_from_json(x, j), io::InputError);
}

TEST_CASE("digests ignore key order") {
  auto a = json::parse(R"({"b":1,"a":[1,2]})");
  auto b = json::parse(R"({"a":[1,2],"b":1})");
  CHECK(io::digest(a) == io::digest(b));
  CHECK(io::digest(a).size() == 64);
  CHECK(io::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK_THROWS_AS(io::read_json_file("/nonexistent/file.json"), io::InputError);
}

TEST_CASE("measures") {
  auto x = FiniteMetricSpace::integer_interval(0, 3);
  auto mu = io::measure_from_json(x, json::parse(R"({"weights":[0.25,0.25,0.25,0.25]})"));
  CHECK(mu.total() == 1.0);
  auto obj = io::measure_from_json(x, json::parse(R"({"weights":{"0":0.5,"3":0.5}})"));
  CHECK(obj.weights == std::vector<double>{0.5, 0, 0, 0.5});
  CHECK_THROWS_AS(io::measure_from_json(x, json::parse(R"({"weights":[1,2]})")), io::InputError);
}
