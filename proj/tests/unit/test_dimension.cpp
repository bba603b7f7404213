#include <doctest.h>

#include "coarse/dimension.hpp"
#include "fixtures.hpp"

using namespace coarse;

namespace {

ControlFunction strict_identity() {
  auto c = ControlFunction::identity();
  c.strict = true;
  return c;
}

// x -> |x| family of the set {+-a..+-b}.
PointSet reflected(long m, long a, long b) {
  PointSet s;
  for (long v = a; v <= b; ++v) {
    s.push_back(static_cast<PointId>(v + m));
    s.push_back(static_cast<PointId>(-v + m));
  }
  return make_set(s);
}

}  // namespace

TEST_CASE("asdim at scale") {
  auto x = fx::interval(0, 15);
  auto a = asdim_at_scale(*x, 3, 5);
  CHECK(a.exact);
  CHECK(a.dim == fx::frozen()["asdim_0_15_r3_cap5"].get<int>());
  CHECK(covers(a.cover, x->all()));
  CHECK(mesh(*x, a.cover) <= 5);
  CHECK(dim_at_scale(*x, a.cover, 3) == a.dim);

  auto whole = asdim_at_scale(*x, 3, 15);
  CHECK(whole.dim == 0);
  REQUIRE(whole.cover.size() == 1);
  CHECK(whole.cover.sets[0] == x->all());

  auto sparse = FiniteMetricSpace::on_line({0, 5, 10, 15});
  CHECK(asdim_at_scale(sparse, 5, 0).dim == 0);
}

TEST_CASE("asdim above the exact cap is flagged as a bound") {
  auto x = fx::interval(0, 29);
  SearchLimits lim;
  lim.exact_cap = 8;
  auto a = asdim_at_scale(*x, 3, 5, lim);
  CHECK_FALSE(a.exact);
  CHECK(a.dim >= 1);
  CHECK(dim_at_scale(*x, a.cover, 3) == a.dim);
}

TEST_CASE("apc witness search") {
  auto x = fx::interval(0, 9);
  auto found = apc_witness(*x, {2, 3}, 3);
  CHECK(fx::frozen()["apc_path10_scales_2_3_cap3_feasible"].get<bool>());
  REQUIRE(found.status == SearchStatus::kFound);
  CHECK(found.witness->valid(*x, 3));

  auto path = fx::interval(0, 11);
  auto none = apc_witness(*path, {100, 200}, 1);
  CHECK_FALSE(fx::frozen()["apc_path12_scales_100_200_cap1_feasible"].get<bool>());
  CHECK(none.status == SearchStatus::kImpossible);
  CHECK_FALSE(none.witness);

  auto singles = apc_witness(*x, {1}, 0);
  REQUIRE(singles.status == SearchStatus::kFound);
  CHECK(singles.witness->families[0].size() == 10);
  CHECK_THROWS_AS(apc_witness(*x, {3, 2}, 3), PreconditionError);
}

TEST_CASE("normalized scales") {
  auto r = apc_normalize_scales({0, 0, 0}, {1, 2, 4});
  CHECK(r == std::vector<double>{1, 3, 7});
  auto s = apc_normalize_scales({1, 1}, {1, 2, 3, 4});
  CHECK(s == std::vector<double>{4, 12});
  CHECK_THROWS_AS(apc_normalize_scales({1, 1}, {1, 2, 3}), PreconditionError);
  CHECK_THROWS_AS(apc_normalize_scales({0}, {2, 1}), PreconditionError);
}

TEST_CASE("apc normalize on {0..40}") {
  auto x = fx::interval(0, 40);
  DimSequenceWitness w;
  w.scales = {4, 12};
  w.dims = {1, 1};
  w.families.push_back(Family{{fx::range(0, 0, 9), fx::range(0, 8, 17), fx::range(0, 16, 25), fx::range(0, 24, 33),
                               fx::range(0, 32, 40)},
                              {}});
  w.families.push_back(Family{{x->all()}, {}});
  std::vector<double> gaps{1, 2, 3, 4};
  auto out = apc_normalize(*x, w, gaps);
  REQUIRE(out.witness.families.size() == 4);
  CHECK(out.witness.scales == gaps);
  CHECK(out.witness.covers_space(*x));
  for (std::size_t t = 0; t < 4; ++t) {
    CAPTURE(t);
    CHECK(is_r_disjoint(*x, out.witness.families[t], gaps[t]).disjoint);
  }
  w.dims = {0, 1};
  CHECK_THROWS_AS(apc_normalize(*x, w, gaps), PreconditionError);
}

TEST_CASE("apc normalize with zero dimensions reindexes") {
  auto x = fx::interval(0, 9);
  DimSequenceWitness w;
  w.scales = {1, 3};
  w.dims = {0, 0};
  w.families.push_back(Family{{fx::range(0, 0, 3), fx::range(0, 6, 9)}, {}});
  w.families.push_back(Family{{{4, 5}}, {}});
  auto out = apc_normalize(*x, w, {1, 2});
  REQUIRE(out.witness.families.size() == 2);
  CHECK(out.witness.families[0].sets == w.families[0].sets);
  CHECK(out.witness.families[1].sets == w.families[1].sets);
}

TEST_CASE("apc pushforward") {
  auto id = CoarseMap::identity(fx::interval(0, 9));
  ApcWitness w;
  w.scales = {2, 3};
  w.families = {Family{{fx::range(0, 0, 1), fx::range(0, 8, 9)}, {}}, Family{{fx::range(0, 2, 7)}, {}}};
  auto same = apc_pushforward(id, 1, strict_identity(), w, {2, 3});
  REQUIRE(same.witness.families.size() == 2);
  CHECK(same.witness.families[0].sets == w.families[0].sets);
  CHECK(same.witness.families[1].sets == w.families[1].sets);

  auto f = fx::abs_map(20);
  ApcWitness r;
  r.families = {Family{{reflected(20, 0, 2), reflected(20, 12, 20)}, {}}, Family{{reflected(20, 3, 11)}, {}}};
  r.scales = {4, 8};
  std::vector<double> targets{1, 2, 3, 4};
  auto out = apc_pushforward(f, 2, strict_identity(), r, targets);
  REQUIRE(out.witness.families.size() == 4);
  CHECK(out.witness.covers_space(*f.codomain));
  for (std::size_t t = 0; t < 4; ++t) {
    CAPTURE(t);
    CHECK(is_r_disjoint(*f.codomain, out.witness.families[t], targets[t]).disjoint);
    CHECK(out.audit[t].certified_scale >= out.audit[t].target_scale);
  }
  CHECK_THROWS_AS(apc_pushforward(f, 2, strict_identity(), r, {1, 2, 3}), PreconditionError);
  // Disjoint at C(n R_2) = 4 but not above C(2 n R_2) = 8.
  ApcWitness tight = r;
  tight.families = {Family{{reflected(20, 0, 2), reflected(20, 8, 20)}, {}}, Family{{reflected(20, 3, 7)}, {}}};
  CHECK_THROWS_AS(apc_pushforward(f, 2, strict_identity(), tight, targets), PreconditionError);
}

TEST_CASE("apc pushforward through the C6 antipodal quotient") {
  auto c6 = fx::cycle(6);
  auto q = group_quotient(GroupAction::cyclic(c6, {3, 4, 5, 0, 1, 2}, 2));
  ApcWitness w;
  w.families = {Family{{{0}, {2}, {4}}, {}}, Family{{{1, 3, 5}}, {}}};
  w.scales = {2, 4};
  std::vector<double> targets{0.1, 0.2, 0.3, 0.4};
  auto out = apc_pushforward(q.projection, 2, ControlFunction::affine(2, 0), w, targets);
  REQUIRE(out.witness.families.size() == 4);
  CHECK(out.witness.covers_space(*q.quotient));
  for (std::size_t t = 0; t < 4; ++t) CHECK(is_r_disjoint(*q.quotient, out.witness.families[t], targets[t]).disjoint);
}

TEST_CASE("apc pullback") {
  auto id = CoarseMap::identity(fx::interval(0, 9));
  ApcWitness w;
  w.scales = {2, 3};
  w.families = {Family{{fx::range(0, 0, 3), fx::range(0, 6, 9)}, {}}, Family{{{4, 5}}, {}}};
  auto back = apc_pullback(id, w, {2, 3});
  CHECK(back.witness.families[0].sets == w.families[0].sets);
  CHECK(back.witness.families[1].sets == w.families[1].sets);

  auto pt = fx::interval(0, 0);
  auto x = std::make_shared<FiniteMetricSpace>(FiniteMetricSpace::on_line({0, 1, 2, 10, 11}));
  auto constant = CoarseMap::make(x, pt, {0, 0, 0, 0, 0});
  ApcWitness one;
  one.scales = {1};
  one.families = {Family{{{0}}, {}}};
  auto comps = apc_pullback(constant, one, {1});
  REQUIRE(comps.witness.families.size() == 1);
  CHECK(comps.witness.families[0].sets == std::vector<PointSet>{{0, 1, 2}, {3, 4}});
  CHECK_THROWS_AS(apc_pullback(constant, one, {1}, 1.0), PreconditionError);
}
