#include <doctest.h>

#include "coarse/coarse_maps.hpp"
#include "fixtures.hpp"

using namespace coarse;

namespace {

GroupAction c6_antipodal() {
  auto c6 = fx::cycle(6);
  return GroupAction::cyclic(c6, {3, 4, 5, 0, 1, 2}, 2);
}

GroupAction reflection() {
  auto x = fx::interval(-3, 3);
  std::vector<PointId> g;
  for (PointId i = 0; i < 7; ++i) g.push_back(6 - i);
  return GroupAction::cyclic(x, g, 2);
}

std::vector<std::vector<double>> matrix_of(const FiniteMetricSpace& s) {
  std::vector<std::vector<double>> m(s.size(), std::vector<double>(s.size()));
  for (PointId a = 0; a < s.size(); ++a)
    for (PointId b = 0; b < s.size(); ++b) m[a][b] = s.dist(a, b);
  return m;
}

}  // namespace

TEST_CASE("upper control of |x|") {
  auto f = fx::abs_map(5);
  auto e = control_upper(f);
  for (const auto& row : fx::frozen()["abs_upper_control"]) {
    CHECK(e(row[0].get<double>()) == row[1].get<double>());
  }
  auto id = CoarseMap::identity(fx::interval(0, 6));
  for (double r : {0.0, 1.0, 3.0, 6.0}) CHECK(control_upper(id)(r) == r);
  auto pt = fx::interval(0, 0);
  auto constant = CoarseMap::make(fx::interval(0, 4), pt, {0, 0, 0, 0, 0});
  CHECK(control_upper(constant)(4.0) == 0.0);
}

TEST_CASE("pullback family") {
  auto f = fx::abs_map(5);
  Family v{{{0, 1}, {4, 5}}, {}};
  auto pre = pullback_family(f, v, 3);
  auto expected = fx::frozen()["abs_pullback_01_45"];
  REQUIRE(pre.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    PointSet e;
    for (long val : expected[i].get<std::vector<long>>()) e.push_back(static_cast<PointId>(val + 5));
    CHECK(pre.sets[i] == make_set(e));
  }
  CHECK(is_r_disjoint(*f.domain, pre, 3).disjoint);
  auto id = CoarseMap::identity(fx::interval(0, 9));
  Family w{{{0, 1}, {5}}, {}};
  CHECK(pullback_family(id, w, 2).sets == w.sets);
  CHECK_THROWS_AS(pullback_family(f, Family{{{0, 1}, {2}}, {}}, 3), PreconditionError);
}

TEST_CASE("n-to-1 profile") {
  auto f = fx::abs_map(5);
  auto p3 = n_to_1_profile(f, 2, 3);
  auto want = fx::frozen()["abs_profile_r2_R3"];
  CHECK(p3.max_components == want[0].get<std::size_t>());
  CHECK(p3.max_component_diameter == want[1].get<double>());
  auto id = CoarseMap::identity(fx::interval(0, 9));
  auto pi = n_to_1_profile(id, 2, 1);
  CHECK(pi.max_components == 1);
  CHECK(pi.max_component_diameter <= 2.0);

  auto q = group_quotient(c6_antipodal());
  auto pq = n_to_1_profile(q.projection, 1, 2);
  auto wq = fx::frozen()["c6_quotient_profile_r1_R2"];
  CHECK(pq.max_components == wq[0].get<std::size_t>());
  CHECK(pq.max_component_diameter == wq[1].get<double>());
}

TEST_CASE("n-to-1 control") {
  auto f = fx::abs_map(5);
  auto c2 = n_to_1_control(f, 2);
  CHECK_FALSE(c2.refused);
  for (const auto& row : fx::frozen()["abs_n2_control"]) {
    CHECK(c2.control(row[0].get<double>()) == row[1].get<double>());
  }
  auto c1 = n_to_1_control(f, 1, 5.0);
  CHECK(c1.refused);
  CHECK(c1.refusal_scale == 0.0);
  auto id = n_to_1_control(CoarseMap::identity(fx::interval(0, 5)), 1);
  CHECK(id.control.strict);
  CHECK(id.control(3.0) == 3.0);
  CHECK(verify_n_to_1(f, 2, 2.0, 2.0).holds);
  CHECK_FALSE(verify_n_to_1(f, 1, 0.0, 5.0).holds);
}

TEST_CASE("pushforward of singletons under |x|") {
  auto f = fx::abs_map(5);
  Family singles;
  for (PointId i = 0; i < 11; ++i) singles.sets.push_back({i});
  auto ctl = n_to_1_control(f, 2).control;
  auto push = pushforward_cover(f, singles, 0.5, 2, ctl);
  CHECK(push.holds);
  CHECK(push.image_dim <= 1);
  CHECK(push.image_dim <= push.bound);

  auto dj = pushforward_disjointify(f, singles, 1, 2, ctl);
  CHECK(dj.family.color_count() <= dj.colors_allowed);
  CHECK(colors_r_disjoint(*f.codomain, dj.family, dj.disjointness).disjoint);
  CHECK(covers(dj.family, f.image()));
  CHECK(mesh(*f.codomain, dj.family) <= dj.mesh_bound);
}

TEST_CASE("pushforward on identity and constant maps") {
  auto x = fx::interval(0, 9);
  auto id = CoarseMap::identity(x);
  Family u{{fx::range(0, 0, 4), fx::range(0, 3, 9)}, {}};
  // parts must have diameter strictly below C(r)
  CHECK_THROWS_AS(pushforward_cover(id, u, 1, 1, ControlFunction::identity()), PreconditionError);
  auto strict_id = ControlFunction::identity();
  strict_id.strict = true;
  auto push = pushforward_cover(id, u, 1, 1, strict_id);
  CHECK(push.image.sets == u.sets);
  CHECK(push.holds);

  auto pt = fx::interval(0, 0);
  auto constant = CoarseMap::make(fx::interval(0, 3), pt, {0, 0, 0, 0});
  Family v{{{0}, {1}, {2}, {3}}, {}};
  auto cpush = pushforward_cover(constant, v, 1, 4, ControlFunction::affine(0, 0.5));
  CHECK(cpush.image_dim == 3);
  CHECK(cpush.holds);
}

TEST_CASE("factorize |x|") {
  auto f = fx::abs_map(5);
  auto z = factorize(f, 1, 2);
  CHECK(z.classes.size() == static_cast<std::size_t>(fx::frozen()["abs_factor_classes_R1"].get<int>()));
  CHECK(z.max_q_fiber <= 2);
  CHECK(z.sandwich_holds);
  for (PointId c = 0; c < z.classes.size(); ++c) CHECK(z.p(z.selection[c]) == c);

  std::vector<PointId> same{0, 1, 2, 3};
  auto inj = CoarseMap::make(fx::interval(0, 3), fx::interval(0, 3), same);
  auto zi = factorize(inj, 1, 1);
  CHECK(zi.classes.size() == 4);
  auto constant = CoarseMap::make(fx::interval(0, 3), fx::interval(0, 0), {0, 0, 0, 0});
  auto zc = factorize(constant, 3, 1);
  CHECK(zc.classes.size() == 1);
  CHECK(zc.quotient->size() == 1);
}

TEST_CASE("group quotients") {
  auto q = group_quotient(c6_antipodal());
  REQUIRE(q.orbits.size() == 3);
  CHECK(q.orbits[0] == PointSet{0, 3});
  CHECK(matrix_of(*q.quotient) == fx::frozen()["c6_quotient_distances"].get<std::vector<std::vector<double>>>());
  CHECK(q.lipschitz);
  CHECK(q.n_to_1_verified);
  CHECK_FALSE(q.symmetrized);

  auto r = group_quotient(reflection());
  CHECK(matrix_of(*r.quotient) ==
        fx::frozen()["reflection_quotient_distances"].get<std::vector<std::vector<double>>>());

  auto t = group_quotient(GroupAction::trivial(fx::interval(0, 4)));
  CHECK(t.quotient->size() == 5);
  for (PointId i = 0; i < 5; ++i) CHECK(t.projection(i) == i);
}

TEST_CASE("symmetrized metric") {
  auto c6 = fx::cycle(6);
  auto anti = symmetrize_metric(c6_antipodal());
  CHECK(anti.dist(0, 1) == fx::frozen()["c6_symmetrized_d01"].get<double>());
  auto swap = GroupAction::cyclic(c6, {1, 0, 2, 3, 4, 5}, 2);
  CHECK_FALSE(swap.isometric());
  auto s = symmetrize_metric(swap);
  CHECK(s.dist(0, 1) == 2.0);
  CHECK(s.dist(0, 2) == 3.0);
  auto triv = symmetrize_metric(GroupAction::trivial(c6));
  CHECK(matrix_of(triv) == matrix_of(*c6));
  auto q = group_quotient(swap);
  CHECK(q.symmetrized);
  CHECK(q.lipschitz);
}

TEST_CASE("asdim zero witness") {
  auto f = fx::abs_map(5);
  auto rep = asdim_zero_witness(f, 2, ControlFunction::identity(), 2, 2);
  CHECK(rep.holds);
  CHECK(rep.worst_components == 2);
  CHECK(rep.worst_diameter <= rep.diameter_bound);
  CHECK(rep.diameter_bound == 8.0);
  auto q = group_quotient(c6_antipodal());
  auto rq = asdim_zero_witness(q.projection, 2, ControlFunction::affine(2, 0), 1, 2);
  CHECK(rq.holds);
  CHECK(rq.worst_components <= 2);
  CHECK(rq.worst_diameter <= 8.0);
  CHECK_THROWS_AS(asdim_zero_witness(f, 2, ControlFunction::affine(2, 0), 2, 3), PreconditionError);
}

TEST_CASE("orbit decomposition") {
  auto q = group_quotient(c6_antipodal());
  auto parts = orbit_decomposition(q, {0, 1});
  CHECK(parts.size() <= 2);
  for (const auto& p : parts) CHECK(diameter(*q.source, p) <= 2.0);
}
