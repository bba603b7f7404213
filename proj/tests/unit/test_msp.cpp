#include <doctest.h>

#include <random>

#include "coarse/msp.hpp"
#include "fixtures.hpp"

using namespace coarse;

namespace {

ControlFunction twice_strict() {
  auto c = ControlFunction::affine(2, 0);
  c.strict = true;
  return c;
}

GroupQuotient c6_quotient() {
  return group_quotient(GroupAction::cyclic(fx::cycle(6), {3, 4, 5, 0, 1, 2}, 2));
}

CoarseMap collapse(coarse::SpacePtr x) {
  return CoarseMap::make(x, fx::interval(0, 0), std::vector<PointId>(x->size(), 0));
}

std::shared_ptr<FiniteMetricSpace> triangle() {
  return std::make_shared<FiniteMetricSpace>(
      FiniteMetricSpace::from_matrix({"a", "b", "c"}, {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}));
}

}  // namespace

TEST_CASE("probability measures") {
  auto mu = ProbMeasure::make({1, 1, 2}, 3);
  CHECK(mu.renormalized);
  CHECK(mu.total() == doctest::Approx(1.0));
  CHECK(mu.mass({2}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(ProbMeasure::make({-1, 2}, 2), PreconditionError);
  CHECK_THROWS_AS(ProbMeasure::make({1}, 2), PreconditionError);
  CHECK(ProbMeasure::point_mass(4, 2).support() == PointSet{2});
  CHECK(ProbMeasure::uniform_on(4, {1, 3}).mass({1}) == 0.5);
}

TEST_CASE("best mass family") {
  auto x = fx::interval(0, 9);
  auto best = best_mass_family(*x, ProbMeasure::uniform(10), 2, 3);
  CHECK(best.exact);
  CHECK(best.mass == doctest::Approx(fx::frozen()["best_mass_uniform10_r2_s3"].get<double>()));
  CHECK(is_r_disjoint(*x, best.family, 2).disjoint);
  CHECK(mesh(*x, best.family) <= 3);

  auto point = best_mass_family(*x, ProbMeasure::point_mass(10, 4), 2, 0);
  CHECK(point.mass == 1.0);
  auto whole = best_mass_family(*x, ProbMeasure::uniform(10), 5, 9);
  CHECK(whole.mass == doctest::Approx(1.0));
}

TEST_CASE("exact mass dominates greedy") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<double> coords;
    std::size_t n = 4 + rng() % 9;
    for (std::size_t i = 0; i < n; ++i) coords.push_back(static_cast<double>(rng() % 30));
    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    auto x = FiniteMetricSpace::on_line(coords);
    std::vector<double> w;
    for (std::size_t i = 0; i < x.size(); ++i) w.push_back(1.0 + static_cast<double>(rng() % 5));
    auto mu = ProbMeasure::make(w, x.size());
    double r = 1.0 + static_cast<double>(rng() % 5);
    double s = static_cast<double>(rng() % 8);
    auto exact = best_mass_family(x, mu, r, s);
    auto greedy = greedy_mass_family(x, x.all(), mu, r, s);
    CAPTURE(trial);
    CHECK(exact.exact);
    CHECK(exact.mass >= greedy.mass - kMassSlack);
    CHECK(is_r_disjoint(x, greedy.family, r).disjoint);
  }
}

TEST_CASE("asdim to msp") {
  auto x = fx::interval(0, 20);
  Family u{{fx::range(0, 0, 10), fx::range(0, 5, 15), fx::range(0, 10, 20)}, {}};
  auto cover = make_disjoint(*x, u, 2, 2).family;
  auto uni = asdim_to_msp(*x, cover, 2.0 / 3.0, ProbMeasure::uniform(21));
  CHECK(uni.holds);
  CHECK(uni.best.mass >= 1.0 / 3.0 - kMassSlack);
  auto concentrated = ProbMeasure::uniform_on(21, cover.sets[0]);
  auto c = asdim_to_msp(*x, cover, 2.0 / 3.0, concentrated);
  CHECK(c.best.mass == doctest::Approx(1.0));
  auto one = asdim_to_msp(*x, Family{{x->all()}, {}}, 5, ProbMeasure::uniform(21));
  CHECK(one.best.mass == doctest::Approx(1.0));
}

TEST_CASE("measure transfer") {
  auto id = CoarseMap::identity(fx::interval(0, 4));
  auto mu = ProbMeasure::make({0.1, 0.2, 0.3, 0.2, 0.2}, 5);
  CHECK(transfer_measure_selection(id, mu, least_selection(id)).weights == mu.weights);

  auto f = fx::abs_map(2);
  std::vector<PointId> plus{2, 3, 4};
  auto nu = ProbMeasure::make({0.5, 0.25, 0.25}, 3);
  auto lam = transfer_measure_selection(f, nu, plus);
  CHECK(lam.weights == std::vector<double>{0, 0, 0.5, 0.25, 0.25});
  CHECK_THROWS_AS(transfer_measure_selection(f, nu, {0, 1, 2}), PreconditionError);

  auto q = c6_quotient();
  auto tq = transfer_measure_selection(q.projection, ProbMeasure::uniform(3), {0, 1, 2});
  CHECK(tq.mass({0, 1, 2}) == doctest::Approx(1.0));
  CHECK(tq.weights[0] == tq.weights[1]);

  auto push = pushforward_measure(f, ProbMeasure::uniform(5));
  auto want = fx::frozen()["abs_pushforward_uniform_m2_2"].get<std::vector<double>>();
  for (std::size_t i = 0; i < 3; ++i) CHECK(push.weights[i] == doctest::Approx(want[i]));
  CHECK(push.total() == doctest::Approx(1.0));
}

TEST_CASE("msp pushforward") {
  auto id = CoarseMap::identity(fx::interval(0, 9));
  auto strict_id = ControlFunction::identity();
  strict_id.strict = true;
  auto same = msp_pushforward(id, 1, strict_id, ProbMeasure::uniform(10), 2);
  CHECK(same.mass_holds);
  CHECK(same.guaranteed == 0.5);

  auto f = fx::abs_map(9);
  auto ctl = n_to_1_control(f, 2).control;
  auto out = msp_pushforward(f, 2, ctl, ProbMeasure::uniform(10), 1);
  CHECK(out.disjoint);
  CHECK(out.mass_holds);
  CHECK(out.result.mass >= 0.25 - kMassSlack);
  CHECK(out.mesh <= out.stated_bound);
  CHECK(mesh(*f.codomain, out.constructed.family) <= out.construction_bound);
  CHECK(out.constructed.mass >= 0.25 - kMassSlack);

  auto q = c6_quotient();
  auto qo = msp_pushforward(q.projection, 2, twice_strict(), ProbMeasure::uniform(3), 1);
  CHECK(qo.mass_holds);
  CHECK(is_r_disjoint(*q.quotient, qo.result.family, 1).disjoint);
}

TEST_CASE("msp pullback") {
  auto id = CoarseMap::identity(fx::interval(0, 9));
  auto same = msp_pullback(id, ProbMeasure::uniform(10), 2);
  CHECK(same.mass_holds);
  CHECK(same.result.mass >= 0.25);

  auto f = fx::abs_map(9);
  auto out = msp_pullback(f, ProbMeasure::uniform(19), 1);
  CHECK(out.mass_holds);
  CHECK(out.components_bounded);
  CHECK(out.result.mass >= 0.25 - kMassSlack);
  for (const auto& c : r_components(*f.domain, out.result.family.support(), out.result.radius))
    CHECK(diameter(*f.domain, c) <= out.component_bound);

  auto constant = collapse(fx::interval(0, 7));
  auto c = msp_pullback(constant, ProbMeasure::uniform(8), 2);
  CHECK(c.mass_holds);
  CHECK(c.stages.size() == 1);
}

TEST_CASE("map msp game values") {
  auto line6 = collapse(fx::interval(0, 5));
  auto g = map_msp_check(line6, {0}, 2, 1, 0.5, 0);
  CHECK(g.exact);
  CHECK(g.game_value == doctest::Approx(fx::frozen()["game_line6_r2_s1"].get<double>()));
  CHECK(g.achievable);
  CHECK(map_msp_check(line6, {0}, 1, 0, 0.5, 0).game_value ==
        doctest::Approx(fx::frozen()["game_line6_r1_s0"].get<double>()));
  auto c6 = collapse(fx::cycle(6));
  CHECK(map_msp_check(c6, {0}, 2, 1, 0.5, 0).game_value == doctest::Approx(fx::frozen()["game_c6_r2_s1"].get<double>()));
  auto tri = collapse(triangle());
  CHECK(map_msp_check(tri, {0}, 1, 0, 0.5, 0).game_value ==
        doctest::Approx(fx::frozen()["game_triangle_r1_s0"].get<double>()));
  CHECK(map_msp_check(tri, {0}, 2, 1, 0.5, 0).game_value ==
        doctest::Approx(fx::frozen()["game_triangle_r2_s1"].get<double>()));

  auto wide = map_msp_check(line6, {0}, 2, 5, 0.9, 0);
  CHECK(wide.game_value == doctest::Approx(1.0));
  auto tight = map_msp_check(line6, {0}, 10, 0, 0.9, 0);
  CHECK(tight.game_value == doctest::Approx(1.0 / 6.0));
  CHECK_FALSE(tight.achievable);
  double total = 0;
  for (double w : tight.worst_measure) total += w;
  CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("map msp above the exact size is sampled") {
  auto big = collapse(fx::interval(0, 19));
  auto g = map_msp_check(big, {0}, 2, 1, 0.3, 0);
  CHECK_FALSE(g.exact);
  CHECK(g.inconclusive);
}
