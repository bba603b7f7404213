#include <doctest.h>

#include "coarse/trees.hpp"
#include "fixtures.hpp"

using namespace coarse;

namespace {

ControlFunction strict_identity() {
  auto c = ControlFunction::identity();
  c.strict = true;
  return c;
}

// Root {X} split once into the given subfamilies of `sets`.
DecompositionTree two_level(const FiniteMetricSpace& x, std::vector<PointSet> sets, std::vector<Subfamily> subs,
                            double scale, double terminal) {
  DecompositionTree t;
  t.levels = {Family{{x.all()}, {}}, Family{std::move(sets), {}}};
  t.scales = {scale};
  t.branching = {static_cast<int>(subs.size())};
  t.splits = {{std::move(subs)}};
  t.terminal_mesh = terminal;
  return t;
}

DecompositionTree example16(double scale) {
  auto x = FiniteMetricSpace::integer_interval(0, 15);
  return two_level(x, {fx::range(0, 0, 6), fx::range(0, 9, 15), {7, 8}}, {{0, 1}, {2}}, scale, 6);
}

// A partition of {-15..15} whose subfamilies are 9-disjoint.
DecompositionTree reflected_partition() {
  auto x = FiniteMetricSpace::integer_interval(-15, 15);
  return two_level(x,
                   {fx::range(-15, -15, -13), fx::range(-15, -4, 3), fx::range(-15, 13, 15), fx::range(-15, -12, -5),
                    fx::range(-15, 4, 12)},
                   {{0, 1, 2}, {3, 4}}, 9, 8);
}

}  // namespace

TEST_CASE("verify the {0..15} sFDC tree") {
  auto x = FiniteMetricSpace::integer_interval(0, 15);
  auto ok = verify_tree(x, example16(2), TreeMode::kSfdc);
  CHECK(ok.valid);
  REQUIRE(ok.bounded_level);
  CHECK(*ok.bounded_level == 1);

  auto bad = verify_tree(x, example16(4), TreeMode::kSfdc);
  CHECK_FALSE(bad.valid);
  REQUIRE_FALSE(bad.violations.empty());
  CHECK(bad.violations[0].condition == "disjoint");
  REQUIRE(bad.violations[0].witness);
  CHECK(bad.violations[0].witness->first == 6);
  CHECK(bad.violations[0].witness->second == 9);

  auto p = FiniteMetricSpace::integer_interval(0, 0);
  DecompositionTree single;
  single.levels = {Family{{{0}}, {}}};
  single.terminal_mesh = 0;
  CHECK(verify_tree(p, single, TreeMode::kSfdc).valid);
}

TEST_CASE("verify rejects malformed trees") {
  auto x = FiniteMetricSpace::integer_interval(0, 15);
  auto t = example16(2);
  t.levels[0].sets[0].pop_back();
  CHECK_FALSE(verify_tree(x, t, TreeMode::kSfdc).valid);
  auto wide = example16(2);
  wide.terminal_mesh = 5;
  auto v = verify_tree(x, wide, TreeMode::kSfdc);
  CHECK_FALSE(v.valid);
  auto missing = example16(2);
  missing.splits[0][0][1].clear();
  CHECK_FALSE(verify_tree(x, missing, TreeMode::kSfdc).valid);
  auto three = two_level(x, {fx::range(0, 0, 4), fx::range(0, 5, 10), fx::range(0, 11, 15)}, {{0}, {1}, {2}}, 1, 6);
  CHECK(verify_tree(x, three, TreeMode::kCasdim).valid);
  CHECK_FALSE(verify_tree(x, three, TreeMode::kSfdc).valid);
}

TEST_CASE("partition refine") {
  auto abc = FiniteMetricSpace::integer_interval(0, 2);
  auto t = two_level(abc, {{0, 1}, {1, 2}}, {{0}, {1}}, 1, 1);
  auto r = partition_refine(abc, t);
  CHECK(levels_are_partitions(abc, r));
  std::vector<PointSet> sets = r.levels[1].sets;
  std::sort(sets.begin(), sets.end());
  CHECK(sets == std::vector<PointSet>{{0, 1}, {2}});

  auto x = FiniteMetricSpace::integer_interval(0, 15);
  auto already = canonical_tree(example16(2));
  auto same = partition_refine(x, already);
  CHECK(same.levels[1].sets == already.levels[1].sets);
  CHECK(same.splits == already.splits);

  auto overlap = two_level(x, {fx::range(0, 0, 8), fx::range(0, 9, 15), fx::range(0, 6, 10)}, {{0, 1}, {2}}, 1, 8);
  CHECK(verify_tree(x, overlap, TreeMode::kSfdc).valid);
  auto refined = partition_refine(x, overlap);
  CHECK(levels_are_partitions(x, refined));
  CHECK(verify_tree(x, refined, TreeMode::kSfdc).valid);
  for (const auto& s : refined.levels[1].sets) {
    bool inside = false;
    for (const auto& old : overlap.levels[1].sets) inside = inside || is_subset(s, old);
    CHECK(inside);
  }
}

TEST_CASE("casdim to sfdc") {
  auto x = FiniteMetricSpace::integer_interval(0, 15);
  auto binary = canonical_tree(example16(2));
  auto same = casdim_to_sfdc(x, binary);
  CHECK(same.depth() == 2);
  CHECK(canonical_tree(same).levels[1].sets == binary.levels[1].sets);
  CHECK(verify_tree(x, same, TreeMode::kSfdc).valid);

  auto y = FiniteMetricSpace::integer_interval(0, 20);
  auto t3 = two_level(y, {fx::range(0, 0, 4), fx::range(0, 12, 16), fx::range(0, 5, 8), fx::range(0, 17, 20),
                          fx::range(0, 9, 11)},
                      {{0, 1}, {2, 3}, {4}}, 2, 4);
  REQUIRE(verify_tree(y, t3, TreeMode::kCasdim).valid);
  auto s = casdim_to_sfdc(y, t3);
  CHECK(s.depth() == 3);
  auto v = verify_tree(y, s, TreeMode::kSfdc);
  CHECK(v.valid);
  for (int b : s.branching) CHECK(b <= 2);
}

TEST_CASE("tree to cover") {
  auto x = FiniteMetricSpace::integer_interval(0, 15);
  auto c = tree_to_cover(x, example16(2), 2);
  CHECK(c.color_count() == 2);
  CHECK(c.color_class(0).sets == std::vector<PointSet>{fx::range(0, 0, 6), fx::range(0, 9, 15)});
  CHECK(c.color_class(1).sets == std::vector<PointSet>{{7, 8}});
  CHECK(colors_r_disjoint(x, c, 2).disjoint);
  CHECK(mesh(x, c) == 6);

  DecompositionTree root;
  root.levels = {Family{{x.all()}, {}}};
  root.terminal_mesh = 15;
  auto one = tree_to_cover(x, root, 5);
  CHECK(one.size() == 1);

  auto y = FiniteMetricSpace::integer_interval(0, 30);
  DecompositionTree t;
  t.levels = {Family{{y.all()}, {}},
              Family{{fx::range(0, 0, 14), fx::range(0, 15, 30)}, {}},
              Family{{fx::range(0, 0, 5), fx::range(0, 10, 14), fx::range(0, 6, 9), fx::range(0, 15, 20),
                      fx::range(0, 26, 30), fx::range(0, 21, 25)},
                     {}}};
  t.scales = {10, 3};
  t.branching = {2, 2};
  t.splits = {{{{0}, {1}}}, {{{0, 1}, {2}}, {{3, 4}, {5}}}};
  t.terminal_mesh = 5;
  REQUIRE(verify_tree(y, t, TreeMode::kSfdc).valid);
  auto cov = tree_to_cover(y, t, 3);
  CHECK(cov.color_count() <= 4);
  CHECK(covers(cov, y.all()));
  CHECK(colors_r_disjoint(y, cov, 3).disjoint);
  CHECK_THROWS_AS(tree_to_cover(y, t, 4), PreconditionError);
}

TEST_CASE("tree pullback") {
  auto id = CoarseMap::identity(fx::interval(0, 15));
  auto t = canonical_tree(example16(2));
  auto same = tree_pullback(id, t, 1, strict_identity(), {2});
  CHECK_FALSE(same.extra_level);
  CHECK(canonical_tree(same.tree).levels == t.levels);

  auto f = fx::abs_map(15);
  auto back = tree_pullback(f, t, 2, strict_identity(), {2});
  auto v = verify_tree(*f.domain, back.tree, TreeMode::kSfdc);
  CHECK(v.valid);
  CHECK(back.extra_level);
  CHECK(back.max_pieces == 2);
  CHECK(back.tree.levels[0].sets[0] == f.domain->all());

  auto c6 = fx::cycle(6);
  auto q = group_quotient(GroupAction::cyclic(c6, {3, 4, 5, 0, 1, 2}, 2));
  auto qt = two_level(*q.quotient, {{0}, {1}, {2}}, {{0}, {1, 2}}, 1, 0);
  REQUIRE(verify_tree(*q.quotient, qt, TreeMode::kSfdc).valid);
  // orbit parts have diameter <= 2r, attained
  auto twice = ControlFunction::affine(2, 0);
  twice.strict = true;
  auto qb = tree_pullback(q.projection, qt, 2, twice, {1});
  CHECK(verify_tree(*c6, qb.tree, TreeMode::kSfdc).valid);
  CHECK(qb.max_pieces <= 2);
}

TEST_CASE("tree pushforward") {
  auto id = CoarseMap::identity(fx::interval(0, 15));
  auto t = canonical_tree(example16(2));
  auto same = tree_pushforward(id, t, 1, strict_identity(), {0.25});
  CHECK(verify_tree(*id.codomain, same.tree, TreeMode::kCasdim).valid);

  auto f = fx::abs_map(15);
  auto need = tree_pushforward_input_scales(*f.domain, 2, strict_identity(), {2}, {1});
  REQUIRE(need.size() == 1);
  CHECK(need[0] == 9);
  auto src = reflected_partition();
  REQUIRE(verify_tree(*f.domain, src, TreeMode::kSfdc).valid);
  auto push = tree_pushforward(f, src, 2, strict_identity(), {1});
  auto v = verify_tree(*f.codomain, push.tree, TreeMode::kCasdim);
  CHECK(v.valid);
  REQUIRE(push.tree.branching.size() == 1);
  CHECK(push.tree.branching[0] == 4);
  REQUIRE(push.audit.size() == 1);
  CHECK(push.audit[0].input_scale >= push.audit[0].required_input_scale);
  CHECK(push.audit[0].containments > 0);

  auto c6 = fx::cycle(6);
  auto q = group_quotient(GroupAction::cyclic(c6, {3, 4, 5, 0, 1, 2}, 2));
  auto ct = two_level(*c6, {{0, 1, 2}, {3, 4, 5}}, {{0}, {1}}, 4, 2);
  REQUIRE(verify_tree(*c6, ct, TreeMode::kSfdc).valid);
  auto twice = ControlFunction::affine(2, 0);
  twice.strict = true;
  auto qp = tree_pushforward(q.projection, ct, 2, twice, {0.1});
  CHECK(verify_tree(*q.quotient, qp.tree, TreeMode::kCasdim).valid);
  for (int b : qp.tree.branching) CHECK(b <= 4);
}
