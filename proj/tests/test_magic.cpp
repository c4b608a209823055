#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "ergo/magic.hpp"
#include "ergo/random_systems.hpp"

using namespace ergo;

namespace {

FiniteSystem swap_system() {
  VectorXd w(2);
  w << 0.5, 0.5;
  return FiniteSystem({"a", "b"}, w, GroupModel::cyclic(2), {{{1, 0}}});
}

FiniteSystem double_swap_system() {
  VectorXd w(2);
  w << 0.5, 0.5;
  return FiniteSystem({"a", "b"}, w, GroupModel::cyclic(2), {{{1, 0}}, {{1, 0}}});
}

// marginal of the star measure under the vertex-v projection
VectorXd star_pushforward(const MagicSystem& magic, int vertex) {
  VectorXd out = VectorXd::Zero(magic.base.size());
  for (int s = 0; s < magic.star.size(); ++s) {
    out[magic.project(s, vertex)] += magic.star.weights()[s];
  }
  return out;
}

}  // namespace

TEST_CASE("identity base gives the diagonal star") {
  VectorXd w(2);
  w << 0.5, 0.5;
  const FiniteSystem idsys({"a", "b"}, w, GroupModel::cyclic(2), {{{0, 1}}});
  const MagicSystem magic = magic_extension(idsys);
  REQUIRE(magic.star.size() == 2);
  for (int s = 0; s < 2; ++s) {
    CHECK(magic.project(s, 0) == magic.project(s, 1));
  }
  CHECK(magic.star.generator_action(1, 0) == identity_permutation(2));
}

TEST_CASE("swap star is the full square and moves only the zero vertex") {
  const FiniteSystem sw = swap_system();
  const MagicSystem magic = magic_extension(sw);
  REQUIRE(magic.star.size() == 4);
  CHECK(magic.d() == 1);

  const Permutation star_t = magic.star.generator_action(1, 0);
  const Permutation base_t = sw.generator_action(1, 0);
  for (int s = 0; s < 4; ++s) {
    const int image = star_t[static_cast<std::size_t>(s)];
    // bit 1 of vertex 0 is clear, so that coordinate moves; vertex 1 is fixed
    CHECK(magic.project(image, 0) == base_t[static_cast<std::size_t>(magic.project(s, 0))]);
    CHECK(magic.project(image, 1) == magic.project(s, 1));
  }
  CHECK((star_pushforward(magic, 0) - sw.weights()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((star_pushforward(magic, 1) - sw.weights()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("double swap star carries eight tuples of equal mass") {
  const FiniteSystem dsw = double_swap_system();
  const MagicSystem magic = magic_extension(dsw);
  // the ambient cube space has 16 points; the joining support is half of them
  REQUIRE(magic.star.size() == 8);
  for (int s = 0; s < 8; ++s) {
    CHECK(magic.star.weights()[s] == doctest::Approx(0.125).epsilon(1e-13));
  }
  // support law: both pairs lie in the same diagonal-orbit class, so the
  // vertex parities agree
  for (int s = 0; s < 8; ++s) {
    const int a = magic.project(s, 0) ^ magic.project(s, 1);
    const int b = magic.project(s, 2) ^ magic.project(s, 3);
    CHECK(a == b);
  }

  // action 1 moves vertices 0 and 2 (bit 1 clear), fixes 1 and 3
  const Permutation t1 = magic.star.generator_action(1, 0);
  const Permutation base_t = dsw.generator_action(1, 0);
  for (int s = 0; s < 8; ++s) {
    const int image = t1[static_cast<std::size_t>(s)];
    CHECK(magic.project(image, 0) == base_t[static_cast<std::size_t>(magic.project(s, 0))]);
    CHECK(magic.project(image, 2) == base_t[static_cast<std::size_t>(magic.project(s, 2))]);
    CHECK(magic.project(image, 1) == magic.project(s, 1));
    CHECK(magic.project(image, 3) == magic.project(s, 3));
  }
  // action 2 moves vertices 0 and 1 (bit 2 clear), fixes 2 and 3
  const Permutation t2 = magic.star.generator_action(2, 0);
  for (int s = 0; s < 8; ++s) {
    const int image = t2[static_cast<std::size_t>(s)];
    CHECK(magic.project(image, 0) == base_t[static_cast<std::size_t>(magic.project(s, 0))]);
    CHECK(magic.project(image, 1) == base_t[static_cast<std::size_t>(magic.project(s, 1))]);
    CHECK(magic.project(image, 2) == magic.project(s, 2));
    CHECK(magic.project(image, 3) == magic.project(s, 3));
  }
}

TEST_CASE("star pushforward and intertwining on random systems") {
  Rng rng(61);
  const auto groups = finite_group_catalog();
  for (int trial = 0; trial < 25; ++trial) {
    RandomSystemOptions opt;
    opt.d = 1 + static_cast<int>(rng.uniform_int(2));
    opt.max_blocks = 2;
    opt.max_block_size = 3;
    const FiniteSystem sys = random_system(rng, groups[rng.uniform_int(groups.size())], opt);
    const MagicSystem magic = magic_extension(sys);

    CHECK((star_pushforward(magic, 0) - sys.weights()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(joining_marginal_defect(magic.mu_star) <= 1e-12);
    CHECK(joining_invariance_defect(magic.mu_star) <= 1e-12);

    for (int i = 1; i <= sys.num_actions(); ++i) {
      const Permutation star_t = magic.star.generator_action(i, 0);
      const Permutation base_t = sys.generator_action(i, 0);
      for (int s = 0; s < magic.star.size(); ++s) {
        CHECK(magic.project(star_t[static_cast<std::size_t>(s)], 0) ==
              base_t[static_cast<std::size_t>(magic.project(s, 0))]);
      }
    }
  }
}

TEST_CASE("z partitions") {
  const FiniteSystem sw = swap_system();
  CHECK(z_partition(sw, {1}).size() == invariant_partition(sw, {1}).size());

  VectorXd w2(2);
  w2 << 0.5, 0.5;
  const FiniteSystem idsys({"a", "b"}, w2, GroupModel::cyclic(2), {{{0, 1}}});
  CHECK(z_partition(idsys, {1}).size() == 2);

  // two commuting involutions on four points: rotation by two and the
  // adjacent swap; their invariant partitions refine to singletons
  VectorXd w4 = VectorXd::Constant(4, 0.25);
  const FiniteSystem pair({"0", "1", "2", "3"}, w4, GroupModel::cyclic(2),
                          {{{2, 3, 0, 1}}, {{1, 0, 3, 2}}});
  const Partition z1 = z_partition(pair, {1});
  const Partition z2 = z_partition(pair, {2});
  CHECK(z1.size() == 2);
  CHECK(z2.size() == 2);
  const Partition both = z_partition(pair, {1, 2});
  CHECK(both.size() == 4);

  CHECK_THROWS_AS(z_partition(pair, {}), ValidationError);
}

TEST_CASE("lift to star") {
  const FiniteSystem sw = swap_system();
  const MagicSystem magic = magic_extension(sw);
  const Observable f = indicator(2, 0, "1_a");
  const Observable lifted = lift_to_star(magic, f);
  REQUIRE(lifted.values.size() == 4);
  for (int s = 0; s < 4; ++s) {
    CHECK(lifted.values[s] == f.values[magic.project(s, 0)]);
  }
  CHECK(magic.star.integral(lifted) == doctest::Approx(sw.integral(f)).epsilon(1e-12));
  CHECK_THROWS_AS(lift_to_star(magic, Observable(VectorXd::Zero(3))), ValidationError);
}

TEST_CASE("structure theorem in the star system") {
  SUBCASE("constants and conditional expectations have zero residual") {
    const FiniteSystem dsw = double_swap_system();
    const MagicSystem magic = magic_extension(dsw);
    const StructureReport flat = structure_check(magic, {1, 2}, constant(magic.star.size(), 0.4));
    CHECK(flat.pass);
    CHECK(flat.residual_seminorm <= 1e-12);

    Rng rng(67);
    const Observable raw = random_observable(rng, magic.star.size(), "signed");
    const Partition z = z_partition(magic.star, {1, 2});
    const Observable measurable = cond_expect(magic.star, raw, z);
    const StructureReport rep = structure_check(magic, {1, 2}, measurable);
    CHECK(rep.pass);
    CHECK(rep.residual_seminorm <= 1e-8);
    CHECK(rep.conditional_sup <= 1e-12);
  }

  SUBCASE("random observables over random small systems") {
    Rng rng(71);
    const auto groups = finite_group_catalog();
    for (int trial = 0; trial < 100; ++trial) {
      RandomSystemOptions opt;
      opt.d = 1 + static_cast<int>(rng.uniform_int(2));
      opt.max_blocks = 2;
      opt.max_block_size = 2;
      const FiniteSystem sys = random_system(rng, groups[rng.uniform_int(groups.size())], opt);
      const MagicSystem magic = magic_extension(sys);
      const Observable f = random_observable(rng, magic.star.size(), "signed");
      std::vector<int> eps;
      for (int i = 1; i <= sys.num_actions(); ++i) eps.push_back(i);
      const StructureReport rep = structure_check(magic, eps, f);
      CHECK(rep.pass);
      CHECK(rep.residual_seminorm <= 1e-8);
      CHECK(rep.conditional_sup <= 1e-12);
    }
  }

  SUBCASE("input validation") {
    const FiniteSystem sw = swap_system();
    const MagicSystem magic = magic_extension(sw);
    CHECK_THROWS_AS(structure_check(magic, {}, constant(4, 1.0)), ValidationError);
    CHECK_THROWS_AS(structure_check(magic, {1}, constant(2, 1.0)), ValidationError);
  }
}

TEST_CASE("the star of a star is again a valid joining source") {
  const FiniteSystem dsw = double_swap_system();
  const MagicSystem magic = magic_extension(dsw);
  const Joining mu2 = build_joining(magic.star, {1, 2});
  CHECK(total_mass(mu2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(joining_marginal_defect(mu2) <= 1e-12);
  CHECK(joining_invariance_defect(mu2) <= 1e-12);
}
