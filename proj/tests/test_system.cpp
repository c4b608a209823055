#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ergo/random_systems.hpp"
#include "ergo/system.hpp"

using namespace ergo;

namespace {

FiniteSystem swap_system() {
  VectorXd w(2);
  w << 0.5, 0.5;
  return FiniteSystem({"a", "b"}, w, GroupModel::cyclic(2), {{{1, 0}}});
}

FiniteSystem rotation_system(int n, const std::vector<int>& steps) {
  VectorXd w = VectorXd::Constant(n, 1.0 / n);
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
  std::vector<std::vector<Permutation>> actions;
  for (int s : steps) {
    Permutation p(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x) p[static_cast<std::size_t>(x)] = (x + s) % n;
    actions.push_back({p});
  }
  return FiniteSystem(std::move(names), w, GroupModel::cyclic(n), std::move(actions));
}

// rotation on Z/n driven by the group Z through its box family
FiniteSystem z_rotation_system(int n) {
  VectorXd w = VectorXd::Constant(n, 1.0 / n);
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
  Permutation p(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) p[static_cast<std::size_t>(x)] = (x + 1) % n;
  return FiniteSystem(std::move(names), w, GroupModel::zm(1), {{p}});
}

}  // namespace

TEST_CASE("permutation helpers") {
  const Permutation p = {1, 2, 0};
  CHECK(compose(p, invert(p)) == identity_permutation(3));
  CHECK(permutation_power(p, 3) == identity_permutation(3));
  CHECK(permutation_power(p, -1) == invert(p));
  CHECK(permutation_power(p, 3000000000LL + 1) == p);
  CHECK(is_permutation(p));
  CHECK_FALSE(is_permutation({0, 0, 1}));
}

TEST_CASE("system validation rejects broken inputs") {
  VectorXd w(2);
  w << 0.5, 0.5;
  const GroupModel z2 = GroupModel::cyclic(2);

  VectorXd bad_sum(2);
  bad_sum << 0.5, 0.3;
  CHECK_THROWS_AS(FiniteSystem({"a", "b"}, bad_sum, z2, {{{1, 0}}}), ValidationError);

  CHECK_THROWS_AS(FiniteSystem({"a", "b"}, w, z2, {{{0, 0}}}), ValidationError);

  VectorXd skew(2);
  skew << 0.7, 0.3;
  // the swap does not preserve a lopsided measure
  CHECK_THROWS_AS(FiniteSystem({"a", "b"}, skew, z2, {{{1, 0}}}), ValidationError);

  // generator count must match the group
  CHECK_THROWS_AS(FiniteSystem({"a", "b"}, w, z2, {{{1, 0}, {1, 0}}}), ValidationError);

  // non-commuting actions: two transpositions on 3 points
  VectorXd w3 = VectorXd::Constant(3, 1.0 / 3);
  CHECK_THROWS_AS(FiniteSystem({"x", "y", "z"}, w3, z2, {{{1, 0, 2}}, {{0, 2, 1}}}),
                  ValidationError);

  // the action must respect the group relations: a 3-cycle is no Z/2 action
  CHECK_THROWS_AS(FiniteSystem({"x", "y", "z"}, w3, z2, {{{1, 2, 0}}}), ValidationError);
}

TEST_CASE("action lookup and translation") {
  const FiniteSystem sys = swap_system();
  CHECK(sys.size() == 2);
  CHECK(sys.num_actions() == 1);
  CHECK(sys.point_index("b") == 1);
  CHECK(sys.action(1, {0}) == identity_permutation(2));
  CHECK(sys.action(1, {1}) == Permutation{1, 0});

  const Observable f(([] { VectorXd v(2); v << 1.0, 0.0; return v; })(), "1_a");
  const Observable g = sys.translate(f, sys.action(1, {1}));
  CHECK(g.values[0] == 0.0);
  CHECK(g.values[1] == 1.0);
  CHECK(sys.integral(f) == doctest::Approx(0.5));
  CHECK(sys.l2_norm(f) == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("invariant partitions") {
  const FiniteSystem sw = swap_system();
  CHECK(invariant_partition(sw, {1}).size() == 1);

  VectorXd w(2);
  w << 0.5, 0.5;
  const FiniteSystem idsys({"a", "b"}, w, GroupModel::cyclic(2), {{{0, 1}}});
  const Partition p = invariant_partition(idsys, {1});
  CHECK(p.size() == 2);

  const FiniteSystem rot2 = rotation_system(6, {2});
  const Partition orbits = invariant_partition(rot2, {1});
  REQUIRE(orbits.size() == 2);
  CHECK(orbits.block_of[0] == orbits.block_of[2]);
  CHECK(orbits.block_of[0] == orbits.block_of[4]);
  CHECK(orbits.block_of[1] == orbits.block_of[3]);
  CHECK(orbits.block_of[0] != orbits.block_of[1]);
}

TEST_CASE("conditional expectation") {
  const FiniteSystem rot2 = rotation_system(6, {2});
  VectorXd v = VectorXd::Zero(6);
  v[0] = 1.0;
  const Observable f(v, "1_0");

  SUBCASE("singletons give f back, one block gives the mean") {
    const Observable fine = cond_expect(rot2, f, Partition::singletons(6));
    CHECK((fine.values - f.values).cwiseAbs().maxCoeff() == 0.0);
    const Observable coarse = cond_expect(rot2, f, Partition::whole(6));
    for (int i = 0; i < 6; ++i) CHECK(coarse.values[i] == doctest::Approx(1.0 / 6).epsilon(1e-14));
  }

  SUBCASE("orbit blocks") {
    const Observable e = cond_expect(rot2, f, invariant_partition(rot2, {1}));
    for (int i : {0, 2, 4}) CHECK(e.values[i] == doctest::Approx(1.0 / 3).epsilon(1e-14));
    for (int i : {1, 3, 5}) CHECK(e.values[i] == 0.0);
  }

  SUBCASE("idempotence, tower, and mean preservation") {
    Rng rng(11);
    for (int trial = 0; trial < 25; ++trial) {
      const FiniteSystem sys = random_system(rng, 2);
      const Observable f_r = random_observable(rng, sys.size(), "signed");
      const Partition q = invariant_partition(sys, {1});
      const Partition p = invariant_partition(sys, {1, 2});  // coarser: more actions, bigger orbits
      CHECK(q.refines(p));

      const Observable eq = cond_expect(sys, f_r, q);
      CHECK((cond_expect(sys, eq, q).values - eq.values).cwiseAbs().maxCoeff() <= 1e-13);
      const Observable tower = cond_expect(sys, eq, p);
      const Observable direct = cond_expect(sys, f_r, p);
      CHECK((tower.values - direct.values).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK(sys.integral(eq) == doctest::Approx(sys.integral(f_r)).epsilon(1e-12));
    }
  }
}

TEST_CASE("mean ergodic theorem is exact on finite groups") {
  Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const FiniteSystem sys = random_system(rng, 2);
    const Observable f = random_observable(rng, sys.size(), "signed");
    for (int i = 1; i <= sys.num_actions(); ++i) {
      const Observable proj = cond_expect(sys, f, invariant_partition(sys, {i}));
      const Observable avg = ergodic_average(sys, i, f, 3);
      CHECK((avg.values - proj.values).cwiseAbs().maxCoeff() <= 1e-12);
      const Observable two = two_sided_average(sys, i, f, 3);
      CHECK((two.values - proj.values).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("spec'd small averages") {
  const FiniteSystem sw = swap_system();
  VectorXd v(2);
  v << 1.0, 0.0;
  const Observable f(v, "1_a");
  const Observable avg = ergodic_average(sw, 1, f, 7);
  CHECK(avg.values[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(avg.values[1] == doctest::Approx(0.5).epsilon(1e-14));

  const FiniteSystem rot3 = rotation_system(3, {1});
  VectorXd v3 = VectorXd::Zero(3);
  v3[0] = 1.0;
  const Observable f3(v3, "1_0");
  const Observable two = two_sided_average(rot3, 1, f3, 1);
  for (int i = 0; i < 3; ++i) CHECK(two.values[i] == doctest::Approx(1.0 / 3).epsilon(1e-14));

  // identity action leaves any observable alone
  VectorXd w(2);
  w << 0.5, 0.5;
  const FiniteSystem idsys({"a", "b"}, w, GroupModel::cyclic(2), {{{0, 1}}});
  const Observable same = ergodic_average(idsys, 1, f, 4);
  CHECK((same.values - f.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("rotation under Z boxes converges to the projection") {
  const FiniteSystem sys = z_rotation_system(100);
  VectorXd v = VectorXd::Zero(100);
  v[0] = 1.0;
  const Observable f(v, "1_0");
  const Observable proj = cond_expect(sys, f, invariant_partition(sys, {1}));

  // exact multiple of the period: the box average is the projection on the nose
  const Observable exact = ergodic_average(sys, 1, f, 200);
  CHECK((exact.values - proj.values).cwiseAbs().maxCoeff() <= 1e-15);

  // N = 150: residues below 50 appear twice, the rest once; L2 error is 1/300
  const Observable off = ergodic_average(sys, 1, f, 150);
  VectorXd diff = off.values - proj.values;
  const double l2 = std::sqrt(diff.cwiseAbs2().dot(sys.weights()));
  CHECK(l2 == doctest::Approx(1.0 / 300).epsilon(1e-10));

  // error is nonincreasing along doubling and small by N = 10^4
  double prev = 2.0;
  for (int n : {1250, 2500, 5000, 10000}) {
    const Observable a = ergodic_average(sys, 1, f, n);
    const double err = std::sqrt((a.values - proj.values).cwiseAbs2().dot(sys.weights()));
    CHECK(err <= prev + 1e-12);
    prev = err;
  }
  CHECK(prev <= 1e-3);
}

TEST_CASE("random systems are valid and varied") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 1 + static_cast<int>(rng.uniform_int(3));
    const FiniteSystem sys = random_system(rng, d);
    CHECK(sys.num_actions() == d);
    CHECK(sys.weights().sum() == doctest::Approx(1.0).epsilon(1e-12));
  }

  RandomSystemOptions opt;
  opt.d = 2;
  opt.max_blocks = 2;
  opt.max_block_size = 3;
  opt.allow_translation_pair = false;
  for (int trial = 0; trial < 20; ++trial) {
    const FiniteSystem sys = random_system(rng, symmetric_group_3(), opt);
    CHECK(sys.size() <= 6);
  }
  CHECK_THROWS_AS(random_system(rng, GroupModel::heisenberg()), ValidationError);
  CHECK_THROWS_AS(random_observable(rng, 3, "gaussian"), ValidationError);
}

TEST_CASE("translation pair on S3 is a valid two-action system") {
  Rng rng(1);
  RandomSystemOptions opt;
  opt.d = 2;
  // force the translation pair by retrying until one appears
  for (int trial = 0; trial < 200; ++trial) {
    const FiniteSystem sys = random_system(rng, symmetric_group_3(), opt);
    if (sys.size() == 6 && sys.point_names()[0] == sys.group().element_name(sys.group().identity())) {
      // left and right translations commute even though S3 is nonabelian
      const Permutation l = sys.generator_action(1, 0);
      const Permutation r = sys.generator_action(2, 0);
      CHECK(compose(l, r) == compose(r, l));
      return;
    }
  }
  FAIL("no translation pair system was produced in 200 draws");
}
