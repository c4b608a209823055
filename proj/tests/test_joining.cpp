#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <unordered_map>
#include <vector>

#include "ergo/joining.hpp"
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

// iterated average over the whole finite group, the defining limit of the
// joining integral: avg over (g_1..g_k) of integral prod_eps f_eps o R_eps
double brute_iterated_average(const FiniteSystem& sys, const std::vector<int>& axes,
                              const std::vector<Observable>& fs) {
  const int k = static_cast<int>(axes.size());
  const std::vector<Element> all = sys.group().folner_set(1);
  std::vector<std::size_t> pick(static_cast<std::size_t>(k), 0);
  std::vector<Permutation> perms(static_cast<std::size_t>(k));
  double sum = 0;
  std::int64_t combos = 0;
  for (;;) {
    for (int j = 0; j < k; ++j) {
      perms[static_cast<std::size_t>(j)] = sys.action(axes[static_cast<std::size_t>(j)],
                                                      all[pick[static_cast<std::size_t>(j)]]);
    }
    sum += cube_term(sys, fs, perms);
    ++combos;
    int j = 0;
    while (j < k && ++pick[static_cast<std::size_t>(j)] == all.size()) {
      pick[static_cast<std::size_t>(j)] = 0;
      ++j;
    }
    if (j == k) break;
  }
  return sum / static_cast<double>(combos);
}

std::vector<int> random_axes(Rng& rng, int d, int max_k) {
  std::vector<int> pool;
  for (int i = 1; i <= d; ++i) pool.push_back(i);
  const int k = 1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(std::min(d, max_k))));
  std::vector<int> axes;
  for (int j = 0; j < k; ++j) {
    const std::size_t at = static_cast<std::size_t>(rng.uniform_int(pool.size()));
    axes.push_back(pool[at]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(at));
  }
  return axes;
}

}  // namespace

TEST_CASE("ergodic action gives the product joining") {
  const FiniteSystem sw = swap_system();
  Joining j = build_joining(sw, {1});
  CHECK(j.k() == 1);
  CHECK(j.vertices() == 2);
  REQUIRE(j.support.size() == 4);
  j.canonicalize();
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      CHECK(j.weight({a, b}) == doctest::Approx(0.25).epsilon(1e-14));
    }
  }
  CHECK(total_mass(j) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(j.find({0, 0}) >= 0);
  CHECK(j.find({2, 0}) == -1);
  CHECK(j.weight({2, 0}) == 0.0);
  // canonical layout is lexicographic
  for (std::size_t t = 1; t < j.support.size(); ++t) CHECK(j.support[t - 1] < j.support[t]);
}

TEST_CASE("identity action gives the diagonal joining") {
  VectorXd w(2);
  w << 0.5, 0.5;
  const FiniteSystem idsys({"a", "b"}, w, GroupModel::cyclic(2), {{{0, 1}}});
  Joining j = build_joining(idsys, {1});
  REQUIRE(j.support.size() == 2);
  CHECK(j.weight({0, 0}) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(j.weight({1, 1}) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(j.weight({0, 1}) == 0.0);
}

TEST_CASE("double rotation joining on three points") {
  const FiniteSystem sys = rotation_system(3, {1, 2});
  Joining j = build_joining(sys, {1, 2});
  CHECK(j.k() == 2);
  REQUIRE(j.support.size() == 27);
  for (Eigen::Index i = 0; i < j.mass.size(); ++i) {
    CHECK(j.mass[i] == doctest::Approx(1.0 / 27).epsilon(1e-13));
  }
  // vertex order (x, y, x', y'); the pair differences must match mod 3
  CHECK(j.weight({0, 1, 2, 0}) == doctest::Approx(1.0 / 27).epsilon(1e-13));
  CHECK(j.find({0, 1, 0, 2}) == -1);
  CHECK(joining_marginal_defect(j) <= 1e-13);
  CHECK(joining_invariance_defect(j) <= 1e-13);
  for (int v = 0; v < 4; ++v) {
    const VectorXd marg = joining_marginal(j, v);
    CHECK((marg - sys.weights()).cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("joining invariants hold on random systems") {
  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 1 + static_cast<int>(rng.uniform_int(3));
    RandomSystemOptions opt;
    opt.d = d;
    opt.max_blocks = 2;
    opt.max_block_size = 3;
    const auto groups = finite_group_catalog();
    const FiniteSystem sys = random_system(rng, groups[rng.uniform_int(groups.size())], opt);
    const std::vector<int> axes = random_axes(rng, d, 3);
    const Joining j = build_joining(sys, axes);
    CHECK(total_mass(j) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(joining_marginal_defect(j) <= 1e-12);
    CHECK(joining_invariance_defect(j) <= 1e-12);
  }
}

TEST_CASE("joining integral equals the iterated group average") {
  Rng rng(37);
  const std::vector<GroupModel> small = {GroupModel::cyclic(2), GroupModel::cyclic(3),
                                         GroupModel::cyclic(4), klein_four_group()};
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 1 + static_cast<int>(rng.uniform_int(3));
    RandomSystemOptions opt;
    opt.d = d;
    opt.max_blocks = 2;
    opt.max_block_size = 3;
    const FiniteSystem sys = random_system(rng, small[rng.uniform_int(small.size())], opt);
    const std::vector<int> axes = random_axes(rng, d, 3);
    std::vector<Observable> fs;
    for (int v = 0; v < vertex_count(static_cast<int>(axes.size())); ++v) {
      fs.push_back(random_observable(rng, sys.size(), "signed"));
    }
    const double via_joining = joining_integral(build_joining(sys, axes), fs);
    const double via_average = brute_iterated_average(sys, axes, fs);
    CHECK(via_joining == doctest::Approx(via_average).epsilon(1e-10));
  }
}

TEST_CASE("box seminorm closed forms") {
  const FiniteSystem sw = swap_system();
  const Observable c_obs = constant(2, -0.7);
  CHECK(box_seminorm(sw, {1}, c_obs) == doctest::Approx(0.7).epsilon(1e-12));

  VectorXd v(2);
  v << 0.9, 0.1;
  const Observable f(v, "f");
  // the swap is ergodic, so the joining is product measure and the seminorm
  // collapses to |integral of f|
  CHECK(box_seminorm(sw, {1}, f) == doctest::Approx(0.5).epsilon(1e-12));

  VectorXd w(2);
  w << 0.5, 0.5;
  const FiniteSystem idsys({"a", "b"}, w, GroupModel::cyclic(2), {{{0, 1}}});
  CHECK(box_seminorm(idsys, {1}, f) == doctest::Approx(idsys.l2_norm(f)).epsilon(1e-12));

  const FiniteSystem dsw = double_swap_system();
  CHECK(box_seminorm(dsw, {1, 2}, c_obs) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("box seminorm axioms") {
  Rng rng(41);
  for (int trial = 0; trial < 25; ++trial) {
    RandomSystemOptions opt;
    opt.d = 2;
    opt.max_blocks = 2;
    opt.max_block_size = 3;
    const auto groups = finite_group_catalog();
    const FiniteSystem sys = random_system(rng, groups[rng.uniform_int(groups.size())], opt);
    const Observable f = random_observable(rng, sys.size(), "signed", "f");
    const Observable g = random_observable(rng, sys.size(), "signed", "g");
    for (const std::vector<int>& eta : {std::vector<int>{1}, std::vector<int>{1, 2}}) {
      const double nf = box_seminorm(sys, eta, f);
      const double ng = box_seminorm(sys, eta, g);
      CHECK(nf >= 0.0);
      const Observable scaled(2.5 * f.values, "cf");
      CHECK(box_seminorm(sys, eta, scaled) == doctest::Approx(2.5 * nf).epsilon(1e-10));
      const Observable negated(-f.values, "-f");
      CHECK(box_seminorm(sys, eta, negated) == doctest::Approx(nf).epsilon(1e-10));
      const Observable sum_fg(f.values + g.values, "f+g");
      CHECK(box_seminorm(sys, eta, sum_fg) <= nf + ng + 1e-10);
    }
  }
}

TEST_CASE("cube Cauchy-Schwarz-Gowers inequality") {
  const FiniteSystem dsw = double_swap_system();

  SUBCASE("all vertices share one function") {
    VectorXd v(2);
    v << 0.8, -0.3;
    const Observable f(v, "f");
    const std::vector<Observable> fs(4, f);
    const CsgReport rep = csg_check(dsw, {1, 2}, fs);
    CHECK(rep.pass);
    const double nf = box_seminorm(dsw, {1, 2}, f);
    CHECK(rep.rhs == doctest::Approx(nf).epsilon(1e-12));
    CHECK(rep.lhs == doctest::Approx(std::pow(nf, 4)).epsilon(1e-10));
    for (double s : rep.vertex_seminorms) CHECK(s == doctest::Approx(nf).epsilon(1e-12));
  }

  SUBCASE("one vanishing vertex forces both sides to zero") {
    VectorXd v(2);
    v << 1.0, -1.0;
    std::vector<Observable> fs(4, Observable(v, "f"));
    fs[2] = constant(2, 0.0);
    const CsgReport rep = csg_check(dsw, {1, 2}, fs);
    CHECK(rep.pass);
    CHECK(rep.lhs == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(rep.rhs == doctest::Approx(0.0).epsilon(1e-14));
  }

  SUBCASE("sup norms above one are rejected") {
    std::vector<Observable> fs(4, constant(2, 1.5));
    CHECK_THROWS_AS(csg_check(dsw, {1, 2}, fs), ValidationError);
  }

  SUBCASE("random signs on six points") {
    Rng rng(43);
    RandomSystemOptions opt;
    opt.d = 2;
    opt.max_blocks = 2;
    opt.max_block_size = 3;
    for (int trial = 0; trial < 25; ++trial) {
      const FiniteSystem sys = random_system(rng, symmetric_group_3(), opt);
      std::vector<Observable> fs;
      for (int v = 0; v < 4; ++v) fs.push_back(random_observable(rng, sys.size(), "pm1"));
      const CsgReport rep = csg_check(sys, {1, 2}, fs);
      CHECK(rep.pass);
      CHECK(std::abs(rep.lhs) <= rep.rhs + 1e-10);
    }
  }
}

TEST_CASE("finitary van der Corput step") {
  SUBCASE("constant family has zero difference") {
    const GroupModel z = GroupModel::zm(1);
    std::unordered_map<Element, VectorXd, ElementHash> vectors;
    VectorXd v(2);
    v << 0.6, -0.8;
    for (std::int64_t g = -4; g < 1100; ++g) vectors[{g}] = v;
    const VdcReport rep = vdc_check(vectors, z, z, 3, 0.01);
    CHECK(rep.pass);
    CHECK(rep.lhs <= 1e-12);
    CHECK(rep.bound == doctest::Approx(0.02));
    CHECK(rep.max_defect < 0.01);
  }

  SUBCASE("whole finite group is exactly invariant") {
    const GroupModel z5 = GroupModel::cyclic(5);
    Rng rng(47);
    std::unordered_map<Element, VectorXd, ElementHash> vectors;
    for (const Element& g : z5.folner_set(1)) {
      VectorXd v(3);
      for (int i = 0; i < 3; ++i) v[i] = rng.uniform_real() - 0.5;
      v /= std::max(1.0, v.norm());
      vectors[g] = v;
    }
    const VdcReport rep = vdc_check(vectors, z5, z5, 2, 0.001);
    CHECK(rep.pass);
    CHECK(rep.lhs <= 1e-14);
    CHECK(rep.big_n == 1);
    CHECK(rep.max_defect == 0.0);
  }

  SUBCASE("planar rotation vectors on integer boxes") {
    const GroupModel z = GroupModel::zm(1);
    const double theta = 0.6 * M_PI;
    std::unordered_map<Element, VectorXd, ElementHash> vectors;
    for (std::int64_t g = 0; g < 200; ++g) {
      VectorXd v(2);
      v << std::cos(theta * static_cast<double>(g)), std::sin(theta * static_cast<double>(g));
      vectors[{g}] = v;
    }
    const VdcReport rep = vdc_check(vectors, z, z, 4, 0.05);
    CHECK(rep.big_n == 128);  // first power of two with 2*3/N below 0.05
    CHECK(rep.pass);
    CHECK(rep.lhs < rep.bound);
    CHECK(rep.lhs > 0.0);
  }

  SUBCASE("input validation") {
    const GroupModel z = GroupModel::zm(1);
    std::unordered_map<Element, VectorXd, ElementHash> vectors;
    CHECK_THROWS_AS(vdc_check(vectors, z, z, 2, -0.5), ValidationError);
    CHECK_THROWS_AS(vdc_check(vectors, z, GroupModel::zm(2), 2, 0.1), ValidationError);
    // empty window cannot cover Phi_N
    CHECK_THROWS_AS(vdc_check(vectors, z, z, 2, 0.9), ValidationError);
    VectorXd big(1);
    big << 3.0;
    std::unordered_map<Element, VectorXd, ElementHash> loud;
    for (std::int64_t g = -4; g < 40; ++g) loud[{g}] = big;
    CHECK_THROWS_AS(vdc_check(loud, z, z, 2, 0.9), ValidationError);
  }
}

TEST_CASE("seminorm bound for the multi-average") {
  const FiniteSystem dsw = double_swap_system();
  const std::vector<GroupModel> fams = {dsw.group(), dsw.group()};
  const std::vector<std::int64_t> ns = {1, 1};

  SUBCASE("vanishing anchor vertex") {
    std::vector<Observable> fs(4, constant(2, 0.0));
    VectorXd v(2);
    v << 1.0, -0.5;
    for (int i = 1; i < 4; ++i) fs[static_cast<std::size_t>(i)] = Observable(v, "f");
    const SeminormBoundReport rep = seminorm_bound_check(dsw, {1, 2}, fs, fams, ns, 0.1);
    CHECK(rep.sharp);
    CHECK(rep.verdict == "pass");
    CHECK(rep.seminorm == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(std::abs(rep.j_value) <= 1e-12);
  }

  SUBCASE("all-ones saturates the bound") {
    const std::vector<Observable> fs(4, constant(2, 1.0));
    const SeminormBoundReport rep = seminorm_bound_check(dsw, {1, 2}, fs, fams, ns, 0.0);
    CHECK(rep.sharp);
    CHECK(rep.verdict == "pass");
    CHECK(rep.j_value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.seminorm == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("random signs stay within the sharp tolerance") {
    Rng rng(53);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Observable> fs;
      for (int v = 0; v < 4; ++v) fs.push_back(random_observable(rng, 2, "pm1"));
      const SeminormBoundReport rep = seminorm_bound_check(dsw, {1, 2}, fs, fams, ns, 0.0);
      CHECK(rep.sharp);
      CHECK(rep.verdict == "pass");
      CHECK(std::abs(rep.j_value) <= rep.seminorm + 1e-9);
    }
  }

  SUBCASE("asymptotic family reports inconclusive below N0 and passes past it") {
    const FiniteSystem rot = [] {
      VectorXd w = VectorXd::Constant(6, 1.0 / 6);
      std::vector<std::string> names;
      for (int i = 0; i < 6; ++i) names.push_back("p" + std::to_string(i));
      Permutation p(6);
      for (int x = 0; x < 6; ++x) p[static_cast<std::size_t>(x)] = (x + 1) % 6;
      return FiniteSystem(std::move(names), w, GroupModel::zm(1), {{p}});
    }();
    VectorXd v = VectorXd::Constant(6, -1.0 / 6);
    v[0] += 1.0;  // mean-zero indicator bump, sup norm 5/6
    const std::vector<Observable> fs(2, Observable(v, "f"));
    const std::vector<GroupModel> zfam = {GroupModel::zm(1)};

    const SeminormBoundReport low = seminorm_bound_check(rot, {1}, fs, zfam, {1}, 0.05);
    CHECK_FALSE(low.sharp);
    CHECK(low.n0 == 2048);
    CHECK(low.verdict == "inconclusive");
    CHECK(low.j_value == doctest::Approx(5.0 / 36).epsilon(1e-12));
    // the square of the seminorm vanishes to rounding; the root amplifies it
    CHECK(low.seminorm <= 1e-8);

    const SeminormBoundReport high = seminorm_bound_check(rot, {1}, fs, zfam, {4096}, 0.05);
    CHECK(high.verdict == "pass");
    CHECK(std::abs(high.j_value) <= 1e-4);
  }
}

TEST_CASE("joining order independence") {
  const FiniteSystem sw = swap_system();
  const OrderIndependenceReport one = order_independence_check(sw, {1});
  CHECK(one.orderings == 1);
  CHECK(one.pass);

  const FiniteSystem rot = rotation_system(4, {1, 2});
  const OrderIndependenceReport two = order_independence_check(rot, {1, 2});
  CHECK(two.orderings == 2);
  CHECK(two.pass);
  CHECK(two.max_tv <= 1e-12);

  Rng rng(59);
  RandomSystemOptions opt;
  opt.d = 3;
  opt.max_blocks = 2;
  opt.max_block_size = 2;
  for (int trial = 0; trial < 5; ++trial) {
    const auto groups = finite_group_catalog();
    const FiniteSystem sys = random_system(rng, groups[rng.uniform_int(groups.size())], opt);
    const OrderIndependenceReport rep = order_independence_check(sys, {1, 2, 3});
    CHECK(rep.orderings == 6);
    CHECK(rep.pass);
    CHECK(rep.max_tv <= 1e-12);
  }
}
