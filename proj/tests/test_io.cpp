#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "ergo/io.hpp"
#include "ergo/random_systems.hpp"

using namespace ergo;

namespace {

std::string temp_path(const std::string& name) {
  return std::string("/tmp/ergo_io_test_") + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

FiniteSystem swap_system() {
  VectorXd w(2);
  w << 0.5, 0.5;
  return FiniteSystem({"a", "b"}, w, GroupModel::cyclic(2), {{{1, 0}}});
}

}  // namespace

TEST_CASE("group round trips") {
  const std::vector<GroupModel> groups = {
      GroupModel::cyclic(5),      klein_four_group(),
      symmetric_group_3(),        GroupModel::zm(2),
      GroupModel::zm_shifted(1, {1}, {3}),
      GroupModel::heisenberg()};
  for (const GroupModel& g : groups) {
    const ordered_json j = group_to_json(g);
    const GroupModel back = group_from_json(j);
    CHECK(back.same_group(g));
    CHECK(back.family() == g.family());
    // identical Folner sets at a few scales
    for (int n : {1, 2, 3}) {
      CHECK(back.folner_set(n) == g.folner_set(n));
    }
    // serialization is stable through a second pass
    CHECK(group_to_json(back) == j);
  }
  // the shifted variant is the same group but not the same family
  const GroupModel shifted = GroupModel::zm_shifted(1, {1}, {3});
  CHECK(shifted.same_group(GroupModel::zm(1)));
  CHECK(group_to_json(shifted) != group_to_json(GroupModel::zm(1)));
}

TEST_CASE("system and observable round trips") {
  Rng rng(107);
  for (int trial = 0; trial < 10; ++trial) {
    const FiniteSystem sys = random_system(rng, 2);
    const ordered_json j = system_to_json(sys);
    const FiniteSystem back = system_from_json(j);
    CHECK(back.point_names() == sys.point_names());
    CHECK(back.size() == sys.size());
    CHECK((back.weights() - sys.weights()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(back.group().same_group(sys.group()));
    CHECK(back.action_generators() == sys.action_generators());
    CHECK(system_to_json(back) == j);
  }

  const Observable f(([] { VectorXd v(3); v << 0.25, -1.0 / 3, 1e-9; return v; })(), "probe");
  const ordered_json j = observable_to_json(f);
  const Observable back = observable_from_json(j);
  CHECK(back.name == "probe");
  REQUIRE(back.values.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(back.values[i] == f.values[i]);
}

TEST_CASE("window round trips through run-length masks") {
  Rng rng(109);

  SUBCASE("random masks") {
    for (int trial = 0; trial < 10; ++trial) {
      const SubsetWindow w = random_window(rng, {-3, 2}, {10, 9}, 0.4);
      const ordered_json j = window_to_json(w);
      const SubsetWindow back = window_from_json(j);
      CHECK(back.lo == w.lo);
      CHECK(back.hi == w.hi);
      CHECK(back.mask == w.mask);
      REQUIRE(back.target_density.has_value());
      CHECK(*back.target_density == 0.4);
      CHECK(window_to_json(back) == j);
    }
  }

  SUBCASE("all-zero and all-one masks") {
    SubsetWindow zeros = make_window({0}, {17});
    CHECK(window_from_json(window_to_json(zeros)).mask == zeros.mask);
    SubsetWindow ones = make_window({0}, {17});
    std::fill(ones.mask.begin(), ones.mask.end(), 1);
    CHECK(window_from_json(window_to_json(ones)).mask == ones.mask);
  }

  SUBCASE("malformed runs reject") {
    SubsetWindow w = make_window({0}, {4});
    ordered_json j = window_to_json(w);
    j["mask_rle"] = {2, 1};  // fills 3 of 4 cells
    CHECK_THROWS_AS(window_from_json(j), ValidationError);
    j["mask_rle"] = {4, 1};
    CHECK_THROWS_AS(window_from_json(j), ValidationError);
  }
}

TEST_CASE("json files are byte stable") {
  const std::string path = temp_path("system.json");
  const FiniteSystem sys = swap_system();
  write_json_file(path, system_to_json(sys));
  const std::string first = slurp(path);
  CHECK_FALSE(first.empty());
  write_json_file(path, system_to_json(system_from_json(read_json_file(path))));
  CHECK(slurp(path) == first);
  std::remove(path.c_str());
}

TEST_CASE("malformed files reject") {
  const std::string path = temp_path("broken.json");
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  CHECK_THROWS(read_json_file(path));
  std::remove(path.c_str());
  CHECK_THROWS(read_json_file(temp_path("missing.json")));
  CHECK_THROWS_AS(group_from_json(ordered_json{{"family", "dodecahedral"}}), ValidationError);
}

TEST_CASE("report envelope") {
  const ordered_json rep = make_report("cube-avg", ordered_json{{"d", 2}}, 42);
  CHECK(rep.at("tool") == kToolName);
  CHECK(rep.at("version") == kToolVersion);
  CHECK(rep.at("kind") == "cube-avg");
  CHECK(rep.at("seed") == 42);
  CHECK(rep.at("config").at("d") == 2);
  // envelope keys come first and in a fixed order
  auto it = rep.begin();
  CHECK(it.key() == "tool");
  ++it;
  CHECK(it.key() == "version");
  ++it;
  CHECK(it.key() == "kind");
}

TEST_CASE("significant digit formatting") {
  CHECK(format_sig(1.0 / 3) == "0.333333333333");
  CHECK(format_sig(0.25) == "0.25");
  CHECK(format_sig(0.0) == "0");
  CHECK(format_sig(-2.0) == "-2");
  CHECK(format_sig(1e-9) == "1e-09");
}

TEST_CASE("csv output") {
  const std::string path = temp_path("table.csv");
  write_csv(path, {"n", "value"}, {{8, 0.25}, {16, 1.0 / 3}});
  const std::string text = slurp(path);
  CHECK(text == "n,value\n8,0.25\n16,0.333333333333\n");
  std::remove(path.c_str());
}
