#include "ergo/io.hpp"

#include <cstdio>
#include <fstream>

namespace ergo {

ordered_json group_to_json(const GroupModel& group) {
  ordered_json j;
  switch (group.family()) {
    case GroupModel::Family::finite: {
      j["family"] = "finite";
      j["table"] = group.cayley_table();
      std::vector<std::int64_t> gens;
      for (const Element& g : group.generators()) gens.push_back(g[0]);
      j["generators"] = gens;
      std::vector<std::string> names;
      for (const Element& g : group.elements()) names.push_back(group.element_name(g));
      j["names"] = names;
      break;
    }
    case GroupModel::Family::zm:
      j["family"] = "zm";
      j["rank"] = group.zm_rank();
      j["anchor_base"] = group.anchor_base();
      j["anchor_slope"] = group.anchor_slope();
      break;
    case GroupModel::Family::heisenberg:
      j["family"] = "heisenberg";
      break;
  }
  return j;
}

GroupModel group_from_json(const ordered_json& j) {
  const std::string family = j.at("family").get<std::string>();
  if (family == "finite") {
    auto table = j.at("table").get<std::vector<std::vector<int>>>();
    std::vector<int> gens;
    if (j.contains("generators")) gens = j.at("generators").get<std::vector<int>>();
    std::vector<std::string> names;
    if (j.contains("names")) names = j.at("names").get<std::vector<std::string>>();
    return GroupModel::finite_from_table(std::move(table), std::move(gens), std::move(names));
  }
  if (family == "zm") {
    const int rank = j.at("rank").get<int>();
    std::vector<std::int64_t> base(static_cast<std::size_t>(rank), 0);
    std::vector<std::int64_t> slope(static_cast<std::size_t>(rank), 0);
    if (j.contains("anchor_base")) base = j.at("anchor_base").get<std::vector<std::int64_t>>();
    if (j.contains("anchor_slope")) slope = j.at("anchor_slope").get<std::vector<std::int64_t>>();
    return GroupModel::zm_shifted(rank, std::move(base), std::move(slope));
  }
  if (family == "heisenberg") return GroupModel::heisenberg();
  throw ValidationError("unknown group family '" + family + "'");
}

ordered_json system_to_json(const FiniteSystem& system) {
  ordered_json j;
  j["points"] = system.point_names();
  std::vector<double> weights(system.weights().data(), system.weights().data() + system.size());
  j["weights"] = weights;
  j["group"] = group_to_json(system.group());
  j["actions"] = system.action_generators();
  return j;
}

FiniteSystem system_from_json(const ordered_json& j) {
  auto names = j.at("points").get<std::vector<std::string>>();
  const auto weights_vec = j.at("weights").get<std::vector<double>>();
  VectorXd weights(static_cast<int>(weights_vec.size()));
  for (int i = 0; i < weights.size(); ++i) weights[i] = weights_vec[static_cast<std::size_t>(i)];
  GroupModel group = group_from_json(j.at("group"));
  auto actions = j.at("actions").get<std::vector<std::vector<Permutation>>>();
  return FiniteSystem(std::move(names), std::move(weights), std::move(group), std::move(actions));
}

ordered_json observable_to_json(const Observable& f) {
  ordered_json j;
  j["name"] = f.name;
  std::vector<double> values(f.values.data(), f.values.data() + f.values.size());
  j["values"] = values;
  return j;
}

Observable observable_from_json(const ordered_json& j) {
  const auto values_vec = j.at("values").get<std::vector<double>>();
  VectorXd values(static_cast<int>(values_vec.size()));
  for (int i = 0; i < values.size(); ++i) values[i] = values_vec[static_cast<std::size_t>(i)];
  std::string name;
  if (j.contains("name")) name = j.at("name").get<std::string>();
  return Observable(std::move(values), std::move(name));
}

ordered_json window_to_json(const SubsetWindow& w) {
  w.validate();
  ordered_json j;
  j["lo"] = w.lo;
  j["hi"] = w.hi;
  std::vector<std::int64_t> runs;
  char current = 0;
  std::int64_t run = 0;
  for (char cell : w.mask) {
    const char bit = cell ? 1 : 0;
    if (bit == current) {
      ++run;
    } else {
      runs.push_back(run);
      current = bit;
      run = 1;
    }
  }
  runs.push_back(run);
  j["mask_rle"] = runs;
  if (w.target_density) j["target_density"] = *w.target_density;
  return j;
}

SubsetWindow window_from_json(const ordered_json& j) {
  SubsetWindow w = make_window(j.at("lo").get<std::vector<std::int64_t>>(),
                               j.at("hi").get<std::vector<std::int64_t>>());
  const auto runs = j.at("mask_rle").get<std::vector<std::int64_t>>();
  std::int64_t at = 0;
  char bit = 0;
  for (std::int64_t run : runs) {
    if (run < 0 || at + run > w.size()) throw ValidationError("mask run-length data overflows the window");
    for (std::int64_t i = 0; i < run; ++i) w.mask[static_cast<std::size_t>(at + i)] = bit;
    at += run;
    bit = bit ? 0 : 1;
  }
  if (at != w.size()) throw ValidationError("mask run-length data does not fill the window");
  if (j.contains("target_density")) w.target_density = j.at("target_density").get<double>();
  return w;
}

ordered_json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  ordered_json j;
  in >> j;
  return j;
}

void write_json_file(const std::string& path, const ordered_json& j) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

std::string format_sig(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

ordered_json make_report(const std::string& kind, ordered_json config, std::uint64_t seed) {
  ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["kind"] = kind;
  j["seed"] = seed;
  j["config"] = std::move(config);
  return j;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  for (std::size_t i = 0; i < header.size(); ++i) {
    out << (i ? "," : "") << header[i];
  }
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << format_sig(row[i]);
    }
    out << "\n";
  }
}

}  // namespace ergo
