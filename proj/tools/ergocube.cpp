// Command line front end: loads systems, observables, and windows from JSON,
// runs the library checks, and writes reports.  Exit code 0 means the run
// completed (passing or inconclusive), 1 means a check failed its verdict,
// 2 means the invocation or input was unusable.

#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ergo/cube_average.hpp"
#include "ergo/io.hpp"
#include "ergo/joining.hpp"
#include "ergo/magic.hpp"
#include "ergo/random_systems.hpp"
#include "ergo/window.hpp"

namespace {

using ergo::ordered_json;

struct CommonOptions {
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 0;
  int threads = 1;
};

std::vector<std::int64_t> split_i64(const std::string& s) {
  std::vector<std::int64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
  return out;
}

ordered_json common_config(const CommonOptions& common) {
  ordered_json j;
  j["requested_threads"] = common.threads;
  j["workers"] = 1;  // single worker; the flag is an upper bound
  return j;
}

// --out wins, then ERGOCUBE_OUTDIR/<kind>.json, then stdout
int emit_report(const CommonOptions& common, const std::string& kind, ordered_json report,
                const std::string& verdict_line,
                const std::function<void(const std::string&)>& csv_writer = {}) {
  std::string path = common.out;
  if (path.empty()) {
    if (const char* dir = std::getenv("ERGOCUBE_OUTDIR")) {
      path = std::string(dir) + "/" + kind + (common.format == "csv" ? ".csv" : ".json");
    }
  }
  if (common.format == "csv") {
    if (!csv_writer) {
      std::cerr << "csv output is not available for " << kind << "\n";
      return 2;
    }
    if (path.empty()) {
      std::cerr << "csv output needs --out or ERGOCUBE_OUTDIR\n";
      return 2;
    }
    csv_writer(path);
    std::cout << "wrote " << path << "\n";
  } else if (!path.empty()) {
    ergo::write_json_file(path, report);
    std::cout << "wrote " << path << "\n";
  } else {
    std::cout << report.dump(2) << "\n";
  }
  if (!verdict_line.empty()) std::cout << verdict_line << "\n";
  return 0;
}

std::vector<ergo::Observable> load_observables(const std::vector<std::string>& paths, int want) {
  std::vector<ergo::Observable> fs;
  for (const auto& p : paths) fs.push_back(ergo::observable_from_json(ergo::read_json_file(p)));
  if (static_cast<int>(fs.size()) == 1 && want > 1) {
    fs.assign(static_cast<std::size_t>(want), fs[0]);
  }
  if (static_cast<int>(fs.size()) != want) {
    throw ergo::ValidationError("expected 1 or " + std::to_string(want) + " observables, got " +
                                std::to_string(fs.size()));
  }
  return fs;
}

ergo::Orientation parse_orientation(const std::string& s) {
  if (s == "left") return ergo::Orientation::left;
  if (s == "right") return ergo::Orientation::right;
  throw ergo::ValidationError("orientation must be left or right");
}

ergo::BoundaryMode parse_mode(const std::string& s) {
  if (s == "open") return ergo::BoundaryMode::open;
  if (s == "toroidal") return ergo::BoundaryMode::toroidal;
  throw ergo::ValidationError("mode must be open or toroidal");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cubic averages of commuting group actions, at desk scale"};
  app.require_subcommand(1);
  // shared options may follow the subcommand on the command line
  app.fallthrough();

  CommonOptions common;
  app.add_option("--out", common.out, "report file; defaults to ERGOCUBE_OUTDIR or stdout");
  app.add_option("--format", common.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", common.seed, "seed recorded in the report");
  app.add_option("--threads", common.threads, "worker cap (runs use one)")
      ->check(CLI::PositiveNumber);

  std::function<int()> run;

  // ---- cube-avg ----------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("cube-avg", "one cubic average A_N");
    auto system_path = std::make_shared<std::string>();
    auto obs_paths = std::make_shared<std::vector<std::string>>();
    auto big_n = std::make_shared<std::int64_t>(1);
    cmd->add_option("--system", *system_path, "system JSON")->required();
    cmd->add_option("--obs", *obs_paths, "observable JSON, once or once per vertex")->required();
    cmd->add_option("--n", *big_n, "Folner index N")->check(CLI::PositiveNumber);
    cmd->callback([&, system_path, obs_paths, big_n] {
      run = [&, system_path, obs_paths, big_n] {
        auto system = ergo::system_from_json(ergo::read_json_file(*system_path));
        const int d = system.num_actions();
        auto fs = load_observables(*obs_paths, 1 << d);
        auto req = ergo::make_cube_request(std::move(system), std::move(fs));
        const ergo::Observable avg = ergo::cube_average(req, *big_n);
        const double integral = req.system.integral(avg);

        ordered_json config = common_config(common);
        config["system"] = *system_path;
        config["observables"] = *obs_paths;
        config["n"] = *big_n;
        ordered_json report = ergo::make_report("cube-avg", config, common.seed);
        std::vector<double> values(avg.values.data(), avg.values.data() + avg.values.size());
        report["result"] = {{"integral", integral}, {"values", values}};
        return emit_report(common, "cube-avg", report,
                           "integral " + ergo::format_sig(integral));
      };
    });
  }

  // ---- cube-limit --------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("cube-limit", "limit of the cubic averages");
    auto system_path = std::make_shared<std::string>();
    auto obs_paths = std::make_shared<std::vector<std::string>>();
    auto schedule = std::make_shared<std::vector<std::int64_t>>();
    cmd->add_option("--system", *system_path, "system JSON")->required();
    cmd->add_option("--obs", *obs_paths, "observable JSON, once or once per vertex")->required();
    cmd->add_option("--schedule", *schedule, "Folner indices")->delimiter(',');
    cmd->callback([&, system_path, obs_paths, schedule] {
      run = [&, system_path, obs_paths, schedule] {
        auto system = ergo::system_from_json(ergo::read_json_file(*system_path));
        const int d = system.num_actions();
        auto fs = load_observables(*obs_paths, 1 << d);
        auto req = schedule->empty()
                       ? ergo::make_cube_request(std::move(system), std::move(fs))
                       : ergo::make_cube_request(std::move(system), std::move(fs), {}, *schedule);
        const ergo::CubeReport r = ergo::cube_average_limit(req);

        ordered_json config = common_config(common);
        config["system"] = *system_path;
        config["observables"] = *obs_paths;
        config["schedule"] = r.schedule_used;
        ordered_json report = ergo::make_report("cube-limit", config, common.seed);
        std::vector<double> values(r.limit.values.data(),
                                   r.limit.values.data() + r.limit.values.size());
        report["result"] = {{"integral", r.integral},
                            {"verdict", r.verdict},
                            {"exact", r.exact},
                            {"converged", r.converged},
                            {"partial_integrals", r.partial_integrals},
                            {"trace", r.trace},
                            {"folner_crosscheck", r.folner_crosscheck},
                            {"limit_values", values}};
        const auto csv = [&](const std::string& path) {
          std::vector<std::vector<double>> rows;
          for (std::size_t i = 0; i < r.schedule_used.size(); ++i) {
            rows.push_back({static_cast<double>(r.schedule_used[i]), r.partial_integrals[i],
                            i < r.trace.size() ? r.trace[i] : 0.0});
          }
          ergo::write_csv(path, {"N", "integral", "trace"}, rows);
        };
        return emit_report(common, "cube-limit", report,
                           r.verdict + ", integral " + ergo::format_sig(r.integral), csv);
      };
    });
  }

  // ---- check-bound -------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("check-bound", "multi-average against the box seminorm");
    auto system_path = std::make_shared<std::string>();
    auto obs_paths = std::make_shared<std::vector<std::string>>();
    auto eta = std::make_shared<std::vector<int>>();
    auto big_ns = std::make_shared<std::vector<std::int64_t>>();
    auto delta = std::make_shared<double>(1e-3);
    cmd->add_option("--system", *system_path, "system JSON")->required();
    cmd->add_option("--obs", *obs_paths, "observable JSON, once or once per vertex")->required();
    cmd->add_option("--eta", *eta, "action indices")->delimiter(',')->required();
    cmd->add_option("--n", *big_ns, "Folner index per axis")->delimiter(',');
    cmd->add_option("--delta", *delta, "slack");
    cmd->callback([&, system_path, obs_paths, eta, big_ns, delta] {
      run = [&, system_path, obs_paths, eta, big_ns, delta] {
        auto system = ergo::system_from_json(ergo::read_json_file(*system_path));
        auto fs = load_observables(*obs_paths, 1 << eta->size());
        std::vector<ergo::GroupModel> families(eta->size(), system.group());
        std::vector<std::int64_t> ns = *big_ns;
        if (ns.empty()) ns.assign(eta->size(), 1);
        if (ns.size() == 1 && eta->size() > 1) ns.assign(eta->size(), ns[0]);
        const ergo::SeminormBoundReport r =
            ergo::seminorm_bound_check(system, *eta, fs, families, ns, *delta);

        ordered_json config = common_config(common);
        config["system"] = *system_path;
        config["observables"] = *obs_paths;
        config["eta"] = *eta;
        config["n"] = ns;
        config["delta"] = *delta;
        ordered_json report = ergo::make_report("check-bound", config, common.seed);
        report["result"] = {{"j_value", r.j_value}, {"seminorm", r.seminorm},
                            {"delta", r.delta},     {"alpha", r.alpha},
                            {"n0", r.n0},           {"sharp", r.sharp},
                            {"verdict", r.verdict}};
        const int code = emit_report(common, "check-bound", report,
                                     "verdict " + r.verdict + ": |J| " +
                                         ergo::format_sig(std::abs(r.j_value)) +
                                         " vs seminorm " + ergo::format_sig(r.seminorm));
        return code != 0 ? code : (r.verdict == "fail" ? 1 : 0);
      };
    });
  }

  // ---- check-csg ---------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("check-csg", "joining integral against vertex seminorms");
    auto system_path = std::make_shared<std::string>();
    auto obs_paths = std::make_shared<std::vector<std::string>>();
    auto eta = std::make_shared<std::vector<int>>();
    cmd->add_option("--system", *system_path, "system JSON")->required();
    cmd->add_option("--obs", *obs_paths, "observable JSON, once or once per vertex")->required();
    cmd->add_option("--eta", *eta, "action indices")->delimiter(',')->required();
    cmd->callback([&, system_path, obs_paths, eta] {
      run = [&, system_path, obs_paths, eta] {
        auto system = ergo::system_from_json(ergo::read_json_file(*system_path));
        auto fs = load_observables(*obs_paths, 1 << eta->size());
        const ergo::CsgReport r = ergo::csg_check(system, *eta, fs);

        ordered_json config = common_config(common);
        config["system"] = *system_path;
        config["observables"] = *obs_paths;
        config["eta"] = *eta;
        ordered_json report = ergo::make_report("check-csg", config, common.seed);
        report["result"] = {{"lhs", r.lhs},
                            {"vertex_seminorms", r.vertex_seminorms},
                            {"rhs", r.rhs},
                            {"pass", r.pass}};
        const int code = emit_report(common, "check-csg", report,
                                     std::string(r.pass ? "pass" : "fail") + ": |lhs| " +
                                         ergo::format_sig(std::abs(r.lhs)) + " vs " +
                                         ergo::format_sig(r.rhs));
        return code != 0 ? code : (r.pass ? 0 : 1);
      };
    });
  }

  // ---- check-order -------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("check-order", "joining independence of the axis order");
    auto system_path = std::make_shared<std::string>();
    auto axes = std::make_shared<std::vector<int>>();
    cmd->add_option("--system", *system_path, "system JSON")->required();
    cmd->add_option("--axes", *axes, "action indices")->delimiter(',')->required();
    cmd->callback([&, system_path, axes] {
      run = [&, system_path, axes] {
        auto system = ergo::system_from_json(ergo::read_json_file(*system_path));
        const ergo::OrderIndependenceReport r = ergo::order_independence_check(system, *axes);

        ordered_json config = common_config(common);
        config["system"] = *system_path;
        config["axes"] = *axes;
        ordered_json report = ergo::make_report("check-order", config, common.seed);
        report["result"] = {{"orderings", r.orderings},
                            {"max_tv", r.max_tv},
                            {"worst_pair", r.worst_pair},
                            {"pass", r.pass}};
        const int code = emit_report(common, "check-order", report,
                                     std::string(r.pass ? "pass" : "fail") + ": max TV " +
                                         ergo::format_sig(r.max_tv) + " over " +
                                         std::to_string(r.orderings) + " orderings");
        return code != 0 ? code : (r.pass ? 0 : 1);
      };
    });
  }

  // ---- magic-build -------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("magic-build", "build the star extension");
    auto system_path = std::make_shared<std::string>();
    auto out_system = std::make_shared<std::string>();
    cmd->add_option("--system", *system_path, "system JSON")->required();
    cmd->add_option("--out-system", *out_system, "write the star system JSON here");
    cmd->callback([&, system_path, out_system] {
      run = [&, system_path, out_system] {
        auto system = ergo::system_from_json(ergo::read_json_file(*system_path));
        const ergo::MagicSystem magic = ergo::magic_extension(system);
        if (!out_system->empty()) {
          ergo::write_json_file(*out_system, ergo::system_to_json(magic.star));
        }

        ordered_json config = common_config(common);
        config["system"] = *system_path;
        if (!out_system->empty()) config["out_system"] = *out_system;
        ordered_json report = ergo::make_report("magic-build", config, common.seed);
        report["result"] = {{"base_points", magic.base.size()},
                            {"star_points", magic.star.size()},
                            {"d", magic.d()},
                            {"marginal_defect", ergo::joining_marginal_defect(magic.mu_star)},
                            {"invariance_defect", ergo::joining_invariance_defect(magic.mu_star)}};
        return emit_report(common, "magic-build", report,
                           "star has " + std::to_string(magic.star.size()) + " points over " +
                               std::to_string(magic.base.size()));
      };
    });
  }

  // ---- structure-check ---------------------------------------------------
  {
    auto* cmd = app.add_subcommand("structure-check",
                                   "conditional expectation kills the star seminorm");
    auto system_path = std::make_shared<std::string>();
    auto obs_path = std::make_shared<std::string>();
    auto eps = std::make_shared<std::vector<int>>();
    cmd->add_option("--system", *system_path, "system JSON")->required();
    cmd->add_option("--obs", *obs_path, "base observable JSON")->required();
    cmd->add_option("--eps", *eps, "action indices")->delimiter(',')->required();
    cmd->callback([&, system_path, obs_path, eps] {
      run = [&, system_path, obs_path, eps] {
        auto system = ergo::system_from_json(ergo::read_json_file(*system_path));
        auto f = ergo::observable_from_json(ergo::read_json_file(*obs_path));
        const ergo::MagicSystem magic = ergo::magic_extension(system);
        const ergo::Observable f_star = ergo::lift_to_star(magic, f);
        const ergo::StructureReport r = ergo::structure_check(magic, *eps, f_star);

        ordered_json config = common_config(common);
        config["system"] = *system_path;
        config["obs"] = *obs_path;
        config["eps"] = *eps;
        ordered_json report = ergo::make_report("structure-check", config, common.seed);
        report["result"] = {{"residual_seminorm", r.residual_seminorm},
                            {"conditional_sup", r.conditional_sup},
                            {"pass", r.pass}};
        const int code = emit_report(common, "structure-check", report,
                                     std::string(r.pass ? "pass" : "fail") +
                                         ": residual seminorm " +
                                         ergo::format_sig(r.residual_seminorm));
        return code != 0 ? code : (r.pass ? 0 : 1);
      };
    });
  }

  // ---- density -----------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("density", "density of a window subset along [0,N)^d");
    auto window_path = std::make_shared<std::string>();
    auto schedule = std::make_shared<std::vector<std::int64_t>>();
    cmd->add_option("--window", *window_path, "window JSON")->required();
    cmd->add_option("--schedule", *schedule, "N values")->delimiter(',')->required();
    cmd->callback([&, window_path, schedule] {
      run = [&, window_path, schedule] {
        const ergo::SubsetWindow e = ergo::window_from_json(ergo::read_json_file(*window_path));
        std::vector<double> densities;
        for (std::int64_t n : *schedule) densities.push_back(ergo::density(e, n));
        const double limsup = *std::max_element(densities.begin(), densities.end());

        ordered_json config = common_config(common);
        config["window"] = *window_path;
        config["schedule"] = *schedule;
        ordered_json report = ergo::make_report("density", config, common.seed);
        report["result"] = {{"densities", densities}, {"limsup", limsup}};
        const auto csv = [&](const std::string& path) {
          std::vector<std::vector<double>> rows;
          for (std::size_t i = 0; i < schedule->size(); ++i) {
            rows.push_back({static_cast<double>((*schedule)[i]), densities[i]});
          }
          ergo::write_csv(path, {"N", "density"}, rows);
        };
        return emit_report(common, "density", report, "limsup " + ergo::format_sig(limsup), csv);
      };
    });
  }

  // ---- cube-count --------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("cube-count", "cube configurations with a fixed side h");
    auto window_path = std::make_shared<std::string>();
    auto shift = std::make_shared<std::vector<std::int64_t>>();
    auto method = std::make_shared<std::string>("both");
    auto orientation = std::make_shared<std::string>("left");
    auto mode = std::make_shared<std::string>("open");
    cmd->add_option("--window", *window_path, "window JSON")->required();
    cmd->add_option("--shift", *shift, "h, one entry per axis")->delimiter(',')->required();
    cmd->add_option("--method", *method)->check(CLI::IsMember({"brute", "fast", "both"}));
    cmd->add_option("--orientation", *orientation)->check(CLI::IsMember({"left", "right"}));
    cmd->add_option("--mode", *mode)->check(CLI::IsMember({"open", "toroidal"}));
    cmd->callback([&, window_path, shift, method, orientation, mode] {
      run = [&, window_path, shift, method, orientation, mode] {
        const ergo::SubsetWindow e = ergo::window_from_json(ergo::read_json_file(*window_path));
        const auto ori = parse_orientation(*orientation);
        const auto bm = parse_mode(*mode);

        ordered_json config = common_config(common);
        config["window"] = *window_path;
        config["shift"] = *shift;
        config["method"] = *method;
        config["orientation"] = *orientation;
        config["mode"] = *mode;
        ordered_json report = ergo::make_report("cube-count", config, common.seed);

        bool agree = true;
        ergo::CubeCountReport main_report;
        if (*method == "both") {
          const auto brute = ergo::cube_count(e, *shift, "brute", ori, bm);
          const auto fast = ergo::cube_count(e, *shift, "fast", ori, bm);
          agree = brute.count == fast.count;
          main_report = fast;
          report["result"] = {{"count", fast.count},
                              {"region_size", fast.region_size},
                              {"normalized", fast.normalized},
                              {"brute_count", brute.count},
                              {"agree", agree}};
        } else {
          main_report = ergo::cube_count(e, *shift, *method, ori, bm);
          report["result"] = {{"count", main_report.count},
                              {"region_size", main_report.region_size},
                              {"normalized", main_report.normalized},
                              {"method", main_report.method}};
        }
        const auto csv = [&](const std::string& path) {
          ergo::write_csv(path, {"count", "region_size", "normalized"},
                          {{static_cast<double>(main_report.count),
                            static_cast<double>(main_report.region_size),
                            main_report.normalized}});
        };
        const int code = emit_report(common, "cube-count", report,
                                     "count " + std::to_string(main_report.count) +
                                         ", normalized " +
                                         ergo::format_sig(main_report.normalized) +
                                         (agree ? "" : " (methods disagree)"),
                                     csv);
        return code != 0 ? code : (agree ? 0 : 1);
      };
    });
  }

  // ---- good-shifts -------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("good-shifts",
                                   "shifts whose normalized cube count clears delta^(2^d) - c");
    auto window_path = std::make_shared<std::string>();
    auto c = std::make_shared<double>(0.01);
    auto shift_lo = std::make_shared<std::vector<std::int64_t>>();
    auto shift_hi = std::make_shared<std::vector<std::int64_t>>();
    auto big_n = std::make_shared<std::int64_t>(0);
    auto mode = std::make_shared<std::string>("toroidal");
    auto orientation = std::make_shared<std::string>("left");
    cmd->add_option("--window", *window_path, "window JSON")->required();
    cmd->add_option("--c", *c, "slack");
    cmd->add_option("--shift-lo", *shift_lo, "shift box lower corner")->delimiter(',')->required();
    cmd->add_option("--shift-hi", *shift_hi, "shift box upper corner")->delimiter(',')->required();
    cmd->add_option("--n", *big_n, "density scale N")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--mode", *mode)->check(CLI::IsMember({"open", "toroidal"}));
    cmd->add_option("--orientation", *orientation)->check(CLI::IsMember({"left", "right"}));
    cmd->callback([&, window_path, c, shift_lo, shift_hi, big_n, mode, orientation] {
      run = [&, window_path, c, shift_lo, shift_hi, big_n, mode, orientation] {
        const ergo::SubsetWindow e = ergo::window_from_json(ergo::read_json_file(*window_path));
        const ergo::GoodShiftReport r = ergo::good_shift_set(
            e, *c, *shift_lo, *shift_hi, *big_n, parse_mode(*mode), parse_orientation(*orientation));

        ordered_json config = common_config(common);
        config["window"] = *window_path;
        config["c"] = *c;
        config["shift_lo"] = *shift_lo;
        config["shift_hi"] = *shift_hi;
        config["n"] = *big_n;
        config["mode"] = *mode;
        config["orientation"] = *orientation;
        ordered_json report = ergo::make_report("good-shifts", config, common.seed);
        ordered_json histogram = ordered_json::object();
        for (const auto& [len, cnt] : r.empty_run_histogram) {
          histogram[std::to_string(len)] = cnt;
        }
        report["result"] = {{"delta", r.delta},
                            {"threshold", r.threshold},
                            {"window_size", r.window_size},
                            {"qualifying", r.qualifying},
                            {"mean_normalized", r.mean_normalized},
                            {"largest_empty_cube_side", r.largest_empty_cube_side},
                            {"empty_run_histogram", histogram},
                            {"members", r.members}};
        const auto csv = [&](const std::string& path) {
          std::vector<std::vector<double>> rows;
          for (const auto& h : r.members) {
            std::vector<double> row;
            for (std::int64_t x : h) row.push_back(static_cast<double>(x));
            rows.push_back(row);
          }
          std::vector<std::string> header;
          for (std::size_t i = 0; i < shift_lo->size(); ++i) header.push_back("h" + std::to_string(i + 1));
          ergo::write_csv(path, header, rows);
        };
        return emit_report(common, "good-shifts", report,
                           std::to_string(r.qualifying) + " of " + std::to_string(r.window_size) +
                               " shifts clear " + ergo::format_sig(r.threshold),
                           csv);
      };
    });
  }

  // ---- syndetic-probe ----------------------------------------------------
  {
    auto* cmd = app.add_subcommand("syndetic-probe", "does every placed box meet the set");
    auto window_path = std::make_shared<std::string>();
    auto box_strs = std::make_shared<std::vector<std::string>>();
    cmd->add_option("--window", *window_path, "window JSON")->required();
    cmd->add_option("--box", *box_strs, "probe box extents, repeatable")->required();
    cmd->callback([&, window_path, box_strs] {
      run = [&, window_path, box_strs] {
        const ergo::SubsetWindow s = ergo::window_from_json(ergo::read_json_file(*window_path));
        std::vector<std::vector<std::int64_t>> boxes;
        for (const auto& b : *box_strs) boxes.push_back(split_i64(b));
        const ergo::SyndeticityReport r = ergo::syndeticity_probe(s, boxes);

        ordered_json config = common_config(common);
        config["window"] = *window_path;
        config["boxes"] = boxes;
        ordered_json report = ergo::make_report("syndetic-probe", config, common.seed);
        ordered_json probes = ordered_json::array();
        for (const auto& p : r.probes) {
          probes.push_back({{"box", p.box},
                            {"placements", p.placements},
                            {"met", p.met},
                            {"all_met", p.all_met}});
        }
        report["result"] = {{"probes", probes}, {"minimal_all_met", r.minimal_all_met}};
        return emit_report(common, "syndetic-probe", report,
                           r.minimal_all_met.empty() ? "no probe box met every placement"
                                                     : "first all-met box found");
      };
    });
  }

  // ---- correspond --------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("correspond", "empirical correspondence system of a window set");
    auto window_path = std::make_shared<std::string>();
    auto radius = std::make_shared<int>(1);
    auto big_n = std::make_shared<std::int64_t>(0);
    auto out_system = std::make_shared<std::string>();
    auto shift_strs = std::make_shared<std::vector<std::string>>();
    cmd->add_option("--window", *window_path, "window JSON")->required();
    cmd->add_option("--radius", *radius, "pattern radius");
    cmd->add_option("--n", *big_n, "position box side N")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--out-system", *out_system, "write the system JSON here");
    cmd->add_option("--shift", *shift_strs, "intersection check shift, repeatable");
    cmd->callback([&, window_path, radius, big_n, out_system, shift_strs] {
      run = [&, window_path, radius, big_n, out_system, shift_strs] {
        const ergo::SubsetWindow e = ergo::window_from_json(ergo::read_json_file(*window_path));
        const ergo::CorrespondenceResult corr = ergo::correspondence_system(e, *radius, *big_n);
        if (!out_system->empty()) {
          ergo::write_json_file(*out_system, ergo::system_to_json(corr.system));
        }

        ordered_json config = common_config(common);
        config["window"] = *window_path;
        config["radius"] = *radius;
        config["n"] = *big_n;
        ordered_json report = ergo::make_report("correspond", config, common.seed);
        report["result"] = {{"points", corr.system.size()},
                            {"density", corr.density},
                            {"weight_a", corr.weight_a},
                            {"boundary_error", corr.boundary_error},
                            {"falsified_positions", corr.falsified_positions},
                            {"seam_transitions", corr.seam_transitions},
                            {"set_a_size", corr.set_a.size()}};
        if (!shift_strs->empty()) {
          std::vector<std::vector<std::int64_t>> shifts;
          for (const auto& s : *shift_strs) shifts.push_back(split_i64(s));
          const ergo::IntersectionReport ir =
              ergo::correspondence_intersection_check(e, corr, shifts);
          report["result"]["intersection"] = {{"lhs_density", ir.lhs_density},
                                              {"rhs_mu", ir.rhs_mu},
                                              {"diff", ir.diff}};
        }
        return emit_report(common, "correspond", report,
                           std::to_string(corr.system.size()) + " points, density " +
                               ergo::format_sig(corr.density) + ", boundary error " +
                               ergo::format_sig(corr.boundary_error));
      };
    });
  }

  // ---- vdc-check ---------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("vdc-check", "finitary van der Corput for one orbit family");
    auto system_path = std::make_shared<std::string>();
    auto obs_path = std::make_shared<std::string>();
    auto action = std::make_shared<int>(1);
    auto m = std::make_shared<int>(2);
    auto c = std::make_shared<double>(0.05);
    cmd->add_option("--system", *system_path, "system JSON")->required();
    cmd->add_option("--obs", *obs_path, "observable JSON")->required();
    cmd->add_option("--action", *action, "action index for the orbit x_g = f o T_g");
    cmd->add_option("--m", *m, "auxiliary Folner index")->check(CLI::PositiveNumber);
    cmd->add_option("--c", *c, "defect threshold");
    cmd->callback([&, system_path, obs_path, action, m, c] {
      run = [&, system_path, obs_path, action, m, c] {
        auto system = ergo::system_from_json(ergo::read_json_file(*system_path));
        auto f = ergo::observable_from_json(ergo::read_json_file(*obs_path));
        if (f.sup_norm() > 1.0) {
          f = ergo::Observable(f.values / f.sup_norm(), f.name);
        }
        const ergo::GroupModel& group = system.group();

        // the same defect search vdc_check runs, to know which orbit vectors
        // it will ask for
        std::int64_t big_n = 1;
        const auto psi_set = group.folner_set(*m);
        for (;; big_n *= 2) {
          if (big_n > (1 << 22)) throw ergo::EnumerationError("no N with defects below c");
          bool ok = true;
          for (const ergo::Element& h : psi_set) {
            if (group.folner_defect(static_cast<int>(big_n), h, ergo::Sidedness::left) >= *c) {
              ok = false;
              break;
            }
          }
          if (ok) break;
        }
        std::unordered_map<ergo::Element, ergo::VectorXd, ergo::ElementHash> vectors;
        const auto phi_set = group.folner_set(static_cast<int>(big_n));
        const auto put = [&](const ergo::Element& g) {
          if (vectors.count(g)) return;
          vectors.emplace(g, system.translate(f, system.action(*action, g)).values);
        };
        for (const ergo::Element& g : phi_set) put(g);
        for (const ergo::Element& h : psi_set) {
          for (const ergo::Element& g : phi_set) put(group.multiply(h, g));
        }
        const ergo::VdcReport r = ergo::vdc_check(vectors, group, group, *m, *c);

        ordered_json config = common_config(common);
        config["system"] = *system_path;
        config["obs"] = *obs_path;
        config["action"] = *action;
        config["m"] = *m;
        config["c"] = *c;
        ordered_json report = ergo::make_report("vdc-check", config, common.seed);
        report["result"] = {{"m", r.m},
                            {"n", r.big_n},
                            {"max_defect", r.max_defect},
                            {"lhs", r.lhs},
                            {"bound", r.bound},
                            {"pass", r.pass}};
        const int code = emit_report(common, "vdc-check", report,
                                     std::string(r.pass ? "pass" : "fail") + ": " +
                                         ergo::format_sig(r.lhs) + " < " +
                                         ergo::format_sig(r.bound));
        return code != 0 ? code : (r.pass ? 0 : 1);
      };
    });
  }

  // ---- iterated-check ----------------------------------------------------
  {
    auto* cmd = app.add_subcommand("iterated-check", "joint limit against the iterated limit");
    auto system_path = std::make_shared<std::string>();
    auto obs_paths = std::make_shared<std::vector<std::string>>();
    auto schedule = std::make_shared<std::vector<std::int64_t>>();
    cmd->add_option("--system", *system_path, "system JSON")->required();
    cmd->add_option("--obs", *obs_paths, "observable JSON, once or once per vertex")->required();
    cmd->add_option("--schedule", *schedule, "Folner indices")->delimiter(',');
    cmd->callback([&, system_path, obs_paths, schedule] {
      run = [&, system_path, obs_paths, schedule] {
        auto system = ergo::system_from_json(ergo::read_json_file(*system_path));
        const int d = system.num_actions();
        auto fs = load_observables(*obs_paths, 1 << d);
        std::vector<ergo::GroupModel> families(static_cast<std::size_t>(d), system.group());
        std::vector<std::int64_t> sched = *schedule;
        if (sched.empty()) sched = {8, 16, 32, 64};
        const ergo::IteratedReport r = ergo::iterated_limit_check(system, fs, families, sched);

        ordered_json config = common_config(common);
        config["system"] = *system_path;
        config["observables"] = *obs_paths;
        config["schedule"] = sched;
        ordered_json report = ergo::make_report("iterated-check", config, common.seed);
        report["result"] = {{"joint", r.joint},
                            {"iterated", r.iterated},
                            {"via_joining", r.via_joining},
                            {"diff", r.diff},
                            {"exact", r.exact},
                            {"verdict", r.verdict}};
        const int code = emit_report(common, "iterated-check", report,
                                     "verdict " + r.verdict + ": joint " +
                                         ergo::format_sig(r.joint) + ", iterated " +
                                         ergo::format_sig(r.iterated));
        return code != 0 ? code : (r.verdict == "fail" ? 1 : 0);
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return run();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
