#include "ergo/cube_average.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ergo/gaps.hpp"

namespace ergo {

namespace {

constexpr double kCauchyTol = 1e-6;
constexpr std::int64_t kMaxCombos = 20'000'000;

void validate_request(const CubeAverageRequest& req) {
  const int d = req.d();
  if (static_cast<int>(req.fs.size()) != vertex_count(d)) {
    throw ValidationError("cube average needs one observable per vertex of {0,1}^d");
  }
  for (const auto& f : req.fs) {
    if (f.values.size() != req.system.weights().size()) {
      throw ValidationError("observable dimension does not match the system");
    }
    if (!f.values.allFinite()) throw ValidationError("observables must be bounded");
  }
  if (static_cast<int>(req.families.size()) != d) {
    throw ValidationError("cube average needs one Folner family per action");
  }
  for (const auto& fam : req.families) {
    if (!fam.same_group(req.system.group())) {
      throw ValidationError("Folner family models a different group than the system");
    }
  }
  if (req.schedule.empty()) throw ValidationError("empty N schedule");
  for (std::size_t i = 1; i < req.schedule.size(); ++i) {
    if (req.schedule[i] <= req.schedule[i - 1]) {
      throw ValidationError("N schedule must be strictly increasing");
    }
  }
}

// perms for T^(axis) over one Folner set
std::vector<Permutation> family_perms(const FiniteSystem& system, int axis,
                                      const GroupModel& family, std::int64_t big_n) {
  const std::vector<Element> set = family.folner_set(big_n);
  std::vector<Permutation> perms;
  perms.reserve(set.size());
  for (const Element& g : set) perms.push_back(system.action(axis, g));
  return perms;
}

bool all_finite_families(const std::vector<GroupModel>& families) {
  return std::all_of(families.begin(), families.end(),
                     [](const GroupModel& f) { return f.is_finite(); });
}

bool all_zm_families(const std::vector<GroupModel>& families) {
  return std::all_of(families.begin(), families.end(),
                     [](const GroupModel& f) { return f.family() == GroupModel::Family::zm; });
}

// anchor schedule differing from fam's in both base and velocity
GroupModel shifted_variant(const GroupModel& fam) {
  const int rank = fam.zm_rank();
  std::vector<std::int64_t> base = fam.anchor_base();
  std::vector<std::int64_t> slope = fam.anchor_slope();
  for (int i = 0; i < rank; ++i) {
    base[static_cast<std::size_t>(i)] += 3;
    slope[static_cast<std::size_t>(i)] += 1;
  }
  return GroupModel::zm_shifted(rank, base, slope);
}

Observable average_over(const CubeAverageRequest& req, const std::vector<GroupModel>& families,
                        std::int64_t big_n) {
  const int d = req.d();
  std::vector<std::vector<Permutation>> axis_perms(static_cast<std::size_t>(d));
  std::int64_t combos = 1;
  for (int i = 0; i < d; ++i) {
    combos *= static_cast<std::int64_t>(families[static_cast<std::size_t>(i)].folner_size(big_n));
    if (combos > kMaxCombos) throw EnumerationError("cube average has too many terms");
    axis_perms[static_cast<std::size_t>(i)] =
        family_perms(req.system, i + 1, families[static_cast<std::size_t>(i)], big_n);
  }

  VectorXd sum = VectorXd::Zero(req.system.size());
  std::vector<std::size_t> pick(static_cast<std::size_t>(d), 0);
  std::vector<Permutation> current(static_cast<std::size_t>(d));
  for (;;) {
    for (int i = 0; i < d; ++i) current[static_cast<std::size_t>(i)] = axis_perms[static_cast<std::size_t>(i)][pick[static_cast<std::size_t>(i)]];
    sum += cube_vertex_product(req.fs, vertex_perms(current));
    int i = 0;
    while (i < d && ++pick[static_cast<std::size_t>(i)] == axis_perms[static_cast<std::size_t>(i)].size()) {
      pick[static_cast<std::size_t>(i)] = 0;
      ++i;
    }
    if (i == d) break;
  }
  sum /= static_cast<double>(combos);
  return Observable(std::move(sum), "cube_average");
}

}  // namespace

CubeAverageRequest make_cube_request(FiniteSystem system, std::vector<Observable> fs) {
  std::vector<GroupModel> families(static_cast<std::size_t>(system.num_actions()), system.group());
  return make_cube_request(std::move(system), std::move(fs), std::move(families),
                           {8, 16, 32, 64, 128, 256});
}

CubeAverageRequest make_cube_request(FiniteSystem system, std::vector<Observable> fs,
                                     std::vector<GroupModel> families,
                                     std::vector<std::int64_t> schedule) {
  CubeAverageRequest req{std::move(system), std::move(fs), std::move(families),
                         std::move(schedule)};
  validate_request(req);
  return req;
}

Observable cube_average(const CubeAverageRequest& req, std::int64_t big_n) {
  validate_request(req);
  return average_over(req, req.families, big_n);
}

CubeReport cube_average_limit(const CubeAverageRequest& req) {
  validate_request(req);
  CubeReport report;

  if (all_finite_families(req.families)) {
    // Phi_N = G for every N: the first step is already the limit
    report.schedule_used = {1};
    report.limit = average_over(req, req.families, 1);
    report.partial_integrals = {req.system.integral(report.limit)};
    report.integral = report.partial_integrals.front();
    report.trace = {0.0};
    report.exact = true;
    report.converged = true;
    report.verdict = "exact";
    return report;
  }

  Observable prev;
  for (std::size_t s = 0; s < req.schedule.size(); ++s) {
    const std::int64_t big_n = req.schedule[s];
    Observable current = average_over(req, req.families, big_n);
    report.schedule_used.push_back(big_n);
    report.partial_integrals.push_back(req.system.integral(current));
    if (s > 0) {
      Observable diff = current;
      diff.values -= prev.values;
      report.trace.push_back(req.system.l2_norm(diff));
    }
    prev = std::move(current);
    if (!report.trace.empty() && report.trace.back() < kCauchyTol) {
      report.converged = true;
      break;
    }
  }
  report.limit = std::move(prev);
  report.integral = req.system.integral(report.limit);
  report.verdict = report.converged ? "converged" : "not yet converged";

  if (all_zm_families(req.families)) {
    std::vector<GroupModel> alt;
    alt.reserve(req.families.size());
    for (const auto& fam : req.families) alt.push_back(shifted_variant(fam));
    const Observable other = average_over(req, alt, report.schedule_used.back());
    Observable diff = report.limit;
    diff.values -= other.values;
    report.folner_crosscheck = req.system.l2_norm(diff);
  }
  return report;
}

KhintchineReport khintchine_bound_check(const FiniteSystem& system, const Observable& f,
                                        const std::vector<GroupModel>& families) {
  if (f.values.minCoeff() < -kExactTol) {
    throw ValidationError("khintchine_bound_check requires a nonnegative observable");
  }
  const int d = system.num_actions();
  const std::vector<Observable> fs(static_cast<std::size_t>(vertex_count(d)), f);
  const CubeReport limit = cube_average_limit(
      make_cube_request(system, fs, families, {8, 16, 32, 64, 128, 256, 512}));

  KhintchineReport report;
  report.integral_l = limit.integral;
  report.lower_bound = std::pow(system.integral(f), static_cast<double>(vertex_count(d)));
  report.pass = report.integral_l >= report.lower_bound - kIneqTol;

  if (all_finite_families(families)) {
    // exact induction: I_m = integral of the m-axis cubic average, and each
    // step satisfies I_m >= I_{m-1}^2 through the invariant projection
    report.chain_checked = true;
    report.chain.push_back(system.integral(f));
    report.chain_pass = true;
    for (int m = 1; m <= d; ++m) {
      std::vector<std::vector<Permutation>> prefix(
          system.action_generators().begin(), system.action_generators().begin() + m);
      FiniteSystem sub(system.point_names(), system.weights(), system.group(), std::move(prefix));
      std::vector<GroupModel> fams(families.begin(), families.begin() + m);
      const std::vector<Observable> sub_fs(static_cast<std::size_t>(vertex_count(m)), f);
      const CubeReport r = cube_average_limit(make_cube_request(std::move(sub), sub_fs, fams, {1, 2}));
      const double prev = report.chain.back();
      report.chain.push_back(r.integral);
      report.chain_pass = report.chain_pass && r.integral >= prev * prev - kIneqTol;
    }
  }
  return report;
}

IteratedReport iterated_limit_check(const FiniteSystem& system, const std::vector<Observable>& fs,
                                    const std::vector<GroupModel>& families,
                                    const std::vector<std::int64_t>& schedule) {
  const int d = system.num_actions();
  if (static_cast<int>(fs.size()) != vertex_count(d)) {
    throw ValidationError("iterated_limit_check needs one observable per vertex");
  }
  if (schedule.empty()) throw ValidationError("empty N schedule");

  IteratedReport report;
  report.exact = all_finite_families(families);

  // per-axis index choices: equal for the joint form, staggered (innermost
  // axis d widest) for the iterated form
  std::vector<std::int64_t> joint_ns(static_cast<std::size_t>(d), report.exact ? 1 : schedule.back());
  std::vector<std::int64_t> iter_ns(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    if (report.exact) {
      iter_ns[static_cast<std::size_t>(i)] = 1;
    } else {
      const std::int64_t pos = static_cast<std::int64_t>(schedule.size()) - 1 - (d - 1 - i);
      iter_ns[static_cast<std::size_t>(i)] = schedule[static_cast<std::size_t>(std::max<std::int64_t>(pos, 0))];
    }
  }

  std::vector<std::vector<Permutation>> joint_perms(static_cast<std::size_t>(d));
  std::vector<std::vector<Permutation>> iter_perms(static_cast<std::size_t>(d));
  std::int64_t combos = 1;
  for (int i = 0; i < d; ++i) {
    joint_perms[static_cast<std::size_t>(i)] =
        family_perms(system, i + 1, families[static_cast<std::size_t>(i)], joint_ns[static_cast<std::size_t>(i)]);
    iter_perms[static_cast<std::size_t>(i)] =
        family_perms(system, i + 1, families[static_cast<std::size_t>(i)], iter_ns[static_cast<std::size_t>(i)]);
    combos *= static_cast<std::int64_t>(
        std::max(joint_perms[static_cast<std::size_t>(i)].size(), iter_perms[static_cast<std::size_t>(i)].size()));
    if (combos > kMaxCombos) throw EnumerationError("iterated_limit_check has too many terms");
  }

  // joint: one flat sum, divided once
  {
    double sum = 0;
    std::int64_t terms = 1;
    for (const auto& p : joint_perms) terms *= static_cast<std::int64_t>(p.size());
    std::vector<std::size_t> pick(static_cast<std::size_t>(d), 0);
    std::vector<Permutation> current(static_cast<std::size_t>(d));
    for (;;) {
      for (int i = 0; i < d; ++i) current[static_cast<std::size_t>(i)] = joint_perms[static_cast<std::size_t>(i)][pick[static_cast<std::size_t>(i)]];
      sum += cube_term(system, fs, current);
      int i = 0;
      while (i < d && ++pick[static_cast<std::size_t>(i)] == joint_perms[static_cast<std::size_t>(i)].size()) {
        pick[static_cast<std::size_t>(i)] = 0;
        ++i;
      }
      if (i == d) break;
    }
    report.joint = sum / static_cast<double>(terms);
  }

  // iterated: averages applied level by level, innermost axis d first
  {
    std::vector<Permutation> current(static_cast<std::size_t>(d));
    const auto level = [&](auto&& self, int axis) -> double {
      if (axis > d) return cube_term(system, fs, current);
      double sum = 0;
      for (const auto& p : iter_perms[static_cast<std::size_t>(axis - 1)]) {
        current[static_cast<std::size_t>(axis - 1)] = p;
        sum += self(self, axis + 1);
      }
      return sum / static_cast<double>(iter_perms[static_cast<std::size_t>(axis - 1)].size());
    };
    report.iterated = level(level, 1);
  }

  std::vector<int> all_axes(static_cast<std::size_t>(d));
  std::iota(all_axes.begin(), all_axes.end(), 1);
  report.via_joining = joining_integral(build_joining(system, all_axes, d), fs);

  report.diff = std::abs(report.joint - report.iterated);
  if (report.exact) {
    const bool ok = report.diff <= kIneqTol && std::abs(report.joint - report.via_joining) <= kIneqTol;
    report.verdict = ok ? "pass" : "fail";
  } else {
    report.verdict = report.diff <= 1e-4 ? "pass" : "inconclusive";
  }
  return report;
}

ReturnSetReport return_set(const FiniteSystem& system, const Observable& f, double c,
                           const std::vector<std::vector<Element>>& axis_windows) {
  const int d = system.num_actions();
  if (static_cast<int>(axis_windows.size()) != d) {
    throw ValidationError("return_set needs one element list per action");
  }
  std::int64_t total = 1;
  for (const auto& w : axis_windows) {
    if (w.empty()) throw ValidationError("return_set window is empty");
    total *= static_cast<std::int64_t>(w.size());
  }
  if (total > kMaxCombos) throw EnumerationError("return_set window has too many points");
  if (f.values.minCoeff() < -kExactTol) {
    throw ValidationError("return_set requires a nonnegative observable");
  }
  if (c <= 0) throw ValidationError("return_set requires c > 0");

  const std::vector<Observable> fs(static_cast<std::size_t>(vertex_count(d)), f);

  std::vector<std::vector<Permutation>> axis_perms(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    axis_perms[static_cast<std::size_t>(i)].reserve(axis_windows[static_cast<std::size_t>(i)].size());
    for (const Element& h : axis_windows[static_cast<std::size_t>(i)]) {
      axis_perms[static_cast<std::size_t>(i)].push_back(system.action(i + 1, h));
    }
  }

  ReturnSetReport report;
  report.threshold = std::pow(system.integral(f), static_cast<double>(vertex_count(d))) - c;
  report.window_size = total;

  std::vector<std::int64_t> dims;
  dims.reserve(axis_windows.size());
  for (const auto& w : axis_windows) dims.push_back(static_cast<std::int64_t>(w.size()));
  std::vector<char> qualifies(static_cast<std::size_t>(total), 0);

  std::vector<std::size_t> pick(static_cast<std::size_t>(d), 0);
  std::vector<Permutation> current(static_cast<std::size_t>(d));
  for (;;) {
    for (int i = 0; i < d; ++i) current[static_cast<std::size_t>(i)] = axis_perms[static_cast<std::size_t>(i)][pick[static_cast<std::size_t>(i)]];
    const double value = cube_term(system, fs, current);
    if (value > report.threshold) {
      // flat index row-major, first axis slowest
      std::int64_t flat = 0;
      for (int i = 0; i < d; ++i) flat = flat * dims[static_cast<std::size_t>(i)] + static_cast<std::int64_t>(pick[static_cast<std::size_t>(i)]);
      qualifies[static_cast<std::size_t>(flat)] = 1;
      report.members.emplace_back(pick.begin(), pick.end());
      ++report.qualifying;
    }
    int i = d - 1;
    while (i >= 0 && ++pick[static_cast<std::size_t>(i)] == axis_perms[static_cast<std::size_t>(i)].size()) {
      pick[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
  }

  report.largest_empty_cube_side = largest_empty_cube_side(qualifies, dims);
  report.empty_run_histogram = ergo::empty_run_histogram(qualifies, dims);
  return report;
}

}  // namespace ergo
