#pragma once

// The cubic average
//   A_N(x) = (1/|F_N|) sum_{g in F_N} prod_{eps} f_eps(R_g^eps x),
// where F_N is the product of one Folner set per action and
// R_g^eps = prod_i (T^(i)_{g_i})^{eps_i}, together with its limit, the
// Khintchine-type lower bound, the joint-vs-iterated limit identity, and the
// return set of a nonnegative observable.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ergo/cube_eval.hpp"
#include "ergo/group.hpp"
#include "ergo/joining.hpp"
#include "ergo/system.hpp"

namespace ergo {

struct CubeAverageRequest {
  FiniteSystem system;
  std::vector<Observable> fs;         // one per vertex of {0,1}^d
  std::vector<GroupModel> families;   // one Folner family per action
  std::vector<std::int64_t> schedule; // strictly increasing indices for limits

  int d() const { return system.num_actions(); }
};

// request with the system group's own family on every action and a doubling
// schedule; validates vertex count, boundedness, and family compatibility
CubeAverageRequest make_cube_request(FiniteSystem system, std::vector<Observable> fs);
CubeAverageRequest make_cube_request(FiniteSystem system, std::vector<Observable> fs,
                                     std::vector<GroupModel> families,
                                     std::vector<std::int64_t> schedule);

Observable cube_average(const CubeAverageRequest& req, std::int64_t big_n);

struct CubeReport {
  std::vector<std::int64_t> schedule_used;
  std::vector<double> partial_integrals;  // integral of A_N per schedule entry
  Observable limit;                       // last computed average
  double integral = 0;                    // integral of the limit
  std::vector<double> trace;              // L2 distance between successive A_N
  bool exact = false;                     // finite-group path, one step
  bool converged = false;
  std::string verdict;                    // "exact", "converged", "not yet converged"
  double folner_crosscheck = -1;          // L2 gap against shifted anchors, -1 if n/a
};

// Finite groups: one exact step. Otherwise: runs the schedule, declares
// convergence when the trace falls below 1e-6, and cross-checks the final
// average against a second Folner choice with shifted anchors.
CubeReport cube_average_limit(const CubeAverageRequest& req);

struct KhintchineReport {
  double integral_l = 0;    // integral of the limit average
  double lower_bound = 0;   // (integral of f)^(2^d)
  bool pass = false;
  // exact induction chain on finite groups: I_m = integral of the m-axis
  // cubic average of f, checked to satisfy I_m >= I_{m-1}^2
  std::vector<double> chain;
  bool chain_checked = false;
  bool chain_pass = false;
};

KhintchineReport khintchine_bound_check(const FiniteSystem& system, const Observable& f,
                                        const std::vector<GroupModel>& families);

struct IteratedReport {
  double joint = 0;       // all axes averaged at one common index
  double iterated = 0;    // staggered indices, innermost axis widest
  double via_joining = 0; // integral against mu^(1..d), exact reference on finite groups
  double diff = 0;        // |joint - iterated|
  bool exact = false;
  std::string verdict;    // "pass", "fail", "inconclusive"
};

IteratedReport iterated_limit_check(const FiniteSystem& system, const std::vector<Observable>& fs,
                                    const std::vector<GroupModel>& families,
                                    const std::vector<std::int64_t>& schedule);

struct ReturnSetReport {
  double threshold = 0;                    // (integral f)^(2^d) - c
  std::int64_t window_size = 0;
  std::int64_t qualifying = 0;
  std::vector<std::vector<int>> members;   // multi-indices into the axis windows
  int largest_empty_cube_side = 0;
  std::map<int, std::int64_t> empty_run_histogram;
};

// R cap window, R = {h : integral prod_eps f o prod_i (T^(i)_{h_i})^{eps_i} dmu
// > (integral f)^(2^d) - c}; the window is a product of per-axis element lists.
ReturnSetReport return_set(const FiniteSystem& system, const Observable& f, double c,
                           const std::vector<std::vector<Element>>& axis_windows);

}  // namespace ergo
