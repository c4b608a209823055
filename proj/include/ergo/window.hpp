#pragma once

// Finite windows into Z^d: explicit subsets E given by a membership mask over
// a box, densities along box Folner sets, cube-configuration counting with a
// brute oracle and a separable fast path, shift sets, syndeticity probes, and
// the empirical correspondence construction.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ergo/gaps.hpp"
#include "ergo/group.hpp"
#include "ergo/rng.hpp"
#include "ergo/system.hpp"

namespace ergo {

// membership mask over the box prod_i [lo_i, hi_i), row-major with the last
// axis fastest
struct SubsetWindow {
  std::vector<std::int64_t> lo;
  std::vector<std::int64_t> hi;
  std::vector<char> mask;
  std::optional<double> target_density;

  int d() const { return static_cast<int>(lo.size()); }
  std::int64_t extent(int axis) const {
    return hi[static_cast<std::size_t>(axis)] - lo[static_cast<std::size_t>(axis)];
  }
  std::int64_t size() const;
  std::int64_t member_count() const;

  bool in_window(const std::vector<std::int64_t>& p) const;
  std::int64_t flat(const std::vector<std::int64_t>& p) const;
  bool member(const std::vector<std::int64_t>& p) const { return mask[static_cast<std::size_t>(flat(p))] != 0; }
  void set(const std::vector<std::int64_t>& p, bool value) { mask[static_cast<std::size_t>(flat(p))] = value ? 1 : 0; }

  void validate() const;
};

SubsetWindow make_window(std::vector<std::int64_t> lo, std::vector<std::int64_t> hi);
// every cell independently Bernoulli(density); target_density records the parameter
SubsetWindow random_window(Rng& rng, std::vector<std::int64_t> lo, std::vector<std::int64_t> hi,
                           double density);

// |E cap Phi_N| / |Phi_N| with Phi_N = [0,N)^d, which must lie inside the window
double density(const SubsetWindow& e, std::int64_t big_n);
// max over the schedule, the finite stand-in for the limsup
double density_limsup(const SubsetWindow& e, const std::vector<std::int64_t>& schedule);

enum class Orientation { left, right };       // h.g with h_i^{-eps_i} g_i, or g_*h with g_i h_i^{eps_i}
enum class BoundaryMode { open, toroidal };

// the 2^d configuration points in vertex order; entries repeat when some h_i
// is the identity
std::vector<std::vector<Element>> cube_points(const GroupModel& group,
                                              const std::vector<Element>& h,
                                              const std::vector<Element>& g,
                                              Orientation orientation = Orientation::left);

struct CubeCountReport {
  std::int64_t count = 0;
  std::int64_t region_size = 0;   // open: g with all vertices in-window; toroidal: whole window
  double normalized = 0;          // count / region_size (0 when the region is empty)
  std::string method;
};

// brute enumerates g over the counting region; fast runs d separable
// axis-correlation passes over the mask. Counts agree exactly.
CubeCountReport cube_count(const SubsetWindow& e, const std::vector<std::int64_t>& h,
                           const std::string& method = "brute",
                           Orientation orientation = Orientation::left,
                           BoundaryMode mode = BoundaryMode::open);

struct GoodShiftReport {
  double delta = 0;               // density(E, N)
  double threshold = 0;           // delta^(2^d) - c
  std::int64_t window_size = 0;   // number of probed shifts
  std::int64_t qualifying = 0;
  double mean_normalized = 0;     // mean over probed h of normalized cube counts
  std::vector<std::vector<std::int64_t>> members;
  int largest_empty_cube_side = 0;
  std::map<int, std::int64_t> empty_run_histogram;
};

// probes h over the box prod [shift_lo_i, shift_hi_i)
GoodShiftReport good_shift_set(const SubsetWindow& e, double c,
                               const std::vector<std::int64_t>& shift_lo,
                               const std::vector<std::int64_t>& shift_hi, std::int64_t big_n,
                               BoundaryMode mode = BoundaryMode::toroidal,
                               Orientation orientation = Orientation::left);

struct ProbePlacementReport {
  std::vector<std::int64_t> box;  // probe box extents
  std::int64_t placements = 0;
  std::int64_t met = 0;
  bool all_met = false;
};

struct SyndeticityReport {
  std::vector<ProbePlacementReport> probes;
  // extents of the first supplied box meeting every placement; empty if none
  std::vector<std::int64_t> minimal_all_met;
};

// slides each probe box over every placement inside the window and reports
// whether S meets it; a probe, not a decision procedure
SyndeticityReport syndeticity_probe(const SubsetWindow& s,
                                    const std::vector<std::vector<std::int64_t>>& probe_boxes);

// The empirical correspondence system: positions in an N-box are read through
// the N-periodization of E, radius-r patterns are refined until the d axis
// shifts act by permutations, and the result is a measure-preserving system
// of Z with d actions. weight_a equals the density of E over the position box
// exactly; boundary_error is the fraction of positions whose wrapped pattern
// disagrees with the true one (0 for compatibly periodic E, at most 2rd/N).
struct CorrespondenceResult {
  FiniteSystem system;
  std::vector<int> set_a;                    // points whose pattern has center 1
  Observable indicator_a;
  double density = 0;
  double weight_a = 0;
  double boundary_error = 0;
  std::int64_t falsified_positions = 0;      // numerator of boundary_error
  std::int64_t seam_transitions = 0;         // axis steps whose wrapped image pattern is wrong
  std::vector<std::vector<char>> patterns;   // representative pattern per point
  std::vector<std::int64_t> anchor;          // lower corner of the position box
  int radius = 0;
  std::int64_t big_n = 0;
};

CorrespondenceResult correspondence_system(const SubsetWindow& e, int radius, std::int64_t big_n);

struct IntersectionReport {
  double lhs_density = 0;   // density over the position box of the true shifted intersection
  double rhs_mu = 0;        // mu of the matching intersection of translated A in the system
  double diff = 0;
};

// intersection inequality of the correspondence at desk scale: membership of
// g + t_j in E against mu(intersection of T_{t_j} A); agrees up to boundary
// falsification, exactly for compatibly periodic E
IntersectionReport correspondence_intersection_check(
    const SubsetWindow& e, const CorrespondenceResult& corr,
    const std::vector<std::vector<std::int64_t>>& shifts);

}  // namespace ergo
