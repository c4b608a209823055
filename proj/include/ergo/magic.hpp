#pragma once

// The star extension X* of a system: the space is the support of the full
// cube joining mu^(1,...,d), the i-th action moves exactly the coordinates
// whose vertex has bit i clear, and the original system sits under the
// all-zeros coordinate projection.

#include <string>
#include <vector>

#include "ergo/joining.hpp"
#include "ergo/system.hpp"

namespace ergo {

struct MagicSystem {
  FiniteSystem base;
  FiniteSystem star;                           // a FiniteSystem in its own right
  std::vector<std::vector<int>> star_points;   // base-point tuple behind each star point
  Joining mu_star;                             // the joining the star measure came from

  int d() const { return base.num_actions(); }
  // projection of a star point onto one cube vertex
  int project(int star_point, int vertex) const {
    return star_points[static_cast<std::size_t>(star_point)][static_cast<std::size_t>(vertex)];
  }
};

// Builds the star system and validates: mu* invariant under each star action,
// the zero-vertex projection pushes mu* to mu and intertwines the actions.
MagicSystem magic_extension(const FiniteSystem& system, int max_d = 3);

// Z_eta: the partition generated by the invariant partitions of the actions
// in eta, realized as their common refinement.
Partition z_partition(const FiniteSystem& system, const std::vector<int>& eta);

// lifts a base observable through the zero-vertex projection
Observable lift_to_star(const MagicSystem& magic, const Observable& f);

struct StructureReport {
  double residual_seminorm = 0;    // ||| f - E(f | Z_eps) |||*_eps
  double conditional_sup = 0;      // sup |E(g | Z_eps)|, should vanish
  bool pass = false;
};

// The structure theorem at desk scale: subtracting the Z_eps-conditional
// expectation kills the eps box seminorm computed in the star system.
StructureReport structure_check(const MagicSystem& magic, const std::vector<int>& eps,
                                const Observable& f_star);

}  // namespace ergo
