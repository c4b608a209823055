#pragma once

// Randomized inputs for property tests: a catalog of small finite groups,
// random measure-preserving systems with commuting actions, and random
// observables.  Everything is driven by an explicit Rng so runs reproduce.

#include <string>
#include <vector>

#include "ergo/rng.hpp"
#include "ergo/system.hpp"

namespace ergo {

// Z/2 through Z/6, the Klein four-group, and S3
std::vector<GroupModel> finite_group_catalog();

GroupModel klein_four_group();
GroupModel symmetric_group_3();

// Every homomorphism from a finite group into Z/m, each returned as the full
// map: out[k][x] is the image of element x.  Found by brute force over
// generator images, then verified on all pairs.
std::vector<std::vector<int>> homomorphisms_to_cyclic(const GroupModel& group, int m);

struct RandomSystemOptions {
  int d = 2;
  int max_blocks = 3;
  int max_block_size = 5;
  // with d == 2 on a finite group, sometimes return the left/right
  // translation pair on X = G instead of block rotations
  bool allow_translation_pair = true;
};

// A random system over the given group: disjoint rotation blocks, where each
// action rotates block b by a homomorphism G -> Z/L_b, with orbit-constant
// weights.  Finite and Z^m groups are supported.
FiniteSystem random_system(Rng& rng, const GroupModel& group,
                           const RandomSystemOptions& opt = {});
// same, over a random catalog group
FiniteSystem random_system(Rng& rng, int d = 2);

// kind: "signed" uniform on [-1,1], "nonneg" uniform on [0,1], "pm1" fair coin
Observable random_observable(Rng& rng, int n, const std::string& kind,
                             const std::string& name = "f");

}  // namespace ergo
