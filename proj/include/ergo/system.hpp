#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ergo/group.hpp"
#include "ergo/types.hpp"

namespace ergo {

// perm[x] = index of T_g x, so (f o T_g)(x) = f[perm[x]].
using Permutation = std::vector<int>;

Permutation identity_permutation(int n);
// compose(p, q)[x] = p[q[x]]   (apply q first)
Permutation compose(const Permutation& p, const Permutation& q);
Permutation invert(const Permutation& p);
// p^e through the cycle decomposition; e may be negative or large.
Permutation permutation_power(const Permutation& p, std::int64_t e);
bool is_permutation(const Permutation& p);

// A bounded real function on the points of a finite system.
struct Observable {
  VectorXd values;
  std::string name;

  Observable() = default;
  Observable(VectorXd v, std::string n = "") : values(std::move(v)), name(std::move(n)) {}

  double sup_norm() const { return values.size() ? values.cwiseAbs().maxCoeff() : 0.0; }
};

Observable indicator(int n, int point, std::string name = "");
Observable constant(int n, double c, std::string name = "");

// Disjoint blocks covering {0, ..., n-1}; block_of[x] is the block id of x.
struct Partition {
  std::vector<std::vector<int>> blocks;
  std::vector<int> block_of;

  static Partition from_block_ids(const std::vector<int>& ids);
  static Partition singletons(int n);
  static Partition whole(int n);
  int size() const { return static_cast<int>(blocks.size()); }
  bool refines(const Partition& coarser) const;
};

Partition common_refinement(const Partition& a, const Partition& b);

// A finite probability space with d commuting measure-preserving actions of
// one group.  Actions are given by one permutation per group generator and
// extended to all elements through normal-form words.  Validation checks the
// documented invariants and throws ValidationError naming the violated one.
class FiniteSystem {
 public:
  FiniteSystem(std::vector<std::string> point_names, VectorXd weights, GroupModel group,
               std::vector<std::vector<Permutation>> action_generators);

  int size() const { return static_cast<int>(weights_.size()); }
  int num_actions() const { return static_cast<int>(actions_.size()); }
  const VectorXd& weights() const { return weights_; }
  const GroupModel& group() const { return group_; }
  const std::vector<std::string>& point_names() const { return point_names_; }
  int point_index(const std::string& name) const;

  // permutation for T^(i)_g (actions are 1-indexed, as in "T^(1)..T^(d)")
  Permutation action(int i, const Element& g) const;
  const Permutation& generator_action(int i, int generator) const;
  const std::vector<std::vector<Permutation>>& action_generators() const { return actions_; }

  Observable translate(const Observable& f, const Permutation& p) const;  // f o T_g

  double integral(const Observable& f) const { return weights_.dot(f.values); }
  double l2_norm(const Observable& f) const;

 private:
  void validate() const;

  std::vector<std::string> point_names_;
  VectorXd weights_;
  GroupModel group_;
  std::vector<std::vector<Permutation>> actions_;  // [action][generator] -> permutation
};

// Orbit partition of the subgroup generated by the listed actions' generator
// permutations; its unions are exactly the sets invariant under every listed
// action.  Action indices are 1-based.
Partition invariant_partition(const FiniteSystem& system, const std::vector<int>& action_indices);

// E(f | p): block-wise weighted average; blocks of weight 0 get value 0.
Observable cond_expect(const FiniteSystem& system, const Observable& f, const Partition& p);

// (1/|Phi_N|) sum_{g in Phi_N} f o T^(i)_g.  The family defaults to the
// system group's; pass another model of the same group to override it.
Observable ergodic_average(const FiniteSystem& system, int action_index, const Observable& f,
                           int N);
Observable ergodic_average(const FiniteSystem& system, int action_index, const Observable& f,
                           int N, const GroupModel& family);

// (1/|Phi_N|^2) sum_{g,h in Phi_N} f o T^(i)_{g h^-1}; requires a right- or
// two-sided family.
Observable two_sided_average(const FiniteSystem& system, int action_index, const Observable& f,
                             int N);
Observable two_sided_average(const FiniteSystem& system, int action_index, const Observable& f,
                             int N, const GroupModel& family);

}  // namespace ergo
