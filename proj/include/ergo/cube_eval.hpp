#pragma once

// Shared cube-vertex conventions.
//
// A cube of dimension k has 2^k vertices. Vertex v encodes the tuple
// (eps_1, ..., eps_k) with eps_j = (v >> (j-1)) & 1, so v = 0 is the
// all-zeros vertex and growing a cube by one axis appends the new axis
// as the most significant bit.

#include <vector>

#include "ergo/system.hpp"
#include "ergo/types.hpp"

namespace ergo {

inline int vertex_count(int k) { return 1 << k; }

inline bool vertex_bit(int v, int axis_1based) { return ((v >> (axis_1based - 1)) & 1) != 0; }

// Composite permutations R_v = prod_{j : eps_j = 1} p_j for every vertex v.
// Requires the p_j to commute pairwise; all callers pass commuting actions.
std::vector<Permutation> vertex_perms(const std::vector<Permutation>& axis_perms);

// Pointwise product x -> prod_v fs[v](R_v x). fs.size() must equal perms.size().
VectorXd cube_vertex_product(const std::vector<Observable>& fs,
                             const std::vector<Permutation>& perms);

// Integral of the vertex product against the system's measure: one cube term
// of an average such as (1/|Phi|^k) sum_g integral prod_v f_v(R_v x).
double cube_term(const FiniteSystem& system, const std::vector<Observable>& fs,
                 const std::vector<Permutation>& axis_perms);

}  // namespace ergo
