#include "ergo/cube_eval.hpp"

#include <stdexcept>

namespace ergo {

std::vector<Permutation> vertex_perms(const std::vector<Permutation>& axis_perms) {
  const int k = static_cast<int>(axis_perms.size());
  const int nv = vertex_count(k);
  std::vector<Permutation> out(static_cast<std::size_t>(nv));
  const int n = k == 0 ? 0 : static_cast<int>(axis_perms[0].size());
  out[0] = identity_permutation(n);
  for (int v = 1; v < nv; ++v) {
    int j = 0;
    while (((v >> j) & 1) == 0) ++j;
    out[static_cast<std::size_t>(v)] =
        compose(axis_perms[static_cast<std::size_t>(j)], out[static_cast<std::size_t>(v - (1 << j))]);
  }
  return out;
}

VectorXd cube_vertex_product(const std::vector<Observable>& fs,
                             const std::vector<Permutation>& perms) {
  if (fs.size() != perms.size()) throw std::invalid_argument("cube_vertex_product: size mismatch");
  const auto n = static_cast<Eigen::Index>(perms.empty() ? 0 : perms[0].size());
  VectorXd out = VectorXd::Ones(n);
  for (std::size_t v = 0; v < fs.size(); ++v) {
    const auto& p = perms[v];
    const auto& f = fs[v].values;
    for (Eigen::Index x = 0; x < n; ++x) out[x] *= f[static_cast<Eigen::Index>(p[static_cast<std::size_t>(x)])];
  }
  return out;
}

double cube_term(const FiniteSystem& system, const std::vector<Observable>& fs,
                 const std::vector<Permutation>& axis_perms) {
  return system.weights().dot(cube_vertex_product(fs, vertex_perms(axis_perms)));
}

}  // namespace ergo
