#include "ergo/magic.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ergo {

namespace {

std::string star_point_name(const FiniteSystem& base, const std::vector<int>& tuple) {
  std::ostringstream os;
  os << '(';
  for (std::size_t v = 0; v < tuple.size(); ++v) {
    if (v) os << ',';
    os << base.point_names()[static_cast<std::size_t>(tuple[v])];
  }
  os << ')';
  return os.str();
}

}  // namespace

MagicSystem magic_extension(const FiniteSystem& system, int max_d) {
  const int d = system.num_actions();
  if (d > max_d) {
    throw EnumerationError("magic extension of a system with " + std::to_string(d) +
                           " actions exceeds the configured bound " + std::to_string(max_d));
  }
  std::vector<int> all_axes(static_cast<std::size_t>(d));
  std::iota(all_axes.begin(), all_axes.end(), 1);
  Joining mu_star = build_joining(system, all_axes, max_d);

  const int n_star = static_cast<int>(mu_star.support.size());
  std::vector<std::string> names(static_cast<std::size_t>(n_star));
  for (int s = 0; s < n_star; ++s) {
    names[static_cast<std::size_t>(s)] = star_point_name(system, mu_star.support[static_cast<std::size_t>(s)]);
  }

  // T^(i)* moves the coordinates whose vertex has bit i clear
  std::vector<std::vector<Permutation>> star_actions(static_cast<std::size_t>(d));
  for (int i = 1; i <= d; ++i) {
    const auto& gens = system.action_generators()[static_cast<std::size_t>(i - 1)];
    auto& star_gens = star_actions[static_cast<std::size_t>(i - 1)];
    star_gens.reserve(gens.size());
    for (const auto& p : gens) {
      Permutation sp(static_cast<std::size_t>(n_star));
      for (int s = 0; s < n_star; ++s) {
        std::vector<int> image = mu_star.support[static_cast<std::size_t>(s)];
        for (std::size_t v = 0; v < image.size(); ++v) {
          if (!vertex_bit(static_cast<int>(v), i)) image[v] = p[static_cast<std::size_t>(image[v])];
        }
        const int target = mu_star.find(image);
        if (target < 0) {
          throw ValidationError("star action leaves the support of the cube joining");
        }
        sp[static_cast<std::size_t>(s)] = target;
      }
      star_gens.push_back(std::move(sp));
    }
  }

  // FiniteSystem construction re-validates measure preservation (the mu*
  // invariance invariant) and commutation of the star actions
  FiniteSystem star(std::move(names), mu_star.mass, system.group(), std::move(star_actions));

  MagicSystem magic{system, std::move(star), mu_star.support, std::move(mu_star)};

  // zero-vertex projection: pushforward and intertwining
  VectorXd pushed = VectorXd::Zero(system.size());
  for (int s = 0; s < n_star; ++s) {
    pushed[magic.project(s, 0)] += magic.star.weights()[s];
  }
  if ((pushed - system.weights()).cwiseAbs().maxCoeff() > 1e-11) {
    throw ValidationError("zero-vertex projection does not push mu* to mu");
  }
  for (int i = 1; i <= d; ++i) {
    const auto& base_gens = system.action_generators()[static_cast<std::size_t>(i - 1)];
    const auto& star_gens = magic.star.action_generators()[static_cast<std::size_t>(i - 1)];
    for (std::size_t g = 0; g < base_gens.size(); ++g) {
      for (int s = 0; s < n_star; ++s) {
        const int via_star = magic.project(star_gens[g][static_cast<std::size_t>(s)], 0);
        const int via_base = base_gens[g][static_cast<std::size_t>(magic.project(s, 0))];
        if (via_star != via_base) {
          throw ValidationError("zero-vertex projection does not intertwine action " +
                                std::to_string(i));
        }
      }
    }
  }
  return magic;
}

Partition z_partition(const FiniteSystem& system, const std::vector<int>& eta) {
  if (eta.empty()) throw ValidationError("z_partition needs a nonempty index set");
  Partition result = invariant_partition(system, {eta.front()});
  for (std::size_t i = 1; i < eta.size(); ++i) {
    result = common_refinement(result, invariant_partition(system, {eta[i]}));
  }
  return result;
}

Observable lift_to_star(const MagicSystem& magic, const Observable& f) {
  if (f.values.size() != magic.base.weights().size()) {
    throw ValidationError("observable dimension does not match the base space");
  }
  VectorXd values(magic.star.size());
  for (int s = 0; s < magic.star.size(); ++s) values[s] = f.values[magic.project(s, 0)];
  return Observable(std::move(values), f.name.empty() ? "" : f.name + "*");
}

StructureReport structure_check(const MagicSystem& magic, const std::vector<int>& eps,
                                const Observable& f_star) {
  if (eps.empty()) throw ValidationError("structure_check needs a nonempty index set");
  if (f_star.values.size() != magic.star.weights().size()) {
    throw ValidationError("structure_check observable must live on the star space");
  }
  const Partition z = z_partition(magic.star, eps);
  Observable g = f_star;
  g.values -= cond_expect(magic.star, f_star, z).values;

  StructureReport report;
  report.conditional_sup = cond_expect(magic.star, g, z).values.cwiseAbs().maxCoeff();
  report.residual_seminorm = box_seminorm(magic.star, eps, g);
  report.pass = report.residual_seminorm <= kRootTol;
  return report;
}

}  // namespace ergo
