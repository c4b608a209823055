#include "ergo/joining.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ergo/disjoint_sets.hpp"

namespace ergo {

namespace {

constexpr std::int64_t kMaxSupport = 20'000'000;

std::string tuple_to_string(const std::vector<int>& t) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) os << ',';
    os << t[i];
  }
  os << ')';
  return os.str();
}

void check_axes(const FiniteSystem& system, const std::vector<int>& axes, int max_k) {
  if (static_cast<int>(axes.size()) > max_k) {
    throw EnumerationError("joining dimension " + std::to_string(axes.size()) +
                           " exceeds the configured bound " + std::to_string(max_k));
  }
  std::vector<int> seen;
  for (int a : axes) {
    if (a < 1 || a > system.num_actions()) {
      throw ValidationError("joining axis " + std::to_string(a) + " is not an action index");
    }
    if (std::find(seen.begin(), seen.end(), a) != seen.end()) {
      throw ValidationError("joining axes repeat index " + std::to_string(a));
    }
    seen.push_back(a);
  }
}

// diagonal image of a tuple under a base permutation
std::vector<int> map_tuple(const std::vector<int>& t, const Permutation& p) {
  std::vector<int> out(t.size());
  for (std::size_t v = 0; v < t.size(); ++v) out[v] = p[static_cast<std::size_t>(t[v])];
  return out;
}

void validate_joining(const Joining& j) {
  const double mass_err = std::abs(total_mass(j) - 1.0);
  if (mass_err > 1e-11) {
    throw ValidationError("joining mass deviates from 1 by " + std::to_string(mass_err));
  }
  const double marg = joining_marginal_defect(j);
  if (marg > 1e-11) {
    throw ValidationError("joining marginal deviates from the base measure by " +
                          std::to_string(marg));
  }
  const double inv = joining_invariance_defect(j);
  if (inv > kIneqTol) {
    throw ValidationError("joining is not diagonal-invariant, defect " + std::to_string(inv));
  }
}

}  // namespace

int Joining::find(const std::vector<int>& tuple) const {
  auto it = index_.find(tuple);
  return it == index_.end() ? -1 : it->second;
}

double Joining::weight(const std::vector<int>& tuple) const {
  const int i = find(tuple);
  return i < 0 ? 0.0 : mass[i];
}

void Joining::rebuild_index() {
  index_.clear();
  index_.reserve(support.size());
  for (std::size_t i = 0; i < support.size(); ++i) index_[support[i]] = static_cast<int>(i);
}

void Joining::canonicalize() {
  std::vector<int> order(support.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return support[static_cast<std::size_t>(a)] < support[static_cast<std::size_t>(b)];
  });
  std::vector<std::vector<int>> new_support(support.size());
  VectorXd new_mass(mass.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    new_support[i] = std::move(support[static_cast<std::size_t>(order[i])]);
    new_mass[static_cast<Eigen::Index>(i)] = mass[order[i]];
  }
  support = std::move(new_support);
  mass = std::move(new_mass);
  rebuild_index();
}

Joining build_joining(const FiniteSystem& system, const std::vector<int>& axes, int max_k) {
  check_axes(system, axes, max_k);

  Joining j(system);

  std::vector<double> mass;
  j.support.clear();
  for (int x = 0; x < system.size(); ++x) {
    if (system.weights()[x] > 0.0) {
      j.support.push_back({x});
      mass.push_back(system.weights()[x]);
    }
  }

  for (int axis : axes) {
    j.rebuild_index();
    // hold masses in a plain vector during construction
    const auto& gen_perms = system.action_generators()[static_cast<std::size_t>(axis - 1)];

    DisjointSets ds(static_cast<int>(j.support.size()));
    for (const auto& p : gen_perms) {
      for (std::size_t i = 0; i < j.support.size(); ++i) {
        const int target = j.find(map_tuple(j.support[i], p));
        if (target < 0) {
          throw ValidationError("joining support is not closed under the diagonal action");
        }
        ds.unite(static_cast<int>(i), target);
      }
    }
    const std::vector<int> block_of = ds.block_ids();
    const int num_blocks = 1 + (block_of.empty() ? -1 : *std::max_element(block_of.begin(), block_of.end()));

    std::vector<std::vector<int>> members(static_cast<std::size_t>(num_blocks));
    std::vector<double> block_mass(static_cast<std::size_t>(num_blocks), 0.0);
    for (std::size_t i = 0; i < j.support.size(); ++i) {
      members[static_cast<std::size_t>(block_of[i])].push_back(static_cast<int>(i));
      block_mass[static_cast<std::size_t>(block_of[i])] += mass[i];
    }

    std::int64_t new_size = 0;
    for (const auto& b : members) new_size += static_cast<std::int64_t>(b.size()) * static_cast<std::int64_t>(b.size());
    if (new_size > kMaxSupport) {
      throw EnumerationError("joining support would reach " + std::to_string(new_size) + " tuples");
    }

    std::vector<std::vector<int>> new_support;
    std::vector<double> new_mass;
    new_support.reserve(static_cast<std::size_t>(new_size));
    new_mass.reserve(static_cast<std::size_t>(new_size));
    for (std::size_t b = 0; b < members.size(); ++b) {
      for (int s : members[b]) {
        for (int t : members[b]) {
          std::vector<int> tuple = j.support[static_cast<std::size_t>(s)];
          tuple.insert(tuple.end(), j.support[static_cast<std::size_t>(t)].begin(),
                       j.support[static_cast<std::size_t>(t)].end());
          new_support.push_back(std::move(tuple));
          new_mass.push_back(mass[static_cast<std::size_t>(s)] * mass[static_cast<std::size_t>(t)] /
                             block_mass[b]);
        }
      }
    }
    j.support = std::move(new_support);
    mass = std::move(new_mass);
    j.axes.push_back(axis);
  }

  j.mass = Eigen::Map<const VectorXd>(mass.data(), static_cast<Eigen::Index>(mass.size()));
  j.canonicalize();
  validate_joining(j);
  return j;
}

double joining_integral(const Joining& j, const std::vector<Observable>& fs) {
  if (static_cast<int>(fs.size()) != j.vertices()) {
    throw ValidationError("joining_integral needs one observable per cube vertex");
  }
  for (const auto& f : fs) {
    if (f.values.size() != j.base.weights().size()) {
      throw ValidationError("observable dimension does not match the base space");
    }
  }
  double total = 0;
  for (std::size_t i = 0; i < j.support.size(); ++i) {
    double prod = j.mass[static_cast<Eigen::Index>(i)];
    const auto& t = j.support[i];
    for (std::size_t v = 0; v < t.size(); ++v) prod *= fs[v].values[t[v]];
    total += prod;
  }
  return total;
}

VectorXd joining_marginal(const Joining& j, int vertex) {
  if (vertex < 0 || vertex >= j.vertices()) throw ValidationError("marginal vertex out of range");
  VectorXd out = VectorXd::Zero(j.base.weights().size());
  for (std::size_t i = 0; i < j.support.size(); ++i) {
    out[j.support[i][static_cast<std::size_t>(vertex)]] += j.mass[static_cast<Eigen::Index>(i)];
  }
  return out;
}

double joining_marginal_defect(const Joining& j) {
  double worst = 0;
  for (int v = 0; v < j.vertices(); ++v) {
    worst = std::max(worst, (joining_marginal(j, v) - j.base.weights()).cwiseAbs().maxCoeff());
  }
  return worst;
}

double joining_invariance_defect(const Joining& j) {
  double worst = 0;
  for (const auto& action : j.base.action_generators()) {
    for (const auto& p : action) {
      double moved = 0;
      for (std::size_t i = 0; i < j.support.size(); ++i) {
        moved = std::max(moved, std::abs(j.mass[static_cast<Eigen::Index>(i)] -
                                         j.weight(map_tuple(j.support[i], p))));
      }
      worst = std::max(worst, moved);
    }
  }
  return worst;
}

double total_mass(const Joining& j) { return j.mass.sum(); }

double box_seminorm(const Joining& mu_eta, const Observable& f) {
  if (mu_eta.k() < 1) throw ValidationError("box seminorm needs at least one index");
  const std::vector<Observable> fs(static_cast<std::size_t>(mu_eta.vertices()), f);
  const double integral = joining_integral(mu_eta, fs);
  if (integral < -kIneqTol) {
    throw ValidationError("box seminorm integral is negative (" + std::to_string(integral) +
                          "), the joining is broken");
  }
  return std::pow(std::max(integral, 0.0), 1.0 / static_cast<double>(mu_eta.vertices()));
}

double box_seminorm(const FiniteSystem& system, const std::vector<int>& eta, const Observable& f) {
  return box_seminorm(build_joining(system, eta), f);
}

CsgReport csg_check(const FiniteSystem& system, const std::vector<int>& eta,
                    const std::vector<Observable>& fs) {
  const Joining mu_eta = build_joining(system, eta);
  if (static_cast<int>(fs.size()) != mu_eta.vertices()) {
    throw ValidationError("csg_check needs one observable per cube vertex");
  }
  for (std::size_t v = 0; v < fs.size(); ++v) {
    if (fs[v].sup_norm() > 1.0 + kExactTol) {
      throw ValidationError("csg_check requires sup norm at most 1, vertex " + std::to_string(v) +
                            " has " + std::to_string(fs[v].sup_norm()));
    }
  }
  CsgReport report;
  report.lhs = std::abs(joining_integral(mu_eta, fs));
  report.vertex_seminorms.reserve(fs.size());
  for (const auto& f : fs) report.vertex_seminorms.push_back(box_seminorm(mu_eta, f));
  report.rhs = *std::min_element(report.vertex_seminorms.begin(), report.vertex_seminorms.end());
  report.pass = report.lhs <= report.rhs + kIneqTol;
  return report;
}

VdcReport vdc_check(const std::unordered_map<Element, VectorXd, ElementHash>& vectors,
                    const GroupModel& phi, const GroupModel& psi, int m, double c) {
  if (!phi.same_group(psi)) throw ValidationError("vdc_check families model different groups");
  if (c <= 0) throw ValidationError("vdc_check needs c > 0");

  const std::vector<Element> psi_m = psi.folner_set(m);

  VdcReport report;
  report.m = m;
  report.bound = 2 * c;

  std::int64_t n = 1;
  for (;; n *= 2) {
    if (n > (1 << 22)) throw EnumerationError("no N with Folner defects below c was found");
    double worst = 0;
    for (const Element& h : psi_m) {
      worst = std::max(worst, phi.folner_defect(n, h, Sidedness::left));
      if (worst >= c) break;
    }
    if (worst < c) {
      report.big_n = n;
      report.max_defect = worst;
      break;
    }
  }

  const std::vector<Element> phi_n = phi.folner_set(report.big_n);
  const auto fetch = [&](const Element& g) -> const VectorXd& {
    auto it = vectors.find(g);
    if (it == vectors.end()) {
      throw ValidationError("vector window does not cover element " + phi.element_name(g));
    }
    if (it->second.norm() > 1.0 + kExactTol) {
      throw ValidationError("vector at " + phi.element_name(g) + " leaves the unit ball");
    }
    return it->second;
  };

  const Eigen::Index dim = fetch(phi_n.front()).size();
  VectorXd plain = VectorXd::Zero(dim);
  for (const Element& g : phi_n) plain += fetch(g);
  plain /= static_cast<double>(phi_n.size());

  VectorXd shifted = VectorXd::Zero(dim);
  for (const Element& h : psi_m) {
    for (const Element& g : phi_n) shifted += fetch(phi.multiply(h, g));
  }
  shifted /= static_cast<double>(psi_m.size()) * static_cast<double>(phi_n.size());

  report.lhs = (plain - shifted).norm();
  report.pass = report.lhs < report.bound;
  return report;
}

SeminormBoundReport seminorm_bound_check(const FiniteSystem& system, const std::vector<int>& eta,
                                         const std::vector<Observable>& fs,
                                         const std::vector<GroupModel>& families,
                                         const std::vector<std::int64_t>& big_ns, double delta) {
  const int k = static_cast<int>(eta.size());
  check_axes(system, eta, 3);
  if (static_cast<int>(fs.size()) != vertex_count(k)) {
    throw ValidationError("seminorm_bound_check needs one observable per cube vertex");
  }
  if (static_cast<int>(families.size()) != k || static_cast<int>(big_ns.size()) != k) {
    throw ValidationError("seminorm_bound_check needs one family and one N per axis");
  }
  for (const auto& fam : families) {
    if (!fam.same_group(system.group())) {
      throw ValidationError("Folner family models a different group than the system");
    }
  }
  for (const auto& f : fs) {
    if (f.sup_norm() > 1.0 + kExactTol) {
      throw ValidationError("seminorm_bound_check requires sup norm at most 1");
    }
  }

  SeminormBoundReport report;
  report.delta = delta;
  const double big_c = static_cast<double>(1 << (k + 3));
  report.alpha = delta / (2 * big_c);

  // J: multi-average of one cube term per tuple (g_1, ..., g_k)
  std::vector<std::vector<Permutation>> axis_perms(static_cast<std::size_t>(k));
  double combos = 1;
  for (int jx = 0; jx < k; ++jx) {
    const auto set = families[static_cast<std::size_t>(jx)].folner_set(big_ns[static_cast<std::size_t>(jx)]);
    combos *= static_cast<double>(set.size());
    auto& perms = axis_perms[static_cast<std::size_t>(jx)];
    perms.reserve(set.size());
    for (const Element& g : set) perms.push_back(system.action(eta[static_cast<std::size_t>(jx)], g));
  }
  if (combos > 5e7) throw EnumerationError("seminorm_bound_check average has too many terms");

  double sum = 0;
  std::vector<std::size_t> pick(static_cast<std::size_t>(k), 0);
  std::vector<Permutation> current(static_cast<std::size_t>(k));
  for (;;) {
    for (int jx = 0; jx < k; ++jx) {
      current[static_cast<std::size_t>(jx)] = axis_perms[static_cast<std::size_t>(jx)][pick[static_cast<std::size_t>(jx)]];
    }
    sum += cube_term(system, fs, current);
    int jx = 0;
    while (jx < k && ++pick[static_cast<std::size_t>(jx)] == axis_perms[static_cast<std::size_t>(jx)].size()) {
      pick[static_cast<std::size_t>(jx)] = 0;
      ++jx;
    }
    if (jx == k) break;
  }
  report.j_value = sum / combos;
  report.seminorm = box_seminorm(system, eta, fs[0]);

  bool all_finite = true;
  for (const auto& fam : families) all_finite = all_finite && fam.is_finite();

  if (all_finite) {
    // Phi_N = G: the average equals the joining integral exactly and the
    // delta-free bound holds up to root-amplified rounding
    report.sharp = true;
    report.n0 = 1;
    report.verdict = std::abs(report.j_value) <= report.seminorm + 1e-9 ? "pass" : "fail";
    return report;
  }

  std::int64_t n0 = 1;
  for (;; n0 *= 2) {
    if (n0 > (1 << 22)) {
      throw EnumerationError("no N0 with generator defects below alpha was found");
    }
    bool small_enough = true;
    for (int jx = 0; jx < k && small_enough; ++jx) {
      const auto& fam = families[static_cast<std::size_t>(jx)];
      if (fam.folner_size(n0) > 5'000'000) {
        throw EnumerationError("N0 search exceeded the enumeration budget");
      }
      for (const Element& s : fam.generators()) {
        if (fam.folner_defect(n0, s, Sidedness::two_sided) >= report.alpha) {
          small_enough = false;
          break;
        }
      }
    }
    if (small_enough) break;
  }
  report.n0 = n0;

  const bool bound_holds = std::abs(report.j_value) <= report.seminorm + delta;
  const bool scale_reached =
      std::all_of(big_ns.begin(), big_ns.end(), [&](std::int64_t n) { return n >= n0; });
  if (bound_holds) {
    report.verdict = "pass";
  } else {
    report.verdict = scale_reached ? "fail" : "inconclusive";
  }
  return report;
}

OrderIndependenceReport order_independence_check(const FiniteSystem& system,
                                                 const std::vector<int>& axes) {
  if (axes.size() > 3) throw ValidationError("order_independence_check caps |P| at 3");
  check_axes(system, axes, 3);

  std::vector<int> sorted_axes = axes;
  std::sort(sorted_axes.begin(), sorted_axes.end());
  const int k = static_cast<int>(axes.size());
  const int nv = vertex_count(k);

  struct Aligned {
    std::string label;
    std::map<std::vector<int>, double> measure;
  };
  std::vector<Aligned> built;

  std::vector<int> order = sorted_axes;
  do {
    const Joining j = build_joining(system, order);
    // bit jx of a vertex moves to the position of order[jx] among the sorted axes
    std::vector<int> bit_target(static_cast<std::size_t>(k));
    for (int jx = 0; jx < k; ++jx) {
      bit_target[static_cast<std::size_t>(jx)] = static_cast<int>(
          std::lower_bound(sorted_axes.begin(), sorted_axes.end(), order[static_cast<std::size_t>(jx)]) -
          sorted_axes.begin());
    }
    std::vector<int> vmap(static_cast<std::size_t>(nv), 0);
    for (int v = 0; v < nv; ++v) {
      int target = 0;
      for (int jx = 0; jx < k; ++jx) {
        if ((v >> jx) & 1) target |= 1 << bit_target[static_cast<std::size_t>(jx)];
      }
      vmap[static_cast<std::size_t>(v)] = target;
    }

    Aligned a;
    a.label = tuple_to_string(order);
    for (std::size_t i = 0; i < j.support.size(); ++i) {
      std::vector<int> t(static_cast<std::size_t>(nv));
      for (int v = 0; v < nv; ++v) t[static_cast<std::size_t>(vmap[static_cast<std::size_t>(v)])] = j.support[i][static_cast<std::size_t>(v)];
      a.measure[std::move(t)] += j.mass[static_cast<Eigen::Index>(i)];
    }
    built.push_back(std::move(a));
  } while (std::next_permutation(order.begin(), order.end()));

  OrderIndependenceReport report;
  report.orderings = static_cast<int>(built.size());
  for (std::size_t a = 0; a < built.size(); ++a) {
    for (std::size_t b = a + 1; b < built.size(); ++b) {
      double tv = 0;
      for (const auto& [t, w] : built[a].measure) {
        auto it = built[b].measure.find(t);
        tv += std::abs(w - (it == built[b].measure.end() ? 0.0 : it->second));
      }
      for (const auto& [t, w] : built[b].measure) {
        if (built[a].measure.find(t) == built[a].measure.end()) tv += w;
      }
      tv /= 2;
      if (tv > report.max_tv) {
        report.max_tv = tv;
        report.worst_pair = built[a].label + " vs " + built[b].label;
      }
    }
  }
  report.pass = report.max_tv <= kExactTol;
  return report;
}

}  // namespace ergo
