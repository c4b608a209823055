#include "ergo/system.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <unordered_map>

namespace ergo {

Permutation identity_permutation(int n) {
  Permutation p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Permutation compose(const Permutation& p, const Permutation& q) {
  Permutation r(q.size());
  for (std::size_t x = 0; x < q.size(); ++x) r[x] = p[static_cast<std::size_t>(q[x])];
  return r;
}

Permutation invert(const Permutation& p) {
  Permutation r(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) r[static_cast<std::size_t>(p[x])] = static_cast<int>(x);
  return r;
}

Permutation permutation_power(const Permutation& p, std::int64_t e) {
  const int n = static_cast<int>(p.size());
  Permutation r(p.size());
  std::vector<char> visited(p.size(), 0);
  std::vector<int> cycle;
  for (int start = 0; start < n; ++start) {
    if (visited[static_cast<std::size_t>(start)]) continue;
    cycle.clear();
    int x = start;
    do {
      visited[static_cast<std::size_t>(x)] = 1;
      cycle.push_back(x);
      x = p[static_cast<std::size_t>(x)];
    } while (x != start);
    const std::int64_t len = static_cast<std::int64_t>(cycle.size());
    std::int64_t shift = e % len;
    if (shift < 0) shift += len;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      r[static_cast<std::size_t>(cycle[i])] =
          cycle[(i + static_cast<std::size_t>(shift)) % cycle.size()];
    }
  }
  return r;
}

bool is_permutation(const Permutation& p) {
  std::vector<char> seen(p.size(), 0);
  for (int v : p) {
    if (v < 0 || v >= static_cast<int>(p.size()) || seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = 1;
  }
  return true;
}

Observable indicator(int n, int point, std::string name) {
  VectorXd v = VectorXd::Zero(n);
  v[point] = 1.0;
  return Observable(std::move(v), std::move(name));
}

Observable constant(int n, double c, std::string name) {
  return Observable(VectorXd::Constant(n, c), std::move(name));
}

Partition Partition::from_block_ids(const std::vector<int>& ids) {
  Partition p;
  p.block_of = ids;
  int num_blocks = ids.empty() ? 0 : *std::max_element(ids.begin(), ids.end()) + 1;
  p.blocks.assign(static_cast<std::size_t>(num_blocks), {});
  for (std::size_t x = 0; x < ids.size(); ++x)
    p.blocks[static_cast<std::size_t>(ids[x])].push_back(static_cast<int>(x));
  for (const auto& b : p.blocks)
    if (b.empty()) throw ValidationError("Partition: empty block id in use");
  return p;
}

Partition Partition::singletons(int n) {
  std::vector<int> ids(static_cast<std::size_t>(n));
  std::iota(ids.begin(), ids.end(), 0);
  return from_block_ids(ids);
}

Partition Partition::whole(int n) {
  return from_block_ids(std::vector<int>(static_cast<std::size_t>(n), 0));
}

bool Partition::refines(const Partition& coarser) const {
  if (block_of.size() != coarser.block_of.size()) return false;
  for (const auto& block : blocks) {
    const int target = coarser.block_of[static_cast<std::size_t>(block.front())];
    for (int x : block)
      if (coarser.block_of[static_cast<std::size_t>(x)] != target) return false;
  }
  return true;
}

Partition common_refinement(const Partition& a, const Partition& b) {
  if (a.block_of.size() != b.block_of.size())
    throw ValidationError("common_refinement: partitions of different spaces");
  std::unordered_map<std::int64_t, int> pair_to_id;
  std::vector<int> ids(a.block_of.size());
  for (std::size_t x = 0; x < ids.size(); ++x) {
    const std::int64_t key =
        static_cast<std::int64_t>(a.block_of[x]) * static_cast<std::int64_t>(b.blocks.size()) +
        b.block_of[x];
    auto [it, inserted] = pair_to_id.emplace(key, static_cast<int>(pair_to_id.size()));
    ids[x] = it->second;
  }
  return Partition::from_block_ids(ids);
}

FiniteSystem::FiniteSystem(std::vector<std::string> point_names, VectorXd weights, GroupModel group,
                           std::vector<std::vector<Permutation>> action_generators)
    : point_names_(std::move(point_names)),
      weights_(std::move(weights)),
      group_(std::move(group)),
      actions_(std::move(action_generators)) {
  if (point_names_.empty()) {
    point_names_.reserve(static_cast<std::size_t>(weights_.size()));
    for (int i = 0; i < weights_.size(); ++i) point_names_.push_back(std::to_string(i));
  }
  validate();
}

int FiniteSystem::point_index(const std::string& name) const {
  for (std::size_t i = 0; i < point_names_.size(); ++i)
    if (point_names_[i] == name) return static_cast<int>(i);
  throw ValidationError("point_index: unknown point '" + name + "'");
}

void FiniteSystem::validate() const {
  const int n = size();
  if (n == 0) throw ValidationError("FiniteSystem: empty point set");
  if (static_cast<int>(point_names_.size()) != n)
    throw ValidationError("FiniteSystem: point names do not match weight vector length");
  if (weights_.minCoeff() < 0)
    throw ValidationError("FiniteSystem: weights must be nonnegative");
  if (std::abs(weights_.sum() - 1.0) > kExactTol)
    throw ValidationError("FiniteSystem: weights must sum to 1");
  if (actions_.empty()) throw ValidationError("FiniteSystem: needs at least one action");

  const std::size_t num_gens = group_.generators().size();
  for (std::size_t i = 0; i < actions_.size(); ++i) {
    if (actions_[i].size() != num_gens)
      throw ValidationError("FiniteSystem: action " + std::to_string(i + 1) +
                            " must map every group generator to a permutation");
    for (const Permutation& p : actions_[i]) {
      if (p.size() != static_cast<std::size_t>(n) || !is_permutation(p))
        throw ValidationError("FiniteSystem: action map is not a bijection on points");
      // measure preservation: sum_{x: T_g x = y} w(x) = w(y) for all y,
      // i.e. the weight vector is invariant under the permutation
      for (int x = 0; x < n; ++x)
        if (std::abs(weights_[p[static_cast<std::size_t>(x)]] - weights_[x]) > kExactTol)
          throw ValidationError("FiniteSystem: action does not preserve the measure");
    }
  }

  // commutation of distinct actions, checked on all generator pairs
  for (std::size_t i = 0; i < actions_.size(); ++i)
    for (std::size_t j = i + 1; j < actions_.size(); ++j)
      for (const Permutation& p : actions_[i])
        for (const Permutation& q : actions_[j])
          if (compose(p, q) != compose(q, p))
            throw ValidationError("FiniteSystem: actions " + std::to_string(i + 1) + " and " +
                                  std::to_string(j + 1) + " do not commute");

  // homomorphism property on a relation sample: eval(g*h) == eval(g) o eval(h)
  std::vector<Element> sample;
  if (group_.is_finite()) {
    sample = group_.elements();
  } else {
    sample = group_.folner_set(2);
  }
  if (sample.size() > 40) sample.resize(40);
  for (int i = 1; i <= num_actions(); ++i) {
    for (const Element& g : sample) {
      const Permutation pg = action(i, g);
      for (const Element& h : sample) {
        const Permutation ph = action(i, h);
        if (action(i, group_.multiply(g, h)) != compose(pg, ph))
          throw ValidationError(
              "FiniteSystem: action " + std::to_string(i) +
              " violates the homomorphism property (generator permutations break a group relation)");
      }
    }
  }
}

const Permutation& FiniteSystem::generator_action(int i, int generator) const {
  return actions_[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(generator)];
}

Permutation FiniteSystem::action(int i, const Element& g) const {
  if (i < 1 || i > num_actions())
    throw ValidationError("action: index " + std::to_string(i) + " out of range");
  // g = prod_r gen_{i_r}^{e_r} left to right, so T_g = T_{w_1} o T_{w_2} o ...
  Permutation result = identity_permutation(size());
  for (const WordFactor& w : group_.word(g)) {
    result = compose(result, permutation_power(generator_action(i, w.generator), w.exponent));
  }
  return result;
}

Observable FiniteSystem::translate(const Observable& f, const Permutation& p) const {
  VectorXd out(f.values.size());
  for (int x = 0; x < out.size(); ++x) out[x] = f.values[p[static_cast<std::size_t>(x)]];
  return Observable(std::move(out), f.name);
}

double FiniteSystem::l2_norm(const Observable& f) const {
  return std::sqrt(weights_.dot(f.values.cwiseProduct(f.values)));
}

Partition invariant_partition(const FiniteSystem& system, const std::vector<int>& action_indices) {
  if (action_indices.empty())
    throw ValidationError("invariant_partition: needs at least one action index");
  const int n = system.size();
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  };
  for (int i : action_indices) {
    if (i < 1 || i > system.num_actions())
      throw ValidationError("invariant_partition: action index out of range");
    for (const Permutation& p : system.action_generators()[static_cast<std::size_t>(i - 1)])
      for (int x = 0; x < n; ++x) unite(x, p[static_cast<std::size_t>(x)]);
  }
  std::vector<int> root_to_id(static_cast<std::size_t>(n), -1);
  std::vector<int> ids(static_cast<std::size_t>(n));
  int next = 0;
  for (int x = 0; x < n; ++x) {
    int r = find(x);
    if (root_to_id[static_cast<std::size_t>(r)] < 0) root_to_id[static_cast<std::size_t>(r)] = next++;
    ids[static_cast<std::size_t>(x)] = root_to_id[static_cast<std::size_t>(r)];
  }
  return Partition::from_block_ids(ids);
}

Observable cond_expect(const FiniteSystem& system, const Observable& f, const Partition& p) {
  if (static_cast<int>(p.block_of.size()) != system.size())
    throw ValidationError("cond_expect: partition does not cover the system's points");
  VectorXd out = VectorXd::Zero(system.size());
  for (const auto& block : p.blocks) {
    double mass = 0.0, acc = 0.0;
    for (int x : block) {
      mass += system.weights()[x];
      acc += system.weights()[x] * f.values[x];
    }
    const double value = mass > 0.0 ? acc / mass : 0.0;
    for (int x : block) out[x] = value;
  }
  return Observable(std::move(out), f.name);
}

Observable ergodic_average(const FiniteSystem& system, int action_index, const Observable& f,
                           int N) {
  return ergodic_average(system, action_index, f, N, system.group());
}

Observable ergodic_average(const FiniteSystem& system, int action_index, const Observable& f,
                           int N, const GroupModel& family) {
  const std::vector<Element> phi = family.folner_set(N);
  VectorXd acc = VectorXd::Zero(system.size());
  for (const Element& g : phi) {
    const Permutation p = system.action(action_index, g);
    for (int x = 0; x < system.size(); ++x) acc[x] += f.values[p[static_cast<std::size_t>(x)]];
  }
  acc /= static_cast<double>(phi.size());
  return Observable(std::move(acc), f.name);
}

Observable two_sided_average(const FiniteSystem& system, int action_index, const Observable& f,
                             int N) {
  return two_sided_average(system, action_index, f, N, system.group());
}

Observable two_sided_average(const FiniteSystem& system, int action_index, const Observable& f,
                             int N, const GroupModel& family) {
  if (family.sidedness() == Sidedness::left)
    throw ValidationError("two_sided_average: family must be right- or two-sided");
  const std::vector<Element> phi = family.folner_set(N);
  // tally g h^-1 over all pairs, then average translates with multiplicity
  std::unordered_map<Element, std::int64_t, ElementHash> counts;
  for (const Element& h : phi) {
    const Element hinv = family.inverse(h);
    for (const Element& g : phi) counts[family.multiply(g, hinv)] += 1;
  }
  VectorXd acc = VectorXd::Zero(system.size());
  const double denom = static_cast<double>(phi.size()) * static_cast<double>(phi.size());
  for (const auto& [u, count] : counts) {
    const Permutation p = system.action(action_index, u);
    const double w = static_cast<double>(count) / denom;
    for (int x = 0; x < system.size(); ++x)
      acc[x] += w * f.values[p[static_cast<std::size_t>(x)]];
  }
  return Observable(std::move(acc), f.name);
}

}  // namespace ergo
