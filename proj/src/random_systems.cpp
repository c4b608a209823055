#include "ergo/random_systems.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <queue>

namespace ergo {

GroupModel klein_four_group() {
  std::vector<std::vector<int>> table = {
      {0, 1, 2, 3},
      {1, 0, 3, 2},
      {2, 3, 0, 1},
      {3, 2, 1, 0},
  };
  return GroupModel::finite_from_table(std::move(table), {1, 2}, {"e", "a", "b", "ab"});
}

GroupModel symmetric_group_3() {
  // elements are the permutations of {0,1,2} in lexicographic one-line order
  std::vector<std::array<int, 3>> perms;
  std::array<int, 3> p = {0, 1, 2};
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));

  const auto index_of = [&](const std::array<int, 3>& q) {
    return static_cast<int>(std::find(perms.begin(), perms.end(), q) - perms.begin());
  };

  std::vector<std::vector<int>> table(6, std::vector<int>(6));
  std::vector<std::string> names;
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      std::array<int, 3> prod;
      for (int x = 0; x < 3; ++x) prod[static_cast<std::size_t>(x)] = perms[static_cast<std::size_t>(i)][static_cast<std::size_t>(perms[static_cast<std::size_t>(j)][static_cast<std::size_t>(x)])];
      table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = index_of(prod);
    }
    std::string name;
    for (int x : perms[static_cast<std::size_t>(i)]) name += static_cast<char>('0' + x);
    names.push_back(name);
  }
  const int swap01 = index_of({1, 0, 2});
  const int cycle = index_of({1, 2, 0});
  return GroupModel::finite_from_table(std::move(table), {swap01, cycle}, std::move(names));
}

std::vector<GroupModel> finite_group_catalog() {
  std::vector<GroupModel> out;
  for (int n = 2; n <= 6; ++n) out.push_back(GroupModel::cyclic(n));
  out.push_back(klein_four_group());
  out.push_back(symmetric_group_3());
  return out;
}

std::vector<std::vector<int>> homomorphisms_to_cyclic(const GroupModel& group, int m) {
  if (!group.is_finite()) throw ValidationError("homomorphism search needs a finite group");
  if (m < 1) throw ValidationError("homomorphism target needs m >= 1");
  const auto& table = group.cayley_table();
  const int n = group.order();
  const int id = static_cast<int>(group.identity()[0]);

  std::vector<int> gens;
  for (const Element& g : group.generators()) gens.push_back(static_cast<int>(g[0]));
  const int k = static_cast<int>(gens.size());

  std::int64_t assignments = 1;
  for (int i = 0; i < k; ++i) assignments *= m;

  std::vector<std::vector<int>> out;
  std::vector<int> image(static_cast<std::size_t>(k), 0);
  for (std::int64_t a = 0; a < assignments; ++a) {
    std::int64_t rest = a;
    for (int i = 0; i < k; ++i) {
      image[static_cast<std::size_t>(i)] = static_cast<int>(rest % m);
      rest /= m;
    }

    std::vector<int> phi(static_cast<std::size_t>(n), -1);
    phi[static_cast<std::size_t>(id)] = 0;
    std::queue<int> frontier;
    frontier.push(id);
    bool ok = true;
    while (ok && !frontier.empty()) {
      const int x = frontier.front();
      frontier.pop();
      for (int i = 0; i < k; ++i) {
        const int y = table[static_cast<std::size_t>(x)][static_cast<std::size_t>(gens[static_cast<std::size_t>(i)])];
        const int want = (phi[static_cast<std::size_t>(x)] + image[static_cast<std::size_t>(i)]) % m;
        if (phi[static_cast<std::size_t>(y)] < 0) {
          phi[static_cast<std::size_t>(y)] = want;
          frontier.push(y);
        } else if (phi[static_cast<std::size_t>(y)] != want) {
          ok = false;
          break;
        }
      }
    }
    if (!ok || std::count(phi.begin(), phi.end(), -1) > 0) continue;
    for (int x = 0; ok && x < n; ++x) {
      for (int y = 0; y < n; ++y) {
        if (phi[static_cast<std::size_t>(table[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)])] !=
            (phi[static_cast<std::size_t>(x)] + phi[static_cast<std::size_t>(y)]) % m) {
          ok = false;
          break;
        }
      }
    }
    if (ok) out.push_back(std::move(phi));
  }
  return out;
}

namespace {

FiniteSystem translation_pair_system(const GroupModel& group) {
  const int n = group.order();
  const auto& table = group.cayley_table();
  std::vector<std::string> names;
  for (const Element& g : group.elements()) names.push_back(group.element_name(g));
  VectorXd weights = VectorXd::Constant(n, 1.0 / n);

  std::vector<Permutation> left, right;
  for (const Element& s : group.generators()) {
    const int si = static_cast<int>(s[0]);
    const int si_inv = static_cast<int>(group.inverse(s)[0]);
    Permutation l(static_cast<std::size_t>(n)), r(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x) {
      l[static_cast<std::size_t>(x)] = table[static_cast<std::size_t>(si)][static_cast<std::size_t>(x)];
      r[static_cast<std::size_t>(x)] = table[static_cast<std::size_t>(x)][static_cast<std::size_t>(si_inv)];
    }
    left.push_back(std::move(l));
    right.push_back(std::move(r));
  }
  return FiniteSystem(std::move(names), std::move(weights), group, {std::move(left), std::move(right)});
}

}  // namespace

FiniteSystem random_system(Rng& rng, const GroupModel& group, const RandomSystemOptions& opt) {
  if (opt.d < 1) throw ValidationError("random system needs d >= 1");
  if (group.family() == GroupModel::Family::heisenberg) {
    throw ValidationError("random systems cover finite and Z^m groups");
  }
  if (group.is_finite() && opt.allow_translation_pair && opt.d == 2 && rng.uniform_int(4) == 0) {
    return translation_pair_system(group);
  }

  const int blocks = rng.uniform_range(1, std::max(1, opt.max_blocks));
  const int num_gens = static_cast<int>(group.generators().size());

  std::vector<int> block_size(static_cast<std::size_t>(blocks));
  std::vector<double> block_mass(static_cast<std::size_t>(blocks));
  double total_mass = 0;
  for (int b = 0; b < blocks; ++b) {
    block_size[static_cast<std::size_t>(b)] = rng.uniform_range(2, std::max(2, opt.max_block_size));
    block_mass[static_cast<std::size_t>(b)] = 0.1 + rng.uniform_real();
    total_mass += block_mass[static_cast<std::size_t>(b)];
  }

  // generator rotation amount per (action, block, generator); for a finite
  // group a random homomorphism G -> Z/L_b fixes them, for Z^m they are free
  std::vector<std::vector<std::vector<int>>> rot(static_cast<std::size_t>(opt.d));
  for (int i = 0; i < opt.d; ++i) {
    rot[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(blocks));
    for (int b = 0; b < blocks; ++b) {
      const int L = block_size[static_cast<std::size_t>(b)];
      std::vector<int> amounts(static_cast<std::size_t>(num_gens));
      if (group.is_finite()) {
        const auto homs = homomorphisms_to_cyclic(group, L);
        const auto& phi = homs[rng.uniform_int(homs.size())];
        for (int s = 0; s < num_gens; ++s) {
          amounts[static_cast<std::size_t>(s)] = phi[static_cast<std::size_t>(group.generators()[static_cast<std::size_t>(s)][0])];
        }
      } else {
        for (int s = 0; s < num_gens; ++s) {
          amounts[static_cast<std::size_t>(s)] = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(L)));
        }
      }
      rot[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)] = std::move(amounts);
    }
  }

  int n = 0;
  std::vector<int> block_start(static_cast<std::size_t>(blocks));
  for (int b = 0; b < blocks; ++b) {
    block_start[static_cast<std::size_t>(b)] = n;
    n += block_size[static_cast<std::size_t>(b)];
  }

  std::vector<std::string> names(static_cast<std::size_t>(n));
  VectorXd weights(n);
  for (int b = 0; b < blocks; ++b) {
    for (int j = 0; j < block_size[static_cast<std::size_t>(b)]; ++j) {
      const int x = block_start[static_cast<std::size_t>(b)] + j;
      names[static_cast<std::size_t>(x)] = "b" + std::to_string(b) + "p" + std::to_string(j);
      weights[x] = block_mass[static_cast<std::size_t>(b)] / (total_mass * block_size[static_cast<std::size_t>(b)]);
    }
  }

  std::vector<std::vector<Permutation>> actions(static_cast<std::size_t>(opt.d));
  for (int i = 0; i < opt.d; ++i) {
    for (int s = 0; s < num_gens; ++s) {
      Permutation perm(static_cast<std::size_t>(n));
      for (int b = 0; b < blocks; ++b) {
        const int L = block_size[static_cast<std::size_t>(b)];
        const int amount = rot[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)][static_cast<std::size_t>(s)];
        for (int j = 0; j < L; ++j) {
          perm[static_cast<std::size_t>(block_start[static_cast<std::size_t>(b)] + j)] =
              block_start[static_cast<std::size_t>(b)] + (j + amount) % L;
        }
      }
      actions[static_cast<std::size_t>(i)].push_back(std::move(perm));
    }
  }
  return FiniteSystem(std::move(names), std::move(weights), group, std::move(actions));
}

FiniteSystem random_system(Rng& rng, int d) {
  const auto catalog = finite_group_catalog();
  const GroupModel& group = catalog[rng.uniform_int(catalog.size())];
  RandomSystemOptions opt;
  opt.d = d;
  return random_system(rng, group, opt);
}

Observable random_observable(Rng& rng, int n, const std::string& kind, const std::string& name) {
  VectorXd values(n);
  if (kind == "signed") {
    for (int i = 0; i < n; ++i) values[i] = 2.0 * rng.uniform_real() - 1.0;
  } else if (kind == "nonneg") {
    for (int i = 0; i < n; ++i) values[i] = rng.uniform_real();
  } else if (kind == "pm1") {
    for (int i = 0; i < n; ++i) values[i] = rng.bernoulli(0.5) ? 1.0 : -1.0;
  } else {
    throw ValidationError("unknown observable kind '" + kind + "'");
  }
  return Observable(std::move(values), name);
}

}  // namespace ergo
