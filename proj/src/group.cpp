#include "ergo/group.hpp"

#include <algorithm>
#include <cstdlib>
#include <queue>
#include <unordered_map>
#include <unordered_set>

namespace ergo {

namespace {

constexpr std::uint64_t kMaxEnumeration = 20'000'000;

std::vector<int> greedy_generating_set(const std::vector<std::vector<int>>& table) {
  const int n = static_cast<int>(table.size());
  std::vector<int> gens;
  std::vector<char> reached(static_cast<std::size_t>(n), 0);
  reached[0] = 1;
  int reached_count = 1;
  for (int g = 1; g < n && reached_count < n; ++g) {
    if (reached[static_cast<std::size_t>(g)]) continue;
    gens.push_back(g);
    // close under right multiplication by the chosen generators
    std::queue<int> todo;
    for (int x = 0; x < n; ++x)
      if (reached[static_cast<std::size_t>(x)]) todo.push(x);
    while (!todo.empty()) {
      int x = todo.front();
      todo.pop();
      for (int h : gens) {
        int y = table[static_cast<std::size_t>(x)][static_cast<std::size_t>(h)];
        if (!reached[static_cast<std::size_t>(y)]) {
          reached[static_cast<std::size_t>(y)] = 1;
          ++reached_count;
          todo.push(y);
        }
      }
    }
  }
  return gens;
}

}  // namespace

const char* to_string(Sidedness s) {
  switch (s) {
    case Sidedness::left: return "left";
    case Sidedness::right: return "right";
    case Sidedness::two_sided: return "two_sided";
  }
  return "?";
}

GroupModel GroupModel::finite_from_table(std::vector<std::vector<int>> table,
                                         std::vector<int> generators,
                                         std::vector<std::string> names) {
  const int n = static_cast<int>(table.size());
  if (n == 0) throw ValidationError("finite group: empty Cayley table");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n)
      throw ValidationError("finite group: Cayley table is not square");
    for (int v : row) {
      if (v < 0 || v >= n) throw ValidationError("finite group: Cayley table entry out of range");
    }
  }
  // identity is the row index e with table[e][x] == x for all x
  int id = -1;
  for (int e = 0; e < n; ++e) {
    bool left_id = true, right_id = true;
    for (int x = 0; x < n; ++x) {
      if (table[static_cast<std::size_t>(e)][static_cast<std::size_t>(x)] != x) left_id = false;
      if (table[static_cast<std::size_t>(x)][static_cast<std::size_t>(e)] != x) right_id = false;
    }
    if (left_id && right_id) {
      id = e;
      break;
    }
  }
  if (id != 0) {
    if (id < 0) throw ValidationError("finite group: Cayley table has no identity element");
    throw ValidationError("finite group: identity must be element 0 of the Cayley table");
  }
  // associativity and inverses, by full enumeration (tables are desk scale)
  if (static_cast<std::uint64_t>(n) * n * n <= 1'000'000) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          int ab = table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
          int bc = table[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)];
          if (table[static_cast<std::size_t>(ab)][static_cast<std::size_t>(c)] !=
              table[static_cast<std::size_t>(a)][static_cast<std::size_t>(bc)])
            throw ValidationError("finite group: Cayley table is not associative");
        }
  }
  std::vector<int> inv(static_cast<std::size_t>(n), -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] == 0 &&
          table[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] == 0) {
        inv[static_cast<std::size_t>(a)] = b;
        break;
      }
    }
    if (inv[static_cast<std::size_t>(a)] < 0)
      throw ValidationError("finite group: element without inverse in Cayley table");
  }

  if (generators.empty()) generators = greedy_generating_set(table);
  if (generators.empty() && n > 1)
    throw ValidationError("finite group: no generating set found");
  for (int g : generators)
    if (g <= 0 || g >= n) throw ValidationError("finite group: generator index out of range");

  GroupModel m;
  m.family_ = Family::finite;
  m.sidedness_ = Sidedness::two_sided;
  m.table_ = std::move(table);
  m.inverse_table_ = std::move(inv);
  m.identity_ = Element{0};
  m.names_ = std::move(names);
  if (!m.names_.empty() && static_cast<int>(m.names_.size()) != n)
    throw ValidationError("finite group: names list does not match table size");
  m.elements_.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) m.elements_.push_back(Element{i});
  m.generators_.reserve(generators.size());
  for (int g : generators) m.generators_.push_back(Element{g});

  // BFS words over the declared generators; verifies that they generate
  m.words_.assign(static_cast<std::size_t>(n), {});
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  seen[0] = 1;
  std::queue<int> todo;
  todo.push(0);
  while (!todo.empty()) {
    int x = todo.front();
    todo.pop();
    for (std::size_t gi = 0; gi < generators.size(); ++gi) {
      int y = m.table_[static_cast<std::size_t>(x)][static_cast<std::size_t>(generators[gi])];
      if (!seen[static_cast<std::size_t>(y)]) {
        seen[static_cast<std::size_t>(y)] = 1;
        m.words_[static_cast<std::size_t>(y)] = m.words_[static_cast<std::size_t>(x)];
        m.words_[static_cast<std::size_t>(y)].push_back({static_cast<int>(gi), 1});
        todo.push(y);
      }
    }
  }
  for (int x = 0; x < n; ++x)
    if (!seen[static_cast<std::size_t>(x)])
      throw ValidationError("finite group: declared generators do not generate the group");
  return m;
}

GroupModel GroupModel::cyclic(int n) {
  if (n < 1) throw ValidationError("cyclic group: order must be >= 1");
  std::vector<std::vector<int>> table(static_cast<std::size_t>(n),
                                      std::vector<int>(static_cast<std::size_t>(n)));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = (a + b) % n;
  std::vector<int> gens;
  if (n > 1) gens.push_back(1);
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) names.push_back(std::to_string(a));
  return finite_from_table(std::move(table), std::move(gens), std::move(names));
}

GroupModel GroupModel::zm(int m) { return zm_shifted(m, {}, {}); }

GroupModel GroupModel::zm_shifted(int m, std::vector<std::int64_t> anchor_base,
                                  std::vector<std::int64_t> anchor_slope) {
  if (m < 1) throw ValidationError("Zm group: rank must be >= 1");
  if (anchor_base.empty()) anchor_base.assign(static_cast<std::size_t>(m), 0);
  if (anchor_slope.empty()) anchor_slope.assign(static_cast<std::size_t>(m), 0);
  if (static_cast<int>(anchor_base.size()) != m || static_cast<int>(anchor_slope.size()) != m)
    throw ValidationError("Zm group: anchor vectors must have one entry per axis");
  GroupModel g;
  g.family_ = Family::zm;
  g.sidedness_ = Sidedness::two_sided;
  g.zm_rank_ = m;
  g.anchor_base_ = std::move(anchor_base);
  g.anchor_slope_ = std::move(anchor_slope);
  g.identity_ = Element(static_cast<std::size_t>(m), 0);
  for (int i = 0; i < m; ++i) {
    Element e(static_cast<std::size_t>(m), 0);
    e[static_cast<std::size_t>(i)] = 1;
    g.generators_.push_back(std::move(e));
  }
  return g;
}

GroupModel GroupModel::heisenberg() {
  GroupModel g;
  g.family_ = Family::heisenberg;
  g.sidedness_ = Sidedness::two_sided;
  g.identity_ = Element{0, 0, 0};
  g.generators_ = {Element{1, 0, 0}, Element{0, 1, 0}, Element{0, 0, 1}};
  return g;
}

int GroupModel::order() const {
  if (family_ != Family::finite) throw ValidationError("order(): group is not finite");
  return static_cast<int>(table_.size());
}

Element GroupModel::multiply(const Element& a, const Element& b) const {
  switch (family_) {
    case Family::finite:
      return Element{table_[static_cast<std::size_t>(a[0])][static_cast<std::size_t>(b[0])]};
    case Family::zm: {
      Element r(a);
      for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
      return r;
    }
    case Family::heisenberg:
      return Element{a[0] + b[0], a[1] + b[1], a[2] + b[2] + a[0] * b[1]};
  }
  return identity_;
}

Element GroupModel::inverse(const Element& a) const {
  switch (family_) {
    case Family::finite:
      return Element{inverse_table_[static_cast<std::size_t>(a[0])]};
    case Family::zm: {
      Element r(a);
      for (auto& v : r) v = -v;
      return r;
    }
    case Family::heisenberg:
      return Element{-a[0], -a[1], a[0] * a[1] - a[2]};
  }
  return identity_;
}

Element GroupModel::power(const Element& a, std::int64_t e) const {
  Element base = e >= 0 ? a : inverse(a);
  std::int64_t k = e >= 0 ? e : -e;
  Element acc = identity_;
  while (k > 0) {
    if (k & 1) acc = multiply(acc, base);
    base = multiply(base, base);
    k >>= 1;
  }
  return acc;
}

const std::vector<Element>& GroupModel::elements() const {
  if (family_ != Family::finite) throw ValidationError("elements(): group is not finite");
  return elements_;
}

std::uint64_t GroupModel::folner_size(int N) const {
  if (N < 1) throw EnumerationError("folner_set: index N must be >= 1");
  switch (family_) {
    case Family::finite:
      return static_cast<std::uint64_t>(table_.size());
    case Family::zm: {
      std::uint64_t s = 1;
      for (int i = 0; i < zm_rank_; ++i) {
        s *= static_cast<std::uint64_t>(N);
        if (s > kMaxEnumeration) throw EnumerationError("folner_set: enumeration bound exceeded");
      }
      return s;
    }
    case Family::heisenberg: {
      std::uint64_t side = 2 * static_cast<std::uint64_t>(N) + 1;
      std::uint64_t central = 2 * static_cast<std::uint64_t>(N) * static_cast<std::uint64_t>(N) + 1;
      std::uint64_t s = side * side * central;
      if (s > kMaxEnumeration) throw EnumerationError("folner_set: enumeration bound exceeded");
      return s;
    }
  }
  return 0;
}

std::vector<Element> GroupModel::folner_set(int N) const {
  const std::uint64_t size = folner_size(N);
  std::vector<Element> out;
  out.reserve(static_cast<std::size_t>(size));
  switch (family_) {
    case Family::finite:
      return elements_;
    case Family::zm: {
      std::vector<std::int64_t> lo(static_cast<std::size_t>(zm_rank_));
      for (int i = 0; i < zm_rank_; ++i)
        lo[static_cast<std::size_t>(i)] =
            anchor_base_[static_cast<std::size_t>(i)] +
            anchor_slope_[static_cast<std::size_t>(i)] * static_cast<std::int64_t>(N);
      Element cur(lo);
      while (true) {
        out.push_back(cur);
        int axis = zm_rank_ - 1;
        while (axis >= 0) {
          std::size_t ai = static_cast<std::size_t>(axis);
          if (++cur[ai] < lo[ai] + N) break;
          cur[ai] = lo[ai];
          --axis;
        }
        if (axis < 0) break;
      }
      return out;
    }
    case Family::heisenberg: {
      const std::int64_t n = N;
      for (std::int64_t a = -n; a <= n; ++a)
        for (std::int64_t b = -n; b <= n; ++b)
          for (std::int64_t c = -n * n; c <= n * n; ++c) out.push_back(Element{a, b, a * b + c});
      return out;
    }
  }
  return out;
}

double GroupModel::folner_defect(int N, const Element& g, Sidedness side) const {
  if (side == Sidedness::two_sided) {
    return std::max(folner_defect(N, g, Sidedness::left), folner_defect(N, g, Sidedness::right));
  }
  const std::vector<Element> phi = folner_set(N);
  std::vector<Element> translated;
  translated.reserve(phi.size());
  for (const Element& h : phi)
    translated.push_back(side == Sidedness::left ? multiply(g, h) : multiply(h, g));
  return symmetric_difference_ratio(phi, translated);
}

std::vector<WordFactor> GroupModel::word(const Element& g) const {
  switch (family_) {
    case Family::finite:
      return words_[static_cast<std::size_t>(g[0])];
    case Family::zm: {
      std::vector<WordFactor> w;
      for (int i = 0; i < zm_rank_; ++i)
        if (g[static_cast<std::size_t>(i)] != 0) w.push_back({i, g[static_cast<std::size_t>(i)]});
      return w;
    }
    case Family::heisenberg: {
      // (A,B,C) = x^A y^B z^(C-AB) in matrix coordinates
      std::vector<WordFactor> w;
      if (g[0] != 0) w.push_back({0, g[0]});
      if (g[1] != 0) w.push_back({1, g[1]});
      const std::int64_t zexp = g[2] - g[0] * g[1];
      if (zexp != 0) w.push_back({2, zexp});
      return w;
    }
  }
  return {};
}

std::string GroupModel::element_name(const Element& g) const {
  if (family_ == Family::finite && !names_.empty())
    return names_[static_cast<std::size_t>(g[0])];
  std::string s = "(";
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(g[i]);
  }
  s += ")";
  return s;
}

Element GroupModel::element_from_name(const std::string& name) const {
  if (family_ == Family::finite && !names_.empty()) {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return Element{static_cast<std::int64_t>(i)};
  }
  // otherwise parse a comma-separated coordinate tuple, with or without parens
  std::string body = name;
  if (!body.empty() && body.front() == '(') body = body.substr(1, body.size() - 2);
  Element e;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    std::size_t comma = body.find(',', pos);
    std::string tok = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!tok.empty()) e.push_back(std::strtoll(tok.c_str(), nullptr, 10));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  const std::size_t want = family_ == Family::finite ? 1u
                           : family_ == Family::zm   ? static_cast<std::size_t>(zm_rank_)
                                                     : 3u;
  if (e.size() != want) throw ValidationError("element_from_name: '" + name + "' does not parse");
  return e;
}

bool GroupModel::same_group(const GroupModel& other) const {
  if (family_ != other.family_) return false;
  switch (family_) {
    case Family::finite:
      return table_ == other.table_;
    case Family::zm:
      return zm_rank_ == other.zm_rank_;
    case Family::heisenberg:
      return true;
  }
  return false;
}

bool GroupModel::operator==(const GroupModel& other) const {
  return same_group(other) && anchor_base_ == other.anchor_base_ &&
         anchor_slope_ == other.anchor_slope_ && generators_ == other.generators_;
}

double symmetric_difference_ratio(const std::vector<Element>& a, const std::vector<Element>& b) {
  if (a.empty()) throw ValidationError("symmetric_difference_ratio: empty reference set");
  std::unordered_set<Element, ElementHash> sa(a.begin(), a.end());
  std::unordered_set<Element, ElementHash> sb(b.begin(), b.end());
  std::size_t sym = 0;
  for (const Element& x : sa)
    if (!sb.count(x)) ++sym;
  for (const Element& x : sb)
    if (!sa.count(x)) ++sym;
  return static_cast<double>(sym) / static_cast<double>(sa.size());
}

ProductGroupModel::ProductGroupModel(std::vector<GroupModel> factors)
    : factors_(std::move(factors)) {
  if (factors_.empty()) throw ValidationError("ProductGroupModel: needs at least one factor");
}

std::uint64_t ProductGroupModel::folner_size(int N) const {
  std::uint64_t s = 1;
  for (const auto& f : factors_) {
    s *= f.folner_size(N);
    if (s > kMaxEnumeration) throw EnumerationError("folner_box: enumeration bound exceeded");
  }
  return s;
}

std::vector<std::vector<Element>> ProductGroupModel::folner_box(int N) const {
  std::vector<std::vector<Element>> box;
  box.reserve(factors_.size());
  for (const auto& f : factors_) box.push_back(f.folner_set(N));
  return box;
}

}  // namespace ergo
