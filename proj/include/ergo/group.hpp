#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ergo/types.hpp"

namespace ergo {

// A group element in canonical normal form, as a short integer vector:
//   finite family:  {index into the Cayley table}
//   Zm family:      {n_1, ..., n_m}
//   heisenberg:     {a, b, c} = matrix coordinates of [[1,a,c],[0,1,b],[0,0,1]]
// Equality of normal forms is element equality, so hashing is exact.
using Element = std::vector<std::int64_t>;

struct ElementHash {
  std::size_t operator()(const Element& e) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ull ^ e.size();
    for (std::int64_t v : e) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

enum class Sidedness { left, right, two_sided };

const char* to_string(Sidedness s);

// One power-of-a-generator factor of a normal-form word.
struct WordFactor {
  int generator;
  std::int64_t exponent;
};

// A countable amenable group presented computationally: group operations on
// normal forms, a distinguished generating set, and an explicit Folner
// family N -> Phi_N.  Built-in families:
//   * any finite group, constant family Phi_N = G (from a Cayley table);
//   * Z^m with boxes prod_i [o_i(N), o_i(N)+N), o_i(N) = base_i + slope_i*N;
//   * the discrete Heisenberg group with boxes
//       { x^a y^b z^c : |a|,|b| <= N, |c| <= N^2 }.
// Instances are immutable after construction and safe to share across threads.
class GroupModel {
 public:
  enum class Family { finite, zm, heisenberg };

  static GroupModel finite_from_table(std::vector<std::vector<int>> table,
                                      std::vector<int> generators = {},
                                      std::vector<std::string> names = {});
  static GroupModel cyclic(int n);
  static GroupModel zm(int m);
  // Shifted-interval variant of the Z^m boxes; exercises independence of the
  // limit from the Folner sequence.  The group operations are unchanged.
  static GroupModel zm_shifted(int m, std::vector<std::int64_t> anchor_base,
                               std::vector<std::int64_t> anchor_slope);
  static GroupModel heisenberg();

  Family family() const { return family_; }
  Sidedness sidedness() const { return sidedness_; }
  bool is_finite() const { return family_ == Family::finite; }
  int order() const;  // finite family only

  const Element& identity() const { return identity_; }
  Element multiply(const Element& a, const Element& b) const;
  Element inverse(const Element& a) const;
  Element power(const Element& a, std::int64_t e) const;

  const std::vector<Element>& generators() const { return generators_; }
  const std::vector<Element>& elements() const;  // finite family only

  // Phi_N.  Deterministic, duplicate-free.  N >= 1.
  std::vector<Element> folner_set(int N) const;
  std::uint64_t folner_size(int N) const;

  // |Phi_N  triangle  g Phi_N| / |Phi_N|  (left), or with Phi_N g (right);
  // two_sided takes the max of both.
  double folner_defect(int N, const Element& g, Sidedness side = Sidedness::left) const;

  // Decomposition of g into generator powers, multiplying left to right.
  std::vector<WordFactor> word(const Element& g) const;

  std::string element_name(const Element& g) const;
  Element element_from_name(const std::string& name) const;

  // Same group operations; possibly different Folner anchors.
  bool same_group(const GroupModel& other) const;

  bool operator==(const GroupModel& other) const;

  const std::vector<std::vector<int>>& cayley_table() const { return table_; }
  int zm_rank() const { return zm_rank_; }
  const std::vector<std::int64_t>& anchor_base() const { return anchor_base_; }
  const std::vector<std::int64_t>& anchor_slope() const { return anchor_slope_; }

 private:
  GroupModel() = default;

  Family family_ = Family::zm;
  Sidedness sidedness_ = Sidedness::two_sided;
  Element identity_;
  std::vector<Element> generators_;

  // finite family
  std::vector<std::vector<int>> table_;
  std::vector<std::string> names_;
  std::vector<Element> elements_;
  std::vector<std::vector<WordFactor>> words_;  // per element index
  std::vector<int> inverse_table_;

  // Zm family
  int zm_rank_ = 0;
  std::vector<std::int64_t> anchor_base_;
  std::vector<std::int64_t> anchor_slope_;
};

// |A triangle B| / |A| for explicit element sets.
double symmetric_difference_ratio(const std::vector<Element>& a, const std::vector<Element>& b);

// The product group G^(1) x ... x G^(d) with the product Folner family
// F_N = Phi^(1)_N x ... x Phi^(d)_N.
class ProductGroupModel {
 public:
  explicit ProductGroupModel(std::vector<GroupModel> factors);

  int dims() const { return static_cast<int>(factors_.size()); }
  const GroupModel& factor(int i) const { return factors_[static_cast<std::size_t>(i)]; }
  const std::vector<GroupModel>& factors() const { return factors_; }

  std::uint64_t folner_size(int N) const;
  // One Phi^(i)_N per axis; the box itself is their cartesian product.
  std::vector<std::vector<Element>> folner_box(int N) const;

 private:
  std::vector<GroupModel> factors_;
};

}  // namespace ergo
