#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

namespace ergo {

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      parent_[static_cast<std::size_t>(x)] =
          parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
      x = parent_[static_cast<std::size_t>(x)];
    }
    return x;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }

  // block ids in {0..count-1}, numbered by first appearance
  std::vector<int> block_ids() {
    std::vector<int> root_to_id(parent_.size(), -1);
    std::vector<int> ids(parent_.size());
    int next = 0;
    for (std::size_t x = 0; x < parent_.size(); ++x) {
      int r = find(static_cast<int>(x));
      if (root_to_id[static_cast<std::size_t>(r)] < 0) root_to_id[static_cast<std::size_t>(r)] = next++;
      ids[x] = root_to_id[static_cast<std::size_t>(r)];
    }
    return ids;
  }

 private:
  std::vector<int> parent_;
};

}  // namespace ergo
