#include "ergo/gaps.hpp"

#include <algorithm>
#include <stdexcept>

namespace ergo {

namespace {

std::int64_t flat_size(const std::vector<std::int64_t>& dims) {
  std::int64_t n = 1;
  for (std::int64_t d : dims) n *= d;
  return n;
}

}  // namespace

int largest_empty_cube_side(const std::vector<char>& mask, const std::vector<std::int64_t>& dims) {
  const int d = static_cast<int>(dims.size());
  if (d < 1 || d > 3) throw std::invalid_argument("gap statistics support 1 to 3 axes");
  if (static_cast<std::int64_t>(mask.size()) != flat_size(dims)) {
    throw std::invalid_argument("mask size does not match the grid");
  }

  if (d == 1) {
    int best = 0;
    int run = 0;
    for (char c : mask) {
      run = c ? 0 : run + 1;
      best = std::max(best, run);
    }
    return best;
  }

  if (d == 2) {
    const std::int64_t rows = dims[0];
    const std::int64_t cols = dims[1];
    std::vector<int> dp(static_cast<std::size_t>(rows * cols), 0);
    int best = 0;
    for (std::int64_t i = 0; i < rows; ++i) {
      for (std::int64_t j = 0; j < cols; ++j) {
        const std::int64_t at = i * cols + j;
        if (mask[static_cast<std::size_t>(at)]) continue;
        int v = 1;
        if (i > 0 && j > 0) {
          v = 1 + std::min({dp[static_cast<std::size_t>(at - cols)],
                            dp[static_cast<std::size_t>(at - 1)],
                            dp[static_cast<std::size_t>(at - cols - 1)]});
        }
        dp[static_cast<std::size_t>(at)] = v;
        best = std::max(best, v);
      }
    }
    return best;
  }

  const std::int64_t n0 = dims[0], n1 = dims[1], n2 = dims[2];
  std::vector<int> dp(static_cast<std::size_t>(n0 * n1 * n2), 0);
  const auto at = [&](std::int64_t i, std::int64_t j, std::int64_t k) {
    return static_cast<std::size_t>((i * n1 + j) * n2 + k);
  };
  int best = 0;
  for (std::int64_t i = 0; i < n0; ++i) {
    for (std::int64_t j = 0; j < n1; ++j) {
      for (std::int64_t k = 0; k < n2; ++k) {
        if (mask[at(i, j, k)]) continue;
        int v = 1;
        if (i > 0 && j > 0 && k > 0) {
          v = 1 + std::min({dp[at(i - 1, j, k)], dp[at(i, j - 1, k)], dp[at(i, j, k - 1)],
                            dp[at(i - 1, j - 1, k)], dp[at(i - 1, j, k - 1)],
                            dp[at(i, j - 1, k - 1)], dp[at(i - 1, j - 1, k - 1)]});
        }
        dp[at(i, j, k)] = v;
        best = std::max(best, v);
      }
    }
  }
  return best;
}

std::map<int, std::int64_t> empty_run_histogram(const std::vector<char>& mask,
                                                const std::vector<std::int64_t>& dims) {
  const int d = static_cast<int>(dims.size());
  if (static_cast<std::int64_t>(mask.size()) != flat_size(dims)) {
    throw std::invalid_argument("mask size does not match the grid");
  }
  std::map<int, std::int64_t> hist;

  // strides for row-major layout
  std::vector<std::int64_t> stride(static_cast<std::size_t>(d), 1);
  for (int i = d - 2; i >= 0; --i) stride[static_cast<std::size_t>(i)] = stride[static_cast<std::size_t>(i + 1)] * dims[static_cast<std::size_t>(i + 1)];

  for (int axis = 0; axis < d; ++axis) {
    // enumerate all lines parallel to this axis
    std::vector<std::int64_t> idx(static_cast<std::size_t>(d), 0);
    for (;;) {
      if (idx[static_cast<std::size_t>(axis)] == 0) {
        std::int64_t base = 0;
        for (int i = 0; i < d; ++i) base += idx[static_cast<std::size_t>(i)] * stride[static_cast<std::size_t>(i)];
        int run = 0;
        for (std::int64_t t = 0; t < dims[static_cast<std::size_t>(axis)]; ++t) {
          if (mask[static_cast<std::size_t>(base + t * stride[static_cast<std::size_t>(axis)])]) {
            if (run > 0) ++hist[run];
            run = 0;
          } else {
            ++run;
          }
        }
        if (run > 0) ++hist[run];
      }
      int i = d - 1;
      while (i >= 0 && ++idx[static_cast<std::size_t>(i)] == dims[static_cast<std::size_t>(i)]) {
        idx[static_cast<std::size_t>(i)] = 0;
        --i;
      }
      if (i < 0) break;
    }
  }
  return hist;
}

}  // namespace ergo
