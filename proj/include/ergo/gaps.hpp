#pragma once

// Gap statistics over d-dimensional boolean grids (d <= 3): the side of the
// largest unmarked cube, and a histogram of unmarked run lengths along axes.

#include <cstdint>
#include <map>
#include <vector>

namespace ergo {

// dims: extent per axis, row-major layout with the last axis fastest.
// mask[i] true marks a cell as occupied; returns the side of the largest
// axis-aligned cube of unoccupied cells (0 when every cell is occupied).
int largest_empty_cube_side(const std::vector<char>& mask, const std::vector<std::int64_t>& dims);

// lengths of maximal unoccupied runs along every grid line of every axis
std::map<int, std::int64_t> empty_run_histogram(const std::vector<char>& mask,
                                                const std::vector<std::int64_t>& dims);

}  // namespace ergo
