#pragma once

#include <cstdint>

#include "morpho/tree.hpp"

namespace morpho::detail {

struct Offset {
  int dx;
  int dy;
};

// 4-neighbours first so that callers can take the prefix for C4.
inline constexpr Offset kNeighbours[8] = {{1, 0},  {0, 1},  {-1, 0}, {0, -1},
                                          {1, 1},  {-1, 1}, {-1, -1}, {1, -1}};

inline constexpr int neighbour_count(Connectivity c) { return c == Connectivity::C4 ? 4 : 8; }

/// Calls f(q) for every in-bounds neighbour q of pixel p on a width x height grid.
template <class F>
inline void for_each_neighbour(int width, int height, std::int32_t p, int count, F&& f) {
  const int x = p % width;
  const int y = p / width;
  for (int k = 0; k < count; ++k) {
    const int nx = x + kNeighbours[k].dx;
    const int ny = y + kNeighbours[k].dy;
    if (nx < 0 || ny < 0 || nx >= width || ny >= height) continue;
    f(static_cast<std::int32_t>(ny * width + nx));
  }
}

/// Path-halving find on a parent array.
inline std::int32_t find_root(std::int32_t* parent, std::int32_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace morpho::detail
