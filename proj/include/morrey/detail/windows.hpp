#pragma once

#include "morrey/grid.hpp"

#include <cstdint>
#include <vector>

namespace morrey::detail {

// Single source of truth for ball membership. A cell belongs to B(x, r) iff
// its center does; center distances are h * sqrt(k2) with k2 the integer
// squared offset, so the open-ball test is h^2 * k2 < r^2 evaluated in one
// canonical way everywhere (fast paths and oracle alike).
inline bool in_ball(double h, std::int64_t k2, double r) {
  return h * h * static_cast<double>(k2) < r * r;
}

// Largest m >= 0 with h^2 m^2 < r^2, capped at `cap`.
std::int64_t ball_halfwidth(double h, double r, std::int64_t cap);

// Prefix sums along the contiguous (last) axis, one row per leading
// multi-index: p[row][k] = sum of the first k entries of that row.
// Window sums of nonnegative data obtained from these tables are exactly
// monotone under set inclusion, which several invariants rely on.
struct PrefixTable {
  Index rows = 0;
  Index n = 0;
  Array p;  // rows * (n + 1)

  double at(Index row, Index k) const { return p[row * (n + 1) + k]; }
};

PrefixTable build_prefix(const GridFunction& g);

// Sum over the whole grid with the same row structure (and therefore the
// same rounding) as a domain-covering window sum.
double full_sum(const PrefixTable& t);

// Rasterized ball: for each in-range leading offset, the half-width of the
// last-axis interval. Entries are ordered by leading offset ascending, the
// same order every window iteration uses.
struct BallShape {
  double radius = 0;
  int dim = 1;
  std::int64_t halfwidth0 = 0;                      // dim == 1
  std::vector<std::pair<std::int64_t, std::int64_t>> rows2;  // dim == 2: (a, halfwidth)
  std::vector<std::array<std::int64_t, 3>> rows3;   // dim == 3: (a, b, halfwidth)
  bool covers_domain = false;  // window == whole grid from every center
};

BallShape make_ball_shape(const GridSpec& spec, double r);

double window_sum(const GridSpec& spec, const PrefixTable& t, const BallShape& shape,
                  Index cell);
std::int64_t window_count(const GridSpec& spec, const BallShape& shape, Index cell);

// Visits every cell of B(center, shape.radius) clipped to the domain, in the
// fixed (leading offset asc, last index asc) order.
template <typename F>
void for_each_ball_cell(const GridSpec& spec, const BallShape& shape, Index cell, F&& f) {
  const Index n = spec.cells_per_axis;
  Index multi[3];
  spec.decode(cell, multi);
  auto clip = [n](Index c, std::int64_t w, Index& lo, Index& hi) {
    lo = c - w < 0 ? 0 : c - w;
    hi = c + w >= n ? n - 1 : c + w;
  };
  if (spec.dim == 1) {
    Index lo, hi;
    clip(multi[0], shape.halfwidth0, lo, hi);
    for (Index j = lo; j <= hi; ++j) f(j);
  } else if (spec.dim == 2) {
    for (const auto& [a, w] : shape.rows2) {
      Index r0 = multi[0] + a;
      if (r0 < 0 || r0 >= n) continue;
      Index lo, hi;
      clip(multi[1], w, lo, hi);
      for (Index j = lo; j <= hi; ++j) f(r0 * n + j);
    }
  } else {
    for (const auto& [a, b, w] : shape.rows3) {
      Index r0 = multi[0] + a;
      Index r1 = multi[1] + b;
      if (r0 < 0 || r0 >= n || r1 < 0 || r1 >= n) continue;
      Index lo, hi;
      clip(multi[2], w, lo, hi);
      Index base = (r0 * n + r1) * n;
      for (Index j = lo; j <= hi; ++j) f(base + j);
    }
  }
}

}  // namespace morrey::detail
