#include "morrey/detail/windows.hpp"

#include "morrey/parallel.hpp"

#include <cmath>
#include <cstdlib>

namespace morrey::detail {

namespace {

// Largest w >= 0 with h^2 (lead2 + w^2) < r^2, capped; -1 if none.
std::int64_t halfwidth_rem(double h, double r, std::int64_t lead2, std::int64_t cap) {
  if (!in_ball(h, lead2, r)) return -1;
  double budget = (r / h) * (r / h) - static_cast<double>(lead2);
  std::int64_t w = budget > 0 ? static_cast<std::int64_t>(std::floor(std::sqrt(budget))) + 2 : 2;
  if (w > cap) w = cap;
  while (w > 0 && !in_ball(h, lead2 + w * w, r)) --w;
  return w;
}

}  // namespace

std::int64_t ball_halfwidth(double h, double r, std::int64_t cap) {
  std::int64_t m = halfwidth_rem(h, r, 0, cap);
  return m < 0 ? 0 : m;
}

PrefixTable build_prefix(const GridFunction& g) {
  const Index n = g.spec.cells_per_axis;
  const Index rows = g.spec.cell_count() / n;
  PrefixTable t{rows, n, Array::Zero(rows * (n + 1))};
  const double* v = g.values.data();
  double* p = t.p.data();
  parallel_for(rows, [&](Index b, Index e) {
    for (Index r = b; r < e; ++r) {
      double acc = 0.0;
      double* pr = p + r * (n + 1);
      const double* vr = v + r * n;
      pr[0] = 0.0;
      for (Index k = 0; k < n; ++k) {
        acc += vr[k];
        pr[k + 1] = acc;
      }
    }
  });
  return t;
}

double full_sum(const PrefixTable& t) {
  double acc = 0.0;
  for (Index r = 0; r < t.rows; ++r) acc += t.at(r, t.n) - t.at(r, 0);
  return acc;
}

BallShape make_ball_shape(const GridSpec& spec, double r) {
  const double h = spec.spacing();
  const Index n = spec.cells_per_axis;
  BallShape shape;
  shape.radius = r;
  shape.dim = spec.dim;
  const std::int64_t cap = n - 1;  // larger offsets clip to the same windows
  // The ball holds every cell from every center iff the worst-case corner
  // to corner offset is still inside.
  std::int64_t worst = static_cast<std::int64_t>(spec.dim) * (n - 1) * (n - 1);
  shape.covers_domain = in_ball(h, worst, r);
  if (spec.dim == 1) {
    shape.halfwidth0 = ball_halfwidth(h, r, cap);
  } else if (spec.dim == 2) {
    std::int64_t ma = ball_halfwidth(h, r, cap);
    shape.rows2.reserve(2 * ma + 1);
    for (std::int64_t a = -ma; a <= ma; ++a) {
      std::int64_t w = halfwidth_rem(h, r, a * a, cap);
      if (w >= 0) shape.rows2.emplace_back(a, w);
    }
  } else {
    std::int64_t ma = ball_halfwidth(h, r, cap);
    for (std::int64_t a = -ma; a <= ma; ++a) {
      for (std::int64_t b = -ma; b <= ma; ++b) {
        std::int64_t w = halfwidth_rem(h, r, a * a + b * b, cap);
        if (w >= 0) shape.rows3.push_back({a, b, w});
      }
    }
  }
  return shape;
}

double window_sum(const GridSpec& spec, const PrefixTable& t, const BallShape& shape,
                  Index cell) {
  const Index n = spec.cells_per_axis;
  Index multi[3];
  spec.decode(cell, multi);
  auto interval = [&](Index row, Index c, std::int64_t w) -> double {
    Index lo = c - w < 0 ? 0 : c - w;
    Index hi = c + w >= n ? n - 1 : c + w;
    return t.at(row, hi + 1) - t.at(row, lo);
  };
  if (spec.dim == 1) return interval(0, multi[0], shape.halfwidth0);
  double acc = 0.0;
  if (spec.dim == 2) {
    for (const auto& [a, w] : shape.rows2) {
      Index r0 = multi[0] + a;
      if (r0 < 0 || r0 >= n) continue;
      acc += interval(r0, multi[1], w);
    }
  } else {
    for (const auto& [a, b, w] : shape.rows3) {
      Index r0 = multi[0] + a;
      Index r1 = multi[1] + b;
      if (r0 < 0 || r0 >= n || r1 < 0 || r1 >= n) continue;
      acc += interval(r0 * n + r1, multi[2], w);
    }
  }
  return acc;
}

std::int64_t window_count(const GridSpec& spec, const BallShape& shape, Index cell) {
  const Index n = spec.cells_per_axis;
  Index multi[3];
  spec.decode(cell, multi);
  auto len = [&](Index c, std::int64_t w) -> std::int64_t {
    Index lo = c - w < 0 ? 0 : c - w;
    Index hi = c + w >= n ? n - 1 : c + w;
    return hi - lo + 1;
  };
  if (spec.dim == 1) return len(multi[0], shape.halfwidth0);
  std::int64_t acc = 0;
  if (spec.dim == 2) {
    for (const auto& [a, w] : shape.rows2) {
      Index r0 = multi[0] + a;
      if (r0 < 0 || r0 >= n) continue;
      acc += len(multi[1], w);
    }
  } else {
    for (const auto& [a, b, w] : shape.rows3) {
      Index r0 = multi[0] + a;
      Index r1 = multi[1] + b;
      if (r0 < 0 || r0 >= n || r1 < 0 || r1 >= n) continue;
      acc += len(multi[2], w);
    }
  }
  return acc;
}

}  // namespace morrey::detail
