#include "morrey/ball.hpp"

#include "morrey/detail/fft.hpp"
#include "morrey/detail/windows.hpp"
#include "morrey/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace morrey {

GridFunction ball_mass_field(const GridFunction& g, double r, const ConvPolicy& policy) {
  if (!(r > 0) || !std::isfinite(r))
    throw std::invalid_argument("ball_mass_field: radius must be positive");
  const GridSpec& spec = g.spec;
  const double h = spec.spacing();
  const double hn = std::pow(h, spec.dim);
  GridFunction out{spec, Array::Zero(spec.cell_count())};

  if (policy.use_fft(spec.cell_count())) {
    std::int64_t m = detail::ball_halfwidth(h, r, spec.cells_per_axis - 1);
    Array conv = detail::convolve_offsets(
        spec, g.values,
        [&](std::int64_t k2) { return detail::in_ball(h, k2, r) ? 1.0 : 0.0; }, m);
    out.values = hn * conv;
    return out;
  }

  detail::PrefixTable prefix = detail::build_prefix(g);
  detail::BallShape shape = detail::make_ball_shape(spec, r);
  double* o = out.values.data();
  if (shape.covers_domain) {
    double total = detail::full_sum(prefix) * hn;
    out.values.setConstant(total);
    return out;
  }
  parallel_for(spec.cell_count(), [&](Index b, Index e) {
    for (Index i = b; i < e; ++i) o[i] = hn * detail::window_sum(spec, prefix, shape, i);
  });
  return out;
}

}  // namespace morrey
