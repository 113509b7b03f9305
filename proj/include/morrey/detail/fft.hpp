#pragma once

#include "morrey/grid.hpp"

#include <complex>
#include <functional>
#include <vector>

namespace morrey::detail {

// Circular convolution of f with a radial offset kernel on a zero-padded
// grid large enough that no wraparound reaches the physical cells:
//   out(x) = sum_{|offset_k| <= max_offset} kernel(k2) * f(x + offset),
// where k2 is the integer squared norm of the offset. kernel(0) supplies the
// self-cell weight. Padding is the next power of two >= N + max_offset.
Array convolve_offsets(const GridSpec& spec, const Array& f,
                       const std::function<double(std::int64_t)>& kernel,
                       std::int64_t max_offset);

}  // namespace morrey::detail
