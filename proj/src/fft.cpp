#include "morrey/detail/fft.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <stdexcept>

namespace morrey::detail {

namespace {

using Complex = std::complex<double>;
using CVec = std::vector<Complex>;

Index next_pow2(Index n) {
  Index p = 1;
  while (p < n) p *= 2;
  return p;
}

// In-place FFT along every axis of a dense row-major dim-dimensional array
// with equal extent per axis.
void fft_nd(CVec& data, int dim, Index extent, bool inverse) {
  Eigen::FFT<double> fft;
  CVec line(extent), out(extent);
  Index total = 1;
  for (int k = 0; k < dim; ++k) total *= extent;
  for (int axis = 0; axis < dim; ++axis) {
    Index stride = 1;
    for (int k = axis + 1; k < dim; ++k) stride *= extent;
    Index block = stride * extent;
    for (Index base = 0; base < total; base += block) {
      for (Index off = 0; off < stride; ++off) {
        for (Index j = 0; j < extent; ++j) line[j] = data[base + off + j * stride];
        if (inverse)
          fft.inv(out, line);
        else
          fft.fwd(out, line);
        for (Index j = 0; j < extent; ++j) data[base + off + j * stride] = out[j];
      }
    }
  }
}

}  // namespace

Array convolve_offsets(const GridSpec& spec, const Array& f,
                       const std::function<double(std::int64_t)>& kernel,
                       std::int64_t max_offset) {
  const Index n = spec.cells_per_axis;
  max_offset = std::min<std::int64_t>(max_offset, n - 1);
  const Index m = next_pow2(n + max_offset);
  const int dim = spec.dim;
  Index total = 1;
  for (int k = 0; k < dim; ++k) total *= m;

  CVec fdata(total, Complex(0, 0));
  CVec kdata(total, Complex(0, 0));

  // Scatter f into the padded array.
  Index multi[3];
  for (Index i = 0; i < f.size(); ++i) {
    spec.decode(i, multi);
    Index p = 0;
    for (int k = 0; k < dim; ++k) p = p * m + multi[k];
    fdata[p] = Complex(f[i], 0);
  }

  // Kernel with negative offsets wrapped around.
  std::vector<std::int64_t> off(dim, -max_offset);
  while (true) {
    std::int64_t k2 = 0;
    for (int k = 0; k < dim; ++k) k2 += off[k] * off[k];
    Index p = 0;
    for (int k = 0; k < dim; ++k) {
      Index c = static_cast<Index>(off[k] < 0 ? off[k] + m : off[k]);
      p = p * m + c;
    }
    kdata[p] = Complex(kernel(k2), 0);
    int axis = dim - 1;
    while (axis >= 0 && ++off[axis] > max_offset) {
      off[axis] = -max_offset;
      --axis;
    }
    if (axis < 0) break;
  }

  fft_nd(fdata, dim, m, false);
  fft_nd(kdata, dim, m, false);
  for (Index i = 0; i < total; ++i) fdata[i] *= kdata[i];
  fft_nd(fdata, dim, m, true);

  // Correlation out(x) = sum_d kernel(d) f(x + d) equals the convolution with
  // the mirrored kernel; radial kernels are symmetric, so gather directly.
  Array out = Array::Zero(f.size());
  for (Index i = 0; i < f.size(); ++i) {
    spec.decode(i, multi);
    Index p = 0;
    for (int k = 0; k < dim; ++k) p = p * m + multi[k];
    out[i] = fdata[p].real();
  }
  return out;
}

}  // namespace morrey::detail
