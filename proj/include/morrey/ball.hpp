#pragma once

#include "morrey/grid.hpp"

#include <cstdint>

namespace morrey {

enum class ConvMode { Auto, Direct, Fft };

// Direct sliding-window sums below the threshold, DFT convolution above.
// Both paths agree with the direct-summation oracle to <= 1e-10 relative.
struct ConvPolicy {
  ConvMode mode = ConvMode::Auto;
  Index fft_threshold = Index(1) << 15;

  bool use_fft(Index cells) const {
    if (mode == ConvMode::Direct) return false;
    if (mode == ConvMode::Fft) return true;
    return cells > fft_threshold;
  }
};

// out(x) = h^n * sum over cells y with center in B(x, r) of g(y); cells
// outside the domain contribute zero. g usually plays the role of |f|^p.
GridFunction ball_mass_field(const GridFunction& g, double r, const ConvPolicy& policy = {});

}  // namespace morrey
