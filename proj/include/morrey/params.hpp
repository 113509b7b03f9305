#pragma once

#include "morrey/grid.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace morrey {

// Morrey exponent pair (p, lambda), with an optional output pair (q, mu)
// for the two-index statements.
struct MorreyParams {
  double p = 1.0;
  double lambda = 0.0;
  std::optional<double> q;
  std::optional<double> mu;

  void validate(int dim) const {
    if (!(p >= 1.0) || !std::isfinite(p))
      throw std::invalid_argument("MorreyParams: need 1 <= p < inf");
    if (!(lambda >= 0.0) || !(lambda <= static_cast<double>(dim)))
      throw std::invalid_argument("MorreyParams: need 0 <= lambda <= n");
    if (q && (!(*q > 1.0) || !std::isfinite(*q)))
      throw std::invalid_argument("MorreyParams: need 1 < q < inf");
    if (mu && (!(*mu >= 0.0) || !(*mu < static_cast<double>(dim))))
      throw std::invalid_argument("MorreyParams: need 0 <= mu < n");
  }
};

// Finite geometric radius set r_k = r_min * ratio^k standing in for the
// continuum sup over r > 0. Replacing the sup costs at most a factor
// ratio^n on ball averages, which the checks carry as explicit slack.
struct RadiusLadder {
  double r_min = 0.0;
  double ratio = 0.0;
  int count = 0;

  void validate() const {
    if (!(r_min > 0) || !std::isfinite(r_min))
      throw std::invalid_argument("RadiusLadder: r_min must be positive");
    if (!(ratio > 1.0) || !std::isfinite(ratio))
      throw std::invalid_argument("RadiusLadder: ratio must exceed 1");
    if (count < 1) throw std::invalid_argument("RadiusLadder: count must be >= 1");
  }

  std::vector<double> radii() const {
    validate();
    std::vector<double> r(count);
    for (int k = 0; k < count; ++k) r[k] = r_min * std::pow(ratio, k);
    return r;
  }

  double top() const { return r_min * std::pow(ratio, count - 1); }
};

inline double default_ladder_ratio() { return std::pow(2.0, 0.25); }

// Ladder from r_min (default: grid spacing) up to at least `min_top`
// (default: the domain diameter, as norm estimation requires).
inline RadiusLadder cover_ladder(const GridSpec& spec, double r_min = 0.0,
                                 double ratio = 0.0, double min_top = 0.0) {
  if (r_min <= 0) r_min = spec.spacing();
  if (ratio <= 0) ratio = default_ladder_ratio();
  if (min_top <= 0) min_top = spec.diameter();
  int count = 1;
  double r = r_min;
  while (r < min_top) {
    r = r_min * std::pow(ratio, count);
    ++count;
  }
  RadiusLadder ladder{r_min, ratio, count};
  ladder.validate();
  return ladder;
}

}  // namespace morrey
