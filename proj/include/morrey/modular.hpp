#pragma once

#include "morrey/ball.hpp"
#include "morrey/grid.hpp"
#include "morrey/params.hpp"

#include <filesystem>
#include <vector>

namespace morrey {

// Morrey modular at one radius: r^{-lambda} * integral of |f|^p over B(x, r),
// as a field over cell centers x.
GridFunction modular_field(const GridFunction& f, const MorreyParams& mp, double r,
                           const ConvPolicy& policy = {});

// Per-radius sup over grid centers of the modular, plus the analytic tail.
// Once a ball contains the whole (zero-extended) support the modular is
// exactly total_p_mass * r^{-lambda}, so the tail rule is exact for radii
// beyond the grid diameter.
struct ModularProfile {
  MorreyParams params;
  std::vector<double> radii;
  std::vector<double> sup_values;
  double total_p_mass = 0.0;
  double tail_start = 0.0;  // max(ladder top, grid diameter)

  double tail_value(double r) const;
  double max_value() const;  // max over ladder values and the tail supremum
};

ModularProfile modular_profile(const GridFunction& f, const MorreyParams& mp,
                               const RadiusLadder& ladder, const ConvPolicy& policy = {});

// Per-center modular values for every ladder radius, radii-major layout
// (radius k, cell i) -> values[k * cells + i]. Shares one prefix table
// across radii.
struct ModularFieldSet {
  MorreyParams params;
  std::vector<double> radii;
  Index cells = 0;
  Array values;
  double total_p_mass = 0.0;

  double at(std::size_t k, Index i) const { return values[static_cast<Index>(k) * cells + i]; }
};

ModularFieldSet modular_field_set(const GridFunction& f, const MorreyParams& mp,
                                  const RadiusLadder& ladder);

// Morrey norm: p-th root of the sup of the modular over the ladder and the
// analytic tail. Requires the ladder to reach the domain diameter.
double morrey_norm(const GridFunction& f, const MorreyParams& mp, const RadiusLadder& ladder,
                   const ConvPolicy& policy = {});

// A_N = sup over centers x of the |f|^p mass inside B(x, ball_radius)
// restricted to |y| >= N. Exactly nonincreasing in N.
struct VStarSequence {
  double p = 1.0;
  double ball_radius = 1.0;
  std::vector<double> a_values;  // index N-1 holds A_N, N = 1..N_max

  double max_value() const;
};

VStarSequence vstar_sequence(const GridFunction& f, double p, int n_max,
                             double ball_radius = 1.0);

void write_profile_csv(const ModularProfile& profile, const std::filesystem::path& path);
void write_vstar_csv(const VStarSequence& seq, const std::filesystem::path& path);

}  // namespace morrey
