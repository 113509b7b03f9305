#include "morrey/modular.hpp"

#include "morrey/detail/windows.hpp"
#include "morrey/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace morrey {

GridFunction modular_field(const GridFunction& f, const MorreyParams& mp, double r,
                           const ConvPolicy& policy) {
  mp.validate(f.spec.dim);
  GridFunction mass = ball_mass_field(pointwise_power(f, mp.p), r, policy);
  mass.values *= std::pow(r, -mp.lambda);
  return mass;
}

double ModularProfile::tail_value(double r) const {
  return total_p_mass * std::pow(r, -params.lambda);
}

double ModularProfile::max_value() const {
  double m = tail_value(tail_start);
  for (double v : sup_values) m = std::max(m, v);
  return m;
}

namespace {

// Shared by profile and field-set computations: one prefix table, one shape
// per radius. Radii at or beyond the diameter see the whole grid from every
// center, where the value equals total mass exactly.
struct ProfileEngine {
  const GridFunction& g;  // |f|^p
  detail::PrefixTable prefix;
  double hn;

  explicit ProfileEngine(const GridFunction& gg)
      : g(gg),
        prefix(detail::build_prefix(gg)),
        hn(std::pow(gg.spec.spacing(), gg.spec.dim)) {}

  double total_mass() const { return detail::full_sum(prefix) * hn; }

  // Fills field[i] with the ball mass at radius r (no r^-lambda factor yet).
  void mass_field(double r, double* field) const {
    const GridSpec& spec = g.spec;
    detail::BallShape shape = detail::make_ball_shape(spec, r);
    if (shape.covers_domain) {
      double total = total_mass();
      parallel_for(spec.cell_count(), [&](Index b, Index e) {
        for (Index i = b; i < e; ++i) field[i] = total;
      });
      return;
    }
    parallel_for(spec.cell_count(), [&](Index b, Index e) {
      for (Index i = b; i < e; ++i)
        field[i] = hn * detail::window_sum(spec, prefix, shape, i);
    });
  }
};

}  // namespace

ModularProfile modular_profile(const GridFunction& f, const MorreyParams& mp,
                               const RadiusLadder& ladder, const ConvPolicy&) {
  mp.validate(f.spec.dim);
  ladder.validate();
  ModularProfile profile;
  profile.params = mp;
  profile.radii = ladder.radii();
  GridFunction g = pointwise_power(f, mp.p);
  ProfileEngine engine(g);
  profile.total_p_mass = engine.total_mass();
  profile.tail_start = std::max(ladder.top(), f.spec.diameter());
  Array field(f.spec.cell_count());
  profile.sup_values.reserve(profile.radii.size());
  for (double r : profile.radii) {
    detail::BallShape shape = detail::make_ball_shape(f.spec, r);
    if (shape.covers_domain) {
      // Same expression as tail_value so the in-grid tail is bitwise equal.
      profile.sup_values.push_back(profile.total_p_mass * std::pow(r, -mp.lambda));
      continue;
    }
    engine.mass_field(r, field.data());
    double sup = field.maxCoeff();
    profile.sup_values.push_back(sup * std::pow(r, -mp.lambda));
  }
  return profile;
}

ModularFieldSet modular_field_set(const GridFunction& f, const MorreyParams& mp,
                                  const RadiusLadder& ladder) {
  mp.validate(f.spec.dim);
  ladder.validate();
  ModularFieldSet set;
  set.params = mp;
  set.radii = ladder.radii();
  set.cells = f.spec.cell_count();
  set.values = Array::Zero(static_cast<Index>(set.radii.size()) * set.cells);
  GridFunction g = pointwise_power(f, mp.p);
  ProfileEngine engine(g);
  set.total_p_mass = engine.total_mass();
  for (std::size_t k = 0; k < set.radii.size(); ++k) {
    double* field = set.values.data() + static_cast<Index>(k) * set.cells;
    engine.mass_field(set.radii[k], field);
    double scale = std::pow(set.radii[k], -mp.lambda);
    for (Index i = 0; i < set.cells; ++i) field[i] *= scale;
  }
  return set;
}

double morrey_norm(const GridFunction& f, const MorreyParams& mp, const RadiusLadder& ladder,
                   const ConvPolicy& policy) {
  if (ladder.top() < f.spec.diameter())
    throw std::invalid_argument("morrey_norm: ladder must reach the domain diameter");
  ModularProfile profile = modular_profile(f, mp, ladder, policy);
  return std::pow(profile.max_value(), 1.0 / mp.p);
}

double VStarSequence::max_value() const {
  double m = 0.0;
  for (double v : a_values) m = std::max(m, v);
  return m;
}

VStarSequence vstar_sequence(const GridFunction& f, double p, int n_max, double ball_radius) {
  if (n_max < 1) throw std::invalid_argument("vstar_sequence: N_max must be >= 1");
  if (!(ball_radius > 0)) throw std::invalid_argument("vstar_sequence: ball radius must be positive");
  if (!(p >= 1.0)) throw std::invalid_argument("vstar_sequence: p must be >= 1");
  const GridSpec& spec = f.spec;
  GridFunction g = pointwise_power(f, p);
  const double* gv = g.values.data();
  const double hn = std::pow(spec.spacing(), spec.dim);
  detail::BallShape shape = detail::make_ball_shape(spec, ball_radius);

  // Cell-center norms, fixed evaluation shared with the cutoff test below.
  Array norms(spec.cell_count());
  parallel_for(spec.cell_count(), [&](Index b, Index e) {
    for (Index i = b; i < e; ++i) norms[i] = spec.center_norm(i);
  });

  VStarSequence seq{p, ball_radius, std::vector<double>(n_max, 0.0)};
  Array field = Array::Zero(spec.cell_count());
  for (int N = 1; N <= n_max; ++N) {
    const double cutoff = static_cast<double>(N);
    // Direct sums in a fixed per-cell order keep A_N exactly nonincreasing:
    // the summand sets are nested across N and all terms are nonnegative.
    parallel_for(spec.cell_count(), [&](Index b, Index e) {
      for (Index i = b; i < e; ++i) {
        if (norms[i] + ball_radius < cutoff - 1e-9) {  // window misses |y| >= N
          field[i] = 0.0;
          continue;
        }
        double acc = 0.0;
        detail::for_each_ball_cell(spec, shape, i, [&](Index j) {
          if (norms[j] >= cutoff) acc += gv[j];
        });
        field[i] = acc;
      }
    });
    seq.a_values[N - 1] = field.maxCoeff() * hn;
  }
  return seq;
}

void write_profile_csv(const ModularProfile& profile, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << "r,value\n";
  char buf[64];
  for (std::size_t k = 0; k < profile.radii.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", profile.radii[k], profile.sup_values[k]);
    out << buf;
  }
}

void write_vstar_csv(const VStarSequence& seq, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << "N,value\n";
  char buf[64];
  for (std::size_t k = 0; k < seq.a_values.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", k + 1, seq.a_values[k]);
    out << buf;
  }
}

}  // namespace morrey
