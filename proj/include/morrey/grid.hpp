#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace morrey {

using Array = Eigen::ArrayXd;
using Index = Eigen::Index;

// Uniform cell-centered grid over the cube [-L, L]^dim. The cell count per
// axis is even, so centers sit at odd half-integer multiples of the spacing
// and none of them is the origin; radial kernels are finite at every sample.
struct GridSpec {
  int dim = 1;
  double half_width = 1.0;
  Index cells_per_axis = 4;

  double spacing() const { return 2.0 * half_width / static_cast<double>(cells_per_axis); }
  double unit_ball_volume() const;
  Index cell_count() const;
  // Largest distance between two points of the cube.
  double diameter() const;

  // Doubled integer coordinate of a cell center along one axis: u = 2i - N + 1
  // (always odd). The center coordinate is (h/2) * u, exactly representable
  // relative to h/2, which makes set-membership comparisons integer-exact.
  std::int64_t odd_coord(Index i) const { return 2 * i - cells_per_axis + 1; }
  double center_coord(Index i) const {
    return 0.5 * spacing() * static_cast<double>(odd_coord(i));
  }

  void decode(Index linear, Index* multi) const;
  Index encode(const Index* multi) const;
  void center(Index linear, double* point) const;
  // Squared doubled-integer norm of a cell center: |center|^2 = (h/2)^2 * this.
  std::int64_t center_norm2_int(Index linear) const;
  double center_norm(Index linear) const;

  bool operator==(const GridSpec&) const = default;
};

GridSpec make_grid(int dim, double half_width, Index cells_per_axis);

struct GridFunction {
  GridSpec spec;
  Array values;
};

// ---------------------------------------------------------------------------
// Analytic test families. Synthesis always evaluates the closed form at the
// (dilated) cell centers; dilation never resamples grids.

struct BallIndicator {
  std::array<double, 3> center{0, 0, 0};
  double radius = 1.0;
  double height = 1.0;
};

// |t x|^{-gamma}, capped at (h/2)^{-gamma} so the near-origin cells carry the
// profile's value at the cell scale instead of blowing up.
struct PowerLaw {
  double exponent = 0.5;
};

struct Gaussian {
  std::array<double, 3> center{0, 0, 0};
  double width = 1.0;
  double height = 1.0;
};

// height * exp(1 - 1/(1 - (|x-c|/R)^2)) inside |x-c| < R, zero outside.
// Smooth, compactly supported, peak value = height.
struct SmoothBump {
  std::array<double, 3> center{0, 0, 0};
  double radius = 1.0;
  double height = 1.0;
};

struct BumpTrain {
  std::vector<SmoothBump> bumps;
};

struct FamilyDescriptor {
  std::variant<BallIndicator, PowerLaw, Gaussian, BumpTrain, SmoothBump> profile;
  double dilation = 1.0;  // synthesized function is f(t x)

  std::string label() const;
};

// Multiplies the stored dilation; composition is exactly multiplicative.
FamilyDescriptor dilate_family(FamilyDescriptor family, double t);

// Closed-form value of the (dilated) family at an arbitrary point. The grid
// spec is needed only for the PowerLaw cap.
double family_value(const FamilyDescriptor& family, const GridSpec& spec, const double* point);

GridFunction synthesize(const GridSpec& spec, const FamilyDescriptor& family);

// |f_i|^p, p >= 1.
GridFunction pointwise_power(const GridFunction& f, double p);

// ---------------------------------------------------------------------------
// File formats. Binary grid file: magic "MRY1", u32 dim, u32 cells_per_axis,
// f64 half_width, then cells_per_axis^dim f64 values, little-endian,
// row-major. Round trips are bit-exact.

void write_grid(const GridFunction& f, const std::filesystem::path& path);
GridFunction read_grid(const std::filesystem::path& path);

// CSV: one row per cell, coordinates then value, '.' decimal separator.
void write_grid_csv(const GridFunction& f, const std::filesystem::path& path);

}  // namespace morrey
