#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "morrey/grid.hpp"
#include "morrey/params.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

using namespace morrey;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("make_grid derives spacing and unit ball volume") {
  GridSpec g1 = make_grid(1, 8.0, 4096);
  CHECK(g1.spacing() == 0.00390625);
  CHECK(g1.unit_ball_volume() == 2.0);

  GridSpec g2 = make_grid(2, 4.0, 256);
  CHECK(g2.spacing() == 0.03125);
  CHECK(g2.unit_ball_volume() == doctest::Approx(3.14159265358979323846).epsilon(1e-15));
}

TEST_CASE("make_grid rejects invalid arguments") {
  CHECK_THROWS_AS(make_grid(1, 8.0, 4097), std::invalid_argument);  // odd
  CHECK_THROWS_AS(make_grid(0, 8.0, 4096), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(4, 8.0, 4096), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1, -1.0, 4096), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1, 8.0, 2), std::invalid_argument);
}

TEST_CASE("no cell center sits at the origin") {
  for (int dim = 1; dim <= 3; ++dim) {
    GridSpec spec = make_grid(dim, 2.0, dim == 3 ? 8 : 16);
    for (Index i = 0; i < spec.cell_count(); ++i) CHECK(spec.center_norm2_int(i) > 0);
  }
}

TEST_CASE("ball indicator synthesis matches the definition") {
  GridSpec spec = make_grid(1, 8.0, 1024);
  GridFunction f = synthesize(spec, {BallIndicator{{0, 0, 0}, 1.0, 1.0}, 1.0});
  double point[1];
  for (Index i = 0; i < spec.cell_count(); ++i) {
    spec.center(i, point);
    CHECK(f.values[i] == (std::abs(point[0]) < 1.0 ? 1.0 : 0.0));
  }
}

TEST_CASE("power law is capped at the near-origin cell scale") {
  GridSpec spec = make_grid(1, 8.0, 1024);
  GridFunction f = synthesize(spec, {PowerLaw{0.5}, 1.0});
  double cap = std::pow(0.5 * spec.spacing(), -0.5);
  CHECK(f.values.maxCoeff() <= cap);
  double point[1];
  for (Index i = 0; i < spec.cell_count(); ++i) {
    spec.center(i, point);
    double expect = std::min(std::pow(std::abs(point[0]), -0.5), cap);
    CHECK(f.values[i] == doctest::Approx(expect).epsilon(1e-15));
  }
}

TEST_CASE("dilation composes multiplicatively and is analytic") {
  GridSpec spec = make_grid(1, 8.0, 512);
  FamilyDescriptor base{Gaussian{{0, 0, 0}, 1.0, 1.0}, 1.0};

  FamilyDescriptor twice = dilate_family(dilate_family(base, 2.0), 2.0);
  FamilyDescriptor once = dilate_family(base, 4.0);
  GridFunction a = synthesize(spec, twice);
  GridFunction b = synthesize(spec, once);
  CHECK((a.values == b.values).all());

  GridFunction identity = synthesize(spec, dilate_family(base, 1.0));
  GridFunction plain = synthesize(spec, base);
  CHECK((identity.values == plain.values).all());

  CHECK_THROWS_AS(dilate_family(base, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(dilate_family(base, -2.0), std::invalid_argument);
}

TEST_CASE("dilated gaussian equals narrower gaussian") {
  GridSpec spec = make_grid(1, 8.0, 512);
  GridFunction dilated = synthesize(spec, dilate_family({Gaussian{{0, 0, 0}, 1.0, 1.0}, 1.0}, 2.0));
  GridFunction narrow = synthesize(spec, {Gaussian{{0, 0, 0}, 0.5, 1.0}, 1.0});
  for (Index i = 0; i < spec.cell_count(); ++i)
    CHECK(dilated.values[i] == doctest::Approx(narrow.values[i]).epsilon(1e-12));
}

TEST_CASE("dilated ball indicator shrinks the support") {
  GridSpec spec = make_grid(1, 8.0, 512);
  GridFunction f = synthesize(spec, dilate_family({BallIndicator{{0, 0, 0}, 1.0, 1.0}, 1.0}, 2.0));
  GridFunction g = synthesize(spec, {BallIndicator{{0, 0, 0}, 0.5, 1.0}, 1.0});
  CHECK((f.values == g.values).all());
}

TEST_CASE("dilation samples f(t x) analytically at cell centers") {
  GridSpec spec = make_grid(2, 4.0, 32);
  FamilyDescriptor base{SmoothBump{{0.5, -0.25, 0}, 1.5, 2.0}, 1.0};
  double t = 1.75;
  GridFunction dilated = synthesize(spec, dilate_family(base, t));
  double point[3];
  for (Index i = 0; i < spec.cell_count(); ++i) {
    spec.center(i, point);
    double scaled[3] = {t * point[0], t * point[1], 0};
    double expect = family_value(base, spec, scaled);
    CHECK(dilated.values[i] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("pointwise_power basics") {
  GridSpec spec = make_grid(1, 2.0, 16);
  GridFunction zero{spec, Array::Zero(spec.cell_count())};
  CHECK((pointwise_power(zero, 3.0).values == 0.0).all());

  GridFunction c{spec, Array::Constant(spec.cell_count(), -2.0)};
  CHECK((pointwise_power(c, 2.0).values == 4.0).all());

  GridFunction ind = synthesize(spec, {BallIndicator{{0, 0, 0}, 1.0, 1.0}, 1.0});
  CHECK((pointwise_power(ind, 7.0).values == ind.values).all());

  CHECK_THROWS_AS(pointwise_power(c, 0.5), std::invalid_argument);
}

TEST_CASE("synthesize rejects invalid parameters") {
  GridSpec spec = make_grid(1, 2.0, 16);
  CHECK_THROWS_AS(synthesize(spec, {BallIndicator{{0, 0, 0}, -1.0, 1.0}, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(synthesize(spec, {PowerLaw{-0.5}, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(synthesize(spec, {Gaussian{{0, 0, 0}, 0.0, 1.0}, 1.0}), std::invalid_argument);
}

TEST_CASE("grid file round trip is bitwise") {
  GridSpec spec = make_grid(2, 4.0, 32);
  std::mt19937_64 rng(7);
  GridFunction f{spec, Array::Zero(spec.cell_count())};
  for (Index i = 0; i < spec.cell_count(); ++i)
    f.values[i] = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
  auto path = temp_file("morrey_roundtrip.mry");
  write_grid(f, path);
  GridFunction g = read_grid(path);
  CHECK(g.spec == spec);
  CHECK((g.values == f.values).all());
  std::filesystem::remove(path);
}

TEST_CASE("read_grid rejects malformed files") {
  auto path = temp_file("morrey_bad.mry");

  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << "XXXXrest";
  }
  CHECK_THROWS_WITH_AS(read_grid(path), doctest::Contains("bad magic"), std::runtime_error);

  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << "MRY2rest-of-header-bytes";
  }
  CHECK_THROWS_WITH_AS(read_grid(path), doctest::Contains("version"), std::runtime_error);

  {
    GridSpec spec = make_grid(1, 1.0, 8);
    GridFunction f{spec, Array::Ones(8)};
    write_grid(f, path);
    std::filesystem::resize_file(path, 40);  // drop part of the payload
  }
  CHECK_THROWS_WITH_AS(read_grid(path), doctest::Contains("truncated"), std::runtime_error);

  {
    GridSpec spec = make_grid(1, 1.0, 8);
    GridFunction f{spec, Array::Ones(8)};
    f.values[3] = std::numeric_limits<double>::quiet_NaN();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write("MRY1", 4);
    std::uint32_t dim = 1, n = 8;
    double L = 1.0;
    out.write(reinterpret_cast<const char*>(&dim), 4);
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(&L), 8);
    out.write(reinterpret_cast<const char*>(f.values.data()), 8 * 8);
  }
  CHECK_THROWS_WITH_AS(read_grid(path), doctest::Contains("non-finite"), std::runtime_error);
  std::filesystem::remove(path);
}

TEST_CASE("csv export uses dot decimals and one row per cell") {
  GridSpec spec = make_grid(1, 1.0, 4);
  GridFunction f{spec, Array::LinSpaced(4, 0.25, 1.0)};
  auto path = temp_file("morrey_grid.csv");
  write_grid_csv(f, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "x0,value");
  int rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    CHECK(line.find(',') != std::string::npos);
    CHECK(line.find(';') == std::string::npos);
    ++rows;
  }
  CHECK(rows == 4);
  std::filesystem::remove(path);
}

TEST_CASE("radius ladder validation and coverage") {
  RadiusLadder bad{0.0, 2.0, 4};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  RadiusLadder bad2{1.0, 0.5, 4};
  CHECK_THROWS_AS(bad2.validate(), std::invalid_argument);

  GridSpec spec = make_grid(2, 4.0, 64);
  RadiusLadder ladder = cover_ladder(spec);
  CHECK(ladder.r_min == spec.spacing());
  CHECK(ladder.top() >= spec.diameter());
  auto radii = ladder.radii();
  for (std::size_t k = 1; k < radii.size(); ++k) CHECK(radii[k] > radii[k - 1]);
}
