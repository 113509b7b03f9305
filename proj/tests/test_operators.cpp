#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "morrey/checks.hpp"
#include "morrey/operators.hpp"
#include "morrey/oracle.hpp"

#include <cmath>
#include <random>

using namespace morrey;

namespace {

Index nearest_cell(const GridSpec& spec, double x0) {
  Index best = 0;
  double bd = 1e300;
  double pt[3];
  for (Index i = 0; i < spec.cell_count(); ++i) {
    spec.center(i, pt);
    double d = std::abs(pt[0] - x0);
    for (int k = 1; k < spec.dim; ++k) d += std::abs(pt[k]);
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  return best;
}

GridFunction random_function(const GridSpec& spec, std::uint64_t seed, bool signed_values) {
  std::mt19937_64 rng(seed);
  GridFunction f{spec, Array::Zero(spec.cell_count())};
  for (Index i = 0; i < spec.cell_count(); ++i) {
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    f.values[i] = signed_values ? 2.0 * u - 1.0 : u;
  }
  return f;
}

// pointwise a <= b with the usual 1e-12 ratio allowance
void check_dominated(const Array& a, const Array& b) {
  for (Index i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    CHECK(a[i] <= b[i] * (1.0 + 1e-12));
  }
}

}  // namespace

TEST_CASE("maximal function basics") {
  GridSpec spec = make_grid(1, 8.0, 1024);
  RadiusLadder ladder = cover_ladder(spec);

  GridFunction zero{spec, Array::Zero(spec.cell_count())};
  CHECK((maximal(zero, ladder).values == 0.0).all());

  GridFunction one{spec, Array::Ones(spec.cell_count())};
  CHECK((maximal(one, ladder).values == 1.0).all());
}

TEST_CASE("maximal of the interval indicator at x = 2") {
  GridSpec spec = make_grid(1, 8.0, 1024);
  RadiusLadder ladder = cover_ladder(spec);
  GridFunction chi = synthesize(spec, {BallIndicator{{0, 0, 0}, 1, 1}, 1.0});
  GridFunction mf = maximal(chi, ladder);
  double at2 = mf.values[nearest_cell(spec, 2.0)];

  // dense-radius oracle: the scanned maximum approaches 1/3 attained at t = 3
  OracleRequest req;
  req.op = OperatorSpec{OperatorKind::Maximal, 0, 0, 0, ""};
  for (int k = 0; k <= 400; ++k)
    req.radius_scan.push_back(0.01 * std::pow(2000.0, k / 400.0));
  GridFunction dense = oracle_eval(chi, req);
  double dense2 = dense.values[nearest_cell(spec, 2.0)];
  CHECK(dense2 == doctest::Approx(1.0 / 3.0).epsilon(0.01));

  // ladder value sits within one rung of the scanned sup
  CHECK(at2 <= dense2 * (1 + 1e-12));
  CHECK(at2 >= dense2 / ladder.ratio * (1 - 10 * spec.spacing()));
}

TEST_CASE("sharp maximal of a constant vanishes") {
  GridSpec spec = make_grid(2, 4.0, 32);
  RadiusLadder ladder = cover_ladder(spec);
  GridFunction c{spec, Array::Constant(spec.cell_count(), 3.25)};
  CHECK((sharp_maximal(c, ladder).values == 0.0).all());
}

TEST_CASE("sharp maximal is dominated by twice the maximal, every family") {
  GridSpec spec = make_grid(1, 8.0, 1024);
  RadiusLadder ladder = cover_ladder(spec);
  std::vector<GridFunction> fs;
  fs.push_back(synthesize(spec, {BallIndicator{{0, 0, 0}, 1, 1}, 1.0}));
  fs.push_back(synthesize(spec, {Gaussian{{0.5, 0, 0}, 1, 1}, 1.0}));
  fs.push_back(synthesize(spec, {PowerLaw{0.5}, 1.0}));
  fs.push_back(random_function(spec, 11, true));
  fs.push_back(random_function(spec, 12, false));
  for (const GridFunction& f : fs) {
    DominanceReport report = check_dominance(sharp_maximal(f, ladder), maximal(f, ladder),
                                             2.0, 1.0);
    CHECK(report.pass);
    CHECK(report.violation_count == 0);
    CHECK(report.max_ratio <= 1.0 + 1e-12);
  }
}

TEST_CASE("fractional maximal at alpha = 0 is the maximal function, bitwise") {
  GridSpec spec = make_grid(1, 8.0, 512);
  RadiusLadder ladder = cover_ladder(spec);
  GridFunction f = random_function(spec, 5, true);
  GridFunction a = frac_maximal(f, 0.0, ladder);
  GridFunction b = maximal(f, ladder);
  CHECK((a.values == b.values).all());
  CHECK_THROWS_AS(frac_maximal(f, 1.0, ladder), std::invalid_argument);
  CHECK_THROWS_AS(frac_maximal(f, -0.1, ladder), std::invalid_argument);
}

TEST_CASE("fractional maximal of the indicator at the origin") {
  GridSpec spec = make_grid(1, 8.0, 4096);
  RadiusLadder ladder = cover_ladder(spec);
  double alpha = 0.5;
  GridFunction chi = synthesize(spec, {BallIndicator{{0, 0, 0}, 1, 1}, 1.0});
  GridFunction m = frac_maximal(chi, alpha, ladder);
  double v = m.values[nearest_cell(spec, 0.0)];
  double expect = std::pow(2.0, alpha);  // sup_t (2t)^{alpha-1} min(2t, 2) at t = 1
  CHECK(v <= expect * (1 + 1e-9));
  CHECK(v >= expect / std::pow(ladder.ratio, 1 - alpha) * (1 - 10 * spec.spacing()));

  GridFunction zero{spec, Array::Zero(spec.cell_count())};
  CHECK((frac_maximal(zero, alpha, ladder).values == 0.0).all());
}

TEST_CASE("riesz potential of the indicator at the origin") {
  GridSpec spec = make_grid(1, 8.0, 4096);
  double alpha = 0.5;
  GridFunction chi = synthesize(spec, {BallIndicator{{0, 0, 0}, 1, 1}, 1.0});
  GridFunction out = riesz(chi, alpha);
  double v = out.values[nearest_cell(spec, 0.0)];
  CHECK(std::abs(v - 4.0) <= 0.5 * std::pow(spec.spacing(), alpha));

  CHECK((out.values >= 0.0).all());  // positive kernel
  GridFunction zero{spec, Array::Zero(spec.cell_count())};
  CHECK((riesz(zero, alpha).values == 0.0).all());
  CHECK_THROWS_AS(riesz(chi, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(riesz(chi, 1.0), std::invalid_argument);
}

TEST_CASE("riesz fft path agrees with direct summation") {
  for (int dim : {1, 2}) {
    GridSpec spec = dim == 1 ? make_grid(1, 8.0, 512) : make_grid(2, 4.0, 32);
    GridFunction f = synthesize(spec, {Gaussian{{0.5, 0.25, 0}, 1, 1}, 1.0});
    double alpha = dim == 1 ? 0.5 : 0.8;
    GridFunction direct = riesz(f, alpha, ConvPolicy{ConvMode::Direct, 0});
    GridFunction fft = riesz(f, alpha, ConvPolicy{ConvMode::Fft, 0});
    CHECK(sup_relative_error(fft.values, direct.values) <= 1e-10);
  }
}

TEST_CASE("hardy operators on the interval indicator") {
  GridSpec spec = make_grid(1, 8.0, 4096);
  GridFunction chi = synthesize(spec, {BallIndicator{{0, 0, 0}, 1, 1}, 1.0});
  double h = spec.spacing();
  double pt[1];

  GridFunction hf = hardy_lower(chi, 0.0);
  Index i2 = nearest_cell(spec, 2.0);
  spec.center(i2, pt);
  CHECK(hf.values[i2] == doctest::Approx(2.0 / pt[0]).epsilon(5 * h));
  Index ihalf = nearest_cell(spec, 0.5);
  spec.center(ihalf, pt);
  CHECK(hf.values[ihalf] == doctest::Approx(2.0 * pt[0] / pt[0]).epsilon(5 * h));  // = 2

  double alpha = 0.3;
  GridFunction ha = hardy_lower(chi, alpha);
  spec.center(i2, pt);
  CHECK(ha.values[i2] == doctest::Approx(2.0 * std::pow(pt[0], alpha - 1)).epsilon(5 * h));

  GridFunction uh = hardy_upper(chi, 0.0);
  spec.center(ihalf, pt);
  CHECK(uh.values[ihalf] ==
        doctest::Approx(2.0 * std::log(1.0 / pt[0])).epsilon(4 * h / pt[0]));
  // outside the support the upper region carries no mass at all
  CHECK(uh.values[i2] == 0.0);

  GridFunction zero{spec, Array::Zero(spec.cell_count())};
  CHECK((hardy_lower(zero, 0.0).values == 0.0).all());
  CHECK((hardy_upper(zero, 0.0).values == 0.0).all());
  CHECK_THROWS_AS(hardy_lower(chi, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(hardy_upper(chi, -0.2), std::invalid_argument);
}

TEST_CASE("hybrid operators reduce to hardy operators at beta = n") {
  GridSpec spec = make_grid(1, 4.0, 512);
  GridFunction f = random_function(spec, 21, false);
  GridFunction k = hybrid_K(f, 1.0);
  GridFunction hl = hardy_lower(f, 0.0);
  CHECK(sup_relative_error(k.values, hl.values) <= 1e-12);

  GridFunction ck = hybrid_calK(f, 1.0);
  GridFunction hu = hardy_upper(f, 0.0);
  CHECK(sup_relative_error(ck.values, hu.values) <= 1e-12);

  GridFunction zero{spec, Array::Zero(spec.cell_count())};
  CHECK((hybrid_K(zero, 0.5).values == 0.0).all());
  CHECK((hybrid_calK(zero, 0.5).values == 0.0).all());
  CHECK_THROWS_AS(hybrid_K(f, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(hybrid_calK(f, 1.5), std::invalid_argument);
}

TEST_CASE("hybrid K against the refined quadrature oracle") {
  GridSpec spec = make_grid(1, 8.0, 1024);
  GridFunction chi = synthesize(spec, {BallIndicator{{0, 0, 0}, 1, 1}, 1.0});
  double beta = 0.5;
  GridFunction fast = hybrid_K(chi, beta);
  OracleRequest req;
  req.op = OperatorSpec{OperatorKind::HybridK, 0, beta, 0, ""};
  req.refinement = 4;
  req.allow_large = true;
  GridFunction refined = oracle_eval(chi, req);
  Index i2 = nearest_cell(spec, 2.0);
  CHECK(std::abs(fast.values[i2] - refined.values[i2]) <=
        2.0 * std::pow(spec.spacing(), 0.5));
}

TEST_CASE("truncated singular integral") {
  GridSpec spec = make_grid(1, 8.0, 4096);
  double h = spec.spacing();
  const KernelSpec& hilbert = find_kernel("hilbert1d");

  // odd kernel against an even function about a cell center: cancellation
  GridFunction even = synthesize(spec, {BallIndicator{{0.5 * h, 0, 0}, 1, 1}, 1.0});
  GridFunction s0 = truncated_singular(even, hilbert, 4 * h);
  CHECK(std::abs(s0.values[nearest_cell(spec, 0.5 * h)]) <= 1e-12);

  // value ln 3 at x = 2 for the centered indicator
  GridFunction chi = synthesize(spec, {BallIndicator{{0, 0, 0}, 1, 1}, 1.0});
  GridFunction s = truncated_singular(chi, hilbert, 4 * h);
  CHECK(s.values[nearest_cell(spec, 2.0)] == doctest::Approx(std::log(3.0)).epsilon(5 * h));

  GridFunction zero{spec, Array::Zero(spec.cell_count())};
  CHECK((truncated_singular(zero, hilbert, 4 * h).values == 0.0).all());

  CHECK_THROWS_AS(truncated_singular(chi, hilbert, 0.5 * h), std::invalid_argument);
  CHECK_THROWS_AS(find_kernel("nope"), std::invalid_argument);
}

TEST_CASE("riesztransform1 kernel matches hilbert in one dimension") {
  GridSpec spec = make_grid(1, 4.0, 256);
  GridFunction f = random_function(spec, 3, true);
  GridFunction a = truncated_singular(f, find_kernel("hilbert1d"), 4 * spec.spacing());
  GridFunction b = truncated_singular(f, find_kernel("riesztransform1"), 4 * spec.spacing());
  CHECK(sup_relative_error(a.values, b.values) <= 1e-12);
}

TEST_CASE("sublinearity of the maximal family") {
  GridSpec spec = make_grid(1, 6.0, 512);
  RadiusLadder ladder = cover_ladder(spec);
  GridFunction f = random_function(spec, 31, true);
  GridFunction g = random_function(spec, 32, true);
  GridFunction fg{spec, f.values + g.values};

  check_dominated(maximal(fg, ladder).values,
                  (maximal(f, ladder).values + maximal(g, ladder).values));
  check_dominated(sharp_maximal(fg, ladder).values,
                  (sharp_maximal(f, ladder).values + sharp_maximal(g, ladder).values));
  check_dominated(frac_maximal(fg, 0.4, ladder).values,
                  (frac_maximal(f, 0.4, ladder).values + frac_maximal(g, 0.4, ladder).values));
}

TEST_CASE("dyadic homogeneity is exact") {
  GridSpec spec = make_grid(1, 6.0, 512);
  RadiusLadder ladder = cover_ladder(spec);
  GridFunction f = random_function(spec, 41, true);
  GridFunction scaled{spec, 4.0 * f.values};
  CHECK((maximal(scaled, ladder).values == 4.0 * maximal(f, ladder).values).all());
  CHECK((sharp_maximal(scaled, ladder).values == 4.0 * sharp_maximal(f, ladder).values).all());
  CHECK((riesz(scaled, 0.5).values == 4.0 * riesz(f, 0.5).values).all());
  CHECK((hardy_lower(scaled, 0.2).values == 4.0 * hardy_lower(f, 0.2).values).all());
  CHECK((hardy_upper(scaled, 0.2).values == 4.0 * hardy_upper(f, 0.2).values).all());

  GridFunction neg{spec, -2.0 * f.values};
  CHECK((maximal(neg, ladder).values == 2.0 * maximal(f, ladder).values).all());
  CHECK((riesz(neg, 0.5).values == -2.0 * riesz(f, 0.5).values).all());

  // non-dyadic constants still scale to rounding accuracy
  GridFunction odd{spec, 3.7 * f.values};
  CHECK(sup_relative_error(maximal(odd, ladder).values, 3.7 * maximal(f, ladder).values) <=
        1e-13);
}

TEST_CASE("monotonicity of the positive-kernel operators") {
  GridSpec spec = make_grid(1, 6.0, 512);
  RadiusLadder ladder = cover_ladder(spec);
  GridFunction f = random_function(spec, 51, false);
  GridFunction g{spec, f.values + random_function(spec, 52, false).values};

  check_dominated(maximal(f, ladder).values, maximal(g, ladder).values);
  check_dominated(frac_maximal(f, 0.3, ladder).values, frac_maximal(g, 0.3, ladder).values);
  check_dominated(riesz(f, 0.5).values, riesz(g, 0.5).values);
  check_dominated(hardy_lower(f, 0.0).values, hardy_lower(g, 0.0).values);
  check_dominated(hardy_upper(f, 0.0).values, hardy_upper(g, 0.0).values);
  check_dominated(hybrid_K(f, 0.5).values, hybrid_K(g, 0.5).values);
  check_dominated(hybrid_calK(f, 0.5).values, hybrid_calK(g, 0.5).values);
}

TEST_CASE("operators agree with the oracle on small grids") {
  for (int dim : {1, 2, 3}) {
    GridSpec spec = dim == 1   ? make_grid(1, 8.0, 512)
                    : dim == 2 ? make_grid(2, 4.0, 24)
                               : make_grid(3, 2.0, 8);
    RadiusLadder ladder = cover_ladder(spec);
    GridFunction f = synthesize(spec, {Gaussian{{0.5, 0.25, 0.25}, 1.0, 1.0}, 1.0});
    ApplyOptions options;
    options.ladder = ladder;
    options.conv = ConvPolicy{ConvMode::Direct, 0};

    std::vector<OperatorSpec> ops = {
        {OperatorKind::Maximal, 0, 0, 0, ""},
        {OperatorKind::SharpMaximal, 0, 0, 0, ""},
        {OperatorKind::FracMaximal, 0.4, 0, 0, ""},
        {OperatorKind::Riesz, 0.5, 0, 0, ""},
        {OperatorKind::HardyLower, 0.2, 0, 0, ""},
        {OperatorKind::HardyUpper, 0.2, 0, 0, ""},
        {OperatorKind::HybridK, 0, 0.6, 0, ""},
        {OperatorKind::HybridCalK, 0, 0.6, 0, ""},
    };
    for (const auto& op : ops) {
      GridFunction fast = apply_operator(op, f, options);
      OracleRequest req;
      req.op = op;
      req.ladder = ladder;
      GridFunction ref = oracle_eval(f, req);
      INFO("dim ", dim, " op ", op.label());
      CHECK(sup_relative_error(fast.values, ref.values) <= 1e-10);
    }
  }
}

TEST_CASE("operator spec dispatch and validation") {
  GridSpec spec = make_grid(1, 4.0, 256);
  GridFunction f = random_function(spec, 61, true);
  OperatorSpec op{OperatorKind::TruncatedSingular, 0, 0, 4 * spec.spacing(), "hilbert1d"};
  GridFunction a = apply_operator(op, f);
  GridFunction b = truncated_singular(f, find_kernel("hilbert1d"), 4 * spec.spacing());
  CHECK((a.values == b.values).all());

  CHECK(operator_kind_from_string("riesz") == OperatorKind::Riesz);
  CHECK_THROWS_AS(operator_kind_from_string("bogus"), std::invalid_argument);
  for (auto kind : {OperatorKind::Maximal, OperatorKind::SharpMaximal, OperatorKind::FracMaximal,
                    OperatorKind::Riesz, OperatorKind::HardyLower, OperatorKind::HardyUpper,
                    OperatorKind::HybridK, OperatorKind::HybridCalK,
                    OperatorKind::TruncatedSingular})
    CHECK(operator_kind_from_string(to_string(kind)) == kind);
}
