#include "morrey/grid.hpp"

#include "morrey/parallel.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace morrey {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

double sq(double x) { return x * x; }

double dist2_to(const double* point, const std::array<double, 3>& c, int dim) {
  double s = 0;
  for (int k = 0; k < dim; ++k) s += sq(point[k] - c[k]);
  return s;
}

double bump_value(const SmoothBump& b, const double* point, int dim) {
  double d2 = dist2_to(point, b.center, dim);
  double r2 = b.radius * b.radius;
  if (!(d2 < r2)) return 0.0;
  return b.height * std::exp(1.0 - 1.0 / (1.0 - d2 / r2));
}

}  // namespace

double GridSpec::unit_ball_volume() const {
  switch (dim) {
    case 1: return 2.0;
    case 2: return std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi / 3.0;
    default: throw std::logic_error("GridSpec: dim out of range");
  }
}

Index GridSpec::cell_count() const {
  Index n = 1;
  for (int k = 0; k < dim; ++k) n *= cells_per_axis;
  return n;
}

double GridSpec::diameter() const {
  return 2.0 * half_width * std::sqrt(static_cast<double>(dim));
}

void GridSpec::decode(Index linear, Index* multi) const {
  for (int k = dim - 1; k >= 0; --k) {
    multi[k] = linear % cells_per_axis;
    linear /= cells_per_axis;
  }
}

Index GridSpec::encode(const Index* multi) const {
  Index linear = 0;
  for (int k = 0; k < dim; ++k) linear = linear * cells_per_axis + multi[k];
  return linear;
}

void GridSpec::center(Index linear, double* point) const {
  Index multi[3];
  decode(linear, multi);
  for (int k = 0; k < dim; ++k) point[k] = center_coord(multi[k]);
}

std::int64_t GridSpec::center_norm2_int(Index linear) const {
  Index multi[3];
  decode(linear, multi);
  std::int64_t s = 0;
  for (int k = 0; k < dim; ++k) {
    std::int64_t u = odd_coord(multi[k]);
    s += u * u;
  }
  return s;
}

double GridSpec::center_norm(Index linear) const {
  return 0.5 * spacing() * std::sqrt(static_cast<double>(center_norm2_int(linear)));
}

GridSpec make_grid(int dim, double half_width, Index cells_per_axis) {
  require(dim >= 1 && dim <= 3, "make_grid: dim must be 1, 2 or 3");
  require(half_width > 0 && std::isfinite(half_width), "make_grid: half_width must be positive");
  require(cells_per_axis >= 4, "make_grid: cells_per_axis must be at least 4");
  require(cells_per_axis % 2 == 0, "make_grid: cells_per_axis must be even");
  return GridSpec{dim, half_width, cells_per_axis};
}

std::string FamilyDescriptor::label() const {
  std::ostringstream os;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, BallIndicator>) {
          os << "ball(c=" << p.center[0] << ",r=" << p.radius << ",h=" << p.height << ")";
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          os << "powerlaw(gamma=" << p.exponent << ")";
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          os << "gaussian(c=" << p.center[0] << ",w=" << p.width << ",h=" << p.height << ")";
        } else if constexpr (std::is_same_v<T, BumpTrain>) {
          os << "bumptrain(n=" << p.bumps.size() << ")";
        } else if constexpr (std::is_same_v<T, SmoothBump>) {
          os << "smoothbump(c=" << p.center[0] << ",r=" << p.radius << ",h=" << p.height << ")";
        }
      },
      profile);
  if (dilation != 1.0) os << "@t=" << dilation;
  return os.str();
}

FamilyDescriptor dilate_family(FamilyDescriptor family, double t) {
  require(t > 0 && std::isfinite(t), "dilate_family: t must be positive");
  family.dilation *= t;
  return family;
}

double family_value(const FamilyDescriptor& family, const GridSpec& spec, const double* point) {
  double scaled[3] = {0, 0, 0};
  for (int k = 0; k < spec.dim; ++k) scaled[k] = family.dilation * point[k];
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, BallIndicator>) {
          return dist2_to(scaled, p.center, spec.dim) < p.radius * p.radius ? p.height : 0.0;
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          double r2 = 0;
          for (int k = 0; k < spec.dim; ++k) r2 += sq(scaled[k]);
          double cap = std::pow(0.5 * spec.spacing(), -p.exponent);
          if (r2 == 0.0) return cap;
          double v = std::pow(std::sqrt(r2), -p.exponent);
          return std::min(v, cap);
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          double d2 = dist2_to(scaled, p.center, spec.dim);
          return p.height * std::exp(-d2 / (2.0 * p.width * p.width));
        } else if constexpr (std::is_same_v<T, BumpTrain>) {
          double s = 0;
          for (const auto& b : p.bumps) s += bump_value(b, scaled, spec.dim);
          return s;
        } else if constexpr (std::is_same_v<T, SmoothBump>) {
          return bump_value(p, scaled, spec.dim);
        }
      },
      family.profile);
}

namespace {

void validate_family(const FamilyDescriptor& family) {
  require(family.dilation > 0 && std::isfinite(family.dilation),
          "synthesize: dilation must be positive");
  std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, BallIndicator>) {
          require(p.radius > 0, "synthesize: ball radius must be positive");
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          require(p.exponent > 0, "synthesize: power-law exponent must be positive");
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          require(p.width > 0, "synthesize: gaussian width must be positive");
        } else if constexpr (std::is_same_v<T, BumpTrain>) {
          for (const auto& b : p.bumps) require(b.radius > 0, "synthesize: bump radius must be positive");
        } else if constexpr (std::is_same_v<T, SmoothBump>) {
          require(p.radius > 0, "synthesize: bump radius must be positive");
        }
      },
      family.profile);
}

}  // namespace

GridFunction synthesize(const GridSpec& spec, const FamilyDescriptor& family) {
  validate_family(family);
  GridFunction f{spec, Array::Zero(spec.cell_count())};
  double* out = f.values.data();
  parallel_for(spec.cell_count(), [&](Index b, Index e) {
    double point[3];
    for (Index i = b; i < e; ++i) {
      spec.center(i, point);
      out[i] = family_value(family, spec, point);
    }
  });
  if (!f.values.isFinite().all())
    throw std::runtime_error("synthesize: produced non-finite values");
  return f;
}

GridFunction pointwise_power(const GridFunction& f, double p) {
  require(p >= 1.0 && std::isfinite(p), "pointwise_power: p must be >= 1");
  GridFunction g{f.spec, f.values.abs().pow(p)};
  return g;
}

// ---------------------------------------------------------------------------
// Binary I/O

namespace {

constexpr char kMagic[4] = {'M', 'R', 'Y', '1'};

void io_fail(const std::string& msg) { throw std::runtime_error("grid file: " + msg); }

}  // namespace

void write_grid(const GridFunction& f, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) io_fail("cannot open for writing: " + path.string());
  out.write(kMagic, 4);
  std::uint32_t dim = static_cast<std::uint32_t>(f.spec.dim);
  std::uint32_t n = static_cast<std::uint32_t>(f.spec.cells_per_axis);
  double L = f.spec.half_width;
  out.write(reinterpret_cast<const char*>(&dim), 4);
  out.write(reinterpret_cast<const char*>(&n), 4);
  out.write(reinterpret_cast<const char*>(&L), 8);
  out.write(reinterpret_cast<const char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (!out) io_fail("write failed: " + path.string());
}

GridFunction read_grid(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_fail("cannot open: " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in) io_fail("truncated header");
  if (std::memcmp(magic, "MRY", 3) != 0) io_fail("bad magic");
  if (magic[3] != '1') io_fail("unsupported format version");
  std::uint32_t dim = 0, n = 0;
  double L = 0;
  in.read(reinterpret_cast<char*>(&dim), 4);
  in.read(reinterpret_cast<char*>(&n), 4);
  in.read(reinterpret_cast<char*>(&L), 8);
  if (!in) io_fail("truncated header");
  if (dim < 1 || dim > 3) io_fail("dim out of range");
  if (n < 4 || n % 2 != 0) io_fail("cells_per_axis invalid");
  if (!(L > 0) || !std::isfinite(L)) io_fail("half_width invalid");
  GridSpec spec{static_cast<int>(dim), L, static_cast<Index>(n)};
  GridFunction f{spec, Array::Zero(spec.cell_count())};
  in.read(reinterpret_cast<char*>(f.values.data()),
          static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(f.values.size() * sizeof(double)))
    io_fail("truncated payload");
  if (!f.values.isFinite().all()) io_fail("non-finite values");
  return f;
}

void write_grid_csv(const GridFunction& f, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) io_fail("cannot open for writing: " + path.string());
  const GridSpec& spec = f.spec;
  for (int k = 0; k < spec.dim; ++k) out << "x" << k << ",";
  out << "value\n";
  char buf[32];
  double point[3];
  for (Index i = 0; i < spec.cell_count(); ++i) {
    spec.center(i, point);
    for (int k = 0; k < spec.dim; ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", point[k]);
      out << buf << ",";
    }
    std::snprintf(buf, sizeof buf, "%.17g", f.values[i]);
    out << buf << "\n";
  }
  if (!out) io_fail("write failed: " + path.string());
}

}  // namespace morrey
