#include "morrey/oracle.hpp"

#include "morrey/detail/windows.hpp"

#include <cmath>
#include <stdexcept>

namespace morrey {

namespace {

constexpr Index kSizeGuard = Index(1) << 16;

struct Box {
  Index lo[3] = {0, 0, 0};
  Index hi[3] = {0, 0, 0};  // inclusive
};

// Bounding box of B(center, r) on the grid; loops below stay inside it.
Box ball_box(const GridSpec& spec, const Index* multi, double r) {
  Box box;
  std::int64_t m = static_cast<std::int64_t>(std::floor(r / spec.spacing())) + 1;
  for (int k = 0; k < spec.dim; ++k) {
    box.lo[k] = std::max<Index>(0, multi[k] - m);
    box.hi[k] = std::min<Index>(spec.cells_per_axis - 1, multi[k] + m);
  }
  return box;
}

template <typename F>
void for_each_in_box(const GridSpec& spec, const Box& box, F&& f) {
  Index m[3] = {0, 0, 0};
  if (spec.dim == 1) {
    for (m[0] = box.lo[0]; m[0] <= box.hi[0]; ++m[0]) f(m);
  } else if (spec.dim == 2) {
    for (m[0] = box.lo[0]; m[0] <= box.hi[0]; ++m[0])
      for (m[1] = box.lo[1]; m[1] <= box.hi[1]; ++m[1]) f(m);
  } else {
    for (m[0] = box.lo[0]; m[0] <= box.hi[0]; ++m[0])
      for (m[1] = box.lo[1]; m[1] <= box.hi[1]; ++m[1])
        for (m[2] = box.lo[2]; m[2] <= box.hi[2]; ++m[2]) f(m);
  }
}

std::int64_t offset2(const Index* a, const Index* b, int dim) {
  std::int64_t s = 0;
  for (int k = 0; k < dim; ++k) {
    std::int64_t d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

// ---------------------------------------------------------------------------
// refinement == 1: same lattice, same integer predicates as the fast paths.

class ExactOracle {
 public:
  explicit ExactOracle(const GridFunction& f)
      : f_(f), spec_(f.spec), h_(spec_.spacing()), hn_(std::pow(h_, spec_.dim)) {}

  Array ball_mass(const Array& g, double r) const {
    Array out = Array::Zero(spec_.cell_count());
    Index multi[3];
    for (Index i = 0; i < spec_.cell_count(); ++i) {
      spec_.decode(i, multi);
      double acc = 0.0;
      for_each_in_box(spec_, ball_box(spec_, multi, r), [&](const Index* m) {
        if (detail::in_ball(h_, offset2(multi, m, spec_.dim), r))
          acc += g[spec_.encode(m)];
      });
      out[i] = hn_ * acc;
    }
    return out;
  }

  Array maximal_like(const std::vector<double>& radii, double alpha) const {
    Array absf = f_.values.abs();
    Array out = Array::Zero(spec_.cell_count());
    const double expo = alpha / static_cast<double>(spec_.dim);
    Index multi[3];
    for (double r : radii) {
      for (Index i = 0; i < spec_.cell_count(); ++i) {
        spec_.decode(i, multi);
        double acc = 0.0;
        std::int64_t count = 0;
        for_each_in_box(spec_, ball_box(spec_, multi, r), [&](const Index* m) {
          if (detail::in_ball(h_, offset2(multi, m, spec_.dim), r)) {
            acc += absf[spec_.encode(m)];
            ++count;
          }
        });
        double val = (acc / static_cast<double>(count)) *
                     std::pow(static_cast<double>(count) * hn_, expo);
        out[i] = std::max(out[i], val);
      }
    }
    return out;
  }

  Array sharp(const std::vector<double>& radii) const {
    Array out = Array::Zero(spec_.cell_count());
    Index multi[3];
    for (double r : radii) {
      for (Index i = 0; i < spec_.cell_count(); ++i) {
        spec_.decode(i, multi);
        Box box = ball_box(spec_, multi, r);
        double sum = 0.0;
        std::int64_t count = 0;
        for_each_in_box(spec_, box, [&](const Index* m) {
          if (detail::in_ball(h_, offset2(multi, m, spec_.dim), r)) {
            sum += f_.values[spec_.encode(m)];
            ++count;
          }
        });
        double mean = sum / static_cast<double>(count);
        double dev = 0.0;
        for_each_in_box(spec_, box, [&](const Index* m) {
          if (detail::in_ball(h_, offset2(multi, m, spec_.dim), r))
            dev += std::abs(f_.values[spec_.encode(m)] - mean);
        });
        out[i] = std::max(out[i], dev / static_cast<double>(count));
      }
    }
    return out;
  }

  Array riesz(double alpha, bool self_cell) const {
    const double expo = alpha - static_cast<double>(spec_.dim);
    const double self_w = self_cell ? self_cell_integral(spec_, alpha) / hn_ : 0.0;
    Array out = Array::Zero(spec_.cell_count());
    Index mi[3], mj[3];
    for (Index i = 0; i < spec_.cell_count(); ++i) {
      spec_.decode(i, mi);
      double acc = 0.0;
      for (Index j = 0; j < spec_.cell_count(); ++j) {
        spec_.decode(j, mj);
        std::int64_t k2 = offset2(mi, mj, spec_.dim);
        double w = k2 == 0 ? self_w : std::pow(h_ * std::sqrt(static_cast<double>(k2)), expo);
        acc += f_.values[j] * w;
      }
      out[i] = hn_ * acc;
    }
    return out;
  }

  Array hardy(double alpha, bool lower) const {
    const double nd = static_cast<double>(spec_.dim);
    Array out = Array::Zero(spec_.cell_count());
    for (Index i = 0; i < spec_.cell_count(); ++i) {
      std::int64_t n2x = spec_.center_norm2_int(i);
      double acc = 0.0;
      for (Index j = 0; j < spec_.cell_count(); ++j) {
        std::int64_t n2y = spec_.center_norm2_int(j);
        if (lower ? !(n2y < n2x) : !(n2y > n2x)) continue;
        if (lower) {
          acc += f_.values[j];
        } else {
          acc += f_.values[j] * std::pow(spec_.center_norm(j), -nd);
        }
      }
      double nx = spec_.center_norm(i);
      out[i] = lower ? std::pow(nx, alpha - nd) * hn_ * acc : std::pow(nx, alpha) * hn_ * acc;
    }
    return out;
  }

  Array hybrid(double beta, bool lower) const {
    const double nd = static_cast<double>(spec_.dim);
    const double expo = beta - nd;
    const double near_w = self_cell_integral(spec_, beta) / hn_;
    Array out = Array::Zero(spec_.cell_count());
    Index mi[3], mj[3];
    for (Index i = 0; i < spec_.cell_count(); ++i) {
      spec_.decode(i, mi);
      std::int64_t n2x = spec_.center_norm2_int(i);
      double acc = 0.0;
      for (Index j = 0; j < spec_.cell_count(); ++j) {
        std::int64_t n2y = spec_.center_norm2_int(j);
        if (lower ? !(n2y < n2x) : !(n2y > n2x)) continue;
        spec_.decode(j, mj);
        std::int64_t k2 = offset2(mi, mj, spec_.dim);
        double dist = h_ * std::sqrt(static_cast<double>(k2));
        double w = dist < h_ ? near_w : std::pow(dist, expo);
        if (lower) {
          acc += f_.values[j] * w;
        } else {
          acc += f_.values[j] * std::pow(spec_.center_norm(j), -beta) * w;
        }
      }
      out[i] = lower ? std::pow(spec_.center_norm(i), -beta) * hn_ * acc : hn_ * acc;
    }
    return out;
  }

  Array singular(const KernelSpec& kernel, double eps) const {
    Array out = Array::Zero(spec_.cell_count());
    Index mi[3], mj[3];
    double x[3], y[3];
    for (Index i = 0; i < spec_.cell_count(); ++i) {
      spec_.decode(i, mi);
      spec_.center(i, x);
      double acc = 0.0;
      for (Index j = 0; j < spec_.cell_count(); ++j) {
        spec_.decode(j, mj);
        std::int64_t k2 = offset2(mi, mj, spec_.dim);
        if (!(h_ * h_ * static_cast<double>(k2) > eps * eps)) continue;
        spec_.center(j, y);
        acc += kernel.eval(x, y, spec_.dim) * f_.values[j];
      }
      out[i] = hn_ * acc;
    }
    return out;
  }

 private:
  const GridFunction& f_;
  const GridSpec& spec_;
  double h_, hn_;
};

// ---------------------------------------------------------------------------
// refinement > 1: the piecewise-constant extension of f is represented
// exactly on the refined lattice; formulas are evaluated at the coarse
// centers with floating-point geometry.

class RefinedOracle {
 public:
  RefinedOracle(const GridFunction& f, int refinement)
      : coarse_(f.spec),
        fine_{f.spec.dim, f.spec.half_width, f.spec.cells_per_axis * refinement},
        refinement_(refinement),
        hn_(std::pow(fine_.spacing(), fine_.dim)),
        values_(Array::Zero(fine_.cell_count())) {
    Index multi[3];
    for (Index j = 0; j < fine_.cell_count(); ++j) {
      fine_.decode(j, multi);
      Index parent[3];
      for (int k = 0; k < fine_.dim; ++k) parent[k] = multi[k] / refinement;
      values_[j] = f.values[coarse_.encode(parent)];
    }
  }

  Array ball_mass(double p, double r, bool power) const {
    Array g = power ? values_.abs().pow(p) : values_;
    Array out = Array::Zero(coarse_.cell_count());
    double x[3], y[3];
    for (Index i = 0; i < coarse_.cell_count(); ++i) {
      coarse_.center(i, x);
      double acc = 0.0;
      for (Index j = 0; j < fine_.cell_count(); ++j) {
        fine_.center(j, y);
        if (dist(x, y) < r) acc += g[j];
      }
      out[i] = hn_ * acc;
    }
    return out;
  }

  Array maximal_like(const std::vector<double>& radii, double alpha) const {
    Array absf = values_.abs();
    Array out = Array::Zero(coarse_.cell_count());
    const double expo = alpha / static_cast<double>(fine_.dim);
    double x[3], y[3];
    for (double r : radii) {
      for (Index i = 0; i < coarse_.cell_count(); ++i) {
        coarse_.center(i, x);
        double acc = 0.0;
        std::int64_t count = 0;
        for (Index j = 0; j < fine_.cell_count(); ++j) {
          fine_.center(j, y);
          if (dist(x, y) < r) {
            acc += absf[j];
            ++count;
          }
        }
        if (count == 0) continue;
        double val = (acc / static_cast<double>(count)) *
                     std::pow(static_cast<double>(count) * hn_, expo);
        out[i] = std::max(out[i], val);
      }
    }
    return out;
  }

  Array riesz(double alpha, bool self_cell) const {
    const double expo = alpha - static_cast<double>(fine_.dim);
    const double self_w = self_cell ? self_cell_integral(fine_, alpha) / hn_ : 0.0;
    Array out = Array::Zero(coarse_.cell_count());
    double x[3], y[3];
    for (Index i = 0; i < coarse_.cell_count(); ++i) {
      coarse_.center(i, x);
      double acc = 0.0;
      for (Index j = 0; j < fine_.cell_count(); ++j) {
        fine_.center(j, y);
        double d = dist(x, y);
        double w = d < 0.5 * fine_.spacing() ? self_w : std::pow(d, expo);
        acc += values_[j] * w;
      }
      out[i] = hn_ * acc;
    }
    return out;
  }

  Array hardy(double alpha, bool lower) const {
    const double nd = static_cast<double>(fine_.dim);
    Array out = Array::Zero(coarse_.cell_count());
    double x[3], y[3];
    for (Index i = 0; i < coarse_.cell_count(); ++i) {
      coarse_.center(i, x);
      double nx = norm(x);
      double acc = 0.0;
      for (Index j = 0; j < fine_.cell_count(); ++j) {
        fine_.center(j, y);
        double ny = norm(y);
        if (lower ? !(ny < nx) : !(ny > nx)) continue;
        acc += lower ? values_[j] : values_[j] * std::pow(ny, -nd);
      }
      out[i] = lower ? std::pow(nx, alpha - nd) * hn_ * acc : std::pow(nx, alpha) * hn_ * acc;
    }
    return out;
  }

  Array hybrid(double beta, bool lower) const {
    const double nd = static_cast<double>(fine_.dim);
    const double expo = beta - nd;
    const double near_w = self_cell_integral(fine_, beta) / hn_;
    Array out = Array::Zero(coarse_.cell_count());
    double x[3], y[3];
    for (Index i = 0; i < coarse_.cell_count(); ++i) {
      coarse_.center(i, x);
      double nx = norm(x);
      double acc = 0.0;
      for (Index j = 0; j < fine_.cell_count(); ++j) {
        fine_.center(j, y);
        double ny = norm(y);
        if (lower ? !(ny < nx) : !(ny > nx)) continue;
        double d = dist(x, y);
        double w = d < fine_.spacing() ? near_w : std::pow(d, expo);
        acc += lower ? values_[j] * w : values_[j] * std::pow(ny, -beta) * w;
      }
      out[i] = lower ? std::pow(nx, -beta) * hn_ * acc : hn_ * acc;
    }
    return out;
  }

  Array singular(const KernelSpec& kernel, double eps) const {
    Array out = Array::Zero(coarse_.cell_count());
    double x[3], y[3];
    for (Index i = 0; i < coarse_.cell_count(); ++i) {
      coarse_.center(i, x);
      double acc = 0.0;
      for (Index j = 0; j < fine_.cell_count(); ++j) {
        fine_.center(j, y);
        if (!(dist(x, y) > eps)) continue;
        acc += kernel.eval(x, y, fine_.dim) * values_[j];
      }
      out[i] = hn_ * acc;
    }
    return out;
  }

 private:
  double dist(const double* a, const double* b) const {
    double s = 0;
    for (int k = 0; k < fine_.dim; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(s);
  }
  double norm(const double* a) const {
    double s = 0;
    for (int k = 0; k < fine_.dim; ++k) s += a[k] * a[k];
    return std::sqrt(s);
  }

  GridSpec coarse_;
  GridSpec fine_;
  int refinement_;
  double hn_;
  Array values_;
};

std::vector<double> oracle_radii(const GridFunction& f, const OracleRequest& req) {
  if (!req.radius_scan.empty()) {
    for (std::size_t k = 1; k < req.radius_scan.size(); ++k)
      if (!(req.radius_scan[k] > req.radius_scan[k - 1]))
        throw std::invalid_argument("oracle: radius scan must be strictly increasing");
    return req.radius_scan;
  }
  RadiusLadder ladder = req.ladder ? *req.ladder : cover_ladder(f.spec);
  return ladder.radii();
}

}  // namespace

GridFunction oracle_eval(const GridFunction& f, const OracleRequest& req) {
  if (req.refinement < 1) throw std::invalid_argument("oracle: refinement must be >= 1");
  Index fine_cells = f.spec.cell_count();
  for (int k = 0; k < f.spec.dim; ++k) fine_cells *= req.refinement;
  if (fine_cells > kSizeGuard && !req.allow_large)
    throw std::invalid_argument("oracle: grid exceeds the direct-summation size guard");

  GridFunction out{f.spec, Array::Zero(f.spec.cell_count())};

  if (req.refinement == 1) {
    ExactOracle oracle(f);
    if (const auto* bm = std::get_if<BallMassRequest>(&req.op)) {
      out.values = oracle.ball_mass(f.values, bm->r);
      return out;
    }
    if (const auto* md = std::get_if<ModularRequest>(&req.op)) {
      Array g = f.values.abs().pow(md->p);
      out.values = oracle.ball_mass(g, md->r) * std::pow(md->r, -md->lambda);
      return out;
    }
    const OperatorSpec& op = std::get<OperatorSpec>(req.op);
    switch (op.kind) {
      case OperatorKind::Maximal: out.values = oracle.maximal_like(oracle_radii(f, req), 0.0); break;
      case OperatorKind::FracMaximal:
        out.values = oracle.maximal_like(oracle_radii(f, req), op.alpha);
        break;
      case OperatorKind::SharpMaximal: out.values = oracle.sharp(oracle_radii(f, req)); break;
      case OperatorKind::Riesz: out.values = oracle.riesz(op.alpha, true); break;
      case OperatorKind::HardyLower: out.values = oracle.hardy(op.alpha, true); break;
      case OperatorKind::HardyUpper: out.values = oracle.hardy(op.alpha, false); break;
      case OperatorKind::HybridK: out.values = oracle.hybrid(op.beta, true); break;
      case OperatorKind::HybridCalK: out.values = oracle.hybrid(op.beta, false); break;
      case OperatorKind::TruncatedSingular:
        out.values = oracle.singular(find_kernel(op.kernel_id), op.epsilon);
        break;
    }
    return out;
  }

  RefinedOracle oracle(f, req.refinement);
  if (const auto* bm = std::get_if<BallMassRequest>(&req.op)) {
    out.values = oracle.ball_mass(1.0, bm->r, false);
    return out;
  }
  if (const auto* md = std::get_if<ModularRequest>(&req.op)) {
    out.values = oracle.ball_mass(md->p, md->r, true) * std::pow(md->r, -md->lambda);
    return out;
  }
  const OperatorSpec& op = std::get<OperatorSpec>(req.op);
  switch (op.kind) {
    case OperatorKind::Maximal: out.values = oracle.maximal_like(oracle_radii(f, req), 0.0); break;
    case OperatorKind::FracMaximal:
      out.values = oracle.maximal_like(oracle_radii(f, req), op.alpha);
      break;
    case OperatorKind::SharpMaximal:
      throw std::invalid_argument("oracle: sharp maximal has no refined mode");
    case OperatorKind::Riesz: out.values = oracle.riesz(op.alpha, true); break;
    case OperatorKind::HardyLower: out.values = oracle.hardy(op.alpha, true); break;
    case OperatorKind::HardyUpper: out.values = oracle.hardy(op.alpha, false); break;
    case OperatorKind::HybridK: out.values = oracle.hybrid(op.beta, true); break;
    case OperatorKind::HybridCalK: out.values = oracle.hybrid(op.beta, false); break;
    case OperatorKind::TruncatedSingular:
      out.values = oracle.singular(find_kernel(op.kernel_id), op.epsilon);
      break;
  }
  return out;
}

}  // namespace morrey
