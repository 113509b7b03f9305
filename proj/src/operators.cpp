#include "morrey/operators.hpp"

#include "morrey/detail/fft.hpp"
#include "morrey/detail/windows.hpp"
#include "morrey/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace morrey {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

double hn_of(const GridSpec& spec) { return std::pow(spec.spacing(), spec.dim); }

// Ladder rungs for maximal-type operators. Rungs past the first
// domain-covering radius see the same clipped ball from every center and
// contribute nothing new, so they are dropped.
std::vector<double> effective_rungs(const GridSpec& spec, const RadiusLadder& ladder) {
  std::vector<double> out;
  for (double r : ladder.radii()) {
    out.push_back(r);
    if (detail::make_ball_shape(spec, r).covers_domain) break;
  }
  return out;
}

// Geometry tables shared by the quadratic-cost operators.
struct CellGeom {
  std::vector<std::int64_t> norm2;
  std::vector<std::array<Index, 3>> multi;
  Array coords;  // cells * dim

  explicit CellGeom(const GridSpec& spec)
      : norm2(spec.cell_count()),
        multi(spec.cell_count()),
        coords(spec.cell_count() * spec.dim) {
    parallel_for(spec.cell_count(), [&](Index b, Index e) {
      Index m[3];
      for (Index i = b; i < e; ++i) {
        spec.decode(i, m);
        std::int64_t s = 0;
        for (int k = 0; k < spec.dim; ++k) {
          multi[i][k] = m[k];
          std::int64_t u = spec.odd_coord(m[k]);
          s += u * u;
          coords[i * spec.dim + k] = spec.center_coord(m[k]);
        }
        norm2[i] = s;
      }
    });
  }

  std::int64_t dist2(Index i, Index j, int dim) const {
    std::int64_t s = 0;
    for (int k = 0; k < dim; ++k) {
      std::int64_t d = multi[i][k] - multi[j][k];
      s += d * d;
    }
    return s;
  }
};

// Cells sorted by |center| (ties broken by linear index); prefix/suffix sums
// over this order give all strict radial cuts in O(log) per query.
struct RadialOrder {
  std::vector<Index> order;
  std::vector<std::int64_t> norm2_sorted;

  explicit RadialOrder(const std::vector<std::int64_t>& norm2) {
    order.resize(norm2.size());
    std::iota(order.begin(), order.end(), Index(0));
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
      return norm2[a] != norm2[b] ? norm2[a] < norm2[b] : a < b;
    });
    norm2_sorted.resize(norm2.size());
    for (std::size_t k = 0; k < order.size(); ++k) norm2_sorted[k] = norm2[order[k]];
  }

  // First sorted position with norm2 >= v (everything before is |y| < |x|).
  std::size_t lower(std::int64_t v) const {
    return std::lower_bound(norm2_sorted.begin(), norm2_sorted.end(), v) -
           norm2_sorted.begin();
  }
  // First sorted position with norm2 > v (everything from here is |y| > |x|).
  std::size_t upper(std::int64_t v) const {
    return std::upper_bound(norm2_sorted.begin(), norm2_sorted.end(), v) -
           norm2_sorted.begin();
  }
};

}  // namespace

std::string to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::Maximal: return "maximal";
    case OperatorKind::SharpMaximal: return "sharp_maximal";
    case OperatorKind::FracMaximal: return "frac_maximal";
    case OperatorKind::Riesz: return "riesz";
    case OperatorKind::HardyLower: return "hardy_lower";
    case OperatorKind::HardyUpper: return "hardy_upper";
    case OperatorKind::HybridK: return "hybrid_k";
    case OperatorKind::HybridCalK: return "hybrid_calk";
    case OperatorKind::TruncatedSingular: return "truncated_singular";
  }
  throw std::logic_error("unknown operator kind");
}

OperatorKind operator_kind_from_string(const std::string& s) {
  if (s == "maximal") return OperatorKind::Maximal;
  if (s == "sharp_maximal") return OperatorKind::SharpMaximal;
  if (s == "frac_maximal") return OperatorKind::FracMaximal;
  if (s == "riesz") return OperatorKind::Riesz;
  if (s == "hardy_lower") return OperatorKind::HardyLower;
  if (s == "hardy_upper") return OperatorKind::HardyUpper;
  if (s == "hybrid_k") return OperatorKind::HybridK;
  if (s == "hybrid_calk") return OperatorKind::HybridCalK;
  if (s == "truncated_singular") return OperatorKind::TruncatedSingular;
  throw std::invalid_argument("unknown operator kind: " + s);
}

std::string OperatorSpec::label() const {
  std::string s = to_string(kind);
  switch (kind) {
    case OperatorKind::FracMaximal:
    case OperatorKind::Riesz:
    case OperatorKind::HardyLower:
    case OperatorKind::HardyUpper:
      return s + "(alpha=" + std::to_string(alpha) + ")";
    case OperatorKind::HybridK:
    case OperatorKind::HybridCalK:
      return s + "(beta=" + std::to_string(beta) + ")";
    case OperatorKind::TruncatedSingular:
      return s + "(" + kernel_id + ",eps=" + std::to_string(epsilon) + ")";
    default:
      return s;
  }
}

// ---------------------------------------------------------------------------
// Kernels

namespace {

double hilbert1d_eval(const double* x, const double* y, int) { return 1.0 / (x[0] - y[0]); }

double riesz_transform1_eval(const double* x, const double* y, int dim) {
  double d2 = 0;
  for (int k = 0; k < dim; ++k) d2 += (x[k] - y[k]) * (x[k] - y[k]);
  double d = std::sqrt(d2);
  return (x[0] - y[0]) / (std::pow(d, dim) * d);
}

const KernelSpec kKernels[] = {
    {"hilbert1d", 1, 1.0, hilbert1d_eval},
    {"riesztransform1", 0, 1.0, riesz_transform1_eval},
};

}  // namespace

const KernelSpec& find_kernel(const std::string& id) {
  for (const auto& k : kKernels)
    if (k.id == id) return k;
  throw std::invalid_argument("unknown kernel: " + id);
}

std::vector<std::string> kernel_ids() {
  std::vector<std::string> ids;
  for (const auto& k : kKernels) ids.push_back(k.id);
  return ids;
}

// ---------------------------------------------------------------------------
// Maximal family

namespace {

GridFunction frac_maximal_impl(const GridFunction& f, double alpha,
                               const RadiusLadder& ladder) {
  const GridSpec& spec = f.spec;
  const double hn = hn_of(spec);
  const double expo = alpha / static_cast<double>(spec.dim);
  GridFunction absf{spec, f.values.abs()};
  detail::PrefixTable prefix = detail::build_prefix(absf);
  GridFunction out{spec, Array::Zero(spec.cell_count())};
  double* o = out.values.data();
  for (double r : effective_rungs(spec, ladder)) {
    detail::BallShape shape = detail::make_ball_shape(spec, r);
    if (shape.covers_domain) {
      double s = detail::full_sum(prefix);
      double c = static_cast<double>(spec.cell_count());
      double val = (s / c) * std::pow(c * hn, expo);
      for (Index i = 0; i < spec.cell_count(); ++i) o[i] = std::max(o[i], val);
      continue;
    }
    parallel_for(spec.cell_count(), [&](Index b, Index e) {
      for (Index i = b; i < e; ++i) {
        double s = detail::window_sum(spec, prefix, shape, i);
        double c = static_cast<double>(detail::window_count(spec, shape, i));
        double val = (s / c) * std::pow(c * hn, expo);
        o[i] = std::max(o[i], val);
      }
    });
  }
  return out;
}

}  // namespace

GridFunction maximal(const GridFunction& f, const RadiusLadder& ladder) {
  return frac_maximal_impl(f, 0.0, ladder);
}

GridFunction frac_maximal(const GridFunction& f, double alpha, const RadiusLadder& ladder) {
  require(alpha >= 0.0 && alpha < static_cast<double>(f.spec.dim),
          "frac_maximal: need 0 <= alpha < n");
  return frac_maximal_impl(f, alpha, ladder);
}

GridFunction sharp_maximal(const GridFunction& f, const RadiusLadder& ladder) {
  const GridSpec& spec = f.spec;
  detail::PrefixTable prefix = detail::build_prefix(f);  // signed means
  const double* fv = f.values.data();
  GridFunction out{spec, Array::Zero(spec.cell_count())};
  double* o = out.values.data();
  for (double r : effective_rungs(spec, ladder)) {
    detail::BallShape shape = detail::make_ball_shape(spec, r);
    if (shape.covers_domain) {
      // Same cells and traversal from every center: one evaluation serves all.
      double c = static_cast<double>(spec.cell_count());
      double mean = detail::window_sum(spec, prefix, shape, 0) / c;
      double acc = 0.0;
      detail::for_each_ball_cell(spec, shape, 0,
                                 [&](Index j) { acc += std::abs(fv[j] - mean); });
      double val = acc / c;
      for (Index i = 0; i < spec.cell_count(); ++i) o[i] = std::max(o[i], val);
      continue;
    }
    parallel_for(spec.cell_count(), [&](Index b, Index e) {
      for (Index i = b; i < e; ++i) {
        double c = static_cast<double>(detail::window_count(spec, shape, i));
        double mean = detail::window_sum(spec, prefix, shape, i) / c;
        double acc = 0.0;
        detail::for_each_ball_cell(spec, shape, i,
                                   [&](Index j) { acc += std::abs(fv[j] - mean); });
        o[i] = std::max(o[i], acc / c);
      }
    });
  }
  return out;
}

// ---------------------------------------------------------------------------
// Riesz potential

double self_cell_integral(const GridSpec& spec, double a) {
  double n = static_cast<double>(spec.dim);
  double vn = spec.unit_ball_volume();
  double rho = spec.spacing() * std::pow(vn, -1.0 / n);
  return n * vn * std::pow(rho, a) / a;
}

GridFunction riesz(const GridFunction& f, double alpha, const ConvPolicy& policy,
                   bool self_cell) {
  const GridSpec& spec = f.spec;
  require(alpha > 0.0 && alpha < static_cast<double>(spec.dim),
          "riesz: need 0 < alpha < n");
  const double h = spec.spacing();
  const double hn = hn_of(spec);
  const double expo = alpha - static_cast<double>(spec.dim);
  const double self_weight = self_cell ? self_cell_integral(spec, alpha) / hn : 0.0;
  auto kernel = [&](std::int64_t k2) -> double {
    if (k2 == 0) return self_weight;
    return std::pow(h * std::sqrt(static_cast<double>(k2)), expo);
  };

  GridFunction out{spec, Array::Zero(spec.cell_count())};
  if (policy.use_fft(spec.cell_count())) {
    out.values = hn * detail::convolve_offsets(spec, f.values, kernel, spec.cells_per_axis - 1);
    return out;
  }

  // Direct path: kernel values tabulated per integer offset, summed over all
  // cells in linear order.
  const Index n = spec.cells_per_axis;
  const Index span = 2 * n - 1;
  Index tsize = 1;
  for (int k = 0; k < spec.dim; ++k) tsize *= span;
  Array table(tsize);
  {
    std::vector<std::int64_t> off(spec.dim, -(n - 1));
    Index idx = 0;
    while (true) {
      std::int64_t k2 = 0;
      for (int k = 0; k < spec.dim; ++k) k2 += off[k] * off[k];
      table[idx++] = kernel(k2);
      int axis = spec.dim - 1;
      while (axis >= 0 && ++off[axis] > n - 1) {
        off[axis] = -(n - 1);
        --axis;
      }
      if (axis < 0) break;
    }
  }
  CellGeom geom(spec);
  const double* fv = f.values.data();
  double* o = out.values.data();
  parallel_for(spec.cell_count(), [&](Index b, Index e) {
    for (Index i = b; i < e; ++i) {
      double acc = 0.0;
      for (Index j = 0; j < spec.cell_count(); ++j) {
        Index idx = 0;
        for (int k = 0; k < spec.dim; ++k)
          idx = idx * span + (geom.multi[i][k] - geom.multi[j][k] + n - 1);
        acc += fv[j] * table[idx];
      }
      o[i] = hn * acc;
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// Hardy operators (radial prefix/suffix sums)

GridFunction hardy_lower(const GridFunction& f, double alpha) {
  const GridSpec& spec = f.spec;
  require(alpha >= 0.0 && alpha < static_cast<double>(spec.dim),
          "hardy_lower: need 0 <= alpha < n");
  const double hn = hn_of(spec);
  const double expo = alpha - static_cast<double>(spec.dim);
  CellGeom geom(spec);
  RadialOrder radial(geom.norm2);
  std::vector<double> prefix(spec.cell_count() + 1, 0.0);
  for (Index k = 0; k < spec.cell_count(); ++k)
    prefix[k + 1] = prefix[k] + f.values[radial.order[k]];
  GridFunction out{spec, Array::Zero(spec.cell_count())};
  double* o = out.values.data();
  parallel_for(spec.cell_count(), [&](Index b, Index e) {
    for (Index i = b; i < e; ++i) {
      double sum = prefix[radial.lower(geom.norm2[i])];
      double nx = 0.5 * spec.spacing() * std::sqrt(static_cast<double>(geom.norm2[i]));
      o[i] = std::pow(nx, expo) * hn * sum;
    }
  });
  return out;
}

GridFunction hardy_upper(const GridFunction& f, double alpha) {
  const GridSpec& spec = f.spec;
  require(alpha >= 0.0 && alpha < static_cast<double>(spec.dim),
          "hardy_upper: need 0 <= alpha < n");
  const double hn = hn_of(spec);
  const double nd = static_cast<double>(spec.dim);
  CellGeom geom(spec);
  RadialOrder radial(geom.norm2);
  // Suffix sums of f(y) |y|^{-n} in radial order; |y| is never zero.
  std::vector<double> suffix(spec.cell_count() + 1, 0.0);
  for (Index k = spec.cell_count() - 1; k >= 0; --k) {
    Index cell = radial.order[k];
    double ny = 0.5 * spec.spacing() * std::sqrt(static_cast<double>(geom.norm2[cell]));
    suffix[k] = suffix[k + 1] + f.values[cell] * std::pow(ny, -nd);
  }
  GridFunction out{spec, Array::Zero(spec.cell_count())};
  double* o = out.values.data();
  parallel_for(spec.cell_count(), [&](Index b, Index e) {
    for (Index i = b; i < e; ++i) {
      double sum = suffix[radial.upper(geom.norm2[i])];
      double nx = 0.5 * spec.spacing() * std::sqrt(static_cast<double>(geom.norm2[i]));
      o[i] = std::pow(nx, alpha) * hn * sum;
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// Hybrid operators

namespace {

GridFunction hybrid_impl(const GridFunction& f, double beta, bool lower_region) {
  const GridSpec& spec = f.spec;
  require(beta > 0.0 && beta <= static_cast<double>(spec.dim),
          "hybrid operators: need 0 < beta <= n");
  const double h = spec.spacing();
  const double hn = hn_of(spec);
  const double nd = static_cast<double>(spec.dim);
  const double expo = beta - nd;
  const double near_weight = self_cell_integral(spec, beta) / hn;
  CellGeom geom(spec);
  const double* fv = f.values.data();
  GridFunction out{spec, Array::Zero(spec.cell_count())};
  double* o = out.values.data();
  parallel_for(spec.cell_count(), [&](Index b, Index e) {
    for (Index i = b; i < e; ++i) {
      const std::int64_t n2x = geom.norm2[i];
      double acc = 0.0;
      for (Index j = 0; j < spec.cell_count(); ++j) {
        if (lower_region ? !(geom.norm2[j] < n2x) : !(geom.norm2[j] > n2x)) continue;
        std::int64_t k2 = geom.dist2(i, j, spec.dim);
        double dist = h * std::sqrt(static_cast<double>(k2));
        // Distinct cells are at least h apart; the near rule only guards
        // the (unreachable on these regions) coincident case.
        double w = dist < h ? near_weight : std::pow(dist, expo);
        if (lower_region) {
          acc += fv[j] * w;
        } else {
          double ny = 0.5 * h * std::sqrt(static_cast<double>(geom.norm2[j]));
          acc += fv[j] * std::pow(ny, -beta) * w;
        }
      }
      if (lower_region) {
        double nx = 0.5 * h * std::sqrt(static_cast<double>(n2x));
        o[i] = std::pow(nx, -beta) * hn * acc;
      } else {
        o[i] = hn * acc;
      }
    }
  });
  return out;
}

}  // namespace

GridFunction hybrid_K(const GridFunction& f, double beta) { return hybrid_impl(f, beta, true); }

GridFunction hybrid_calK(const GridFunction& f, double beta) {
  return hybrid_impl(f, beta, false);
}

// ---------------------------------------------------------------------------
// Truncated singular integral

GridFunction truncated_singular(const GridFunction& f, const KernelSpec& kernel, double eps) {
  const GridSpec& spec = f.spec;
  require(kernel.eval != nullptr, "truncated_singular: kernel has no evaluator");
  require(kernel.dim == 0 || kernel.dim == spec.dim,
          "truncated_singular: kernel dimension mismatch");
  const double h = spec.spacing();
  require(eps >= h, "truncated_singular: need eps >= grid spacing");
  const double hn = hn_of(spec);
  CellGeom geom(spec);
  const double* fv = f.values.data();
  GridFunction out{spec, Array::Zero(spec.cell_count())};
  double* o = out.values.data();
  parallel_for(spec.cell_count(), [&](Index b, Index e) {
    for (Index i = b; i < e; ++i) {
      const double* x = geom.coords.data() + i * spec.dim;
      double acc = 0.0;
      for (Index j = 0; j < spec.cell_count(); ++j) {
        std::int64_t k2 = geom.dist2(i, j, spec.dim);
        // strict truncation |x - y| > eps, decided on exact integer geometry
        if (!(h * h * static_cast<double>(k2) > eps * eps)) continue;
        acc += kernel.eval(x, geom.coords.data() + j * spec.dim, spec.dim) * fv[j];
      }
      o[i] = hn * acc;
    }
  });
  return out;
}

// ---------------------------------------------------------------------------

GridFunction apply_operator(const OperatorSpec& spec, const GridFunction& f,
                            const ApplyOptions& options) {
  RadiusLadder ladder = options.ladder ? *options.ladder : cover_ladder(f.spec);
  switch (spec.kind) {
    case OperatorKind::Maximal: return maximal(f, ladder);
    case OperatorKind::SharpMaximal: return sharp_maximal(f, ladder);
    case OperatorKind::FracMaximal: return frac_maximal(f, spec.alpha, ladder);
    case OperatorKind::Riesz: return riesz(f, spec.alpha, options.conv, options.riesz_self_cell);
    case OperatorKind::HardyLower: return hardy_lower(f, spec.alpha);
    case OperatorKind::HardyUpper: return hardy_upper(f, spec.alpha);
    case OperatorKind::HybridK: return hybrid_K(f, spec.beta);
    case OperatorKind::HybridCalK: return hybrid_calK(f, spec.beta);
    case OperatorKind::TruncatedSingular:
      return truncated_singular(f, find_kernel(spec.kernel_id), spec.epsilon);
  }
  throw std::logic_error("apply_operator: unknown kind");
}

}  // namespace morrey
