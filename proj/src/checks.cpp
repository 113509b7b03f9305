#include "morrey/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace morrey {

double sup_relative_error(const Array& a, const Array& b) {
  if (a.size() != b.size()) throw std::invalid_argument("sup_relative_error: size mismatch");
  double scale = b.abs().maxCoeff();
  double diff = (a - b).abs().maxCoeff();
  if (scale == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / scale;
}

DominanceReport check_dominance(const GridFunction& lhs, const GridFunction& rhs,
                                double constant, double slack, double tolerance,
                                const std::string& lhs_label, const std::string& rhs_label) {
  if (!(lhs.spec == rhs.spec)) throw std::invalid_argument("check_dominance: grid mismatch");
  if (!(constant > 0)) throw std::invalid_argument("check_dominance: constant must be positive");
  if (!(slack >= 1.0)) throw std::invalid_argument("check_dominance: slack must be >= 1");
  DominanceReport report;
  report.lhs_label = lhs_label;
  report.rhs_label = rhs_label;
  report.constant = constant;
  report.slack = slack;
  report.tolerance = tolerance;
  report.cells_evaluated = lhs.spec.cell_count();
  const double bound = slack * (1.0 + tolerance);
  for (Index i = 0; i < report.cells_evaluated; ++i) {
    double a = lhs.values[i];
    double b = constant * rhs.values[i];
    double ratio;
    if (a == 0.0) {
      ratio = 0.0;
    } else if (b == 0.0) {
      ratio = std::numeric_limits<double>::infinity();
    } else {
      ratio = a / b;
    }
    if (ratio > report.max_ratio) {
      report.max_ratio = ratio;
      report.argmax_cell = i;
    }
    if (ratio > bound) ++report.violation_count;
  }
  report.pass = report.violation_count == 0;
  return report;
}

ScalingReport check_scaling(const FamilyDescriptor& family, double t, const MorreyParams& mp,
                            const RadiusLadder& ladder, const GridSpec& spec) {
  if (!(t > 0)) throw std::invalid_argument("check_scaling: t must be positive");
  ScalingReport report;
  report.family = family.label();
  report.t = t;
  report.p = mp.p;
  report.lambda = mp.lambda;
  GridFunction f = synthesize(spec, family);
  GridFunction ft = synthesize(spec, dilate_family(family, t));
  double base = morrey_norm(f, mp, ladder);
  double dilated = morrey_norm(ft, mp, ladder);
  report.measured_ratio = dilated / base;
  report.predicted_ratio =
      std::pow(t, (mp.lambda - static_cast<double>(spec.dim)) / mp.p);
  report.deviation = std::abs(report.measured_ratio / report.predicted_ratio - 1.0);
  return report;
}

// ---------------------------------------------------------------------------
// Vanishing diagnostics

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Vanishing: return "vanishing";
    case Verdict::NonVanishing: return "non-vanishing";
    case Verdict::Inconclusive: return "inconclusive";
  }
  throw std::logic_error("unknown verdict");
}

Verdict classify_stat(double terminal_ratio, double slope, bool positive_slope_expected,
                      const VanishingThresholds& thresholds, bool degenerate_zero) {
  if (degenerate_zero) return Verdict::Vanishing;
  if (terminal_ratio > thresholds.nonvanish_above) return Verdict::NonVanishing;
  bool slope_ok = positive_slope_expected ? slope > thresholds.slope_margin
                                          : slope < -thresholds.slope_margin;
  if (terminal_ratio < thresholds.vanish_below && (slope_ok || terminal_ratio == 0.0))
    return Verdict::Vanishing;
  return Verdict::Inconclusive;
}

namespace {

// Least-squares slope of ln(value) against ln(abscissa) over [begin, end),
// skipping nonpositive values.
double loglog_slope(const std::vector<double>& xs, const std::vector<double>& vs,
                    std::size_t begin, std::size_t end) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t k = begin; k < end && k < xs.size(); ++k) {
    if (!(vs[k] > 0.0)) continue;
    double x = std::log(xs[k]);
    double y = std::log(vs[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return 0.0;
  double denom = sxx - sx * sx / n;
  if (denom == 0.0) return 0.0;
  return (sxy - sx * sy / n) / denom;
}

}  // namespace

VanishingDiagnosis classify_vanishing(const GridFunction& f, const MorreyParams& mp,
                                      const RadiusLadder& ladder, int n_max,
                                      const VanishingThresholds& thresholds,
                                      double vstar_radius) {
  VanishingDiagnosis diag;
  diag.thresholds = thresholds;
  diag.profile = modular_profile(f, mp, ladder);
  diag.sequence = vstar_sequence(f, mp.p, n_max, vstar_radius);

  const std::vector<double>& sup = diag.profile.sup_values;
  const double profile_max = diag.profile.max_value();
  diag.degenerate_zero = profile_max == 0.0 && diag.sequence.max_value() == 0.0;

  std::size_t fit = static_cast<std::size_t>(std::max(2, thresholds.fit_points));

  if (profile_max > 0.0) {
    diag.v0.terminal_ratio = sup.front() / profile_max;
    diag.v0.slope = loglog_slope(diag.profile.radii, sup, 0, fit);
    diag.vinf.terminal_ratio = sup.back() / profile_max;
    std::size_t lo = sup.size() > fit ? sup.size() - fit : 0;
    diag.vinf.slope = loglog_slope(diag.profile.radii, sup, lo, sup.size());
  }
  diag.v0.verdict =
      classify_stat(diag.v0.terminal_ratio, diag.v0.slope, true, thresholds, diag.degenerate_zero);
  diag.vinf.verdict = classify_stat(diag.vinf.terminal_ratio, diag.vinf.slope, false, thresholds,
                                    diag.degenerate_zero);

  const std::vector<double>& a = diag.sequence.a_values;
  double a_max = diag.sequence.max_value();
  if (a_max > 0.0) {
    diag.vstar.terminal_ratio = a.back() / a_max;
    std::vector<double> ns(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) ns[k] = static_cast<double>(k + 1);
    std::size_t lo = a.size() > fit ? a.size() - fit : 0;
    diag.vstar.slope = loglog_slope(ns, a, lo, a.size());
    // A_N hitting exact zero at the tail is the strongest possible decay.
    if (a.back() == 0.0) diag.vstar.slope = -std::numeric_limits<double>::max();
  }
  diag.vstar.verdict = classify_stat(diag.vstar.terminal_ratio, diag.vstar.slope, false,
                                     thresholds, diag.degenerate_zero);
  return diag;
}

// ---------------------------------------------------------------------------
// Exponent relations

std::string to_string(ExponentMode mode) {
  return mode == ExponentMode::Spanne ? "spanne" : "adams";
}

namespace {

constexpr double kRelTol = 1e-9;

bool close(double a, double b) { return std::abs(a - b) <= kRelTol * std::max(1.0, std::abs(b)); }

}  // namespace

void validate_spanne(int dim, double p, double lambda, double alpha, double q, double mu) {
  double n = static_cast<double>(dim);
  if (!(alpha > 0 && alpha < n))
    throw std::invalid_argument("spanne: need 0 < alpha < n");
  if (!(p > 1 && p < n / alpha))
    throw std::invalid_argument("spanne: need 1 < p < n/alpha");
  if (!close(1.0 / q, 1.0 / p - alpha / n))
    throw std::invalid_argument("spanne: relation 1/q = 1/p - alpha/n violated");
  if (!close(lambda / p, mu / q))
    throw std::invalid_argument("spanne: relation lambda/p = mu/q violated");
  if (!(lambda < n - alpha * p))
    throw std::invalid_argument("spanne: constraint lambda < n - alpha p violated");
}

void validate_adams(int dim, double p, double lambda, double alpha, double q, double mu) {
  double n = static_cast<double>(dim);
  if (!(alpha > 0 && alpha < n))
    throw std::invalid_argument("adams: need 0 < alpha < n");
  if (!close(mu, lambda))
    throw std::invalid_argument("adams: relation mu = lambda violated");
  if (!(p > 1 && p < (n - lambda) / alpha))
    throw std::invalid_argument("adams: constraint p < (n - lambda)/alpha violated");
  if (!close(1.0 / q, 1.0 / p - alpha / (n - lambda)))
    throw std::invalid_argument("adams: relation 1/q = 1/p - alpha/(n - lambda) violated");
}

// ---------------------------------------------------------------------------
// Preservation

PreservationReport preservation_report(const GridFunction& f, const OperatorSpec& op,
                                       const MorreyParams& in_params,
                                       const MorreyParams& out_params,
                                       const RadiusLadder& ladder, int n_max,
                                       const VanishingThresholds& thresholds,
                                       const ApplyOptions& options) {
  int dim = f.spec.dim;
  in_params.validate(dim);
  out_params.validate(dim);

  bool fractional = false;
  switch (op.kind) {
    case OperatorKind::Riesz:
      fractional = true;
      break;
    case OperatorKind::FracMaximal:
    case OperatorKind::HardyLower:
    case OperatorKind::HardyUpper:
      fractional = op.alpha > 0.0;
      break;
    default:
      break;
  }
  if (fractional) {
    // Either exponent regime is admissible; try Spanne first, then Adams,
    // reporting the Adams failure when neither fits.
    try {
      validate_spanne(dim, in_params.p, in_params.lambda, op.alpha, out_params.p,
                      out_params.lambda);
    } catch (const std::invalid_argument&) {
      validate_adams(dim, in_params.p, in_params.lambda, op.alpha, out_params.p,
                     out_params.lambda);
    }
  } else {
    if (out_params.p != in_params.p || out_params.lambda != in_params.lambda)
      throw std::invalid_argument(
          "preservation: same-space operator requires out (p, lambda) = in (p, lambda)");
  }

  PreservationReport report;
  report.op = op;
  report.in_params = in_params;
  report.out_params = out_params;
  report.vstar_exploratory = op.kind == OperatorKind::TruncatedSingular;
  report.input = classify_vanishing(f, in_params, ladder, n_max, thresholds);
  GridFunction tf = apply_operator(op, f, options);
  report.output = classify_vanishing(tf, out_params, ladder, n_max, thresholds);

  auto holds = [](const PropertyDiagnosis& in, const PropertyDiagnosis& out) {
    return in.verdict != Verdict::Vanishing || out.verdict == Verdict::Vanishing;
  };
  report.preserved = holds(report.input.v0, report.output.v0) &&
                     holds(report.input.vinf, report.output.vinf) &&
                     (report.vstar_exploratory ||
                      holds(report.input.vstar, report.output.vstar));
  return report;
}

// ---------------------------------------------------------------------------
// Modular estimate shape checks

BoundReport modular_bound_report(const GridFunction& f, const GridFunction& Tf,
                                 const MorreyParams& mp, const RadiusLadder& ladder,
                                 bool two_index) {
  if (!(f.spec == Tf.spec)) throw std::invalid_argument("modular_bound: grid mismatch");
  double n = static_cast<double>(f.spec.dim);
  if (!(mp.lambda < n))
    throw std::invalid_argument("modular_bound: divergent tail, need lambda < n");
  if (two_index && (!mp.q || !mp.mu))
    throw std::invalid_argument("modular_bound: two-index form needs (q, mu)");
  if (two_index && !(*mp.mu < n))
    throw std::invalid_argument("modular_bound: divergent tail, need mu < n");
  if (ladder.top() < f.spec.diameter())
    throw std::invalid_argument("modular_bound: ladder must reach the domain diameter");

  BoundReport report;
  report.two_index = two_index;
  report.params = mp;
  report.radii = ladder.radii();

  MorreyParams out_params{two_index ? *mp.q : mp.p, two_index ? *mp.mu : mp.lambda, {}, {}};
  ModularFieldSet source = modular_field_set(f, MorreyParams{mp.p, mp.lambda, {}, {}}, ladder);
  if (source.total_p_mass == 0.0) {
    report.empty = true;
    return report;
  }
  ModularFieldSet lhs = modular_field_set(Tf, out_params, ladder);

  const std::size_t nk = report.radii.size();
  const double inv_p = 1.0 / mp.p;
  const double outer_pow = two_index ? *mp.q : mp.p;
  const double e1 = two_index ? mp.lambda / mp.p - n / *mp.q - 1.0
                              : (mp.lambda - n) / mp.p - 1.0;
  const double tail_expo = two_index ? n / *mp.q : n / mp.p;
  const double r_top = report.radii.back();
  const double mass_piece = std::pow(source.total_p_mass, inv_p) / tail_expo;

  std::vector<double> log_r(nk);
  for (std::size_t k = 0; k < nk; ++k) log_r[k] = std::log(report.radii[k]);

  // psi_k = t_k^{e1+1} * modular(f; x, t_k)^{1/p}; the +1 is the Jacobian of
  // the log substitution, so a trapezoid in log t integrates psi d(log t).
  std::vector<double> psi(nk);
  for (Index i = 0; i < f.spec.cell_count(); ++i) {
    for (std::size_t k = 0; k < nk; ++k)
      psi[k] = std::pow(report.radii[k], e1 + 1.0) * std::pow(source.at(k, i), inv_p);
    // Closed-form tail of the zero-extended mass from the ladder top, then
    // suffix trapezoids working down the ladder.
    double integral = mass_piece * std::pow(r_top, -tail_expo);
    for (std::size_t k = nk; k-- > 0;) {
      double rhs = std::pow(report.radii[k], n - out_params.lambda) *
                   std::pow(integral, outer_pow);
      double lhs_val = lhs.at(k, i);
      if (rhs == 0.0) {
        if (lhs_val != 0.0) ++report.rhs_zero_cells;
      } else {
        double ratio = lhs_val / rhs;
        if (ratio > report.max_ratio) {
          report.max_ratio = ratio;
          report.argmax_cell = i;
          report.argmax_radius = report.radii[k];
        }
      }
      if (k > 0) integral += 0.5 * (log_r[k] - log_r[k - 1]) * (psi[k] + psi[k - 1]);
    }
  }
  report.fitted_constant = report.max_ratio;
  return report;
}

// ---------------------------------------------------------------------------
// Hedberg constant

HedbergReport hedberg_report(const GridFunction& f, double alpha, const MorreyParams& mp,
                             const RadiusLadder& ladder, const ConvPolicy& policy) {
  if (!mp.q) throw std::invalid_argument("hedberg: needs the Adams output exponent q");
  validate_adams(f.spec.dim, mp.p, mp.lambda, alpha, *mp.q, mp.lambda);

  HedbergReport report;
  report.alpha = alpha;
  report.p = mp.p;
  report.lambda = mp.lambda;
  report.q = *mp.q;

  GridFunction mf = maximal(f, ladder);
  GridFunction iaf = riesz(f, alpha, policy);
  report.norm = morrey_norm(f, MorreyParams{mp.p, mp.lambda, {}, {}}, ladder, policy);
  if (report.norm == 0.0) {
    report.empty = true;
    return report;
  }
  const double expo = mp.p / *mp.q;
  const double norm_piece = std::pow(report.norm, 1.0 - expo);
  for (Index i = 0; i < f.spec.cell_count(); ++i) {
    if (mf.values[i] == 0.0) {
      ++report.cells_excluded;
      continue;
    }
    double denom = std::pow(mf.values[i], expo) * norm_piece;
    double c = std::abs(iaf.values[i]) / denom;
    report.c_emp = std::max(report.c_emp, c);
    ++report.cells_used;
  }
  report.empty = report.cells_used == 0;
  return report;
}

// ---------------------------------------------------------------------------
// Scale-invariance of the two-space norm quotient

RatioReport exponent_ratio_report(const FamilyDescriptor& family,
                                  const std::vector<double>& t_list, double alpha,
                                  ExponentMode mode, const MorreyParams& mp,
                                  const GridSpec& spec, const RadiusLadder& ladder,
                                  const ConvPolicy& policy) {
  if (t_list.empty()) throw std::invalid_argument("exponent_ratio: empty t list");
  if (!mp.q || !mp.mu) throw std::invalid_argument("exponent_ratio: needs (q, mu)");
  if (mode == ExponentMode::Spanne)
    validate_spanne(spec.dim, mp.p, mp.lambda, alpha, *mp.q, *mp.mu);
  else
    validate_adams(spec.dim, mp.p, mp.lambda, alpha, *mp.q, *mp.mu);

  RatioReport report;
  report.mode = mode;
  report.alpha = alpha;
  report.params = mp;
  report.t_list = t_list;
  MorreyParams in{mp.p, mp.lambda, {}, {}};
  MorreyParams out{*mp.q, *mp.mu, {}, {}};
  for (double t : t_list) {
    if (!(t > 0)) throw std::invalid_argument("exponent_ratio: t must be positive");
    GridFunction ft = synthesize(spec, dilate_family(family, t));
    GridFunction iaf = riesz(ft, alpha, policy);
    double num = morrey_norm(iaf, out, ladder, policy);
    double den = morrey_norm(ft, in, ladder, policy);
    report.r_values.push_back(num / den);
  }
  double lo = *std::min_element(report.r_values.begin(), report.r_values.end());
  double hi = *std::max_element(report.r_values.begin(), report.r_values.end());
  report.spread = lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
  return report;
}

}  // namespace morrey
