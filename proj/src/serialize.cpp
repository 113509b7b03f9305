#include "morrey/serialize.hpp"

#include <cmath>
#include <limits>

namespace morrey {

namespace {

// JSON has no infinities; clamp the sentinel slopes.
double finite(double x) {
  if (std::isfinite(x)) return x;
  return x > 0 ? std::numeric_limits<double>::max() : -std::numeric_limits<double>::max();
}

}  // namespace

Json to_json(const GridSpec& spec) {
  return Json{{"dim", spec.dim},
              {"half_width", spec.half_width},
              {"cells_per_axis", spec.cells_per_axis},
              {"spacing", spec.spacing()},
              {"unit_ball_volume", spec.unit_ball_volume()}};
}

Json to_json(const MorreyParams& mp) {
  Json j{{"p", mp.p}, {"lambda", mp.lambda}};
  if (mp.q) j["q"] = *mp.q;
  if (mp.mu) j["mu"] = *mp.mu;
  return j;
}

Json to_json(const RadiusLadder& ladder) {
  return Json{{"r_min", ladder.r_min}, {"ratio", ladder.ratio}, {"count", ladder.count}};
}

Json to_json(const OperatorSpec& op) {
  Json j{{"kind", to_string(op.kind)}};
  switch (op.kind) {
    case OperatorKind::FracMaximal:
    case OperatorKind::Riesz:
    case OperatorKind::HardyLower:
    case OperatorKind::HardyUpper:
      j["alpha"] = op.alpha;
      break;
    case OperatorKind::HybridK:
    case OperatorKind::HybridCalK:
      j["beta"] = op.beta;
      break;
    case OperatorKind::TruncatedSingular:
      j["kernel"] = op.kernel_id;
      j["epsilon"] = op.epsilon;
      break;
    default:
      break;
  }
  return j;
}

OperatorSpec operator_spec_from_json(const Json& j) {
  OperatorSpec op;
  op.kind = operator_kind_from_string(j.at("kind").get<std::string>());
  if (j.contains("alpha")) op.alpha = j.at("alpha").get<double>();
  if (j.contains("beta")) op.beta = j.at("beta").get<double>();
  if (j.contains("epsilon")) op.epsilon = j.at("epsilon").get<double>();
  if (j.contains("kernel")) op.kernel_id = j.at("kernel").get<std::string>();
  return op;
}

Json to_json(const ModularProfile& profile) {
  return Json{{"params", to_json(profile.params)},
              {"radii", profile.radii},
              {"sup_values", profile.sup_values},
              {"total_p_mass", profile.total_p_mass},
              {"tail_start", profile.tail_start}};
}

Json to_json(const VStarSequence& seq) {
  return Json{{"p", seq.p}, {"ball_radius", seq.ball_radius}, {"a_values", seq.a_values}};
}

Json to_json(const DominanceReport& report) {
  return Json{{"lhs", report.lhs_label},
              {"rhs", report.rhs_label},
              {"constant", report.constant},
              {"slack", report.slack},
              {"tolerance", report.tolerance},
              {"max_ratio", finite(report.max_ratio)},
              {"violation_count", report.violation_count},
              {"cells_evaluated", report.cells_evaluated},
              {"argmax_cell", report.argmax_cell},
              {"pass", report.pass}};
}

Json to_json(const ScalingReport& report) {
  return Json{{"family", report.family},
              {"t", report.t},
              {"p", report.p},
              {"lambda", report.lambda},
              {"measured_ratio", report.measured_ratio},
              {"predicted_ratio", report.predicted_ratio},
              {"deviation", report.deviation}};
}

Json to_json(const VanishingThresholds& thresholds) {
  return Json{{"vanish_below", thresholds.vanish_below},
              {"nonvanish_above", thresholds.nonvanish_above},
              {"slope_margin", thresholds.slope_margin},
              {"fit_points", thresholds.fit_points}};
}

Json to_json(const PropertyDiagnosis& diag) {
  return Json{{"terminal_ratio", diag.terminal_ratio},
              {"slope", finite(diag.slope)},
              {"verdict", to_string(diag.verdict)}};
}

Json to_json(const VanishingDiagnosis& diag) {
  return Json{{"v0", to_json(diag.v0)},
              {"vinf", to_json(diag.vinf)},
              {"vstar", to_json(diag.vstar)},
              {"thresholds", to_json(diag.thresholds)},
              {"degenerate_zero", diag.degenerate_zero},
              {"profile", to_json(diag.profile)},
              {"vstar_sequence", to_json(diag.sequence)}};
}

Json to_json(const PreservationReport& report) {
  Json j{{"op", to_json(report.op)},
         {"in_params", to_json(report.in_params)},
         {"out_params", to_json(report.out_params)},
         {"input", to_json(report.input)},
         {"output", to_json(report.output)},
         {"preserved", report.preserved}};
  if (report.vstar_exploratory) j["vstar_status"] = "exploratory";
  return j;
}

Json to_json(const BoundReport& report) {
  return Json{{"two_index", report.two_index},
              {"params", to_json(report.params)},
              {"max_ratio", report.max_ratio},
              {"argmax_radius", report.argmax_radius},
              {"argmax_cell", report.argmax_cell},
              {"rhs_zero_cells", report.rhs_zero_cells},
              {"fitted_constant", report.fitted_constant},
              {"empty", report.empty}};
}

Json to_json(const HedbergReport& report) {
  return Json{{"alpha", report.alpha},
              {"p", report.p},
              {"lambda", report.lambda},
              {"q", report.q},
              {"norm", report.norm},
              {"c_emp", report.c_emp},
              {"cells_used", report.cells_used},
              {"cells_excluded", report.cells_excluded},
              {"empty", report.empty}};
}

Json to_json(const RatioReport& report) {
  return Json{{"mode", to_string(report.mode)},
              {"alpha", report.alpha},
              {"params", to_json(report.params)},
              {"t_list", report.t_list},
              {"r_values", report.r_values},
              {"spread", finite(report.spread)}};
}

Json make_report(const std::string& kind, const std::string& paper_ref, bool pass,
                 Json tolerances, Json payload) {
  Json j;
  j["kind"] = kind;
  j["paper_ref"] = paper_ref;
  j["pass"] = pass;
  j["tolerances"] = std::move(tolerances);
  for (auto& [key, value] : payload.items()) j[key] = std::move(value);
  return j;
}

}  // namespace morrey
