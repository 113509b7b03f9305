#include "morrey/cli.hpp"

#include "morrey/oracle.hpp"
#include "morrey/parallel.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

namespace morrey {

// ---------------------------------------------------------------------------
// RunConfig

GridSpec RunConfig::grid() const { return make_grid(grid_dim, grid_half_width, grid_cells); }

RadiusLadder RunConfig::ladder() const {
  if (ladder_count > 0) {
    RadiusLadder l{ladder_r_min, ladder_ratio, ladder_count};
    l.validate();
    return l;
  }
  return cover_ladder(grid(), ladder_r_min, ladder_ratio);
}

MorreyParams RunConfig::params() const { return MorreyParams{p, lambda, q, mu}; }

ConvPolicy RunConfig::conv_policy() const { return ConvPolicy{ConvMode::Auto, fft_threshold}; }

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos == value.size()) return v;
  } catch (...) {
  }
  throw std::invalid_argument("config: bad number for " + key);
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(value, &pos);
    if (pos == value.size()) return v;
  } catch (...) {
  }
  throw std::invalid_argument("config: bad integer for " + key);
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw std::invalid_argument("config: bad boolean for " + key);
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    if (s.front() == '[' && s.back() == ']') {
      section = s.substr(1, s.size() - 2);
      if (section != "grid" && section != "ladder" && section != "params" &&
          section != "run" && section != "thresholds")
        throw std::invalid_argument("config: unknown section [" + section + "]");
      continue;
    }
    std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key = value at line " +
                                  std::to_string(lineno));
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    std::string qual = section + "." + key;
    if (qual == "grid.dim") cfg.grid_dim = static_cast<int>(parse_int(qual, value));
    else if (qual == "grid.half_width") cfg.grid_half_width = parse_double(qual, value);
    else if (qual == "grid.cells") cfg.grid_cells = parse_int(qual, value);
    else if (qual == "ladder.r_min") cfg.ladder_r_min = parse_double(qual, value);
    else if (qual == "ladder.ratio") cfg.ladder_ratio = parse_double(qual, value);
    else if (qual == "ladder.count") cfg.ladder_count = static_cast<int>(parse_int(qual, value));
    else if (qual == "params.p") cfg.p = parse_double(qual, value);
    else if (qual == "params.lambda") cfg.lambda = parse_double(qual, value);
    else if (qual == "params.q") cfg.q = parse_double(qual, value);
    else if (qual == "params.mu") cfg.mu = parse_double(qual, value);
    else if (qual == "params.alpha") cfg.alpha = parse_double(qual, value);
    else if (qual == "params.beta") cfg.beta = parse_double(qual, value);
    else if (qual == "params.epsilon") cfg.epsilon = parse_double(qual, value);
    else if (qual == "run.seed") cfg.seed = static_cast<std::uint64_t>(parse_int(qual, value));
    else if (qual == "run.oracle") cfg.oracle = parse_bool(qual, value);
    else if (qual == "run.output") cfg.output = value;
    else if (qual == "thresholds.vanish_below") cfg.thresholds.vanish_below = parse_double(qual, value);
    else if (qual == "thresholds.nonvanish_above") cfg.thresholds.nonvanish_above = parse_double(qual, value);
    else if (qual == "thresholds.slope_margin") cfg.thresholds.slope_margin = parse_double(qual, value);
    else if (qual == "thresholds.fit_points") cfg.thresholds.fit_points = static_cast<int>(parse_int(qual, value));
    else if (qual == "thresholds.dominance_tol") cfg.dominance_tol = parse_double(qual, value);
    else if (qual == "thresholds.fft_threshold") cfg.fft_threshold = parse_int(qual, value);
    else throw std::invalid_argument("config: unknown key " + qual);
  }
  return cfg;
}

RunConfig read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string write_config_text(const RunConfig& cfg) {
  std::ostringstream out;
  out << "[grid]\n";
  out << "dim = " << cfg.grid_dim << "\n";
  out << "half_width = " << fmt_double(cfg.grid_half_width) << "\n";
  out << "cells = " << cfg.grid_cells << "\n";
  out << "[ladder]\n";
  out << "r_min = " << fmt_double(cfg.ladder_r_min) << "\n";
  out << "ratio = " << fmt_double(cfg.ladder_ratio) << "\n";
  out << "count = " << cfg.ladder_count << "\n";
  out << "[params]\n";
  out << "p = " << fmt_double(cfg.p) << "\n";
  out << "lambda = " << fmt_double(cfg.lambda) << "\n";
  if (cfg.q) out << "q = " << fmt_double(*cfg.q) << "\n";
  if (cfg.mu) out << "mu = " << fmt_double(*cfg.mu) << "\n";
  if (cfg.alpha) out << "alpha = " << fmt_double(*cfg.alpha) << "\n";
  if (cfg.beta) out << "beta = " << fmt_double(*cfg.beta) << "\n";
  if (cfg.epsilon) out << "epsilon = " << fmt_double(*cfg.epsilon) << "\n";
  out << "[run]\n";
  out << "seed = " << cfg.seed << "\n";
  out << "oracle = " << (cfg.oracle ? "true" : "false") << "\n";
  if (!cfg.output.empty()) out << "output = " << cfg.output << "\n";
  out << "[thresholds]\n";
  out << "vanish_below = " << fmt_double(cfg.thresholds.vanish_below) << "\n";
  out << "nonvanish_above = " << fmt_double(cfg.thresholds.nonvanish_above) << "\n";
  out << "slope_margin = " << fmt_double(cfg.thresholds.slope_margin) << "\n";
  out << "fit_points = " << cfg.thresholds.fit_points << "\n";
  out << "dominance_tol = " << fmt_double(cfg.dominance_tol) << "\n";
  out << "fft_threshold = " << cfg.fft_threshold << "\n";
  return out.str();
}

Json to_json(const RunConfig& cfg) {
  Json j;
  j["grid"] = {{"dim", cfg.grid_dim},
               {"half_width", cfg.grid_half_width},
               {"cells", cfg.grid_cells}};
  j["ladder"] = {{"r_min", cfg.ladder_r_min},
                 {"ratio", cfg.ladder_ratio},
                 {"count", cfg.ladder_count}};
  Json params{{"p", cfg.p}, {"lambda", cfg.lambda}};
  if (cfg.q) params["q"] = *cfg.q;
  if (cfg.mu) params["mu"] = *cfg.mu;
  if (cfg.alpha) params["alpha"] = *cfg.alpha;
  if (cfg.beta) params["beta"] = *cfg.beta;
  if (cfg.epsilon) params["epsilon"] = *cfg.epsilon;
  j["params"] = params;
  j["seed"] = cfg.seed;
  j["oracle"] = cfg.oracle;
  if (!cfg.output.empty()) j["output"] = cfg.output;
  j["thresholds"] = {{"vanish_below", cfg.thresholds.vanish_below},
                     {"nonvanish_above", cfg.thresholds.nonvanish_above},
                     {"slope_margin", cfg.thresholds.slope_margin},
                     {"fit_points", cfg.thresholds.fit_points},
                     {"dominance_tol", cfg.dominance_tol},
                     {"fft_threshold", cfg.fft_threshold}};
  return j;
}

// ---------------------------------------------------------------------------
// Preset suites

namespace {

FamilyDescriptor ball_family(double c, double r, double ht = 1.0) {
  return FamilyDescriptor{BallIndicator{{c, 0, 0}, r, ht}, 1.0};
}
FamilyDescriptor gaussian_family(double c, double w, double ht = 1.0) {
  return FamilyDescriptor{Gaussian{{c, 0, 0}, w, ht}, 1.0};
}
FamilyDescriptor powerlaw_family(double gamma) {
  return FamilyDescriptor{PowerLaw{gamma}, 1.0};
}
FamilyDescriptor bump_family(double c, double r, double ht = 1.0) {
  return FamilyDescriptor{SmoothBump{{c, 0, 0}, r, ht}, 1.0};
}
FamilyDescriptor train_family(double from, double to, double step, double r, double ht = 1.0) {
  BumpTrain train;
  for (double c = from; c <= to + 1e-9; c += step)
    train.bumps.push_back(SmoothBump{{c, 0, 0}, r, ht});
  return FamilyDescriptor{train, 1.0};
}

RunConfig config_for(const GridSpec& spec, const RadiusLadder& ladder, double p, double lambda) {
  RunConfig cfg;
  cfg.grid_dim = spec.dim;
  cfg.grid_half_width = spec.half_width;
  cfg.grid_cells = spec.cells_per_axis;
  cfg.ladder_r_min = ladder.r_min;
  cfg.ladder_ratio = ladder.ratio;
  cfg.ladder_count = ladder.count;
  cfg.p = p;
  cfg.lambda = lambda;
  return cfg;
}

struct ChainCheck {
  std::string name;
  DominanceReport report;
};

// The four slacked dominance checks on one function (f >= 0 families).
std::vector<ChainCheck> chain_checks(const GridFunction& f, const RadiusLadder& ladder,
                                     double alpha, double slack, double tol) {
  const double n = static_cast<double>(f.spec.dim);
  const double vn = f.spec.unit_ball_volume();
  GridFunction absf{f.spec, f.values.abs()};
  GridFunction mf = maximal(f, ladder);
  GridFunction mfa = frac_maximal(f, alpha, ladder);
  GridFunction iaf = riesz(absf, alpha);
  GridFunction hf = hardy_lower(absf, 0.0);
  GridFunction haf = hardy_lower(f, alpha);
  GridFunction calhaf = hardy_upper(f, alpha);
  GridFunction abs_haf{f.spec, haf.values.abs()};
  GridFunction abs_calhaf{f.spec, calhaf.values.abs()};

  std::vector<ChainCheck> checks;
  checks.push_back({"hardy-vs-max",
                    check_dominance(hf, mf, std::pow(2.0, n) * vn, slack, tol,
                                    "H(|f|)", "Mf")});
  checks.push_back({"hardyalpha-vs-fracmax",
                    check_dominance(abs_haf, mfa, vn * std::pow(2.0, n - alpha), slack, tol,
                                    "|H^a f|", "M^a f")});
  checks.push_back({"hardyalpha-vs-riesz",
                    check_dominance(abs_haf, iaf, std::pow(2.0, n - alpha), slack, tol,
                                    "|H^a f|", "I^a|f|")});
  checks.push_back({"calhardy-vs-riesz",
                    check_dominance(abs_calhaf, iaf, std::pow(2.0, n - alpha), slack, tol,
                                    "|calH^a f|", "I^a|f|")});
  return checks;
}

}  // namespace

SuiteResult run_dominance_on(const std::string& name, const GridFunction& f,
                             const RunConfig& config, std::optional<double> constant_override,
                             std::optional<double> slack_override,
                             const std::string& ratio_csv) {
  const GridSpec& spec = f.spec;
  const double n = static_cast<double>(spec.dim);
  const double vn = spec.unit_ball_volume();
  RadiusLadder ladder = config.ladder_count > 0
                            ? config.ladder()
                            : cover_ladder(spec, config.ladder_r_min, config.ladder_ratio);
  const double rho = ladder.ratio;
  const double tol = config.dominance_tol;
  const double chain_slack =
      slack_override ? *slack_override : std::pow(rho, n) * 1.05;

  Json checks = Json::array();
  bool pass = true;
  auto add = [&](const std::string& check_name, const DominanceReport& report) {
    Json cj = to_json(report);
    cj["name"] = check_name;
    checks.push_back(cj);
    pass = pass && report.pass;
  };
  // per-cell ratio field export: coordinates, lhs, constant*rhs, ratio
  auto export_ratio = [&](const GridFunction& lhs, const GridFunction& rhs, double constant) {
    if (ratio_csv.empty()) return;
    std::ofstream out(ratio_csv, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + ratio_csv);
    for (int k = 0; k < spec.dim; ++k) out << "x" << k << ",";
    out << "lhs,rhs,ratio\n";
    char buf[128];
    double point[3];
    for (Index i = 0; i < spec.cell_count(); ++i) {
      spec.center(i, point);
      for (int k = 0; k < spec.dim; ++k) {
        std::snprintf(buf, sizeof buf, "%.17g,", point[k]);
        out << buf;
      }
      double denom = constant * rhs.values[i];
      double ratio = lhs.values[i] == 0.0 ? 0.0 : lhs.values[i] / denom;
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", lhs.values[i], denom, ratio);
      out << buf;
    }
  };

  if (name == "sharp-vs-max") {
    GridFunction mf = maximal(f, ladder);
    GridFunction msf = sharp_maximal(f, ladder);
    double constant = constant_override ? *constant_override : 2.0;
    double slack = slack_override ? *slack_override : 1.0;
    add(name, check_dominance(msf, mf, constant, slack, tol, "M#f", "Mf"));
    export_ratio(msf, mf, constant);
  } else if (name == "hardy-vs-max") {
    GridFunction absf{spec, f.values.abs()};
    GridFunction mf = maximal(f, ladder);
    GridFunction hf = hardy_lower(absf, 0.0);
    double constant = constant_override ? *constant_override : std::pow(2.0, n) * vn;
    add(name, check_dominance(hf, mf, constant, chain_slack, tol, "H(|f|)", "Mf"));
    export_ratio(hf, mf, constant);
  } else if (name == "hardyalpha-chain") {
    double alpha = config.alpha.value_or(0.5);
    GridFunction haf = hardy_lower(f, alpha);
    GridFunction abs_haf{spec, haf.values.abs()};
    GridFunction mfa = frac_maximal(f, alpha, ladder);
    for (const auto& c : chain_checks(f, ladder, alpha, chain_slack, tol))
      if (c.name != "hardy-vs-max" && c.name != "calhardy-vs-riesz") add(c.name, c.report);
    export_ratio(abs_haf, mfa, vn * std::pow(2.0, n - alpha));
  } else if (name == "calhardy-vs-riesz") {
    double alpha = config.alpha.value_or(0.5);
    GridFunction absf{spec, f.values.abs()};
    GridFunction iaf = riesz(absf, alpha);
    GridFunction calhaf = hardy_upper(f, alpha);
    GridFunction lhs{spec, calhaf.values.abs()};
    double constant = constant_override ? *constant_override : std::pow(2.0, n - alpha);
    add(name, check_dominance(lhs, iaf, constant, chain_slack, tol, "|calH^a f|", "I^a|f|"));
    export_ratio(lhs, iaf, constant);
  } else if (name == "hedberg") {
    double alpha = config.alpha.value_or(0.1);
    MorreyParams mp = config.params();
    if (!mp.q) {
      double inv_q = 1.0 / mp.p - alpha / (n - mp.lambda);
      mp.q = 1.0 / inv_q;
    }
    HedbergReport hr = hedberg_report(f, alpha, mp, ladder);
    Json cj = to_json(hr);
    cj["name"] = name;
    checks.push_back(cj);
    pass = !hr.empty && std::isfinite(hr.c_emp) && hr.c_emp > 0;
  } else {
    throw std::invalid_argument("unknown dominance check: " + name);
  }

  static const std::map<std::string, std::string> refs = {
      {"sharp-vs-max", "ineq:sharp-max"},
      {"hardy-vs-max", "ineq:HMaximal"},
      {"hardyalpha-chain", "ineq:HMIalpha"},
      {"calhardy-vs-riesz", "ineq:mathcalHIalpha"},
      {"hedberg", "ineq:potential-maximal"},
  };
  RunConfig resolved = config;
  resolved.grid_dim = spec.dim;
  resolved.grid_half_width = spec.half_width;
  resolved.grid_cells = spec.cells_per_axis;
  resolved.ladder_r_min = ladder.r_min;
  resolved.ladder_ratio = ladder.ratio;
  resolved.ladder_count = ladder.count;
  Json payload{{"name", name}, {"checks", checks}, {"config", to_json(resolved)}};
  Json tolerances{{"dominance_tol", tol}, {"slack", name == "sharp-vs-max" ? 1.0 : chain_slack}};
  return SuiteResult{make_report("dominance", refs.at(name), pass, tolerances, payload), pass};
}

SuiteResult suite_sharp_dominance() {
  struct Case {
    GridSpec spec;
    std::vector<FamilyDescriptor> families;
  };
  std::vector<Case> cases;
  cases.push_back({make_grid(1, 8.0, 4096),
                   {ball_family(0, 1), gaussian_family(0.5, 1), powerlaw_family(0.5),
                    bump_family(0, 1), train_family(-6, 6, 3, 1)}});
  cases.push_back({make_grid(2, 4.0, 64),
                   {ball_family(0, 1), gaussian_family(0.5, 1), powerlaw_family(0.5),
                    bump_family(0, 1), train_family(-2, 2, 2, 0.8)}});

  Json checks = Json::array();
  bool pass = true;
  for (const auto& c : cases) {
    RadiusLadder ladder = cover_ladder(c.spec);
    for (const auto& family : c.families) {
      GridFunction f = synthesize(c.spec, family);
      GridFunction mf = maximal(f, ladder);
      GridFunction msf = sharp_maximal(f, ladder);
      DominanceReport report = check_dominance(msf, mf, 2.0, 1.0, 1e-12, "M#f", "Mf");
      Json cj = to_json(report);
      cj["family"] = family.label();
      cj["grid"] = to_json(c.spec);
      checks.push_back(cj);
      pass = pass && report.pass && report.violation_count == 0;
    }
  }
  Json payload{{"name", "sharp-vs-max"}, {"checks", checks},
               {"config", to_json(config_for(cases[0].spec, cover_ladder(cases[0].spec), 2, 0.5))}};
  return SuiteResult{
      make_report("dominance-suite", "ineq:sharp-max", pass, Json{{"slack", 1.0}}, payload),
      pass};
}

SuiteResult suite_dominance_chain() {
  const double alpha = 0.5;
  // Doubling the cells refines the whole discretization, radius ladder
  // included; each run passes against its own slack and the binding ratio
  // of the chain must drop under refinement.
  struct Level {
    Index cells;
    double ladder_ratio;
  };
  const std::vector<Level> levels = {{4096, std::pow(2.0, 0.25)},
                                     {8192, std::pow(2.0, 0.125)}};
  const std::vector<FamilyDescriptor> families = {ball_family(1.5, 1),
                                                  gaussian_family(1.5, 0.5)};
  // family -> aggregate (max over the four checks) per level
  std::map<std::string, std::vector<double>> aggregate;
  Json runs = Json::array();
  bool pass = true;
  for (const Level& level : levels) {
    GridSpec spec = make_grid(1, 8.0, level.cells);
    RadiusLadder ladder = cover_ladder(spec, 0.0, level.ladder_ratio);
    double slack = std::pow(ladder.ratio, spec.dim) * 1.05;
    for (const auto& family : families) {
      GridFunction f = synthesize(spec, family);
      Json entry{{"cells", level.cells}, {"family", family.label()}, {"slack", slack}};
      Json checks = Json::array();
      double worst = 0.0;
      for (const auto& c : chain_checks(f, ladder, alpha, slack, 1e-12)) {
        Json cj = to_json(c.report);
        cj["name"] = c.name;
        checks.push_back(cj);
        pass = pass && c.report.pass;
        worst = std::max(worst, c.report.max_ratio);
      }
      aggregate[family.label()].push_back(worst);
      entry["checks"] = checks;
      entry["max_ratio"] = worst;
      runs.push_back(entry);
    }
  }
  Json decreases = Json::array();
  for (const auto& [family, ratios] : aggregate) {
    bool dec = ratios[1] < ratios[0];
    decreases.push_back(Json{{"family", family},
                             {"coarse", ratios[0]},
                             {"fine", ratios[1]},
                             {"decreases", dec}});
    pass = pass && dec;
  }
  GridSpec spec0 = make_grid(1, 8.0, levels[0].cells);
  Json payload{{"name", "dominance-chain"},
               {"alpha", alpha},
               {"runs", runs},
               {"cross_resolution", decreases},
               {"config", to_json(config_for(spec0, cover_ladder(spec0), 2, 0.5))}};
  return SuiteResult{make_report("dominance-suite",
                                 "ineq:HMaximal+ineq:HMIalpha+ineq:mathcalHIalpha", pass,
                                 Json{{"delta", 0.05}}, payload),
                     pass};
}

SuiteResult suite_scaling() {
  const MorreyParams mp{2.0, 0.5, {}, {}};
  const std::vector<double> ts = {0.5, 2.0};
  const std::vector<FamilyDescriptor> families = {gaussian_family(0, 1), ball_family(0, 1)};
  const std::vector<Index> resolutions = {4096, 8192};
  // Radii anchored in absolute units so both resolutions share the exact
  // ladder; the deviation difference is then pure quadrature error.
  const RadiusLadder ladder{1.0 / 96.0, std::pow(2.0, 1.0 / 48.0), 48 * 12 + 1};

  Json entries = Json::array();
  bool pass = true;
  for (const auto& family : families) {
    for (double t : ts) {
      std::vector<double> deviations;
      for (Index cells : resolutions) {
        GridSpec spec = make_grid(1, 8.0, cells);
        ScalingReport report = check_scaling(family, t, mp, ladder, spec);
        deviations.push_back(report.deviation);
        Json e = to_json(report);
        e["cells"] = cells;
        entries.push_back(e);
      }
      bool ok = deviations[0] <= 0.02 && deviations[1] < deviations[0];
      pass = pass && ok;
    }
  }
  GridSpec spec0 = make_grid(1, 8.0, resolutions[0]);
  Json payload{{"name", "scaling"},
               {"entries", entries},
               {"config", to_json(config_for(spec0, ladder, mp.p, mp.lambda))}};
  return SuiteResult{make_report("scaling", "scaling-identity", pass,
                                 Json{{"max_deviation", 0.02}, {"refinement", "strict decrease"}},
                                 payload),
                     pass};
}

namespace {

SuiteResult exponent_suite(ExponentMode mode) {
  GridSpec spec = make_grid(1, 8.0, 4096);
  const double alpha = 0.25;
  const double p = 2.0, lambda = 0.25;
  MorreyParams mp{p, lambda, {}, {}};
  if (mode == ExponentMode::Spanne) {
    double q = 1.0 / (1.0 / p - alpha / spec.dim);
    mp.q = q;
    mp.mu = lambda * q / p;
  } else {
    double q = 1.0 / (1.0 / p - alpha / (spec.dim - lambda));
    mp.q = q;
    mp.mu = lambda;
  }
  RadiusLadder ladder{1.0 / 64.0, std::pow(2.0, 1.0 / 8.0), 8 * 11 + 1};
  RatioReport report = exponent_ratio_report(gaussian_family(0, 1), {0.5, 1.0, 2.0}, alpha,
                                             mode, mp, spec, ladder);
  bool pass = report.spread <= 1.10;
  Json payload{{"name", to_string(mode)},
               {"report", to_json(report)},
               {"config", to_json(config_for(spec, ladder, p, lambda))}};
  return SuiteResult{make_report("exponent-ratio",
                                 mode == ExponentMode::Spanne ? "spanne-exponents"
                                                              : "adams-exponents",
                                 pass, Json{{"max_spread", 1.10}}, payload),
                     pass};
}

}  // namespace

SuiteResult suite_spanne() { return exponent_suite(ExponentMode::Spanne); }
SuiteResult suite_adams() { return exponent_suite(ExponentMode::Adams); }

SuiteResult suite_modular_lemma(bool two_index) {
  const std::vector<Index> resolutions = {2048, 4096};
  const std::vector<FamilyDescriptor> families = {ball_family(0, 1), gaussian_family(0, 1)};
  Json entries = Json::array();
  bool pass = true;

  struct Op {
    std::string name;
    OperatorSpec spec;
  };
  std::vector<Op> ops;
  MorreyParams mp{2.0, 0.5, {}, {}};
  if (two_index) {
    const double alpha = 0.25;
    mp = MorreyParams{2.0, 0.25, {}, {}};
    double q = 1.0 / (1.0 / mp.p - alpha / 1.0);
    mp.q = q;
    mp.mu = mp.lambda * q / mp.p;
    ops.push_back({"riesz", OperatorSpec{OperatorKind::Riesz, alpha, 0, 0, ""}});
  } else {
    ops.push_back({"maximal", OperatorSpec{OperatorKind::Maximal, 0, 0, 0, ""}});
    ops.push_back({"hardy", OperatorSpec{OperatorKind::HardyLower, 0, 0, 0, ""}});
  }

  for (const auto& op : ops) {
    for (const auto& family : families) {
      std::vector<double> ratios;
      for (Index cells : resolutions) {
        GridSpec spec = make_grid(1, 8.0, cells);
        RadiusLadder ladder = cover_ladder(spec);
        GridFunction f = synthesize(spec, family);
        ApplyOptions options;
        options.ladder = ladder;
        GridFunction tf = apply_operator(op.spec, f, options);
        BoundReport report = modular_bound_report(f, tf, mp, ladder, two_index);
        ratios.push_back(report.max_ratio);
        Json e = to_json(report);
        e["op"] = op.name;
        e["family"] = family.label();
        e["cells"] = cells;
        entries.push_back(e);
      }
      double lo = std::min(ratios[0], ratios[1]);
      double hi = std::max(ratios[0], ratios[1]);
      bool stable = std::isfinite(hi) && hi > 0 && hi / lo <= 2.0;
      Json s{{"op", op.name},
             {"family", family.label()},
             {"coarse", ratios[0]},
             {"fine", ratios[1]},
             {"stable", stable}};
      entries.push_back(s);
      pass = pass && stable;
    }
  }
  GridSpec spec0 = make_grid(1, 8.0, resolutions[1]);
  Json payload{{"name", two_index ? "modular-lemma-b" : "modular-lemma-a"},
               {"entries", entries},
               {"config", to_json(config_for(spec0, cover_ladder(spec0), mp.p, mp.lambda))}};
  return SuiteResult{make_report("modular-bound",
                                 two_index ? "lem:modularB" : "lem:modularA", pass,
                                 Json{{"max_cross_resolution_factor", 2.0}}, payload),
                     pass};
}

SuiteResult suite_vanishing() {
  GridSpec spec = make_grid(1, 50.0, 32768);
  const MorreyParams mp{1.0, 0.5, {}, {}};
  const double h = spec.spacing();
  RadiusLadder ladder = cover_ladder(spec, 2.0 * h, 0.0, 2.0 * spec.half_width);
  const int n_max = 40;
  VanishingThresholds thresholds;

  Json entries = Json::array();
  bool pass = true;
  auto run = [&](const FamilyDescriptor& family, std::optional<Verdict> v0,
                 std::optional<Verdict> vinf, std::optional<Verdict> vstar) {
    GridFunction f = synthesize(spec, family);
    VanishingDiagnosis diag = classify_vanishing(f, mp, ladder, n_max, thresholds);
    bool ok = true;
    if (v0) ok = ok && diag.v0.verdict == *v0;
    if (vinf) ok = ok && diag.vinf.verdict == *vinf;
    if (vstar) ok = ok && diag.vstar.verdict == *vstar;
    Json e = to_json(diag);
    e["family"] = family.label();
    e["expected"] = {{"v0", v0 ? to_string(*v0) : "unchecked"},
                     {"vinf", vinf ? to_string(*vinf) : "unchecked"},
                     {"vstar", vstar ? to_string(*vstar) : "unchecked"}};
    e["ok"] = ok;
    entries.push_back(e);
    pass = pass && ok;
    return diag;
  };

  VanishingDiagnosis bump = run(bump_family(0, 1), Verdict::Vanishing, Verdict::Vanishing,
                                Verdict::Vanishing);
  // The A_N sequence of a function supported in B(0, R) is exactly zero once
  // N >= R + 1.
  bool zero_tail = true;
  for (std::size_t k = 1; k < bump.sequence.a_values.size(); ++k)
    zero_tail = zero_tail && bump.sequence.a_values[k] == 0.0;
  pass = pass && zero_tail;
  entries.push_back(Json{{"check", "smoothbump A_N exact zero for N >= 2"}, {"ok", zero_tail}});

  run(powerlaw_family((spec.dim - mp.lambda) / mp.p), Verdict::NonVanishing,
      Verdict::NonVanishing, {});
  run(train_family(-48, 48, 3, 1), {}, {}, Verdict::NonVanishing);

  Json payload{{"name", "vanishing"},
               {"entries", entries},
               {"n_max", n_max},
               {"config", to_json(config_for(spec, ladder, mp.p, mp.lambda))}};
  return SuiteResult{make_report("vanishing", "vanishing-properties", pass,
                                 to_json(thresholds), payload),
                     pass};
}

SuiteResult suite_preservation() {
  GridSpec spec = make_grid(1, 50.0, 8192);
  const double h = spec.spacing();
  // The diagnostic ladder runs well past the diameter (exact analytic tail);
  // N_max stays inside the range where boundary clipping has not yet
  // flattened the maximal function, |x| <= L/2 or so.
  RadiusLadder ladder = cover_ladder(spec, 2.0 * h, 0.0, 2048.0);
  const int n_max = 22;
  VanishingThresholds thresholds;
  const MorreyParams same{2.0, 0.5, {}, {}};
  const double alpha = 0.2;

  MorreyParams spanne_out{0, 0, {}, {}};
  {
    double q = 1.0 / (1.0 / same.p - alpha / spec.dim);
    spanne_out = MorreyParams{q, same.lambda * q / same.p, {}, {}};
  }
  MorreyParams adams_out{0, 0, {}, {}};
  {
    double q = 1.0 / (1.0 / same.p - alpha / (spec.dim - same.lambda));
    adams_out = MorreyParams{q, same.lambda, {}, {}};
  }

  struct Case {
    std::string name;
    OperatorSpec op;
    MorreyParams out;
    bool expect_vstar;  // the theorems cover V* for M, calH and I^alpha
  };
  std::vector<Case> cases = {
      {"maximal", {OperatorKind::Maximal, 0, 0, 0, ""}, same, true},
      {"sharp-maximal", {OperatorKind::SharpMaximal, 0, 0, 0, ""}, same, false},
      {"hardy-lower", {OperatorKind::HardyLower, 0, 0, 0, ""}, same, false},
      {"hardy-upper", {OperatorKind::HardyUpper, 0, 0, 0, ""}, same, true},
      {"riesz-spanne", {OperatorKind::Riesz, alpha, 0, 0, ""}, spanne_out, true},
      {"riesz-adams", {OperatorKind::Riesz, alpha, 0, 0, ""}, adams_out, true},
      {"hybrid-k", {OperatorKind::HybridK, 0, 0.5, 0, ""}, same, false},
      {"hybrid-calk", {OperatorKind::HybridCalK, 0, 0.5, 0, ""}, same, false},
      {"singular", {OperatorKind::TruncatedSingular, 0, 0, 0.05, "hilbert1d"}, same, false},
  };

  ApplyOptions options;
  options.ladder = ladder;
  std::vector<FamilyDescriptor> inputs = {bump_family(0, 1), bump_family(1.5, 0.75)};

  Json entries = Json::array();
  bool pass = true;
  for (const auto& input : inputs) {
    GridFunction f = synthesize(spec, input);
    for (const auto& c : cases) {
      PreservationReport report =
          preservation_report(f, c.op, same, c.out, ladder, n_max, thresholds, options);
      bool ok = report.output.vinf.verdict == Verdict::Vanishing;
      if (c.expect_vstar) ok = ok && report.output.vstar.verdict == Verdict::Vanishing;
      if (c.op.kind == OperatorKind::TruncatedSingular) ok = ok && report.vstar_exploratory;
      Json e = to_json(report);
      e["case"] = c.name;
      e["input_family"] = input.label();
      e["ok"] = ok;
      entries.push_back(e);
      pass = pass && ok;
    }
  }

  // The upper Hardy operator sends the whole Morrey space into the V* class:
  // its output sequence must decay for every tested input, vanishing or not.
  std::vector<FamilyDescriptor> morrey_inputs = {
      bump_family(0, 1), powerlaw_family((spec.dim - same.lambda) / same.p),
      train_family(-48, 48, 3, 1)};
  for (const auto& input : morrey_inputs) {
    GridFunction f = synthesize(spec, input);
    GridFunction hf = hardy_upper(f, 0.0);
    VStarSequence seq = vstar_sequence(hf, same.p, n_max);
    bool monotone = true;
    for (std::size_t k = 1; k < seq.a_values.size(); ++k)
      monotone = monotone && seq.a_values[k] <= seq.a_values[k - 1];
    double first = seq.a_values.front();
    double last = seq.a_values.back();
    bool decays = monotone && (first == 0.0 || last < 0.5 * first);
    entries.push_back(Json{{"check", "calhardy output A_N decay"},
                           {"input_family", input.label()},
                           {"first", first},
                           {"last", last},
                           {"monotone", monotone},
                           {"ok", decays}});
    pass = pass && decays;
  }

  Json payload{{"name", "preservation"},
               {"entries", entries},
               {"n_max", n_max},
               {"config", to_json(config_for(spec, ladder, same.p, same.lambda))}};
  return SuiteResult{make_report("preservation", "preservation-theorems", pass,
                                 to_json(thresholds), payload),
                     pass};
}

SuiteResult suite_hedberg() {
  const double alpha = 0.1;
  const double p = 2.0, lambda = 0.5;
  MorreyParams mp{p, lambda, {}, {}};
  mp.q = 1.0 / (1.0 / p - alpha / (1.0 - lambda));
  RadiusLadder ladder{1.0 / 64.0, std::pow(2.0, 1.0 / 8.0), 8 * 11 + 1};
  const std::vector<FamilyDescriptor> families = {
      ball_family(0, 1), gaussian_family(0, 1), train_family(-3, 3, 3, 1)};
  const std::vector<Index> resolutions = {2048, 4096};

  Json entries = Json::array();
  bool pass = true;
  std::vector<double> c_values;
  for (const auto& family : families) {
    for (Index cells : resolutions) {
      GridSpec spec = make_grid(1, 8.0, cells);
      GridFunction f = synthesize(spec, family);
      HedbergReport report = hedberg_report(f, alpha, mp, ladder);
      c_values.push_back(report.c_emp);
      Json e = to_json(report);
      e["family"] = family.label();
      e["cells"] = cells;
      entries.push_back(e);
      pass = pass && !report.empty && std::isfinite(report.c_emp);
    }
  }
  double lo = *std::min_element(c_values.begin(), c_values.end());
  double hi = *std::max_element(c_values.begin(), c_values.end());
  double family_spread = lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
  pass = pass && family_spread <= 1.25;

  // Adams exponents make the Hedberg quotient exactly dilation-invariant in
  // the continuum; the grid version must stay within 10%.
  std::vector<double> dilation_values;
  {
    GridSpec spec = make_grid(1, 8.0, 4096);
    for (double t : {0.5, 1.0, 2.0}) {
      GridFunction f = synthesize(spec, dilate_family(gaussian_family(0, 1), t));
      HedbergReport report = hedberg_report(f, alpha, mp, ladder);
      dilation_values.push_back(report.c_emp);
      Json e = to_json(report);
      e["dilation"] = t;
      entries.push_back(e);
    }
  }
  double dlo = *std::min_element(dilation_values.begin(), dilation_values.end());
  double dhi = *std::max_element(dilation_values.begin(), dilation_values.end());
  double dilation_spread = dlo > 0 ? dhi / dlo : std::numeric_limits<double>::infinity();
  pass = pass && dilation_spread <= 1.10;

  GridSpec spec0 = make_grid(1, 8.0, 4096);
  Json payload{{"name", "hedberg"},
               {"entries", entries},
               {"family_spread", family_spread},
               {"dilation_spread", dilation_spread},
               {"config", to_json(config_for(spec0, ladder, p, lambda))}};
  return SuiteResult{make_report("hedberg", "ineq:potential-maximal", pass,
                                 Json{{"max_family_spread", 1.25},
                                      {"max_dilation_spread", 1.10}},
                                 payload),
                     pass};
}

FamilyDescriptor random_bump_train(const GridSpec& spec, std::uint64_t seed, int bumps) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](double lo, double hi) {
    // explicit 53-bit mapping keeps the stream portable
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
  };
  BumpTrain train;
  for (int k = 0; k < bumps; ++k) {
    double c = uniform(-0.8 * spec.half_width, 0.8 * spec.half_width);
    double r = uniform(0.5, 1.0);
    double ht = uniform(0.5, 1.0);
    SmoothBump b;
    b.center = {c, 0, 0};
    if (spec.dim >= 2) b.center[1] = uniform(-0.8 * spec.half_width, 0.8 * spec.half_width);
    if (spec.dim >= 3) b.center[2] = uniform(-0.8 * spec.half_width, 0.8 * spec.half_width);
    b.radius = r;
    b.height = ht;
    train.bumps.push_back(b);
  }
  return FamilyDescriptor{train, 1.0};
}

// ---------------------------------------------------------------------------
// CLI

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << text;
}

void emit_report(const Json& report, const std::string& output) {
  std::string text = report.dump(2);
  text.push_back('\n');
  if (output.empty() || output == "-")
    std::cout << text;
  else
    write_text(output, text);
}

std::vector<double> parse_csv_numbers(const std::string& s, std::size_t expected,
                                      const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(what, trim(item)));
  if (out.size() != expected)
    throw std::invalid_argument("expected " + std::to_string(expected) + " values for " + what);
  return out;
}

GridSpec parse_grid_flag(const std::string& s) {
  std::vector<double> v = parse_csv_numbers(s, 3, "--grid");
  return make_grid(static_cast<int>(v[0]), v[1], static_cast<Index>(v[2]));
}

RadiusLadder parse_ladder_flag(const std::string& s) {
  std::vector<double> v = parse_csv_numbers(s, 3, "--ladder");
  RadiusLadder ladder{v[0], v[1], static_cast<int>(v[2])};
  ladder.validate();
  return ladder;
}

int run_cli_inner(int argc, const char* const* argv) {
  CLI::App app{"Morrey modular, vanishing diagnostics and operator checks"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;
  app.add_option("--config", config_path, "key=value configuration file");

  // -- synth ----------------------------------------------------------------
  auto* synth = app.add_subcommand("synth", "sample an analytic family onto a grid");
  std::string synth_family, synth_grid, synth_out;
  double synth_center = 0, synth_radius = 1, synth_height = 1, synth_width = 1,
         synth_gamma = 0.5, synth_dilate = 1, synth_from = -6, synth_to = 6, synth_step = 3;
  std::uint64_t synth_seed = 0;
  int synth_bumps = 5;
  synth->add_option("--family", synth_family,
                    "ball|powerlaw|gaussian|smoothbump|bumptrain|random-bumps")
      ->required();
  synth->add_option("--grid", synth_grid, "dim,L,cells (default: from --config)");
  synth->add_option("-o,--output", synth_out, "output .mry file")->required();
  synth->add_option("--center", synth_center);
  synth->add_option("--radius", synth_radius);
  synth->add_option("--height", synth_height);
  synth->add_option("--width", synth_width);
  synth->add_option("--gamma", synth_gamma);
  synth->add_option("--dilate", synth_dilate);
  synth->add_option("--from", synth_from);
  synth->add_option("--to", synth_to);
  synth->add_option("--step", synth_step);
  synth->add_option("--seed", synth_seed);
  synth->add_option("--bumps", synth_bumps);
  std::string synth_csv;
  synth->add_option("--csv", synth_csv, "also export the sampled grid as CSV");

  // -- apply ----------------------------------------------------------------
  auto* apply = app.add_subcommand("apply", "apply an operator to a grid function");
  std::string apply_op, apply_in, apply_out, apply_ladder;
  bool apply_oracle = false, apply_no_self = false;
  apply->add_option("--op", apply_op, "operator JSON, e.g. {\"kind\":\"riesz\",\"alpha\":0.5}")
      ->required();
  apply->add_option("-i,--input", apply_in)->required();
  apply->add_option("-o,--output", apply_out)->required();
  apply->add_option("--ladder", apply_ladder, "rmin,ratio,count");
  apply->add_flag("--oracle", apply_oracle, "evaluate with the direct-summation oracle");
  apply->add_flag("--no-self-cell", apply_no_self, "drop the Riesz self-cell term");

  // -- profile ----------------------------------------------------------------
  auto* profile = app.add_subcommand("profile", "modular profile over the radius ladder");
  std::string prof_in, prof_out, prof_json, prof_ladder;
  double prof_p = 2.0, prof_lambda = 0.5;
  profile->add_option("-i,--input", prof_in)->required();
  profile->add_option("-o,--output", prof_out, "CSV output")->required();
  profile->add_option("--json", prof_json, "JSON report path");
  profile->add_option("--p", prof_p);
  profile->add_option("--lambda", prof_lambda);
  profile->add_option("--ladder", prof_ladder);

  // -- vstar ------------------------------------------------------------------
  auto* vstar = app.add_subcommand("vstar", "A_N sequence of the V* functional");
  std::string vstar_in, vstar_out, vstar_json;
  double vstar_p = 2.0, vstar_radius = 1.0;
  int vstar_nmax = 20;
  vstar->add_option("-i,--input", vstar_in)->required();
  vstar->add_option("-o,--output", vstar_out, "CSV output")->required();
  vstar->add_option("--json", vstar_json);
  vstar->add_option("--p", vstar_p);
  vstar->add_option("--nmax", vstar_nmax);
  vstar->add_option("--radius", vstar_radius);

  // -- norm -------------------------------------------------------------------
  auto* norm = app.add_subcommand("norm", "Morrey norm");
  std::string norm_in, norm_json, norm_ladder;
  double norm_p = 2.0, norm_lambda = 0.5;
  norm->add_option("-i,--input", norm_in)->required();
  norm->add_option("--p", norm_p);
  norm->add_option("--lambda", norm_lambda);
  norm->add_option("--ladder", norm_ladder);
  norm->add_option("--json", norm_json);

  // -- check ------------------------------------------------------------------
  auto* check = app.add_subcommand("check", "run a verification suite");
  check->require_subcommand(1);
  auto* dominance = check->add_subcommand("dominance", "pointwise dominance inequalities");
  std::string dom_name, dom_in, dom_out, dom_ladder;
  double dom_p = 2.0, dom_lambda = 0.5, dom_alpha = 0.5;
  std::optional<double> dom_constant, dom_slack;
  double dom_constant_raw = 0, dom_slack_raw = 0;
  auto* dom_const_opt = dominance->add_option("--constant", dom_constant_raw);
  auto* dom_slack_opt = dominance->add_option("--slack", dom_slack_raw);
  dominance->add_option("--name", dom_name,
                        "sharp-vs-max|hardy-vs-max|hardyalpha-chain|calhardy-vs-riesz|hedberg")
      ->required();
  dominance->add_option("-i,--input", dom_in, "grid file; omit to run the preset family suite");
  dominance->add_option("-o,--output", dom_out);
  dominance->add_option("--p", dom_p);
  dominance->add_option("--lambda", dom_lambda);
  dominance->add_option("--alpha", dom_alpha);
  dominance->add_option("--ladder", dom_ladder);
  std::string dom_csv;
  dominance->add_option("--csv", dom_csv, "per-cell ratio field (needs -i)");

  struct SuiteCmd {
    CLI::App* cmd;
    std::string name;
    std::string output;
  };
  std::vector<SuiteCmd> suites;
  for (const char* name : {"scaling", "spanne", "adams", "modular-lemma-a", "modular-lemma-b",
                           "vanishing", "preservation"}) {
    auto* cmd = check->add_subcommand(name);
    suites.push_back({cmd, name, ""});
  }
  for (auto& s : suites) s.cmd->add_option("-o,--output", s.output);

  // -- report-merge -------------------------------------------------------------
  auto* merge = app.add_subcommand("report-merge", "merge JSON reports into one document");
  std::string merge_out;
  std::vector<std::string> merge_in;
  merge->add_option("-o,--output", merge_out)->required();
  merge->add_option("inputs", merge_in, "report files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints the right help text, exit 0
  }

  if (!config_path.empty()) cfg = read_config_file(config_path);

  if (*synth) {
    GridSpec spec = synth_grid.empty() ? cfg.grid() : parse_grid_flag(synth_grid);
    FamilyDescriptor family;
    if (synth_family == "ball")
      family = ball_family(synth_center, synth_radius, synth_height);
    else if (synth_family == "powerlaw")
      family = powerlaw_family(synth_gamma);
    else if (synth_family == "gaussian")
      family = gaussian_family(synth_center, synth_width, synth_height);
    else if (synth_family == "smoothbump")
      family = bump_family(synth_center, synth_radius, synth_height);
    else if (synth_family == "bumptrain")
      family = train_family(synth_from, synth_to, synth_step, synth_radius, synth_height);
    else if (synth_family == "random-bumps")
      family = random_bump_train(spec, synth_seed ? synth_seed : cfg.seed, synth_bumps);
    else
      throw CLI::ValidationError("--family", "unknown family " + synth_family);
    if (synth_dilate != 1.0) family = dilate_family(family, synth_dilate);
    GridFunction f = synthesize(spec, family);
    write_grid(f, synth_out);
    if (!synth_csv.empty()) write_grid_csv(f, synth_csv);
    return 0;
  }

  if (*apply) {
    GridFunction f = read_grid(apply_in);
    OperatorSpec op = operator_spec_from_json(Json::parse(apply_op));
    GridFunction result{f.spec, Array()};
    if (apply_oracle || cfg.oracle) {
      OracleRequest req;
      req.op = op;
      if (!apply_ladder.empty()) req.ladder = parse_ladder_flag(apply_ladder);
      result = oracle_eval(f, req);
    } else {
      ApplyOptions options;
      options.conv = cfg.conv_policy();
      options.riesz_self_cell = !apply_no_self;
      if (!apply_ladder.empty()) options.ladder = parse_ladder_flag(apply_ladder);
      result = apply_operator(op, f, options);
    }
    write_grid(result, apply_out);
    return 0;
  }

  if (*profile) {
    GridFunction f = read_grid(prof_in);
    if (profile->count("--p") == 0) prof_p = cfg.p;
    if (profile->count("--lambda") == 0) prof_lambda = cfg.lambda;
    MorreyParams mp{prof_p, prof_lambda, {}, {}};
    RadiusLadder ladder =
        prof_ladder.empty() ? cover_ladder(f.spec) : parse_ladder_flag(prof_ladder);
    ModularProfile pr = modular_profile(f, mp, ladder);
    write_profile_csv(pr, prof_out);
    if (!prof_json.empty()) {
      RunConfig resolved = cfg;
      resolved.grid_dim = f.spec.dim;
      resolved.grid_half_width = f.spec.half_width;
      resolved.grid_cells = f.spec.cells_per_axis;
      resolved.ladder_r_min = ladder.r_min;
      resolved.ladder_ratio = ladder.ratio;
      resolved.ladder_count = ladder.count;
      resolved.p = mp.p;
      resolved.lambda = mp.lambda;
      Json payload{{"profile", to_json(pr)}, {"config", to_json(resolved)}};
      emit_report(make_report("profile", "def:modular", true, Json::object(), payload),
                  prof_json);
    }
    return 0;
  }

  if (*vstar) {
    GridFunction f = read_grid(vstar_in);
    if (vstar->count("--p") == 0) vstar_p = cfg.p;
    VStarSequence seq = vstar_sequence(f, vstar_p, vstar_nmax, vstar_radius);
    write_vstar_csv(seq, vstar_out);
    if (!vstar_json.empty()) {
      RunConfig resolved = cfg;
      resolved.grid_dim = f.spec.dim;
      resolved.grid_half_width = f.spec.half_width;
      resolved.grid_cells = f.spec.cells_per_axis;
      resolved.p = vstar_p;
      Json payload{{"sequence", to_json(seq)}, {"config", to_json(resolved)}};
      emit_report(make_report("vstar", "vanishing-properties", true, Json::object(), payload),
                  vstar_json);
    }
    return 0;
  }

  if (*norm) {
    GridFunction f = read_grid(norm_in);
    if (norm->count("--p") == 0) norm_p = cfg.p;
    if (norm->count("--lambda") == 0) norm_lambda = cfg.lambda;
    MorreyParams mp{norm_p, norm_lambda, {}, {}};
    RadiusLadder ladder =
        norm_ladder.empty() ? cover_ladder(f.spec) : parse_ladder_flag(norm_ladder);
    double value = morrey_norm(f, mp, ladder);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g\n", value);
    std::cout << buf;
    if (!norm_json.empty()) {
      RunConfig resolved = cfg;
      resolved.grid_dim = f.spec.dim;
      resolved.grid_half_width = f.spec.half_width;
      resolved.grid_cells = f.spec.cells_per_axis;
      resolved.ladder_r_min = ladder.r_min;
      resolved.ladder_ratio = ladder.ratio;
      resolved.ladder_count = ladder.count;
      resolved.p = mp.p;
      resolved.lambda = mp.lambda;
      Json payload{{"norm", value}, {"p", mp.p}, {"lambda", mp.lambda},
                   {"config", to_json(resolved)}};
      emit_report(make_report("norm", "homMorreynorm:general", true, Json::object(), payload),
                  norm_json);
    }
    return 0;
  }

  if (*dominance) {
    if (dom_const_opt->count() > 0) dom_constant = dom_constant_raw;
    if (dom_slack_opt->count() > 0) dom_slack = dom_slack_raw;
    if (dominance->count("--p") == 0) dom_p = cfg.p;
    if (dominance->count("--lambda") == 0) dom_lambda = cfg.lambda;
    if (dominance->count("--alpha") == 0 && cfg.alpha) dom_alpha = *cfg.alpha;
    SuiteResult result;
    if (!dom_in.empty()) {
      GridFunction f = read_grid(dom_in);
      RunConfig run = cfg;
      run.p = dom_p;
      run.lambda = dom_lambda;
      run.alpha = dom_alpha;
      if (!dom_ladder.empty()) {
        RadiusLadder ladder = parse_ladder_flag(dom_ladder);
        run.ladder_r_min = ladder.r_min;
        run.ladder_ratio = ladder.ratio;
        run.ladder_count = ladder.count;
      }
      result = run_dominance_on(dom_name, f, run, dom_constant, dom_slack, dom_csv);
    } else if (dom_name == "sharp-vs-max") {
      result = suite_sharp_dominance();
    } else if (dom_name == "hedberg") {
      result = suite_hedberg();
    } else {
      result = suite_dominance_chain();
    }
    emit_report(result.report, dom_out);
    return result.pass ? 0 : 1;
  }

  for (auto& s : suites) {
    if (!*s.cmd) continue;
    SuiteResult result;
    if (s.name == "scaling") result = suite_scaling();
    else if (s.name == "spanne") result = suite_spanne();
    else if (s.name == "adams") result = suite_adams();
    else if (s.name == "modular-lemma-a") result = suite_modular_lemma(false);
    else if (s.name == "modular-lemma-b") result = suite_modular_lemma(true);
    else if (s.name == "vanishing") result = suite_vanishing();
    else if (s.name == "preservation") result = suite_preservation();
    emit_report(result.report, s.output);
    return result.pass ? 0 : 1;
  }

  if (*merge) {
    Json merged;
    merged["reports"] = Json::array();
    for (const auto& path : merge_in) {
      std::ifstream in(path);
      if (!in) throw std::runtime_error("cannot open " + path);
      merged["reports"].push_back(Json::parse(in));
    }
    std::string text = merged.dump(2);
    text.push_back('\n');
    write_text(merge_out, text);
    return 0;
  }

  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  try {
    return run_cli_inner(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace morrey
