#pragma once

#include "morrey/grid.hpp"
#include "morrey/operators.hpp"
#include "morrey/params.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace morrey {

struct BallMassRequest {
  double r = 1.0;
};

struct ModularRequest {
  double p = 1.0;
  double lambda = 0.0;
  double r = 1.0;
};

// Direct nested-loop evaluation of the same formulas the fast paths compute:
// no prefix sums, no convolution tricks. Shares the quadrature decisions
// (cell-center inclusion, self-cell rule) so disagreement isolates
// summation-path bugs; the refinement knob instead measures quadrature error
// of the piecewise-constant extension against analytic values.
struct OracleRequest {
  std::variant<OperatorSpec, BallMassRequest, ModularRequest> op;
  int refinement = 1;
  std::optional<RadiusLadder> ladder;       // maximal kinds
  std::vector<double> radius_scan;          // dense radii overriding the ladder
  bool allow_large = false;                 // override the cells <= 2^16 guard
};

GridFunction oracle_eval(const GridFunction& f, const OracleRequest& request);

}  // namespace morrey
