#pragma once

#include "morrey/ball.hpp"
#include "morrey/grid.hpp"
#include "morrey/params.hpp"

#include <optional>
#include <string>
#include <vector>

namespace morrey {

enum class OperatorKind {
  Maximal,
  SharpMaximal,
  FracMaximal,
  Riesz,
  HardyLower,
  HardyUpper,
  HybridK,
  HybridCalK,
  TruncatedSingular,
};

std::string to_string(OperatorKind kind);
OperatorKind operator_kind_from_string(const std::string& s);

// Tagged description of an operator instance. alpha is the smoothing order
// for the fractional kinds (0 allowed for the Hardy kinds and FracMaximal,
// where it reproduces the classical operators), beta the hybrid order in
// (0, n], epsilon the singular truncation radius (>= grid spacing).
struct OperatorSpec {
  OperatorKind kind = OperatorKind::Maximal;
  double alpha = 0.0;
  double beta = 0.0;
  double epsilon = 0.0;
  std::string kernel_id;

  std::string label() const;
};

// Kernel for truncated singular integrals, obeying the size condition
// |K(x,y)| <= size_constant * |x-y|^{-n}.
struct KernelSpec {
  std::string id;
  int dim = 0;  // 0 = any dimension
  double size_constant = 1.0;
  double (*eval)(const double* x, const double* y, int dim) = nullptr;
};

// Registry of built-in kernels: "hilbert1d" (1/(x-y), 1D) and
// "riesztransform1" ((x1-y1)/|x-y|^{n+1}, any dimension).
const KernelSpec& find_kernel(const std::string& id);
std::vector<std::string> kernel_ids();

struct ApplyOptions {
  std::optional<RadiusLadder> ladder;  // maximal kinds; default covers the domain
  ConvPolicy conv;
  bool riesz_self_cell = true;  // integrate the kernel over the equal-volume ball
};

// Hardy-Littlewood maximal function: max over ladder radii of the
// counted-cell average of |f| over B(x, t); balls clipped to the domain
// average over the cells actually present.
GridFunction maximal(const GridFunction& f, const RadiusLadder& ladder);

// Max over ladder radii of the counted-cell average of |f - f_B| with f_B
// the counted-cell mean on the same ball.
GridFunction sharp_maximal(const GridFunction& f, const RadiusLadder& ladder);

// Max over ladder radii of |B(x,t)|^{alpha/n - 1} * integral of |f| over
// B(x,t), with |B| = counted cells * h^n. alpha = 0 is `maximal`, bitwise.
GridFunction frac_maximal(const GridFunction& f, double alpha, const RadiusLadder& ladder);

// Riesz potential: h^n sum over y != x of f(y) |x-y|^{alpha-n} plus the
// self-cell term f(x) * n v_n rho_h^alpha / alpha, rho_h = h v_n^{-1/n}
// (the kernel integrated over the equal-volume ball of one cell).
GridFunction riesz(const GridFunction& f, double alpha, const ConvPolicy& policy = {},
                   bool self_cell = true);

// H^alpha f(x) = |x|^{alpha-n} * integral of f over {|y| < |x|}.
GridFunction hardy_lower(const GridFunction& f, double alpha);

// calH^alpha f(x) = |x|^alpha * integral of f(y) |y|^{-n} over {|y| > |x|}.
GridFunction hardy_upper(const GridFunction& f, double alpha);

// K_beta f(x) = |x|^{-beta} * integral over {|y| < |x|} of f(y) |x-y|^{beta-n}.
GridFunction hybrid_K(const GridFunction& f, double beta);

// calK_beta f(x) = integral over {|y| > |x|} of f(y) |y|^{-beta} |x-y|^{beta-n}.
GridFunction hybrid_calK(const GridFunction& f, double beta);

// Fixed-truncation singular integral: h^n sum over |x-y| > eps of K(x,y) f(y).
GridFunction truncated_singular(const GridFunction& f, const KernelSpec& kernel, double eps);

GridFunction apply_operator(const OperatorSpec& spec, const GridFunction& f,
                            const ApplyOptions& options = {});

// Kernel constant for the Riesz/hybrid self-cell rule: the integral of
// |z|^{a-n} over the ball of volume h^n centered at the origin.
double self_cell_integral(const GridSpec& spec, double a);

}  // namespace morrey
