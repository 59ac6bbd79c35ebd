#pragma once

// Augmented Lagrangian iteration for deconvolution and decomposition
//   f = h * (u + v + rho) + eps
// with a directional mean curvature prior on u, directional G-norm plus l1
// on v, and coefficient sup-norm bounds on rho and eps.

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dmcd/diff_ops.hpp"
#include "dmcd/frames.hpp"
#include "dmcd/grid.hpp"

namespace dmcd {

/// Either a fixed value, or a fraction of the sup-norm of the quantity being
/// thresholded, re-evaluated each iteration.
struct ThresholdRule {
  enum class Mode { fixed, adaptive };
  Mode mode = Mode::fixed;
  double value = 0.0;

  static ThresholdRule fixed(double v) { return {Mode::fixed, v}; }
  static ThresholdRule adaptive(double fraction) { return {Mode::adaptive, fraction}; }
  bool is_adaptive() const noexcept { return mode == Mode::adaptive; }
  std::string to_string() const;
};

/// How the t- and g-updates treat the coupling between directions.
/// joint: exact minimizer over all layers at once (closed form per frequency).
/// jacobi: each layer solved with the other layers frozen at the previous
/// iterate. Unstable once several directions share a frequency.
enum class Coupling { joint, jacobi };

std::string to_string(Coupling c);
Coupling parse_coupling(const std::string& s);

struct SolverParams {
  int curvature_directions = 10;  // L
  int texture_directions = 10;    // S
  std::array<double, 7> beta{1e10, 1e10, 1e10, 1e10, 1e10, 1e10, 1e10};
  ThresholdRule mu1 = ThresholdRule::fixed(1e10);
  ThresholdRule mu2 = ThresholdRule::fixed(4e10);
  ThresholdRule nu_rho = ThresholdRule::fixed(20.0);
  ThresholdRule nu_eps = ThresholdRule::fixed(0.0);
  double step = 0.1;  // alpha
  int max_iters = 300;
  double tol = -8.0;
  MultiscaleConfig cst;
  Coupling coupling = Coupling::joint;

  double b(int i) const { return beta.at(static_cast<std::size_t>(i - 1)); }
  /// Throws ConfigError describing the first invalid field.
  void validate() const;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::string subproblem, int iteration);
  const std::string& subproblem() const noexcept { return subproblem_; }
  int iteration() const noexcept { return iteration_; }

 private:
  std::string subproblem_;
  int iteration_;
};

struct SolverState {
  Image u, v, rho, eps, d;
  DirectionalField r, t, y;  // L+1 layers
  DirectionalField w, g;     // S layers
  Image lambda1, lambda3, lambda5, lambda7;
  DirectionalField lambda2, lambda4;  // L+1 layers
  DirectionalField lambda6;           // S layers
  int iteration = 0;
  std::vector<double> err_v_history;

  /// u = f, everything else zero.
  static SolverState initial(const Image& f, const SolverParams& params);
};

/// Quantities fixed for the whole run: data, blur spectrum, symbols, frames.
class SolverContext {
 public:
  SolverContext(Image f, Image h, SolverParams params);

  const Image& f() const noexcept { return f_; }
  const Image& h() const noexcept { return h_; }
  const Spectrum& F() const noexcept { return F_; }
  const Spectrum& H() const noexcept { return H_; }
  /// |H|^2
  const Spectrum& H2() const noexcept { return H2_; }
  const SolverParams& params() const noexcept { return params_; }
  const DirectionBank& curvature_bank() const noexcept { return curv_bank_; }
  const DirectionBank& texture_bank() const noexcept { return tex_bank_; }
  const std::vector<Spectrum>& curvature_symbols() const noexcept { return curv_sym_; }
  const std::vector<Spectrum>& texture_symbols() const noexcept { return tex_sym_; }
  const MultiscaleFrameSet& frames() const noexcept { return frames_; }

  /// h * x
  Image blur(const Image& x) const;
  /// h-reversed * x
  Image blur_adjoint(const Image& x) const;

 private:
  Image f_, h_;
  SolverParams params_;
  Spectrum F_, H_, H2_;
  DirectionBank curv_bank_, tex_bank_;
  std::vector<Spectrum> curv_sym_, tex_sym_;
  MultiscaleFrameSet frames_;
};

// Subproblem solvers. Each reads the current state, so calling them in
// iteration order uses the freshest values of earlier updates.
Image solve_d(const SolverState& s, const SolverContext& ctx);
DirectionalField solve_t(const SolverState& s, const SolverContext& ctx);
DirectionalField solve_r(const SolverState& s, const SolverContext& ctx);
DirectionalField solve_y(const SolverState& s, const SolverContext& ctx);
DirectionalField solve_w(const SolverState& s, const SolverContext& ctx);
DirectionalField solve_g(const SolverState& s, const SolverContext& ctx);
Image solve_u(const SolverState& s, const SolverContext& ctx);
Image solve_v(const SolverState& s, const SolverContext& ctx);
Image solve_rho(const SolverState& s, const SolverContext& ctx);
Image solve_eps(const SolverState& s, const SolverContext& ctx);
void update_multipliers(SolverState& s, const SolverContext& ctx);

/// ln(|v_new - v_old| / |v_old|); +inf when |v_old| = 0.
double relative_error(const Image& v_new, const Image& v_old);

/// |f - h*(u+v+rho) - eps| / |f|, or the unnormalized norm when f = 0.
double constraint_residual(const SolverContext& ctx, const SolverState& s);

/// Runs one full iteration in place and returns Err_v for it.
double iterate(SolverState& s, const SolverContext& ctx);

struct IterationReport {
  int iteration;
  double err_v;
  double constraint_residual;
};
using ProgressCallback = std::function<void(const IterationReport&, const SolverState&)>;

struct Decomposition {
  Image u, v, rho, eps;
  Image f_re;  // u + v + rho
  int iterations = 0;
  double final_err_v = 0.0;
  double constraint_residual = 0.0;
  bool converged = false;
  std::vector<double> err_v_history;
  std::vector<double> residual_history;
};

/// h must sum to one. Stops when Err_v < tol or after max_iters.
/// When state_out is given it receives the final solver state.
Decomposition demix(const Image& f, const Image& h, const SolverParams& params,
                    const ProgressCallback& progress = {}, SolverState* state_out = nullptr);

}  // namespace dmcd
