#include "dmcd/solver.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "dmcd/fourier.hpp"
#include "dmcd/log.hpp"
#include "dmcd/parallel.hpp"
#include "dmcd/prox.hpp"

namespace dmcd {
namespace {

void require_finite(const Image& x, const char* name, int iteration) {
  if (!all_finite(x)) throw DivergenceError(name, iteration);
}

void require_finite(const DirectionalField& x, const char* name, int iteration) {
  if (!all_finite(x)) throw DivergenceError(name, iteration);
}

// a + s * b
Image axpy(const Image& a, double s, const Image& b) {
  Image out(a.lattice());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + s * b[i];
  return out;
}

// F - H*X - E + Lambda5/beta5 in the Fourier domain, X being the sum of the
// blurred components other than the one being solved for.
Spectrum data_residual(const SolverState& s, const SolverContext& ctx, const Image& others) {
  const double b5 = ctx.params().b(5);
  Spectrum R = dft2(axpy(s.eps, -1.0 / b5, s.lambda5));
  const Spectrum X = dft2(others);
  const Spectrum& F = ctx.F();
  const Spectrum& H = ctx.H();
  for (std::size_t i = 0; i < R.size(); ++i) R[i] = F[i] - H[i] * X[i] - R[i];
  return R;
}

// (delta - a h~*h) * prev + a h~ * residual
Image linearized_step(const Image& prev, const Spectrum& residual, const SolverContext& ctx) {
  const double a = ctx.params().step;
  const Spectrum& H = ctx.H();
  Spectrum P = dft2(prev);
  for (std::size_t i = 0; i < P.size(); ++i) {
    P[i] = (1.0 - a * ctx.H2()[i].real()) * P[i] + a * std::conj(H[i]) * residual[i];
  }
  return idft2(P);
}

// Minimizes, per frequency, (p/2) sum_l |X_l - M_l|^2 + (q/2) |Z + sum_l conj(a_l) X_l|^2
// where a_l are the forward symbols (the backward divergence has symbol
// -sum conj(a_l)). With prev empty the layers are solved jointly; the
// rank-one structure gives X_l = M_l - (q/p) a_l (Z + s) with
// s = (p sum conj(a) M - q |a|^2 Z) / (p + q |a|^2). Otherwise each layer is
// solved with the others held at prev.
std::vector<Spectrum> coupled_solve(const std::vector<Spectrum>& M, const Spectrum& Z,
                                    const std::vector<Spectrum>& prev,
                                    const std::vector<Spectrum>& sym, double p, double q) {
  std::vector<Spectrum> X = M;
  const std::size_t n = Z.size();
  if (prev.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      Complex am = 0.0;
      double a2 = 0.0;
      for (std::size_t l = 0; l < M.size(); ++l) {
        am += std::conj(sym[l][i]) * M[l][i];
        a2 += std::norm(sym[l][i]);
      }
      const Complex zs = Z[i] + (p * am - q * a2 * Z[i]) / (p + q * a2);
      for (std::size_t l = 0; l < M.size(); ++l) X[l][i] = M[l][i] - (q / p) * sym[l][i] * zs;
    }
    return X;
  }
  parallel_for(M.size(), [&](std::size_t l) {
    for (std::size_t i = 0; i < n; ++i) {
      Complex inner = Z[i];
      for (std::size_t k = 0; k < M.size(); ++k) {
        if (k != l) inner += std::conj(sym[k][i]) * prev[k][i];
      }
      X[l][i] = (p * M[l][i] - q * sym[l][i] * inner) / (p + q * std::norm(sym[l][i]));
    }
  });
  return X;
}

void check_threshold(const ThresholdRule& r, const char* name) {
  if (!std::isfinite(r.value) || r.value < 0.0) {
    throw ConfigError(std::string(name) + " must be finite and nonnegative");
  }
  if (r.is_adaptive() && r.value > 1.0) {
    throw ConfigError(std::string(name) + " adaptive fraction must lie in [0, 1]");
  }
}

}  // namespace

std::string to_string(Coupling c) { return c == Coupling::joint ? "joint" : "jacobi"; }

Coupling parse_coupling(const std::string& s) {
  if (s == "joint") return Coupling::joint;
  if (s == "jacobi") return Coupling::jacobi;
  throw ConfigError("unknown coupling '" + s + "' (expected joint or jacobi)");
}

std::string ThresholdRule::to_string() const {
  std::ostringstream os;
  os.precision(17);
  if (is_adaptive()) os << "adaptive:";
  os << value;
  return os.str();
}

void SolverParams::validate() const {
  if (curvature_directions < 1) throw ConfigError("L (curvature directions) must be >= 1");
  if (texture_directions < 1) throw ConfigError("S (texture directions) must be >= 1");
  for (std::size_t i = 0; i < beta.size(); ++i) {
    if (!(beta[i] > 0.0) || !std::isfinite(beta[i])) {
      throw ConfigError("beta" + std::to_string(i + 1) + " must be positive and finite");
    }
  }
  check_threshold(mu1, "mu1");
  check_threshold(mu2, "mu2");
  check_threshold(nu_rho, "nu_rho");
  check_threshold(nu_eps, "nu_eps");
  if (!(step > 0.0 && step <= 1.0)) throw ConfigError("alpha (step) must lie in (0, 1]");
  if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (!std::isfinite(tol)) throw ConfigError("tol must be finite");
  if (cst.scales < 1) throw ConfigError("cst scales must be >= 1");
  if (cst.directions < 1) throw ConfigError("cst directions must be >= 1");
  if (!(cst.dilation > 0.0)) throw ConfigError("cst dilation must be > 0");
  if (!(cst.c > 0.0)) throw ConfigError("cst c must be > 0");
}

DivergenceError::DivergenceError(std::string subproblem, int iteration)
    : std::runtime_error("non-finite values after the " + subproblem + " update at iteration " +
                         std::to_string(iteration)),
      subproblem_(std::move(subproblem)),
      iteration_(iteration) {}

SolverState SolverState::initial(const Image& f, const SolverParams& params) {
  const Lattice& lat = f.lattice();
  const int L = params.curvature_directions;
  const int S = params.texture_directions;
  return SolverState{f,
                     Image(lat),
                     Image(lat),
                     Image(lat),
                     Image(lat),
                     DirectionalField(lat, L + 1),
                     DirectionalField(lat, L + 1),
                     DirectionalField(lat, L + 1),
                     DirectionalField(lat, S),
                     DirectionalField(lat, S),
                     Image(lat),
                     Image(lat),
                     Image(lat),
                     Image(lat),
                     DirectionalField(lat, L + 1),
                     DirectionalField(lat, L + 1),
                     DirectionalField(lat, S),
                     0,
                     {}};
}

SolverContext::SolverContext(Image f, Image h, SolverParams params)
    : f_(std::move(f)),
      h_(std::move(h)),
      params_(std::move(params)),
      F_(f_.lattice()),
      H_(f_.lattice()),
      H2_(f_.lattice()),
      curv_bank_((params_.validate(), params_.curvature_directions)),
      tex_bank_(params_.texture_directions),
      frames_(f_.lattice(), params_.cst) {
  require_same_lattice(f_.lattice(), h_.lattice(), "demix (f vs h)");
  if (!all_finite(f_)) throw std::invalid_argument("demix: input image has non-finite values");
  if (!all_finite(h_)) throw std::invalid_argument("demix: kernel has non-finite values");
  const double mass = sum(h_);
  if (std::abs(mass - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "demix: blur kernel must sum to 1 (got " << mass << ")";
    throw std::invalid_argument(os.str());
  }
  F_ = dft2(f_);
  H_ = dft2(h_);
  for (std::size_t i = 0; i < H_.size(); ++i) H2_[i] = std::norm(H_[i]);
  curv_sym_ = forward_symbols(f_.lattice(), curv_bank_);
  tex_sym_ = forward_symbols(f_.lattice(), tex_bank_);
}

Image SolverContext::blur(const Image& x) const { return apply_multiplier(x, H_); }

Image SolverContext::blur_adjoint(const Image& x) const {
  Spectrum X = dft2(x);
  for (std::size_t i = 0; i < X.size(); ++i) X[i] *= std::conj(H_[i]);
  return idft2(X);
}

Image solve_d(const SolverState& s, const SolverContext& ctx) {
  const double b3 = ctx.params().b(3);
  Image arg = axpy(divergence_extended(s.t, ctx.curvature_bank()), -1.0 / b3, s.lambda3);
  return shrink(arg, 1.0 / b3);
}

DirectionalField solve_t(const SolverState& s, const SolverContext& ctx) {
  const double b3 = ctx.params().b(3);
  const double b4 = ctx.params().b(4);
  const int L = ctx.params().curvature_directions;
  const Lattice& lat = s.u.lattice();

  const Spectrum D = dft2(axpy(s.d, 1.0 / b3, s.lambda3));
  std::vector<Spectrum> M(static_cast<std::size_t>(L), Spectrum(lat));
  parallel_for(M.size(), [&](std::size_t l) {
    const int li = static_cast<int>(l);
    M[l] = dft2(axpy(s.y[li], -1.0 / b4, s.lambda4[li]));
  });
  std::vector<Spectrum> prev;
  if (ctx.params().coupling == Coupling::jacobi) {
    prev.assign(static_cast<std::size_t>(L), Spectrum(lat));
    parallel_for(prev.size(), [&](std::size_t l) { prev[l] = dft2(s.t[static_cast<int>(l)]); });
  }
  const auto T = coupled_solve(M, D, prev, ctx.curvature_symbols(), b4, b3);

  DirectionalField out(lat, L + 1);
  parallel_for(T.size(), [&](std::size_t l) { out[static_cast<int>(l)] = idft2(T[l]); });
  out[L] = s.y[L] - s.lambda4[L] / b4;
  return out;
}

DirectionalField solve_r(const SolverState& s, const SolverContext& ctx) {
  const double b1 = ctx.params().b(1);
  const double b2 = ctx.params().b(2);
  const int L = ctx.params().curvature_directions;
  const Lattice& lat = s.u.lattice();
  Image thr(lat);
  for (std::size_t i = 0; i < thr.size(); ++i) thr[i] = std::max(0.0, (s.lambda1[i] + b1) / b2);

  DirectionalField out(lat, L + 1);
  parallel_for(static_cast<std::size_t>(L) + 1, [&](std::size_t l) {
    const int li = static_cast<int>(l);
    Image arg = li < L ? forward_diff(s.u, li, ctx.curvature_bank()) : Image(lat, 1.0);
    const Image& lam = s.lambda2[li];
    const Image& y = s.y[li];
    for (std::size_t i = 0; i < arg.size(); ++i) arg[i] = arg[i] - lam[i] / b2 + thr[i] * y[i];
    out[li] = shrink(arg, thr);
  });
  return out;
}

DirectionalField solve_y(const SolverState& s, const SolverContext& ctx) {
  const double b1 = ctx.params().b(1);
  const double b4 = ctx.params().b(4);
  DirectionalField yp(s.u.lattice(), s.t.count());
  for (int l = 0; l < s.t.count(); ++l) {
    for (std::size_t i = 0; i < s.u.size(); ++i) {
      yp[l][i] = s.t[l][i] + s.lambda4[l][i] / b4 + s.r[l][i] * ((s.lambda1[i] + b1) / b4);
    }
  }
  return l1_ball_project(yp, 1.0);
}

DirectionalField solve_w(const SolverState& s, const SolverContext& ctx) {
  const double b6 = ctx.params().b(6);
  const ThresholdRule& mu1 = ctx.params().mu1;
  DirectionalField out(s.u.lattice(), s.g.count());
  for (int k = 0; k < s.g.count(); ++k) {
    Image arg = axpy(s.g[k], -1.0 / b6, s.lambda6[k]);
    const double thr = mu1.is_adaptive() ? mu1.value * max_abs(arg) : mu1.value / b6;
    out[k] = shrink(arg, thr);
  }
  return out;
}

DirectionalField solve_g(const SolverState& s, const SolverContext& ctx) {
  const double b6 = ctx.params().b(6);
  const double b7 = ctx.params().b(7);
  const int S = ctx.params().texture_directions;
  const Lattice& lat = s.u.lattice();

  const Spectrum V = dft2(axpy(s.v, 1.0 / b7, s.lambda7));
  std::vector<Spectrum> B(static_cast<std::size_t>(S), Spectrum(lat));
  parallel_for(B.size(), [&](std::size_t k) {
    const int ki = static_cast<int>(k);
    B[k] = dft2(axpy(s.w[ki], 1.0 / b6, s.lambda6[ki]));
  });
  std::vector<Spectrum> prev;
  if (ctx.params().coupling == Coupling::jacobi) {
    prev.assign(static_cast<std::size_t>(S), Spectrum(lat));
    parallel_for(prev.size(), [&](std::size_t k) { prev[k] = dft2(s.g[static_cast<int>(k)]); });
  }
  const auto G = coupled_solve(B, V, prev, ctx.texture_symbols(), b6, b7);

  DirectionalField out(lat, S);
  parallel_for(G.size(), [&](std::size_t k) { out[static_cast<int>(k)] = idft2(G[k]); });
  return out;
}

Image solve_u(const SolverState& s, const SolverContext& ctx) {
  const double b2 = ctx.params().b(2);
  const double b5 = ctx.params().b(5);
  const int L = ctx.params().curvature_directions;
  const auto& sym = ctx.curvature_symbols();
  const Lattice& lat = s.u.lattice();

  std::vector<Spectrum> R(static_cast<std::size_t>(L), Spectrum(lat));
  parallel_for(R.size(), [&](std::size_t l) {
    const int li = static_cast<int>(l);
    R[l] = dft2(axpy(s.r[li], 1.0 / b2, s.lambda2[li]));
  });
  const Spectrum D = data_residual(s, ctx, s.v + s.rho);
  const Spectrum& H = ctx.H();

  Spectrum U(lat);
  for (std::size_t i = 0; i < U.size(); ++i) {
    Complex num = 0.0;
    double den = 0.0;
    for (std::size_t l = 0; l < R.size(); ++l) {
      num += std::conj(sym[l][i]) * R[l][i];
      den += std::norm(sym[l][i]);
    }
    num = b2 * num + b5 * std::conj(H[i]) * D[i];
    U[i] = num / (b2 * den + b5 * ctx.H2()[i].real());
  }
  return idft2(U);
}

Image solve_v(const SolverState& s, const SolverContext& ctx) {
  const double b5 = ctx.params().b(5);
  const double b7 = ctx.params().b(7);
  const double a = ctx.params().step;
  const double den = b5 + a * b7;

  const Image lin = linearized_step(s.v, data_residual(s, ctx, s.u + s.rho), ctx);
  const Image div = divergence(s.g, ctx.texture_bank());
  Image tv(s.v.lattice());
  for (std::size_t i = 0; i < tv.size(); ++i) {
    tv[i] = (b5 / den) * lin[i] + (b7 * a / den) * (div[i] - s.lambda7[i] / b7);
  }
  const ThresholdRule& mu2 = ctx.params().mu2;
  const double thr = mu2.is_adaptive() ? mu2.value * max_abs(tv) : mu2.value * a / den;
  return shrink(tv, thr);
}

Image solve_rho(const SolverState& s, const SolverContext& ctx) {
  const Image tilde = linearized_step(s.rho, data_residual(s, ctx, s.u + s.v), ctx);
  const ThresholdRule& nu = ctx.params().nu_rho;
  const double thr = nu.is_adaptive() ? nu.value * sup_coeff(tilde, ctx.frames()) : nu.value;
  return cst_complement(tilde, thr, ctx.frames());
}

Image solve_eps(const SolverState& s, const SolverContext& ctx) {
  const double b5 = ctx.params().b(5);
  const Image blurred = ctx.blur(s.u + s.v + s.rho);
  Image tilde(s.u.lattice());
  for (std::size_t i = 0; i < tilde.size(); ++i) {
    tilde[i] = ctx.f()[i] - blurred[i] + s.lambda5[i] / b5;
  }
  const ThresholdRule& nu = ctx.params().nu_eps;
  const double thr = nu.is_adaptive() ? nu.value * sup_coeff(tilde, ctx.frames()) : nu.value;
  return cst_complement(tilde, thr, ctx.frames());
}

void update_multipliers(SolverState& s, const SolverContext& ctx) {
  const auto& p = ctx.params();
  const int L = p.curvature_directions;
  const Lattice& lat = s.u.lattice();

  const Image rmag = s.r.magnitude();
  for (std::size_t i = 0; i < lat.size(); ++i) {
    double yr = 0.0;
    for (int l = 0; l <= L; ++l) yr += s.y[l][i] * s.r[l][i];
    s.lambda1[i] += p.b(1) * (rmag[i] - yr);
  }

  parallel_for(static_cast<std::size_t>(L) + 1, [&](std::size_t l) {
    const int li = static_cast<int>(l);
    Image target = li < L ? forward_diff(s.u, li, ctx.curvature_bank()) : Image(lat, 1.0);
    for (std::size_t i = 0; i < lat.size(); ++i) {
      s.lambda2[li][i] += p.b(2) * (s.r[li][i] - target[i]);
    }
  });

  DirectionalField tl(lat, L);
  for (int l = 0; l < L; ++l) tl[l] = s.t[l];
  const Image divt = divergence(tl, ctx.curvature_bank());
  for (std::size_t i = 0; i < lat.size(); ++i) s.lambda3[i] += p.b(3) * (s.d[i] - divt[i]);

  for (int l = 0; l <= L; ++l) {
    for (std::size_t i = 0; i < lat.size(); ++i) s.lambda4[l][i] += p.b(4) * (s.t[l][i] - s.y[l][i]);
  }

  const Image blurred = ctx.blur(s.u + s.v + s.rho);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    s.lambda5[i] += p.b(5) * (ctx.f()[i] - blurred[i] - s.eps[i]);
  }

  for (int k = 0; k < s.g.count(); ++k) {
    for (std::size_t i = 0; i < lat.size(); ++i) s.lambda6[k][i] += p.b(6) * (s.w[k][i] - s.g[k][i]);
  }

  const Image divg = divergence(s.g, ctx.texture_bank());
  for (std::size_t i = 0; i < lat.size(); ++i) s.lambda7[i] += p.b(7) * (s.v[i] - divg[i]);
}

double relative_error(const Image& v_new, const Image& v_old) {
  const double base = norm2(v_old);
  if (base == 0.0) return std::numeric_limits<double>::infinity();
  return std::log(norm2(v_new - v_old) / base);
}

double constraint_residual(const SolverContext& ctx, const SolverState& s) {
  const Image blurred = ctx.blur(s.u + s.v + s.rho);
  double num = 0.0;
  for (std::size_t i = 0; i < blurred.size(); ++i) {
    const double e = ctx.f()[i] - blurred[i] - s.eps[i];
    num += e * e;
  }
  const double den = norm2(ctx.f());
  return den > 0.0 ? std::sqrt(num) / den : std::sqrt(num);
}

double iterate(SolverState& s, const SolverContext& ctx) {
  const Image v_old = s.v;
  const int tau = ++s.iteration;
  s.d = solve_d(s, ctx);
  require_finite(s.d, "d", tau);
  s.t = solve_t(s, ctx);
  require_finite(s.t, "t", tau);
  s.r = solve_r(s, ctx);
  require_finite(s.r, "r", tau);
  s.y = solve_y(s, ctx);
  require_finite(s.y, "y", tau);
  s.w = solve_w(s, ctx);
  require_finite(s.w, "w", tau);
  s.g = solve_g(s, ctx);
  require_finite(s.g, "g", tau);
  s.u = solve_u(s, ctx);
  require_finite(s.u, "u", tau);
  s.v = solve_v(s, ctx);
  require_finite(s.v, "v", tau);
  s.rho = solve_rho(s, ctx);
  require_finite(s.rho, "rho", tau);
  s.eps = solve_eps(s, ctx);
  require_finite(s.eps, "eps", tau);
  update_multipliers(s, ctx);
  for (const Image* m : {&s.lambda1, &s.lambda3, &s.lambda5, &s.lambda7}) {
    require_finite(*m, "multiplier", tau);
  }
  for (const DirectionalField* m : {&s.lambda2, &s.lambda4, &s.lambda6}) {
    require_finite(*m, "multiplier", tau);
  }
  const double err = relative_error(s.v, v_old);
  s.err_v_history.push_back(err);
  return err;
}

Decomposition demix(const Image& f, const Image& h, const SolverParams& params,
                    const ProgressCallback& progress, SolverState* state_out) {
  const SolverContext ctx(f, h, params);
  SolverState s = SolverState::initial(f, params);
  Decomposition out{Image(f.lattice()), Image(f.lattice()), Image(f.lattice()),
                    Image(f.lattice()), Image(f.lattice()), 0, 0.0, 0.0, false, {}, {}};
  for (int tau = 1; tau <= params.max_iters; ++tau) {
    const double err = iterate(s, ctx);
    const double res = constraint_residual(ctx, s);
    out.residual_history.push_back(res);
    if (progress) progress({tau, err, res}, s);
    // Err_v is undefined while v stays identically zero; that regime counts
    // as converged once a few iterations have passed.
    const bool zero_regime = std::isinf(err) && err > 0.0;
    if (zero_regime ? (tau >= 3 && norm2(s.v) == 0.0) : err < params.tol) {
      out.converged = true;
      break;
    }
  }
  out.u = s.u;
  out.v = s.v;
  out.rho = s.rho;
  out.eps = s.eps;
  out.f_re = s.u + s.v + s.rho;
  out.iterations = s.iteration;
  out.final_err_v = s.err_v_history.empty() ? 0.0 : s.err_v_history.back();
  out.constraint_residual = out.residual_history.empty() ? 0.0 : out.residual_history.back();
  out.err_v_history = s.err_v_history;
  if (state_out) *state_out = std::move(s);
  return out;
}

}  // namespace dmcd
