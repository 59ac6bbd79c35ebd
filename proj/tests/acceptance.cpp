// Acceptance suite. One PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "dmcd/config.hpp"
#include "dmcd/diff_ops.hpp"
#include "dmcd/fourier.hpp"
#include "dmcd/frames.hpp"
#include "dmcd/image_io.hpp"
#include "dmcd/metrics.hpp"
#include "dmcd/pipeline.hpp"
#include "dmcd/prox.hpp"
#include "dmcd/solver.hpp"
#include "oracles.hpp"
#include "solver_fixtures.hpp"

using namespace dmcd;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

std::string fixed(double x, int digits = 2) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

double rel(const Image& a, const Image& b) { return norm2(a - b) / norm2(b); }

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

const fs::path work_dir = fs::temp_directory_path() / "dmcd_acceptance";

// cartoon (two flat shapes) + 45 degree sinusoid, integral gray levels once saved
Image synthetic() {
  Image f(Lattice(64, 64));
  for (int i = 0; i < 64; ++i) {
    for (int j = 0; j < 64; ++j) {
      double x = 60.0;
      if (i >= 8 && i <= 29 && j >= 6 && j <= 39) x += 100.0;
      if ((i - 44) * (i - 44) + (j - 40) * (j - 40) < 144) x += 50.0;
      x += 20.0 * std::sin(2.0 * M_PI * (6.0 * i + 6.0 * j) / 64.0);
      f(i, j) = x;
    }
  }
  return f;
}
constexpr int planted_direction = 2;  // pi/4 in a bank of 8

ExperimentConfig synthetic_config(const std::string& out) {
  ExperimentConfig cfg;
  cfg.input = (work_dir / "synthetic.png").string();
  cfg.output = (work_dir / out).string();
  cfg.kernel = {KernelKind::gaussian, 8.0};
  cfg.noise_sigma = 5.0;
  cfg.seed = 7;
  SolverParams& p = cfg.solver;
  p.curvature_directions = p.texture_directions = 8;
  p.beta.fill(1e10);
  p.step = 0.1;
  p.mu1 = ThresholdRule::adaptive(0.1);
  p.mu2 = ThresholdRule::adaptive(0.05);
  p.nu_rho = ThresholdRule::adaptive(0.1);
  p.nu_eps = ThresholdRule::adaptive(0.1);
  p.tol = -5.0;
  p.max_iters = 300;
  return cfg;
}

std::optional<ExperimentResult> main_run;

Outcome adjoints() {
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (auto lat : {Lattice(4, 4), Lattice(7, 5), Lattice(64, 64)}) {
    for (int L : {1, 2, 4, 10}) {
      const DirectionBank bank(L);
      for (int trial = 0; trial < 100; ++trial) {
        const Image f = oracle::random_image(lat, rng);
        const DirectionalField g = oracle::random_field(lat, L, rng);
        for (int l = 0; l < L; ++l) {
          const Image df = forward_diff(f, l, bank);
          const double e = std::abs(dot(df, g[l]) + dot(f, backward_diff(g[l], l, bank))) / (norm2(df) * norm2(g[l]));
          worst = std::max(worst, e);
        }
        const DirectionalField grad = gradient(f, bank);
        const double e = std::abs(dot(grad, g) + dot(f, divergence(g, bank))) / (std::sqrt(dot(grad, grad)) * std::sqrt(dot(g, g)));
        worst = std::max(worst, e);
      }
    }
  }
  return {worst < 1e-10, "max rel err " + sci(worst) + " (tol 1e-10)"};
}

Outcome spectral_equivalence() {
  std::mt19937_64 rng(102);
  const Lattice lat(64, 64);
  double worst = 0.0;
  for (int L : {1, 4, 10}) {
    const DirectionBank bank(L);
    for (int trial = 0; trial < 3; ++trial) {
      const Image f = oracle::random_image(lat, rng);
      for (int l = 0; l < L; ++l) {
        worst = std::max(worst, rel(forward_diff_spectral(f, l, bank), forward_diff(f, l, bank)));
        worst = std::max(worst, rel(backward_diff_spectral(f, l, bank), backward_diff(f, l, bank)));
      }
      worst = std::max(worst, rel(directional_laplacian_spectral(f, bank), directional_laplacian(f, bank)));
    }
  }
  for (int trial = 0; trial < 3; ++trial) {
    const Image f = oracle::random_image(lat, rng);
    const Image h = oracle::random_image(lat, rng);
    worst = std::max(worst, rel(circular_convolve(f, h), circular_convolve_direct(f, h)));
  }
  return {worst < 1e-9, "max rel err " + sci(worst) + " (tol 1e-9)"};
}

Outcome frame_unity() {
  std::mt19937_64 rng(103);
  const Lattice lat(64, 64);
  double unity = 0.0, trip = 0.0;
  const Spectrum H = dft2(make_blur_kernel({KernelKind::gaussian, 10.0}, lat));
  for (double c : {0.1, 10.0}) {
    const FrameSet fs = build_u_frames(DirectionBank(4), c, H);
    unity = std::max(unity, fs.unity_residual());
    for (int trial = 0; trial < 3; ++trial) {
      const Image f = oracle::random_image(lat, rng);
      Image re = apply_multiplier(f, fs.blur_power * fs.lowpass[0]);
      for (const auto& b : fs.bands) re += apply_multiplier(apply_multiplier(f, b.analysis), b.synthesis);
      trip = std::max(trip, rel(re, f));
    }
  }
  const MultiscaleFrameSet ms = build_multiscale(lat, {3, 4, 2.0, 1.0});
  unity = std::max(unity, ms.unity_residual());
  for (int trial = 0; trial < 3; ++trial) {
    const Image f = oracle::random_image(lat, rng);
    trip = std::max(trip, rel(ms.synthesize(ms.analyze(f)), f));
  }
  return {unity < 1e-10 && trip < 1e-10,
          "unity residual " + sci(unity) + ", round trip " + sci(trip) + " (tol 1e-10)"};
}

Outcome prox_identities() {
  std::mt19937_64 rng(104);
  const Lattice lat(1000, 1000);
  const int L = 4;
  const DirectionalField y = oracle::random_field(lat, L, rng, -3.0, 3.0);
  std::size_t bad = 0;
  for (double mu : {0.5, 2.0}) {
    const DirectionalField a = vector_shrink(y, mu), b = l1_ball_project(y, mu);
    for (int l = 0; l < L; ++l) {
      for (std::size_t i = 0; i < lat.size(); ++i) {
        const double x = y[l][i];
        const double ulp = std::abs(std::nextafter(x, 2.0 * x) - x);
        if (std::abs(a[l][i] + b[l][i] - x) > ulp) ++bad;
      }
    }
  }
  // brute force over x = k * 1e-4 on [-6, 6]
  std::uniform_real_distribution<double> ut(-5.0, 5.0), um(0.0, 3.0);
  constexpr double h = 1e-4;
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double t = ut(rng), mu = um(rng);
    double best = std::numeric_limits<double>::infinity(), argbest = 0.0;
    for (int k = -60000; k <= 60000; ++k) {
      const double x = k * h;
      const double v = mu * std::abs(x) + 0.5 * (x - t) * (x - t);
      if (v < best) {
        best = v;
        argbest = x;
      }
    }
    worst = std::max(worst, std::abs(shrink(t, mu) - argbest));
  }
  return {bad == 0 && worst <= h, std::to_string(bad) + " elements off by more than 1 ulp over 1e6 sites x " +
                                      std::to_string(L) + " layers x 2 mu; shrink vs grid " + sci(worst) +
                                      " (tol 1e-4)"};
}

Outcome subproblem_oracles() {
  std::mt19937_64 rng(105);
  const Lattice lat(6, 6);
  double wu = 0.0, wt = 0.0, wg = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int L = 1 + trial % 2, S = 1 + (trial / 2) % 2;
    const auto in = fixture::random_instance(lat, L, S, rng);
    const SolverContext ctx(in.f, in.h, in.p);
    const SolverState s = fixture::random_state(in.f, in.p, rng);
    wu = std::max(wu, oracle::rel_diff(oracle::vec(solve_u(s, ctx)), fixture::dense_u(s, in)));
    wt = std::max(wt, oracle::rel_diff(fixture::stack(solve_t(s, ctx), L), fixture::dense_t(s, in)));
    wg = std::max(wg, oracle::rel_diff(fixture::stack(solve_g(s, ctx), S), fixture::dense_g(s, in)));
  }
  const double worst = std::max({wu, wt, wg});
  return {worst < 1e-8, "max rel err u " + sci(wu) + ", t " + sci(wt) + ", g " + sci(wg) + " (tol 1e-8)"};
}

Outcome end_to_end() {
  main_run = run_experiment(synthetic_config("run_a"));
  const Decomposition& d = main_run->decomposition;
  const bool ok = d.final_err_v < -5.0 && d.iterations <= 300 && d.constraint_residual < 1e-3;
  return {ok, "Err_v " + fixed(d.final_err_v) + " (< -5) after " + std::to_string(d.iterations) +
                  " iterations (<= 300), residual " + sci(d.constraint_residual) + " (< 1e-3)"};
}

Outcome component_quality() {
  if (!main_run) return {false, "criterion 6 produced no run"};
  const Decomposition& d = main_run->decomposition;
  const DirectionBank curv(8), tex(8);
  const double dmc_u = dmc_norm(d.u, curv), dmc_f = dmc_norm(main_run->f, curv);
  const double sp = sparsity(d.v);

  const Spectrum V = dft2(d.v);
  const auto symbols = forward_symbols(d.v.lattice(), tex);
  int best = -1;
  double best_energy = -1.0;
  for (int l = 0; l < tex.count(); ++l) {
    double e = 0.0;
    for (std::size_t i = 0; i < V.size(); ++i) e += std::norm(V[i] * symbols[static_cast<std::size_t>(l)][i]);
    if (e > best_energy) {
      best_energy = e;
      best = l;
    }
  }
  const double r2 = qq_r_squared(qq_data(d.eps));
  const bool ok = dmc_u < dmc_f && sp < 100.0 && best == planted_direction && r2 > 0.95;
  return {ok, "dmc(u) " + fixed(dmc_u, 0) + " < dmc(f) " + fixed(dmc_f, 0) + ", sparsity " + fixed(sp) +
                  "% (< 100), directional energy peak l=" + std::to_string(best) + " (planted " +
                  std::to_string(planted_direction) + "), QQ R^2 " + fixed(r2, 4) + " (> 0.95)"};
}

Outcome degenerate() {
  std::mt19937_64 rng(108);
  const Lattice lat(32, 32);
  SolverParams p;
  p.curvature_directions = p.texture_directions = 4;
  p.nu_rho = ThresholdRule::fixed(0.0);
  p.nu_eps = ThresholdRule::fixed(0.0);
  p.mu2 = ThresholdRule::fixed(1e16);
  p.max_iters = 30;
  int nonzero = 0, calls = 0;
  const Image f = oracle::random_image(lat, rng, 0, 255);
  demix(f, make_blur_kernel({KernelKind::gaussian, 5.0}, lat), p, [&](const IterationReport&, const SolverState& s) {
    ++calls;
    if (max_abs(s.v) != 0.0 || max_abs(s.rho) != 0.0 || max_abs(s.eps) != 0.0) ++nonzero;
  });

  SolverParams q;
  q.curvature_directions = q.texture_directions = 4;
  q.max_iters = 50;
  const double c = 100.0;
  const Decomposition flat = demix(Image(lat, c), delta(lat), q);
  const double dev = max_abs(flat.u - Image(lat, c)) / c;
  const bool ok = nonzero == 0 && calls > 0 && flat.converged && flat.iterations <= 50 && dev < 1e-3;
  return {ok, "v, rho, eps nonzero in " + std::to_string(nonzero) + "/" + std::to_string(calls) +
                  " iterations; constant input: " + (flat.converged ? "converged" : "not converged") + " in " +
                  std::to_string(flat.iterations) + " iterations, max|u-c|/c " + sci(dev) + " (< 1e-3)"};
}

Outcome metric_checks() {
  std::mt19937_64 rng(109);
  // rank-one ensemble: block b holds coef_b * p
  const Lattice lat(100, 100);
  std::vector<double> p(100), coef(100);
  for (auto& x : p) x = std::uniform_real_distribution<double>(-1, 1)(rng);
  for (auto& c : coef) c = std::normal_distribution<double>(0.0, 3.0)(rng);
  Image e(lat);
  for (int b = 0; b < 100; ++b) {
    for (int k = 0; k < 100; ++k) {
      e((b / 10) * 10 + k / 10, (b % 10) * 10 + k % 10) = coef[static_cast<std::size_t>(b)] * p[static_cast<std::size_t>(k)];
    }
  }
  double mean = 0.0, s2 = 0.0, pp = 0.0;
  for (double c : coef) mean += c;
  mean /= 100.0;
  for (double c : coef) s2 += (c - mean) * (c - mean);
  s2 /= 100.0;
  for (double x : p) pp += x * x;
  const double mec_err = std::abs(mec(e) - s2 * pp) / (s2 * pp);

  const Image a = oracle::random_image(lat, rng, 0, 255), b = oracle::random_image(lat, rng, 0, 255);
  long double direct = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) direct += static_cast<long double>(a[i] - b[i]) * (a[i] - b[i]);
  direct /= static_cast<long double>(a.size());
  const double mse_err = std::abs(mse(a, b) - static_cast<double>(direct)) / static_cast<double>(direct);

  // fig2 thresholds on the synthetic observation; indicative only
  ExperimentConfig cfg = synthetic_config("fig2");
  apply_preset(cfg, "fig2");
  cfg.kernel = {KernelKind::gaussian, 8.0};
  cfg.noise_sigma = 5.0;
  cfg.solver.curvature_directions = cfg.solver.texture_directions = 8;
  cfg.solver.max_iters = 300;
  const double sp = run_experiment(cfg).metrics.sparsity_percent;
  const bool inside = sp > 5.0 && sp < 95.0;

  const bool ok = mec_err < 1e-8 && mse_err < 1e-12;
  return {ok, "MEC rel err " + sci(mec_err) + " (tol 1e-8), MSE rel err " + sci(mse_err) +
                  " (tol 1e-12), fig2-threshold sparsity " + fixed(sp) + "% " +
                  (inside ? "inside (5, 95)" : "FLAG outside (5, 95), not failed")};
}

Outcome determinism() {
  if (!main_run) return {false, "criterion 6 produced no run"};
  run_experiment(synthetic_config("run_b"));
  int differing = 0;
  std::string which;
  for (const char* name : {"u.png", "v.png", "rho.png", "eps.png", "f_re.png", "report.json"}) {
    if (slurp(work_dir / "run_a" / name) != slurp(work_dir / "run_b" / name)) {
      ++differing;
      which += std::string(" ") + name;
    }
  }
  return {differing == 0, differing == 0 ? "component PNGs and report.json byte-identical across two runs"
                                         : "differs:" + which};
}

struct Criterion {
  int id;
  const char* name;
  double budget;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  fs::remove_all(work_dir);
  fs::create_directories(work_dir);
  save_image(synthetic(), (work_dir / "synthetic.png").string());

  const Criterion criteria[] = {
      {1, "operator adjoints", 5.0, adjoints},
      {2, "spectral/spatial equivalence", 5.0, spectral_equivalence},
      {3, "frame unity and reconstruction", 10.0, frame_unity},
      {4, "prox identities", 10.0, prox_identities},
      {5, "subproblem oracles", 30.0, subproblem_oracles},
      {6, "end-to-end constraint satisfaction", 60.0, end_to_end},
      {7, "component quality", 0.0, component_quality},
      {8, "degenerate regimes", 0.0, degenerate},
      {9, "metrics", 0.0, metric_checks},
      {10, "determinism", 0.0, determinism},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string timing = fixed(secs) + " s";
    if (c.budget > 0.0) {
      timing += " (budget " + fixed(c.budget, 0) + " s)";
      if (secs >= c.budget) {
        o.pass = false;
        timing += " over budget";
      }
    }
    if (c.id == 7) timing = "shares the criterion 6 run";
    if (!o.pass) ++failed;
    std::printf("[%s] %d %s: %s; %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), timing.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/10 criteria passed\n", 10 - failed);
  if (failed == 0) fs::remove_all(work_dir);
  return failed == 0 ? 0 : 1;
}
