#include "dmcd/pipeline.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "dmcd/checkpoint.hpp"
#include "dmcd/fourier.hpp"
#include "dmcd/image_io.hpp"
#include "dmcd/spectrum_export.hpp"

namespace dmcd {

namespace fs = std::filesystem;

Image make_blur_kernel(const KernelSpec& spec, const Lattice& lattice) {
  if (spec.kind == KernelKind::delta) return delta(lattice);
  if (!(spec.size >= 1.0)) throw std::invalid_argument("blur kernel: size must be >= 1");
  const int r = static_cast<int>(std::floor(spec.size / 2.0));
  if (2 * r + 1 > lattice.rows() || 2 * r + 1 > lattice.cols()) {
    throw std::invalid_argument("blur kernel " + spec.to_string() + " needs a " +
                                std::to_string(2 * r + 1) + "x" + std::to_string(2 * r + 1) +
                                " support, larger than the " + lattice.to_string() + " image");
  }
  Image h(lattice);
  const double sigma = spec.size / 6.0;
  const double radius = spec.size / 2.0;
  for (int i = -r; i <= r; ++i) {
    for (int j = -r; j <= r; ++j) {
      const double d2 = static_cast<double>(i * i + j * j);
      double w = 0.0;
      if (spec.kind == KernelKind::gaussian) w = std::exp(-d2 / (2.0 * sigma * sigma));
      else w = d2 <= radius * radius ? 1.0 : 0.0;
      h[lattice.wrap(i, j)] = w;
    }
  }
  const double total = sum(h);
  for (auto& x : h) x /= total;
  return h;
}

Image add_noise(const Image& f, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("add_noise: sigma must be nonnegative");
  if (sigma == 0.0) return f;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  Image out = f;
  for (auto& x : out) x += normal(rng);
  return out;
}

namespace {

nlohmann::json finite_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

nlohmann::json series(const std::vector<double>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (double x : v) a.push_back(finite_or_null(x));
  return a;
}

// Tracks created paths so a failed run can be rolled back.
class OutputGuard {
 public:
  explicit OutputGuard(fs::path dir) : dir_(std::move(dir)) {
    if (!fs::exists(dir_)) {
      fs::create_directories(dir_);
      created_dir_ = true;
    }
  }
  ~OutputGuard() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& p : written_) fs::remove(dir_ / p, ec);
    if (created_dir_) fs::remove_all(dir_, ec);
  }
  fs::path add(const std::string& name) {
    written_.push_back(name);
    return dir_ / name;
  }
  void commit() { committed_ = true; }
  const std::vector<std::string>& written() const { return written_; }

 private:
  fs::path dir_;
  bool created_dir_ = false;
  bool committed_ = false;
  std::vector<std::string> written_;
};

}  // namespace

std::string report_json(const ExperimentConfig& cfg, const ExperimentResult& r) {
  const auto& p = cfg.solver;
  nlohmann::json j;
  j["mse"] = finite_or_null(r.metrics.mse);
  j["mec"] = finite_or_null(r.metrics.mec);
  j["sparsity_percent"] = r.metrics.sparsity_percent;
  j["constraint_residual"] = finite_or_null(r.metrics.constraint_residual);
  j["err_v_history"] = series(r.metrics.err_v_history);
  j["iterations"] = r.decomposition.iterations;
  j["converged"] = r.decomposition.converged;
  j["final_err_v"] = finite_or_null(r.decomposition.final_err_v);
  j["lattice"] = {{"rows", r.f.rows()}, {"cols", r.f.cols()}};
  nlohmann::json params;
  params["kernel"] = cfg.kernel.to_string();
  params["noise_sigma"] = cfg.noise_sigma;
  params["seed"] = cfg.seed;
  params["L"] = p.curvature_directions;
  params["S"] = p.texture_directions;
  params["beta"] = p.beta;
  params["alpha"] = p.step;
  params["mu1"] = p.mu1.to_string();
  params["mu2"] = p.mu2.to_string();
  params["nu_rho"] = p.nu_rho.to_string();
  params["nu_eps"] = p.nu_eps.to_string();
  params["tol"] = p.tol;
  params["max_iters"] = p.max_iters;
  params["coupling"] = to_string(p.coupling);
  params["cst"] = {{"scales", p.cst.scales},
                   {"directions", p.cst.directions},
                   {"dilation", p.cst.dilation},
                   {"c", p.cst.c},
                   {"family", to_string(p.cst.family)},
                   {"mode", to_string(p.cst.mode)}};
  j["params"] = params;
  return j.dump(2) + "\n";
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const ProgressCallback& progress) {
  cfg.validate();
  Image f0 = load_image(cfg.input);
  const Image h = make_blur_kernel(cfg.kernel, f0.lattice());
  Image f = add_noise(circular_convolve(f0, h), cfg.noise_sigma, cfg.seed);

  SolverState final_state = SolverState::initial(f, cfg.solver);
  Decomposition dec = demix(f, h, cfg.solver, progress, &final_state);
  ExperimentResult r{std::move(f0), std::move(f), std::move(dec), {}, {}};
  const Decomposition& d = r.decomposition;

  r.metrics.mse = mse(r.f0, d.f_re);
  const Image error = r.f0 - d.f_re;
  r.metrics.mec = (error.rows() >= 10 && error.cols() >= 10) ? mec(error, 10) : 0.0;
  r.metrics.sparsity_percent = sparsity(d.v);
  r.metrics.err_v_history = d.err_v_history;
  r.metrics.constraint_residual = d.constraint_residual;

  OutputGuard out(cfg.output);
  if (cfg.emit_components) {
    save_image(d.u, out.add("u.png"), SaveMode::clamp);
    save_image(d.v, out.add("v.png"), SaveMode::rescale);
    save_image(d.rho, out.add("rho.png"), SaveMode::rescale);
    save_image(d.eps, out.add("eps.png"), SaveMode::rescale);
    save_image(d.f_re, out.add("f_re.png"), SaveMode::clamp);
    save_image(r.f, out.add("f.png"), SaveMode::clamp);
    save_image(error, out.add("error.png"), SaveMode::offset150);
  }
  write_err_v_csv(out.add("err_v.csv").string(), d.err_v_history);
  write_qq_csv(out.add("qq.csv").string(), qq_data(d.eps));
  if (cfg.emit_spectra) {
    const Spectrum H = dft2(h);
    export_spectrum_png(H, out.add("spectrum_H.png").string());
    export_spectrum_csv(H, out.add("spectrum_H.csv").string());
  }
  if (cfg.emit_checkpoint) {
    write_checkpoint(out.add("state.ckpt").string(), to_checkpoint(final_state));
  }
  {
    std::ofstream os(out.add("report.json"));
    if (!os) throw std::runtime_error("cannot write report.json in '" + cfg.output + "'");
    os << report_json(cfg, r);
    if (!os) throw std::runtime_error("write of report.json failed");
  }
  r.files = out.written();
  out.commit();
  return r;
}

}  // namespace dmcd
