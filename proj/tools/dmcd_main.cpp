// dmcd command-line tool: demix, filterbank, metrics, kernel, noise.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "dmcd/config.hpp"
#include "dmcd/fourier.hpp"
#include "dmcd/frames.hpp"
#include "dmcd/image_io.hpp"
#include "dmcd/log.hpp"
#include "dmcd/metrics.hpp"
#include "dmcd/parallel.hpp"
#include "dmcd/pipeline.hpp"
#include "dmcd/spectrum_export.hpp"

namespace fs = std::filesystem;

namespace {

// Runtime failure with a message for stderr; maps to exit code 2.
struct RuntimeFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DemixArgs {
  std::string config_path;
  std::string preset;
  // flag name -> config key, in the order overrides are applied
  std::vector<std::pair<std::string, std::string>> overrides;
  std::map<std::string, std::string> values;
  bool quiet = false;
  bool spectra = false;
  bool checkpoint = false;
};

struct FilterbankArgs {
  std::string preset;
  std::string family = "phi-psi";
  std::string mode = "discrete";
  int scales = 3;
  int directions = 4;
  double dilation = 2.0;
  double c = 1.0;
  bool single_scale = false;
  std::string kernel;
  int rows = 128;
  int cols = 128;
  std::string input;
  bool analyze = false;
  bool export_spectra = false;
  std::string out = "filterbank_out";
};

struct MetricsArgs {
  std::string reference;
  std::string estimate;
  std::string texture;
  int blocks = 10;
  std::string json_path;
};

struct KernelArgs {
  std::string kernel = "gaussian:20";
  int rows = 64;
  int cols = 64;
  std::string out;
};

struct NoiseArgs {
  std::string input;
  std::string out;
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

int run_demix(const DemixArgs& a) {
  dmcd::ExperimentConfig cfg;
  if (!a.preset.empty()) dmcd::apply_preset(cfg, a.preset);
  if (!a.config_path.empty()) cfg = dmcd::load_config(a.config_path, cfg);
  for (const auto& [flag, key] : a.overrides) {
    auto it = a.values.find(flag);
    if (it != a.values.end()) dmcd::set_config_value(cfg, key, it->second);
  }
  if (a.spectra) cfg.emit_spectra = true;
  if (a.checkpoint) cfg.emit_checkpoint = true;
  if (cfg.input.empty()) throw dmcd::ConfigError("no input image (use --input or 'input =' in the config)");
  if (!fs::exists(cfg.input)) throw RuntimeFailure("input image '" + cfg.input + "' does not exist");

  auto progress = [&](const dmcd::IterationReport& r, const dmcd::SolverState&) {
    if (!a.quiet) std::printf("iter %d err_v %.6g residual %.6g\n", r.iteration, r.err_v, r.constraint_residual);
  };
  const auto result = dmcd::run_experiment(cfg, progress);
  const auto& d = result.decomposition;
  std::printf("%s after %d iterations, Err_v %.6g, residual %.6g\n",
              d.converged ? "converged" : "stopped", d.iterations, d.final_err_v, d.constraint_residual);
  std::printf("mse %.6g mec %.6g sparsity %.4g%%\n", result.metrics.mse, result.metrics.mec,
              result.metrics.sparsity_percent);
  std::printf("wrote %zu files to %s\n", result.files.size(), cfg.output.c_str());
  return 0;
}

dmcd::Spectrum kernel_spectrum(const std::string& spec, const dmcd::Lattice& lat) {
  return dmcd::dft2(dmcd::make_blur_kernel(dmcd::parse_kernel(spec), lat));
}

void export_band(const dmcd::Spectrum& s, const fs::path& dir, const std::string& stem) {
  dmcd::export_spectrum_png(s, (dir / (stem + ".png")).string());
  dmcd::export_spectrum_csv(s, (dir / (stem + ".csv")).string());
}

int run_filterbank(FilterbankArgs a, const CLI::App& cmd) {
  if (!a.preset.empty()) {
    const auto p = dmcd::filterbank_preset(a.preset);
    // explicit flags win over the preset
    if (cmd.count("--I") == 0) a.scales = p.frames.scales;
    if (cmd.count("--L") == 0) a.directions = p.frames.directions;
    if (cmd.count("--a") == 0) a.dilation = p.frames.dilation;
    if (cmd.count("--c") == 0) a.c = p.frames.c;
    if (cmd.count("--single-scale") == 0) a.single_scale = p.single_scale;
    if (cmd.count("--kernel") == 0 && p.kernel_size > 0) a.kernel = "gaussian:" + fmt(p.kernel_size);
    if (cmd.count("--analyze") == 0) a.analyze = p.analyze;
  }
  if (a.analyze && a.input.empty()) throw dmcd::ConfigError("--analyze needs --input");

  std::optional<dmcd::Image> f;
  if (!a.input.empty()) f = dmcd::load_image(a.input);
  const dmcd::Lattice lat = f ? f->lattice() : dmcd::Lattice(a.rows, a.cols);
  const fs::path out(a.out);
  if (a.export_spectra || a.analyze) fs::create_directories(out);

  double residual = 0.0;
  if (a.single_scale) {
    const dmcd::DirectionBank bank(a.directions);
    const auto family = dmcd::parse_family(a.family);
    dmcd::FrameSet fs_ = family == dmcd::FrameFamily::phi_psi
                             ? dmcd::build_u_frames(bank, a.c,
                                                    a.kernel.empty() ? dmcd::dft2(dmcd::delta(lat))
                                                                     : kernel_spectrum(a.kernel, lat))
                             : dmcd::build_xi_theta(bank, a.c, lat);
    residual = fs_.unity_residual();
    if (a.export_spectra) {
      for (std::size_t i = 0; i < fs_.lowpass.size(); ++i) {
        export_band(fs_.lowpass[i], out, "lowpass_" + std::to_string(i));
      }
      for (const auto& b : fs_.bands) {
        export_band(b.analysis, out, "analysis_l" + std::to_string(b.direction));
        export_band(b.synthesis, out, "synthesis_l" + std::to_string(b.direction));
      }
    }
    if (a.analyze) dmcd::log::warn("--analyze is only supported for multiscale frames; skipped");
  } else {
    dmcd::MultiscaleConfig mc;
    mc.scales = a.scales;
    mc.directions = a.directions;
    mc.dilation = a.dilation;
    mc.c = a.c;
    mc.family = dmcd::parse_family(a.family);
    mc.mode = dmcd::parse_mode(a.mode);
    const auto frames = dmcd::build_multiscale(lat, mc);
    residual = frames.unity_residual();
    if (a.export_spectra) {
      export_band(frames.lowpass(), out, "lowpass");
      for (const auto& b : frames.bands()) {
        const std::string tag = "_i" + std::to_string(b.scale) + "_l" + std::to_string(b.direction);
        export_band(b.analysis, out, "analysis" + tag);
        export_band(b.synthesis, out, "synthesis" + tag);
      }
    }
    if (a.analyze) {
      const auto pyr = frames.analyze(*f);
      dmcd::save_image(dmcd::log_magnitude(pyr.lowpass), (out / "coeff_lowpass.png").string(),
                       dmcd::SaveMode::rescale);
      for (std::size_t k = 0; k < pyr.bands.size(); ++k) {
        const auto& b = frames.bands()[k];
        const std::string name =
            "coeff_i" + std::to_string(b.scale) + "_l" + std::to_string(b.direction) + ".png";
        dmcd::save_image(dmcd::log_magnitude(pyr.bands[k]), (out / name).string(), dmcd::SaveMode::rescale);
      }
      const dmcd::Image rec = frames.synthesize(pyr);
      const double err = dmcd::norm2(rec - *f) / std::max(dmcd::norm2(*f), 1e-300);
      std::printf("reconstruction relative error %.3e\n", err);
    }
  }
  std::printf("unity residual %.3e\n", residual);
  if (!(residual <= 1e-8)) {
    std::fprintf(stderr, "dmcd: unity residual exceeds 1e-8\n");
    return 2;
  }
  return 0;
}

int run_metrics(const MetricsArgs& a) {
  const dmcd::Image f0 = dmcd::load_image(a.reference);
  const dmcd::Image fr = dmcd::load_image(a.estimate);
  if (a.blocks < 1) throw dmcd::ConfigError("--blocks must be >= 1");
  dmcd::require_same_lattice(f0.lattice(), fr.lattice(), "metrics");
  const dmcd::Image err = f0 - fr;
  const std::size_t dropped = dmcd::dropped_block_pixels(f0.lattice(), a.blocks);
  if (dropped > 0) {
    dmcd::log::warn(std::to_string(dropped) + " pixels fall outside whole " + std::to_string(a.blocks) + "x" +
              std::to_string(a.blocks) + " blocks and are ignored by MEC");
  }
  nlohmann::json j;
  j["mse"] = dmcd::mse(f0, fr);
  j["mec"] = (f0.rows() >= a.blocks && f0.cols() >= a.blocks) ? dmcd::mec(err, a.blocks) : 0.0;
  j["blocks"] = a.blocks;
  j["dropped_pixels"] = dropped;
  if (!a.texture.empty()) j["sparsity_percent"] = dmcd::sparsity(dmcd::load_image(a.texture));
  const std::string text = j.dump(2) + "\n";
  std::fputs(text.c_str(), stdout);
  if (!a.json_path.empty()) {
    std::ofstream os(a.json_path);
    if (!(os << text)) throw RuntimeFailure("cannot write '" + a.json_path + "'");
  }
  return 0;
}

int run_kernel(const KernelArgs& a) {
  const dmcd::Lattice lat(a.rows, a.cols);
  const dmcd::Image h = dmcd::make_blur_kernel(dmcd::parse_kernel(a.kernel), lat);
  std::printf("kernel %s on %s, sum %.17g, max %.6g\n", dmcd::parse_kernel(a.kernel).to_string().c_str(),
              lat.to_string().c_str(), dmcd::sum(h), dmcd::max_abs(h));
  if (!a.out.empty()) {
    // shift so the center tap is in the middle of the picture
    dmcd::Image shown(lat);
    for (int i = 0; i < lat.rows(); ++i) {
      for (int j = 0; j < lat.cols(); ++j) shown(i, j) = h.at(i - lat.rows() / 2, j - lat.cols() / 2);
    }
    dmcd::save_image(shown, a.out, dmcd::SaveMode::rescale);
  }
  return 0;
}

int run_noise(const NoiseArgs& a) {
  const dmcd::Image f = dmcd::load_image(a.input);
  dmcd::save_image(dmcd::add_noise(f, a.sigma, a.seed), a.out, dmcd::SaveMode::clamp);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Directional mean curvature demixing"};
  app.require_subcommand(1);
  int threads = 0;
  bool verbose = false;
  app.add_option("--threads", threads, "worker threads (default: DMCD_THREADS or hardware)");
  app.add_flag("-v,--verbose", verbose, "debug logging");

  DemixArgs da;
  auto* demix = app.add_subcommand("demix", "deblur and decompose an image into u + v + rho + eps");
  demix->add_option("--config", da.config_path, "key = value config file");
  demix->add_option("--preset", da.preset, "fig2 or fig8");
  demix->add_flag("-q,--quiet", da.quiet, "no per-iteration lines");
  demix->add_flag("--spectra", da.spectra, "also export the kernel spectrum");
  demix->add_flag("--checkpoint", da.checkpoint, "also dump the final solver state");
  const std::vector<std::pair<std::string, std::string>> demix_flags = {
      {"--input", "input"},       {"--out", "output"},         {"--kernel", "kernel"},
      {"--noise-sigma", "noise_sigma"}, {"--seed", "seed"},    {"--L", "L"},
      {"--S", "S"},               {"--beta", "beta"},          {"--alpha", "alpha"},
      {"--mu1", "mu1"},           {"--mu2", "mu2"},            {"--nu-rho", "nu_rho"},
      {"--nu-eps", "nu_eps"},     {"--tol", "tol"},            {"--max-iters", "max_iters"},
      {"--coupling", "coupling"},
  };
  da.overrides = demix_flags;
  for (const auto& [flag, key] : demix_flags) {
    demix->add_option(flag, da.values[flag], "config key '" + key + "'");
  }

  FilterbankArgs fa;
  auto* fb = app.add_subcommand("filterbank", "build directional frames, check unity, export spectra");
  fb->add_option("--preset", fa.preset, "fig3, fig6, fig7 or fig9");
  fb->add_option("--family", fa.family, "phi-psi or xi-theta");
  fb->add_option("--mode", fa.mode, "discrete or continuous");
  fb->add_option("--I", fa.scales, "scales");
  fb->add_option("--L", fa.directions, "directions");
  fb->add_option("--a", fa.dilation, "dilation");
  fb->add_option("--c", fa.c, "frame constant");
  fb->add_flag("--single-scale", fa.single_scale, "single-scale frames");
  fb->add_option("--kernel", fa.kernel, "blur kernel for single-scale u-frames");
  fb->add_option("--rows", fa.rows, "lattice rows without --input");
  fb->add_option("--cols", fa.cols, "lattice cols without --input");
  fb->add_option("--input", fa.input, "image to analyze");
  fb->add_flag("--analyze", fa.analyze, "write log-scaled coefficient bands");
  fb->add_flag("--export-spectra", fa.export_spectra, "write filter spectra as PNG and CSV");
  fb->add_option("--out", fa.out, "output directory");

  MetricsArgs ma;
  auto* met = app.add_subcommand("metrics", "MSE, MEC and sparsity as JSON");
  met->add_option("--reference", ma.reference, "original image")->required();
  met->add_option("--estimate", ma.estimate, "reconstruction")->required();
  met->add_option("--texture", ma.texture, "texture component for sparsity");
  met->add_option("--blocks", ma.blocks, "MEC block size");
  met->add_option("--json", ma.json_path, "also write the JSON here");

  KernelArgs ka;
  auto* ker = app.add_subcommand("kernel", "synthesize a blur kernel");
  ker->add_option("--kernel", ka.kernel, "gaussian:N, disk:N or delta");
  ker->add_option("--rows", ka.rows);
  ker->add_option("--cols", ka.cols);
  ker->add_option("--out", ka.out, "PNG of the centered kernel");

  NoiseArgs na;
  auto* noi = app.add_subcommand("noise", "add seeded Gaussian noise");
  noi->add_option("--input", na.input)->required();
  noi->add_option("--out", na.out)->required();
  noi->add_option("--sigma", na.sigma)->required();
  noi->add_option("--seed", na.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (verbose) dmcd::log::set_level(dmcd::log::Level::debug);
  if (threads > 0) dmcd::set_thread_count(threads);

  try {
    if (*demix) {
      // drop flags that were not given so they do not override the config
      for (auto it = da.values.begin(); it != da.values.end();) {
        it = demix->count(it->first) == 0 ? da.values.erase(it) : std::next(it);
      }
      return run_demix(da);
    }
    if (*fb) return run_filterbank(fa, *fb);
    if (*met) return run_metrics(ma);
    if (*ker) return run_kernel(ka);
    if (*noi) return run_noise(na);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "dmcd: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "dmcd: %s\n", e.what());
    return 2;
  }
  return 1;
}
