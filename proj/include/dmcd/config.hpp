#pragma once

// Experiment configuration: a flat "key = value" text format with '#'
// comments. See README for the key list.

#include <cstdint>
#include <string>
#include <vector>

#include "dmcd/frames.hpp"
#include "dmcd/solver.hpp"

namespace dmcd {

enum class KernelKind { gaussian, disk, delta };

struct KernelSpec {
  KernelKind kind = KernelKind::gaussian;
  double size = 20.0;  // L_blur

  std::string to_string() const;
};

/// "gaussian:20", "disk:8", "delta" or "delta:1".
KernelSpec parse_kernel(const std::string& text);

/// "4e10" or "adaptive:0.05".
ThresholdRule parse_threshold(const std::string& text);

struct ExperimentConfig {
  std::string input;
  std::string output = "dmcd_out";
  KernelSpec kernel;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  SolverParams solver;
  bool emit_components = true;
  bool emit_spectra = false;
  bool emit_checkpoint = false;

  /// Throws ConfigError.
  void validate() const;
};

/// Sets one key; throws ConfigError for unknown keys or malformed values.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

ExperimentConfig parse_config(const std::string& text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

/// Demixing presets: fig2, fig8.
void apply_preset(ExperimentConfig& cfg, const std::string& name);
std::vector<std::string> demix_preset_names();

struct FilterbankPreset {
  MultiscaleConfig frames;
  bool single_scale = false;
  double kernel_size = 0.0;  // L_blur for single-scale u-frames, 0 = none
  bool analyze = false;
};

/// fig3, fig9 (single scale, c = 0.1 / 10), fig6, fig7 (I=3, L=4, a=2, c=1).
FilterbankPreset filterbank_preset(const std::string& name);
std::vector<std::string> filterbank_preset_names();

}  // namespace dmcd
