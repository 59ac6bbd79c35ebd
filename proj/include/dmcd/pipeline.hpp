#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmcd/config.hpp"
#include "dmcd/metrics.hpp"
#include "dmcd/solver.hpp"

namespace dmcd {

/// Kernel centered at index 0 (periodic), summing to one. Gaussian uses
/// sigma = size/6; disk has radius size/2; both live on offsets
/// -floor(size/2)..floor(size/2) in each axis.
Image make_blur_kernel(const KernelSpec& spec, const Lattice& lattice);

/// f + iid N(0, sigma^2), reproducible from the seed.
Image add_noise(const Image& f, double sigma, std::uint64_t seed);

struct ExperimentResult {
  Image f0;  // loaded original
  Image f;   // blurred (and noisy) observation
  Decomposition decomposition;
  MetricsReport metrics;
  std::vector<std::string> files;  // written, relative to the output directory
};

/// Loads the input, synthesizes the observation, runs demix and writes
/// the artifacts. Everything written is removed again if a step fails.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const ProgressCallback& progress = {});

/// Deterministic JSON text of a finished experiment.
std::string report_json(const ExperimentConfig& cfg, const ExperimentResult& r);

}  // namespace dmcd
