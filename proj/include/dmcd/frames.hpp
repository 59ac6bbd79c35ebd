#pragma once

// Directional filter banks satisfying a unity condition. Every band stores
// the multiplier applied on analysis (the dual filter evaluated at z^{-1})
// and the multiplier applied on synthesis.

#include <string>
#include <vector>

#include "dmcd/diff_ops.hpp"
#include "dmcd/grid.hpp"

namespace dmcd {

struct FrameBand {
  int scale = 0;
  int direction = 0;
  Spectrum analysis;
  Spectrum synthesis;
};

enum class FrameKind { u_frames, xi_theta };

/// Single-scale frames.
///   u_frames: |H|^2 * lowpass[0] + sum_l analysis_l * synthesis_l = 1
///   xi_theta: lowpass[l] + analysis_l * synthesis_l = 1 for every l
struct FrameSet {
  FrameKind kind;
  int directions;
  double c;
  Spectrum blur_power;            // |H|^2, ones for xi_theta
  std::vector<Spectrum> lowpass;  // Phi, or Xi_l per direction
  std::vector<FrameBand> bands;

  double unity_residual() const;
};

FrameSet build_u_frames(const DirectionBank& bank, double c, const Spectrum& H);
FrameSet build_xi_theta(const DirectionBank& bank, double c, const Lattice& lattice);

enum class FrameFamily { phi_psi, xi_theta };
enum class FrameMode { discrete, continuous };

std::string to_string(FrameFamily f);
std::string to_string(FrameMode m);
FrameFamily parse_family(const std::string& s);
FrameMode parse_mode(const std::string& s);

struct MultiscaleConfig {
  int scales = 3;
  int directions = 8;
  double dilation = 2.0;
  double c = 1.0;
  FrameFamily family = FrameFamily::phi_psi;
  FrameMode mode = FrameMode::discrete;
};

struct CoefficientPyramid {
  Image lowpass;
  std::vector<Image> bands;
};

/// Lowpass plus scales x directions wavelet bands with
/// lowpass + sum analysis * synthesis = 1 at every frequency.
class MultiscaleFrameSet {
 public:
  MultiscaleFrameSet(const Lattice& lattice, const MultiscaleConfig& config);

  const Lattice& lattice() const noexcept { return lattice_; }
  const MultiscaleConfig& config() const noexcept { return config_; }
  const Spectrum& lowpass() const noexcept { return lowpass_; }
  const std::vector<FrameBand>& bands() const noexcept { return bands_; }

  double unity_residual() const;

  CoefficientPyramid analyze(const Image& f) const;
  Image synthesize(const CoefficientPyramid& p) const;

 private:
  Lattice lattice_;
  MultiscaleConfig config_;
  Spectrum lowpass_;
  std::vector<FrameBand> bands_;
};

MultiscaleFrameSet build_multiscale(const Lattice& lattice, const MultiscaleConfig& config);

/// Largest |coefficient| over the wavelet bands (lowpass excluded).
double sup_coeff(const Image& f, const MultiscaleFrameSet& frames);
double sup_coeff(const CoefficientPyramid& p);

/// Soft-threshold every wavelet band by nu and synthesize; lowpass kept.
Image cst(const Image& f, double nu, const MultiscaleFrameSet& frames);

/// f - cst(f, nu), formed by synthesizing the clipped bands clamp(b, -nu, nu).
/// Exactly zero when nu = 0.
Image cst_complement(const Image& f, double nu, const MultiscaleFrameSet& frames);

}  // namespace dmcd
