#pragma once

// Directional finite differences on the periodic lattice and their symbols.
//   forward  d+_l f = cos(th_l)(f[k1,k2+1] - f) + sin(th_l)(f[k1+1,k2] - f)
//   backward d-_l f = cos(th_l)(f - f[k1,k2-1]) + sin(th_l)(f - f[k1-1,k2])
// with th_l = pi*l/L. The adjoint of d+_l is -d-_l.

#include <vector>

#include "dmcd/grid.hpp"

namespace dmcd {

struct Direction {
  double c;
  double s;
};

class DirectionBank {
 public:
  explicit DirectionBank(int count);

  int count() const noexcept { return count_; }
  double angle(int l) const;
  /// l in [0, count).
  Direction direction(int l) const;
  /// l in [0, count]; l == count is the angle pi, used by the ones-augmented
  /// divergence in the curvature splitting.
  Direction extended(int l) const;

 private:
  int count_;
  std::vector<Direction> dirs_;
};

Image forward_diff(const Image& f, Direction d);
Image backward_diff(const Image& f, Direction d);
Image forward_diff(const Image& f, int l, const DirectionBank& bank);
Image backward_diff(const Image& f, int l, const DirectionBank& bank);

DirectionalField gradient(const Image& f, const DirectionBank& bank);
/// Sum over l < L of d-_l g_l; g must have exactly L layers.
Image divergence(const DirectionalField& g, const DirectionBank& bank);
/// Sum over l <= L including the angle-pi layer; g must have L+1 layers.
Image divergence_extended(const DirectionalField& g, const DirectionBank& bank);
Image directional_laplacian(const Image& f, const DirectionBank& bank);

// Fourier symbols on the lattice grid, native order.
Spectrum forward_symbol(const Lattice& lattice, Direction d);
Spectrum backward_symbol(const Lattice& lattice, Direction d);
std::vector<Spectrum> forward_symbols(const Lattice& lattice, const DirectionBank& bank);
/// -sum_l |forward symbol|^2, real and nonpositive.
Spectrum laplacian_symbol(const Lattice& lattice, const DirectionBank& bank);

// Same operators evaluated through the symbols.
Image forward_diff_spectral(const Image& f, int l, const DirectionBank& bank);
Image backward_diff_spectral(const Image& f, int l, const DirectionBank& bank);
Image directional_laplacian_spectral(const Image& f, const DirectionBank& bank);

/// kappa = div( [grad u, 1] / |[grad u, 1]| ), summed over the L gradient layers.
Image directional_curvature(const Image& u, const DirectionBank& bank);
/// l1 norm of directional_curvature.
double dmc_norm(const Image& u, const DirectionBank& bank);

}  // namespace dmcd
