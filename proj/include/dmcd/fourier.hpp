#pragma once

// 2D DFT on the periodic lattice. Forward transform is unnormalized, the
// inverse carries 1/(d1*d2). Spectra are kept in native FFT order.

#include "dmcd/grid.hpp"

namespace dmcd {

/// Angular frequency of bin m on an axis of length d, in [-pi, pi).
double omega(int m, int d);

Spectrum dft2(const Image& f);
Spectrum dft2(const Spectrum& f);
/// Full complex inverse.
Spectrum idft2_complex(const Spectrum& F);

struct RealInverse {
  Image image;
  double imag_residue;  // max |Im| discarded
};
RealInverse idft2_with_residue(const Spectrum& F);

/// Real part of the inverse; logs the residue when it exceeds 1e-8.
Image idft2(const Spectrum& F);

/// Re[idft2(dft2(f) * M)].
Image apply_multiplier(const Image& f, const Spectrum& M);

/// Periodic convolution computed by direct double summation. O(|Omega|^2).
Image circular_convolve_direct(const Image& f, const Image& d);
/// Periodic convolution through the convolution theorem.
Image circular_convolve(const Image& f, const Image& d);

/// f[-k mod (d1, d2)].
Image time_reverse(const Image& f);

/// S(z^{-1}): reflects bin indices.
Spectrum reflect(const Spectrum& S);

/// Largest |S(z^{-1}) - conj(S(z))|.
double hermitian_defect(const Spectrum& S);

}  // namespace dmcd
