#pragma once

// Display helpers: spectra are shown on the centered frequency grid with
// DC in the middle (row d1/2, column d2/2).

#include <string>

#include "dmcd/grid.hpp"

namespace dmcd {

/// |S| moved to the centered grid.
Image centered_magnitude(const Spectrum& s);

/// Linear-scaled magnitude PNG.
void export_spectrum_png(const Spectrum& s, const std::string& path);

/// CSV with columns omega1, omega2, magnitude on the centered grid.
void export_spectrum_csv(const Spectrum& s, const std::string& path);

/// log(1 + |x|), for viewing coefficient bands.
Image log_magnitude(const Image& band);

}  // namespace dmcd
