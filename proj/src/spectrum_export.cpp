#include "dmcd/spectrum_export.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>

#include "dmcd/fourier.hpp"
#include "dmcd/image_io.hpp"

namespace dmcd {

Image centered_magnitude(const Spectrum& s) {
  Image out(s.lattice());
  const int R = s.rows(), C = s.cols();
  for (int k1 = 0; k1 < R; ++k1) {
    for (int k2 = 0; k2 < C; ++k2) {
      out((k1 + R / 2) % R, (k2 + C / 2) % C) = std::abs(s(k1, k2));
    }
  }
  return out;
}

void export_spectrum_png(const Spectrum& s, const std::string& path) {
  save_image(centered_magnitude(s), path, SaveMode::rescale);
}

void export_spectrum_csv(const Spectrum& s, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write '" + path + "'");
  os << "omega1,omega2,magnitude\n" << std::setprecision(17);
  const int R = s.rows(), C = s.cols();
  for (int c1 = 0; c1 < R; ++c1) {
    const int k1 = (c1 + R - R / 2) % R;
    for (int c2 = 0; c2 < C; ++c2) {
      const int k2 = (c2 + C - C / 2) % C;
      os << omega(k1, R) << ',' << omega(k2, C) << ',' << std::abs(s(k1, k2)) << '\n';
    }
  }
}

Image log_magnitude(const Image& band) {
  Image out(band.lattice());
  for (std::size_t i = 0; i < band.size(); ++i) out[i] = std::log1p(std::abs(band[i]));
  return out;
}

}  // namespace dmcd
