#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmcd/grid.hpp"

namespace dmcd {

/// How real values map to 8-bit gray on save.
enum class SaveMode {
  clamp,      // round, clamp to [0, 255]
  rescale,    // min..max -> 0..255; a constant image maps to 128
  offset150,  // add 150, then clamp
};

SaveMode parse_save_mode(const std::string& s);

/// 8-bit grayscale PNG (any color type is converted) or PGM (P2/P5).
Image load_image(const std::string& path);

/// Format chosen by extension: .png or .pgm.
void save_image(const Image& img, const std::string& path, SaveMode mode = SaveMode::clamp);

std::vector<std::uint8_t> to_gray8(const Image& img, SaveMode mode);

}  // namespace dmcd
