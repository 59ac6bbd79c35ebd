#include "dmcd/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dmcd {
namespace {

std::string extension(const std::string& path) {
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos) return {};
  std::string ext = path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

Image load_png(const std::string& path) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw std::runtime_error("cannot read PNG '" + path + "': " + image.message);
  }
  image.format = PNG_FORMAT_GRAY;
  std::vector<png_byte> buf(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr)) {
    png_image_free(&image);
    throw std::runtime_error("cannot decode PNG '" + path + "': " + image.message);
  }
  Image out(Lattice(static_cast<int>(image.height), static_cast<int>(image.width)));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = buf[i];
  return out;
}

// Reads the next header token, skipping whitespace and '#' comments.
std::string pnm_token(std::istream& is) {
  std::string tok;
  int c;
  while ((c = is.get()) != EOF) {
    if (c == '#') {
      while ((c = is.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

Image load_pgm(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  const std::string magic = pnm_token(is);
  if (magic != "P5" && magic != "P2") throw std::runtime_error("'" + path + "' is not a PGM file");
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(pnm_token(is));
    h = std::stoi(pnm_token(is));
    maxval = std::stoi(pnm_token(is));
  } catch (const std::exception&) {
    throw std::runtime_error("malformed PGM header in '" + path + "'");
  }
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535) {
    throw std::runtime_error("malformed PGM header in '" + path + "'");
  }
  Image out(Lattice(h, w));
  const double scale = 255.0 / maxval;
  for (std::size_t i = 0; i < out.size(); ++i) {
    int v = 0;
    if (magic == "P2") {
      const std::string tok = pnm_token(is);
      if (tok.empty()) throw std::runtime_error("truncated PGM '" + path + "'");
      v = std::stoi(tok);
    } else if (maxval < 256) {
      const int c = is.get();
      if (c == EOF) throw std::runtime_error("truncated PGM '" + path + "'");
      v = c;
    } else {
      const int hi = is.get();
      const int lo = is.get();
      if (lo == EOF) throw std::runtime_error("truncated PGM '" + path + "'");
      v = (hi << 8) | lo;
    }
    out[i] = maxval == 255 ? v : v * scale;
  }
  return out;
}

}  // namespace

SaveMode parse_save_mode(const std::string& s) {
  if (s == "clamp") return SaveMode::clamp;
  if (s == "rescale") return SaveMode::rescale;
  if (s == "offset150") return SaveMode::offset150;
  throw std::invalid_argument("unknown save mode '" + s + "' (expected clamp, rescale or offset150)");
}

Image load_image(const std::string& path) {
  {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw std::runtime_error("cannot open image '" + path + "'");
  }
  const std::string ext = extension(path);
  if (ext == "png") return load_png(path);
  if (ext == "pgm" || ext == "pnm") return load_pgm(path);
  throw std::runtime_error("unsupported image format '" + ext + "' for '" + path + "'");
}

std::vector<std::uint8_t> to_gray8(const Image& img, SaveMode mode) {
  std::vector<std::uint8_t> out(img.size());
  auto q = [](double x) { return static_cast<std::uint8_t>(std::clamp(std::lround(x), 0L, 255L)); };
  switch (mode) {
    case SaveMode::clamp:
      for (std::size_t i = 0; i < img.size(); ++i) out[i] = q(img[i]);
      break;
    case SaveMode::offset150:
      for (std::size_t i = 0; i < img.size(); ++i) out[i] = q(img[i] + 150.0);
      break;
    case SaveMode::rescale: {
      const auto [lo, hi] = std::minmax_element(img.begin(), img.end());
      const double span = *hi - *lo;
      for (std::size_t i = 0; i < img.size(); ++i) {
        out[i] = span > 0.0 ? q((img[i] - *lo) * 255.0 / span) : 128;
      }
      break;
    }
  }
  return out;
}

void save_image(const Image& img, const std::string& path, SaveMode mode) {
  const auto bytes = to_gray8(img, mode);
  const std::string ext = extension(path);
  if (ext == "png") {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.cols());
    image.height = static_cast<png_uint_32>(img.rows());
    image.format = PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&image, path.c_str(), 0, bytes.data(), 0, nullptr)) {
      throw std::runtime_error("cannot write PNG '" + path + "': " + image.message);
    }
    return;
  }
  if (ext == "pgm") {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write '" + path + "'");
    os << "P5\n" << img.cols() << ' ' << img.rows() << "\n255\n";
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw std::runtime_error("write to '" + path + "' failed");
    return;
  }
  throw std::runtime_error("unsupported output format '" + ext + "' for '" + path + "'");
}

}  // namespace dmcd
