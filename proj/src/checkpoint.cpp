#include "dmcd/checkpoint.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace dmcd {
namespace {

constexpr char kMagic[8] = {'D', 'M', 'C', 'D', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& os, T value) {
  auto bytes = std::bit_cast<std::array<char, sizeof(T)>>(value);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  os.write(bytes.data(), bytes.size());
}

template <typename T>
T get(std::istream& is) {
  std::array<char, sizeof(T)> bytes{};
  if (!is.read(bytes.data(), bytes.size())) throw std::runtime_error("checkpoint: truncated file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  return std::bit_cast<T>(bytes);
}

void add(Checkpoint& c, const std::string& name, const Image& img) {
  c.arrays.push_back({name, static_cast<std::uint32_t>(img.rows()),
                      static_cast<std::uint32_t>(img.cols()), img.storage()});
}

void add(Checkpoint& c, const std::string& name, const DirectionalField& f) {
  for (int l = 0; l < f.count(); ++l) add(c, name + "/" + std::to_string(l), f[l]);
}

Image image(const Checkpoint& c, const std::string& name) {
  const NamedArray& a = c.find(name);
  return Image(Lattice(static_cast<int>(a.rows), static_cast<int>(a.cols)), a.values);
}

DirectionalField field(const Checkpoint& c, const std::string& name) {
  std::vector<Image> layers;
  const std::string prefix = name + "/";
  for (int l = 0;; ++l) {
    const std::string key = prefix + std::to_string(l);
    auto it = std::find_if(c.arrays.begin(), c.arrays.end(),
                           [&](const NamedArray& a) { return a.name == key; });
    if (it == c.arrays.end()) break;
    layers.push_back(image(c, key));
  }
  if (layers.empty()) throw std::runtime_error("checkpoint: missing field '" + name + "'");
  return DirectionalField(std::move(layers));
}

}  // namespace

const NamedArray& Checkpoint::find(const std::string& name) const {
  for (const auto& a : arrays) {
    if (a.name == name) return a;
  }
  throw std::runtime_error("checkpoint: missing array '" + name + "'");
}

void write_checkpoint(const std::string& path, const Checkpoint& c) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("checkpoint: cannot open '" + path + "' for writing");
  os.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(os, kVersion);
  put<std::uint32_t>(os, c.iteration);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(c.arrays.size()));
  for (const auto& a : c.arrays) {
    if (a.values.size() != static_cast<std::size_t>(a.rows) * a.cols) {
      throw std::invalid_argument("checkpoint: array '" + a.name + "' has inconsistent shape");
    }
    put<std::uint32_t>(os, static_cast<std::uint32_t>(a.name.size()));
    os.write(a.name.data(), static_cast<std::streamsize>(a.name.size()));
    put<std::uint32_t>(os, a.rows);
    put<std::uint32_t>(os, a.cols);
    for (double x : a.values) put<double>(os, x);
  }
  if (!os) throw std::runtime_error("checkpoint: write to '" + path + "' failed");
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("checkpoint: cannot open '" + path + "'");
  char magic[8];
  if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw std::runtime_error("checkpoint: '" + path + "' is not a checkpoint file");
  }
  const auto version = get<std::uint32_t>(is);
  if (version != kVersion) {
    throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));
  }
  Checkpoint c;
  c.iteration = get<std::uint32_t>(is);
  const auto count = get<std::uint32_t>(is);
  for (std::uint32_t k = 0; k < count; ++k) {
    NamedArray a;
    a.name.resize(get<std::uint32_t>(is));
    if (!is.read(a.name.data(), static_cast<std::streamsize>(a.name.size()))) {
      throw std::runtime_error("checkpoint: truncated file");
    }
    a.rows = get<std::uint32_t>(is);
    a.cols = get<std::uint32_t>(is);
    a.values.resize(static_cast<std::size_t>(a.rows) * a.cols);
    for (auto& x : a.values) x = get<double>(is);
    c.arrays.push_back(std::move(a));
  }
  return c;
}

Checkpoint to_checkpoint(const SolverState& s) {
  Checkpoint c;
  c.iteration = static_cast<std::uint32_t>(s.iteration);
  add(c, "u", s.u);
  add(c, "v", s.v);
  add(c, "rho", s.rho);
  add(c, "eps", s.eps);
  add(c, "d", s.d);
  add(c, "r", s.r);
  add(c, "t", s.t);
  add(c, "y", s.y);
  add(c, "w", s.w);
  add(c, "g", s.g);
  add(c, "lambda1", s.lambda1);
  add(c, "lambda2", s.lambda2);
  add(c, "lambda3", s.lambda3);
  add(c, "lambda4", s.lambda4);
  add(c, "lambda5", s.lambda5);
  add(c, "lambda6", s.lambda6);
  add(c, "lambda7", s.lambda7);
  c.arrays.push_back({"err_v", 1, static_cast<std::uint32_t>(s.err_v_history.size()),
                      s.err_v_history});
  return c;
}

SolverState from_checkpoint(const Checkpoint& c) {
  return SolverState{image(c, "u"),
                     image(c, "v"),
                     image(c, "rho"),
                     image(c, "eps"),
                     image(c, "d"),
                     field(c, "r"),
                     field(c, "t"),
                     field(c, "y"),
                     field(c, "w"),
                     field(c, "g"),
                     image(c, "lambda1"),
                     image(c, "lambda3"),
                     image(c, "lambda5"),
                     image(c, "lambda7"),
                     field(c, "lambda2"),
                     field(c, "lambda4"),
                     field(c, "lambda6"),
                     static_cast<int>(c.iteration),
                     c.find("err_v").values};
}

}  // namespace dmcd
