#include "dmcd/grid.hpp"

#include <algorithm>
#include <cmath>

namespace dmcd {

Lattice::Lattice(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 2 || cols < 2) {
    throw std::invalid_argument("lattice: extents must be at least 2x2, got " +
                                std::to_string(rows) + "x" + std::to_string(cols));
  }
}

std::string Lattice::to_string() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

void require_same_lattice(const Lattice& a, const Lattice& b, const char* where) {
  if (!(a == b)) {
    throw std::invalid_argument(std::string(where) + ": lattice mismatch " + a.to_string() +
                                " vs " + b.to_string());
  }
}

DirectionalField::DirectionalField(Lattice lattice, int count) : lattice_(lattice) {
  if (count < 1) throw std::invalid_argument("directional field: count must be positive");
  layers_.assign(static_cast<std::size_t>(count), Image(lattice));
}

DirectionalField::DirectionalField(std::vector<Image> layers)
    : lattice_(layers.empty() ? throw std::invalid_argument("directional field: no layers")
                              : layers.front().lattice()),
      layers_(std::move(layers)) {
  for (const auto& layer : layers_) require_same_lattice(lattice_, layer.lattice(), "directional field");
}

Image DirectionalField::magnitude() const {
  Image out(lattice_);
  for (const auto& layer : layers_) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += layer[i] * layer[i];
  }
  for (auto& x : out) x = std::sqrt(x);
  return out;
}

double sum(const Image& f) {
  double s = 0.0;
  for (double x : f) s += x;
  return s;
}

double dot(const Image& a, const Image& b) {
  require_same_lattice(a.lattice(), b.lattice(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double dot(const DirectionalField& a, const DirectionalField& b) {
  if (a.count() != b.count()) throw std::invalid_argument("dot: layer count mismatch");
  double s = 0.0;
  for (int l = 0; l < a.count(); ++l) s += dot(a[l], b[l]);
  return s;
}

double norm2(const Image& f) { return std::sqrt(dot(f, f)); }

double max_abs(const Image& f) {
  double m = 0.0;
  for (double x : f) m = std::max(m, std::abs(x));
  return m;
}

bool all_finite(const Image& f) {
  for (double x : f) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

bool all_finite(const DirectionalField& f) {
  for (const auto& layer : f) {
    if (!all_finite(layer)) return false;
  }
  return true;
}

Image delta(const Lattice& lattice) {
  Image out(lattice);
  out[0] = 1.0;
  return out;
}

Image real_part(const Spectrum& s) {
  Image out(s.lattice());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i].real();
  return out;
}

}  // namespace dmcd
