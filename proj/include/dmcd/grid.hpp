#pragma once

// Periodic lattice, real images, complex spectra and stacks of images.

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dmcd {

using Complex = std::complex<double>;

/// Rectangular index set [0, rows-1] x [0, cols-1] with periodic indexing.
class Lattice {
 public:
  Lattice(int rows, int cols);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_);
  }

  /// Row-major offset of (k1, k2) after reduction modulo (rows, cols).
  std::size_t wrap(int k1, int k2) const noexcept {
    int r = k1 % rows_;
    int c = k2 % cols_;
    if (r < 0) r += rows_;
    if (c < 0) c += cols_;
    return static_cast<std::size_t>(r) * cols_ + c;
  }

  std::string to_string() const;

  friend bool operator==(const Lattice&, const Lattice&) = default;

 private:
  int rows_;
  int cols_;
};

void require_same_lattice(const Lattice& a, const Lattice& b, const char* where);

/// Values of type T on every site of a lattice, stored row-major.
template <typename T>
class Grid {
 public:
  using value_type = T;

  explicit Grid(Lattice lattice, T fill = T{})
      : lattice_(lattice), values_(lattice.size(), fill) {}

  Grid(Lattice lattice, std::vector<T> values)
      : lattice_(lattice), values_(std::move(values)) {
    if (values_.size() != lattice_.size()) {
      throw std::invalid_argument("grid: value count " + std::to_string(values_.size()) +
                                  " does not match lattice " + lattice_.to_string());
    }
  }

  const Lattice& lattice() const noexcept { return lattice_; }
  int rows() const noexcept { return lattice_.rows(); }
  int cols() const noexcept { return lattice_.cols(); }
  std::size_t size() const noexcept { return values_.size(); }

  T& operator()(int k1, int k2) noexcept {
    return values_[static_cast<std::size_t>(k1) * lattice_.cols() + k2];
  }
  const T& operator()(int k1, int k2) const noexcept {
    return values_[static_cast<std::size_t>(k1) * lattice_.cols() + k2];
  }

  /// Periodic access: indices are reduced modulo the lattice extents.
  const T& at(int k1, int k2) const noexcept { return values_[lattice_.wrap(k1, k2)]; }

  T& operator[](std::size_t i) noexcept { return values_[i]; }
  const T& operator[](std::size_t i) const noexcept { return values_[i]; }

  std::span<T> values() noexcept { return values_; }
  std::span<const T> values() const noexcept { return values_; }
  std::vector<T>& storage() noexcept { return values_; }
  const std::vector<T>& storage() const noexcept { return values_; }

  auto begin() noexcept { return values_.begin(); }
  auto end() noexcept { return values_.end(); }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  Grid& operator+=(const Grid& o) {
    require_same_lattice(lattice_, o.lattice_, "operator+=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
  }
  Grid& operator-=(const Grid& o) {
    require_same_lattice(lattice_, o.lattice_, "operator-=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
  }
  /// Pointwise product.
  Grid& operator*=(const Grid& o) {
    require_same_lattice(lattice_, o.lattice_, "operator*=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] *= o.values_[i];
    return *this;
  }
  Grid& operator*=(T s) noexcept {
    for (auto& x : values_) x *= s;
    return *this;
  }
  Grid& operator/=(T s) noexcept {
    for (auto& x : values_) x /= s;
    return *this;
  }

  friend Grid operator+(Grid a, const Grid& b) { return a += b; }
  friend Grid operator-(Grid a, const Grid& b) { return a -= b; }
  friend Grid operator*(Grid a, const Grid& b) { return a *= b; }
  friend Grid operator*(Grid a, T s) { return a *= s; }
  friend Grid operator*(T s, Grid a) { return a *= s; }
  friend Grid operator/(Grid a, T s) { return a /= s; }
  friend Grid operator-(Grid a) {
    for (auto& x : a.values_) x = -x;
    return a;
  }

 private:
  Lattice lattice_;
  std::vector<T> values_;
};

/// Real-valued function on the lattice.
using Image = Grid<double>;
/// DFT coefficients in native FFT order (DC at index 0).
using Spectrum = Grid<Complex>;

/// An ordered stack of images sharing one lattice.
class DirectionalField {
 public:
  DirectionalField(Lattice lattice, int count);
  explicit DirectionalField(std::vector<Image> layers);

  const Lattice& lattice() const noexcept { return lattice_; }
  int count() const noexcept { return static_cast<int>(layers_.size()); }

  Image& operator[](int l) { return layers_.at(static_cast<std::size_t>(l)); }
  const Image& operator[](int l) const { return layers_.at(static_cast<std::size_t>(l)); }

  auto begin() noexcept { return layers_.begin(); }
  auto end() noexcept { return layers_.end(); }
  auto begin() const noexcept { return layers_.begin(); }
  auto end() const noexcept { return layers_.end(); }

  /// Per-site Euclidean norm across layers.
  Image magnitude() const;

 private:
  Lattice lattice_;
  std::vector<Image> layers_;
};

// Reductions. Sums run in index order so results are schedule independent.
double sum(const Image& f);
double dot(const Image& a, const Image& b);
double dot(const DirectionalField& a, const DirectionalField& b);
double norm2(const Image& f);
double max_abs(const Image& f);
bool all_finite(const Image& f);
bool all_finite(const DirectionalField& f);

Image delta(const Lattice& lattice);
Image real_part(const Spectrum& s);

}  // namespace dmcd
