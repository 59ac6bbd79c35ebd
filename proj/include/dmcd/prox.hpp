#pragma once

// Soft shrinkage, field-magnitude shrinkage and projection onto the
// per-site l2 ball.

#include <variant>

#include "dmcd/grid.hpp"

namespace dmcd {

/// A threshold that is either one scalar or a per-site image.
class Threshold {
 public:
  Threshold(double value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  Threshold(Image value) : value_(std::move(value)) {}  // NOLINT(google-explicit-constructor)

  double operator[](std::size_t i) const {
    if (auto* s = std::get_if<double>(&value_)) return *s;
    return std::get<Image>(value_)[i];
  }
  bool is_scalar() const noexcept { return std::holds_alternative<double>(value_); }

  /// Throws std::invalid_argument on negative or NaN entries, or lattice mismatch.
  void validate(const Lattice& lattice, const char* where) const;

 private:
  std::variant<double, Image> value_;
};

double shrink(double f, double alpha);
Image shrink(const Image& f, const Threshold& alpha);

/// Per site: y * max(|y| - mu, 0) / |y|, zero where |y| = 0.
DirectionalField vector_shrink(const DirectionalField& y, const Threshold& mu);

/// Per site: mu * y / max(mu, |y|).
DirectionalField l1_ball_project(const DirectionalField& y, double mu);

}  // namespace dmcd
