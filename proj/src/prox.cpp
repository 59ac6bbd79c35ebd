#include "dmcd/prox.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dmcd {

void Threshold::validate(const Lattice& lattice, const char* where) const {
  if (auto* s = std::get_if<double>(&value_)) {
    if (!(*s >= 0.0)) throw std::invalid_argument(std::string(where) + ": negative threshold");
    return;
  }
  const Image& img = std::get<Image>(value_);
  require_same_lattice(lattice, img.lattice(), where);
  for (double x : img) {
    if (!(x >= 0.0)) throw std::invalid_argument(std::string(where) + ": negative threshold");
  }
}

namespace {

double soft(double f, double alpha) {
  const double m = std::abs(f) - alpha;
  if (m > 0.0) return std::copysign(m, f);
  return std::isnan(m) ? m : 0.0;
}

}  // namespace

double shrink(double f, double alpha) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("shrink: negative threshold");
  return soft(f, alpha);
}

Image shrink(const Image& f, const Threshold& alpha) {
  alpha.validate(f.lattice(), "shrink");
  Image out(f.lattice());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = soft(f[i], alpha[i]);
  return out;
}

// The shrink result is formed as y - mu*y/|y| so that adding the projection
// mu*y/|y| reproduces y up to one rounding.
DirectionalField vector_shrink(const DirectionalField& y, const Threshold& mu) {
  mu.validate(y.lattice(), "vector_shrink");
  DirectionalField out(y.lattice(), y.count());
  const Image mag = y.magnitude();
  for (std::size_t i = 0; i < mag.size(); ++i) {
    const double m = mag[i];
    const double t = mu[i];
    if (!(m > t)) continue;
    for (int l = 0; l < y.count(); ++l) {
      const double v = y[l][i];
      out[l][i] = v - t * v / m;
    }
  }
  return out;
}

DirectionalField l1_ball_project(const DirectionalField& y, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("l1_ball_project: mu must be positive");
  DirectionalField out(y.lattice(), y.count());
  const Image mag = y.magnitude();
  for (std::size_t i = 0; i < mag.size(); ++i) {
    const double m = mag[i];
    for (int l = 0; l < y.count(); ++l) {
      const double v = y[l][i];
      out[l][i] = m > mu ? mu * v / m : v;
    }
  }
  return out;
}

}  // namespace dmcd
