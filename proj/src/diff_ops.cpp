#include "dmcd/diff_ops.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dmcd/fourier.hpp"

namespace dmcd {

DirectionBank::DirectionBank(int count) : count_(count) {
  if (count < 1) throw std::invalid_argument("direction bank: count must be >= 1");
  dirs_.reserve(static_cast<std::size_t>(count) + 1);
  for (int l = 0; l <= count; ++l) {
    double th = std::numbers::pi * l / count;
    dirs_.push_back({std::cos(th), std::sin(th)});
  }
}

double DirectionBank::angle(int l) const {
  if (l < 0 || l > count_) throw std::out_of_range("direction bank: index " + std::to_string(l));
  return std::numbers::pi * l / count_;
}

Direction DirectionBank::direction(int l) const {
  if (l < 0 || l >= count_) {
    throw std::out_of_range("direction " + std::to_string(l) + " outside [0, " +
                            std::to_string(count_) + ")");
  }
  return dirs_[static_cast<std::size_t>(l)];
}

Direction DirectionBank::extended(int l) const {
  if (l < 0 || l > count_) {
    throw std::out_of_range("direction " + std::to_string(l) + " outside [0, " +
                            std::to_string(count_) + "]");
  }
  return dirs_[static_cast<std::size_t>(l)];
}

Image forward_diff(const Image& f, Direction d) {
  Image out(f.lattice());
  const int R = f.rows(), C = f.cols();
  for (int k1 = 0; k1 < R; ++k1) {
    const int down = (k1 + 1) % R;
    for (int k2 = 0; k2 < C; ++k2) {
      const int right = (k2 + 1) % C;
      const double v = f(k1, k2);
      out(k1, k2) = d.c * (f(k1, right) - v) + d.s * (f(down, k2) - v);
    }
  }
  return out;
}

Image backward_diff(const Image& f, Direction d) {
  Image out(f.lattice());
  const int R = f.rows(), C = f.cols();
  for (int k1 = 0; k1 < R; ++k1) {
    const int up = (k1 + R - 1) % R;
    for (int k2 = 0; k2 < C; ++k2) {
      const int left = (k2 + C - 1) % C;
      const double v = f(k1, k2);
      out(k1, k2) = d.c * (v - f(k1, left)) + d.s * (v - f(up, k2));
    }
  }
  return out;
}

Image forward_diff(const Image& f, int l, const DirectionBank& bank) {
  return forward_diff(f, bank.direction(l));
}

Image backward_diff(const Image& f, int l, const DirectionBank& bank) {
  return backward_diff(f, bank.direction(l));
}

DirectionalField gradient(const Image& f, const DirectionBank& bank) {
  std::vector<Image> layers;
  layers.reserve(static_cast<std::size_t>(bank.count()));
  for (int l = 0; l < bank.count(); ++l) layers.push_back(forward_diff(f, l, bank));
  return DirectionalField(std::move(layers));
}

Image divergence(const DirectionalField& g, const DirectionBank& bank) {
  if (g.count() != bank.count()) {
    throw std::invalid_argument("divergence: field has " + std::to_string(g.count()) +
                                " layers, bank has " + std::to_string(bank.count()));
  }
  Image out(g.lattice());
  for (int l = 0; l < g.count(); ++l) out += backward_diff(g[l], bank.direction(l));
  return out;
}

Image divergence_extended(const DirectionalField& g, const DirectionBank& bank) {
  if (g.count() != bank.count() + 1) {
    throw std::invalid_argument("divergence_extended: field has " + std::to_string(g.count()) +
                                " layers, expected " + std::to_string(bank.count() + 1));
  }
  Image out(g.lattice());
  for (int l = 0; l < g.count(); ++l) out += backward_diff(g[l], bank.extended(l));
  return out;
}

Image directional_laplacian(const Image& f, const DirectionBank& bank) {
  return divergence(gradient(f, bank), bank);
}

Spectrum forward_symbol(const Lattice& lattice, Direction d) {
  Spectrum out(lattice);
  for (int k1 = 0; k1 < lattice.rows(); ++k1) {
    const Complex z1 = std::polar(1.0, omega(k1, lattice.rows()));
    for (int k2 = 0; k2 < lattice.cols(); ++k2) {
      const Complex z2 = std::polar(1.0, omega(k2, lattice.cols()));
      out(k1, k2) = d.c * (z2 - 1.0) + d.s * (z1 - 1.0);
    }
  }
  return out;
}

Spectrum backward_symbol(const Lattice& lattice, Direction d) {
  Spectrum out(lattice);
  for (int k1 = 0; k1 < lattice.rows(); ++k1) {
    const Complex z1 = std::polar(1.0, -omega(k1, lattice.rows()));
    for (int k2 = 0; k2 < lattice.cols(); ++k2) {
      const Complex z2 = std::polar(1.0, -omega(k2, lattice.cols()));
      out(k1, k2) = -(d.c * (z2 - 1.0) + d.s * (z1 - 1.0));
    }
  }
  return out;
}

std::vector<Spectrum> forward_symbols(const Lattice& lattice, const DirectionBank& bank) {
  std::vector<Spectrum> out;
  out.reserve(static_cast<std::size_t>(bank.count()));
  for (int l = 0; l < bank.count(); ++l) out.push_back(forward_symbol(lattice, bank.direction(l)));
  return out;
}

Spectrum laplacian_symbol(const Lattice& lattice, const DirectionBank& bank) {
  Spectrum out(lattice);
  for (const auto& sym : forward_symbols(lattice, bank)) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= std::norm(sym[i]);
  }
  return out;
}

Image forward_diff_spectral(const Image& f, int l, const DirectionBank& bank) {
  return apply_multiplier(f, forward_symbol(f.lattice(), bank.direction(l)));
}

Image backward_diff_spectral(const Image& f, int l, const DirectionBank& bank) {
  return apply_multiplier(f, backward_symbol(f.lattice(), bank.direction(l)));
}

Image directional_laplacian_spectral(const Image& f, const DirectionBank& bank) {
  return apply_multiplier(f, laplacian_symbol(f.lattice(), bank));
}

Image directional_curvature(const Image& u, const DirectionBank& bank) {
  DirectionalField r = gradient(u, bank);
  Image n(u.lattice(), 1.0);
  for (const auto& layer : r) {
    for (std::size_t i = 0; i < n.size(); ++i) n[i] += layer[i] * layer[i];
  }
  for (auto& x : n) x = std::sqrt(x);
  for (auto& layer : r) {
    for (std::size_t i = 0; i < n.size(); ++i) layer[i] /= n[i];
  }
  return divergence(r, bank);
}

double dmc_norm(const Image& u, const DirectionBank& bank) {
  Image k = directional_curvature(u, bank);
  double s = 0.0;
  for (double x : k) s += std::abs(x);
  return s;
}

}  // namespace dmcd
