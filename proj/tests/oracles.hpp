#pragma once

// Independent reference implementations for tests. Everything here is built
// from index arithmetic and dense linear algebra; nothing calls into the
// library's operators or FFT path.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "dmcd/grid.hpp"

namespace oracle {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

inline int idx(const dmcd::Lattice& lat, int k1, int k2) {
  const int r = ((k1 % lat.rows()) + lat.rows()) % lat.rows();
  const int c = ((k2 % lat.cols()) + lat.cols()) % lat.cols();
  return r * lat.cols() + c;
}

inline Vec vec(const dmcd::Image& f) {
  Vec v(static_cast<Eigen::Index>(f.size()));
  for (std::size_t i = 0; i < f.size(); ++i) v[static_cast<Eigen::Index>(i)] = f[i];
  return v;
}

inline dmcd::Image image(const dmcd::Lattice& lat, const Vec& v) {
  dmcd::Image f(lat);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = v[static_cast<Eigen::Index>(i)];
  return f;
}

inline double angle(int l, int count) { return M_PI * l / count; }

// Matrix of f -> cos(th) (f[k1, k2+1] - f) + sin(th) (f[k1+1, k2] - f).
inline Mat forward_matrix(const dmcd::Lattice& lat, double th) {
  const double c = std::cos(th), s = std::sin(th);
  const int n = static_cast<int>(lat.size());
  Mat D = Mat::Zero(n, n);
  for (int k1 = 0; k1 < lat.rows(); ++k1) {
    for (int k2 = 0; k2 < lat.cols(); ++k2) {
      const int k = idx(lat, k1, k2);
      D(k, k) -= c + s;
      D(k, idx(lat, k1, k2 + 1)) += c;
      D(k, idx(lat, k1 + 1, k2)) += s;
    }
  }
  return D;
}

// Matrix of f -> -[cos(th) (f[k1, k2-1] - f) + sin(th) (f[k1-1, k2] - f)].
inline Mat backward_matrix(const dmcd::Lattice& lat, double th) {
  const double c = std::cos(th), s = std::sin(th);
  const int n = static_cast<int>(lat.size());
  Mat D = Mat::Zero(n, n);
  for (int k1 = 0; k1 < lat.rows(); ++k1) {
    for (int k2 = 0; k2 < lat.cols(); ++k2) {
      const int k = idx(lat, k1, k2);
      D(k, k) += c + s;
      D(k, idx(lat, k1, k2 - 1)) -= c;
      D(k, idx(lat, k1 - 1, k2)) -= s;
    }
  }
  return D;
}

// Circulant matrix of f -> h * f, (h * f)[k] = sum_n h[k - n] f[n].
inline Mat convolution_matrix(const dmcd::Image& h) {
  const dmcd::Lattice& lat = h.lattice();
  const int n = static_cast<int>(lat.size());
  Mat B(n, n);
  for (int k1 = 0; k1 < lat.rows(); ++k1) {
    for (int k2 = 0; k2 < lat.cols(); ++k2) {
      for (int n1 = 0; n1 < lat.rows(); ++n1) {
        for (int n2 = 0; n2 < lat.cols(); ++n2) {
          B(idx(lat, k1, k2), idx(lat, n1, n2)) = h[static_cast<std::size_t>(idx(lat, k1 - n1, k2 - n2))];
        }
      }
    }
  }
  return B;
}

inline dmcd::Image convolve(const dmcd::Image& f, const dmcd::Image& h) {
  const dmcd::Lattice& lat = f.lattice();
  dmcd::Image out(lat);
  for (int k1 = 0; k1 < lat.rows(); ++k1) {
    for (int k2 = 0; k2 < lat.cols(); ++k2) {
      double acc = 0.0;
      for (int n1 = 0; n1 < lat.rows(); ++n1) {
        for (int n2 = 0; n2 < lat.cols(); ++n2) {
          acc += f(n1, n2) * h.at(k1 - n1, k2 - n2);
        }
      }
      out(k1, k2) = acc;
    }
  }
  return out;
}

// Direct O(n^2) DFT, forward unnormalized.
inline std::vector<std::complex<double>> dft(const dmcd::Image& f) {
  const dmcd::Lattice& lat = f.lattice();
  std::vector<std::complex<double>> out(lat.size());
  for (int m1 = 0; m1 < lat.rows(); ++m1) {
    for (int m2 = 0; m2 < lat.cols(); ++m2) {
      std::complex<double> acc = 0.0;
      for (int k1 = 0; k1 < lat.rows(); ++k1) {
        for (int k2 = 0; k2 < lat.cols(); ++k2) {
          const double ph = -2.0 * M_PI * (double(m1) * k1 / lat.rows() + double(m2) * k2 / lat.cols());
          acc += f(k1, k2) * std::polar(1.0, ph);
        }
      }
      out[static_cast<std::size_t>(m1 * lat.cols() + m2)] = acc;
    }
  }
  return out;
}

inline dmcd::Image random_image(const dmcd::Lattice& lat, std::mt19937_64& rng, double lo = -1.0,
                                double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  dmcd::Image f(lat);
  for (auto& x : f) x = u(rng);
  return f;
}

inline dmcd::DirectionalField random_field(const dmcd::Lattice& lat, int count, std::mt19937_64& rng,
                                           double lo = -1.0, double hi = 1.0) {
  dmcd::DirectionalField g(lat, count);
  for (auto& layer : g) layer = random_image(lat, rng, lo, hi);
  return g;
}

// Random nonnegative kernel summing to one.
inline dmcd::Image random_kernel(const dmcd::Lattice& lat, std::mt19937_64& rng) {
  dmcd::Image h = random_image(lat, rng, 0.0, 1.0);
  h[0] += 2.0;  // keeps |H| away from zero
  double s = 0.0;
  for (double x : h) s += x;
  for (auto& x : h) x /= s;
  return h;
}

inline double rel_diff(const Vec& a, const Vec& b) {
  const double den = std::max(a.norm(), b.norm());
  return den == 0.0 ? 0.0 : (a - b).norm() / den;
}

inline double rel_diff(const dmcd::Image& a, const dmcd::Image& b) { return rel_diff(vec(a), vec(b)); }

// Minimizer of sum_i (w_i / 2) ||A_i x - b_i||^2 via the normal equations.
struct LeastSquares {
  Mat N;
  Vec rhs;
  explicit LeastSquares(int n) : N(Mat::Zero(n, n)), rhs(Vec::Zero(n)) {}
  void add(double w, const Mat& A, const Vec& b) {
    N += w * A.transpose() * A;
    rhs += w * A.transpose() * b;
  }
  Vec solve() const { return N.ldlt().solve(rhs); }
};

}  // namespace oracle
