#include "dmcd/metrics.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace dmcd {

double mse(const Image& f0, const Image& f_re) {
  require_same_lattice(f0.lattice(), f_re.lattice(), "mse");
  double s = 0.0;
  for (std::size_t i = 0; i < f0.size(); ++i) {
    const double e = f0[i] - f_re[i];
    s += e * e;
  }
  return s / static_cast<double>(f0.size());
}

std::vector<std::vector<double>> block_vectors(const Image& error, int block) {
  if (block < 1) throw std::invalid_argument("mec: block size must be positive");
  if (error.rows() < block || error.cols() < block) {
    throw std::invalid_argument("mec: image " + error.lattice().to_string() +
                                " is smaller than one " + std::to_string(block) + "x" +
                                std::to_string(block) + " block");
  }
  std::vector<std::vector<double>> out;
  for (int b1 = 0; b1 + block <= error.rows(); b1 += block) {
    for (int b2 = 0; b2 + block <= error.cols(); b2 += block) {
      std::vector<double> v;
      v.reserve(static_cast<std::size_t>(block) * block);
      for (int i = 0; i < block; ++i) {
        for (int j = 0; j < block; ++j) v.push_back(error(b1 + i, b2 + j));
      }
      out.push_back(std::move(v));
    }
  }
  return out;
}

std::vector<double> block_covariance(const Image& error, int block) {
  const auto samples = block_vectors(error, block);
  const std::size_t p = static_cast<std::size_t>(block) * block;
  const double n = static_cast<double>(samples.size());
  std::vector<double> mean(p, 0.0);
  for (const auto& s : samples) {
    for (std::size_t i = 0; i < p; ++i) mean[i] += s[i];
  }
  for (auto& m : mean) m /= n;
  std::vector<double> cov(p * p, 0.0);
  for (const auto& s : samples) {
    for (std::size_t i = 0; i < p; ++i) {
      const double di = s[i] - mean[i];
      for (std::size_t j = i; j < p; ++j) cov[i * p + j] += di * (s[j] - mean[j]);
    }
  }
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i; j < p; ++j) {
      cov[i * p + j] /= n;
      cov[j * p + i] = cov[i * p + j];
    }
  }
  return cov;
}

double max_eigenvalue_psd(const std::vector<double>& matrix, int n) {
  const std::size_t N = static_cast<std::size_t>(n);
  if (matrix.size() != N * N) throw std::invalid_argument("max_eigenvalue_psd: size mismatch");
  double scale = 0.0;
  for (double x : matrix) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return 0.0;

  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t i = 0; i < N; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < N; ++j) s += matrix[i * N + j] * x[j];
      y[i] = s;
    }
  };
  auto norm = [](const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
  };

  std::vector<double> x(N), y(N);
  for (std::size_t i = 0; i < N; ++i) x[i] = 1.0 + 0.01 * static_cast<double>(i % 7);
  double nx = norm(x);
  for (auto& v : x) v /= nx;
  double lambda = 0.0;
  for (int it = 0; it < 20000; ++it) {
    apply(x, y);
    double next = 0.0;
    for (std::size_t i = 0; i < N; ++i) next += x[i] * y[i];
    const double ny = norm(y);
    if (ny == 0.0) break;
    const bool settled = std::abs(next - lambda) <= 1e-10 * std::max(1.0, std::abs(next));
    lambda = next;
    for (std::size_t i = 0; i < N; ++i) x[i] = y[i] / ny;
    if (settled) {
      apply(x, y);
      double resid = 0.0;
      for (std::size_t i = 0; i < N; ++i) resid += (y[i] - lambda * x[i]) * (y[i] - lambda * x[i]);
      if (std::sqrt(resid) <= 1e-9 * std::max(1.0, lambda)) return lambda;
    }
  }
  Eigen::Map<const Eigen::MatrixXd> m(matrix.data(), n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

double mec(const Image& error, int block) {
  return max_eigenvalue_psd(block_covariance(error, block), block * block);
}

std::size_t dropped_block_pixels(const Lattice& lattice, int block) {
  const std::size_t kept = static_cast<std::size_t>(lattice.rows() / block * block) *
                           static_cast<std::size_t>(lattice.cols() / block * block);
  return lattice.size() - kept;
}

double sparsity(const Image& v, double tol) {
  std::size_t nz = 0;
  for (double x : v) {
    if (std::abs(x) > tol) ++nz;
  }
  return 100.0 * static_cast<double>(nz) / static_cast<double>(v.size());
}

std::vector<QQPoint> qq_data(const Image& eps) {
  const std::size_t n = eps.size();
  std::vector<double> x(eps.begin(), eps.end());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / static_cast<double>(n));
  for (auto& v : x) v = sd > 0.0 ? (v - mean) / sd : 0.0;
  std::sort(x.begin(), x.end());

  const boost::math::normal_distribution<double> normal;
  std::vector<QQPoint> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    out[i] = {boost::math::quantile(normal, p), x[i]};
  }
  return out;
}

double qq_r_squared(const std::vector<QQPoint>& qq) {
  const double n = static_cast<double>(qq.size());
  double mx = 0.0, my = 0.0;
  for (const auto& q : qq) {
    mx += q.theoretical;
    my += q.sample;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const auto& q : qq) {
    sxx += (q.theoretical - mx) * (q.theoretical - mx);
    syy += (q.sample - my) * (q.sample - my);
    sxy += (q.theoretical - mx) * (q.sample - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy * sxy / (sxx * syy);
}

void write_err_v_csv(const std::string& path, const std::vector<double>& history) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write '" + path + "'");
  os << "iteration,err_v\n" << std::setprecision(17);
  for (std::size_t i = 0; i < history.size(); ++i) os << i + 1 << ',' << history[i] << '\n';
}

void write_qq_csv(const std::string& path, const std::vector<QQPoint>& qq) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write '" + path + "'");
  os << "theoretical,sample\n" << std::setprecision(17);
  for (const auto& q : qq) os << q.theoretical << ',' << q.sample << '\n';
}

}  // namespace dmcd
