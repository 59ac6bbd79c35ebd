#pragma once

#include <string>
#include <vector>

#include "dmcd/grid.hpp"

namespace dmcd {

double mse(const Image& f0, const Image& f_re);

/// Non-overlapping block x block tiles in row-major tile order, each
/// flattened row-major. Tiles that do not fit are dropped.
std::vector<std::vector<double>> block_vectors(const Image& error, int block);

/// Sample covariance of the block vectors with 1/N normalization, p x p
/// row-major where p = block^2.
std::vector<double> block_covariance(const Image& error, int block);

/// Largest eigenvalue of a symmetric positive semidefinite n x n matrix.
/// Power iteration with a dense eigensolver fallback.
double max_eigenvalue_psd(const std::vector<double>& matrix, int n);

/// Maximum eigenvalue of the block covariance of the error image.
double mec(const Image& error, int block = 10);

/// Number of pixels excluded from MEC because they fall outside whole blocks.
std::size_t dropped_block_pixels(const Lattice& lattice, int block);

/// Percentage of sites with |v| > tol.
double sparsity(const Image& v, double tol = 1e-12);

struct QQPoint {
  double theoretical;  // standard normal quantile at (i - 0.5) / n
  double sample;       // i-th smallest standardized value
};
std::vector<QQPoint> qq_data(const Image& eps);
/// Coefficient of determination of a least-squares line through the QQ pairs.
double qq_r_squared(const std::vector<QQPoint>& qq);

struct MetricsReport {
  double mse = 0.0;
  double mec = 0.0;
  double sparsity_percent = 0.0;
  std::vector<double> err_v_history;
  double constraint_residual = 0.0;
};

void write_err_v_csv(const std::string& path, const std::vector<double>& history);
void write_qq_csv(const std::string& path, const std::vector<QQPoint>& qq);

}  // namespace dmcd
