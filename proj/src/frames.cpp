#include "dmcd/frames.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dmcd/fourier.hpp"
#include "dmcd/parallel.hpp"
#include "dmcd/prox.hpp"

namespace dmcd {
namespace {

// Makes every spectrum satisfy S(z^{-1}) = conj(S(z)) so that bands of a
// real image are real. Pairs of distinct bins copy the conjugate of the
// first one in row-major order; self-conjugate bins rotate the analysis
// phase into the synthesis filter, which leaves their product unchanged.
// Both rules keep the unity condition intact.
void enforce_hermitian(std::vector<Spectrum>& lowpass, std::vector<FrameBand>& bands) {
  if (lowpass.empty() && bands.empty()) return;
  const Lattice& lat = lowpass.empty() ? bands.front().analysis.lattice() : lowpass.front().lattice();
  for (int k1 = 0; k1 < lat.rows(); ++k1) {
    for (int k2 = 0; k2 < lat.cols(); ++k2) {
      const std::size_t i = static_cast<std::size_t>(k1) * lat.cols() + k2;
      const std::size_t p = lat.wrap(-k1, -k2);
      if (p > i) {
        for (auto& s : lowpass) s[p] = std::conj(s[i]);
        for (auto& b : bands) {
          b.analysis[p] = std::conj(b.analysis[i]);
          b.synthesis[p] = std::conj(b.synthesis[i]);
        }
      } else if (p == i) {
        for (auto& s : lowpass) s[i] = Complex(s[i].real(), 0.0);
        for (auto& b : bands) {
          const Complex a = b.analysis[i];
          const double mag = std::abs(a);
          if (mag > 0.0) {
            const Complex prod = a * b.synthesis[i];
            b.analysis[i] = Complex(mag, 0.0);
            b.synthesis[i] = Complex(prod.real() / mag, 0.0);
          } else {
            b.synthesis[i] = Complex(b.synthesis[i].real(), 0.0);
          }
        }
      }
    }
  }
}

// Symbol of the forward difference in direction d, evaluated at w = e^{j s omega}.
Complex discrete_symbol(Direction d, double w1, double w2, double s) {
  const Complex z1 = std::polar(1.0, s * w1);
  const Complex z2 = std::polar(1.0, s * w2);
  return d.c * (z2 - 1.0) + d.s * (z1 - 1.0);
}

// Continuous counterpart j(cos * s*w2 + sin * s*w1).
Complex continuous_symbol(Direction d, double w1, double w2, double s) {
  return Complex(0.0, d.c * s * w2 + d.s * s * w1);
}

}  // namespace

double FrameSet::unity_residual() const {
  double worst = 0.0;
  const std::size_t n = blur_power.size();
  if (kind == FrameKind::u_frames) {
    for (std::size_t i = 0; i < n; ++i) {
      Complex total = blur_power[i] * lowpass.front()[i];
      for (const auto& b : bands) total += b.analysis[i] * b.synthesis[i];
      worst = std::max(worst, std::abs(total - 1.0));
    }
  } else {
    for (std::size_t l = 0; l < bands.size(); ++l) {
      for (std::size_t i = 0; i < n; ++i) {
        Complex total = lowpass[l][i] + bands[l].analysis[i] * bands[l].synthesis[i];
        worst = std::max(worst, std::abs(total - 1.0));
      }
    }
  }
  return worst;
}

FrameSet build_u_frames(const DirectionBank& bank, double c, const Spectrum& H) {
  if (!(c > 0.0)) throw std::invalid_argument("build_u_frames: c must be positive");
  if (!(std::norm(H[0]) > 0.0)) throw std::invalid_argument("build_u_frames: H vanishes at DC");
  const Lattice& lat = H.lattice();
  FrameSet fs{FrameKind::u_frames, bank.count(), c, Spectrum(lat), {}, {}};
  const auto syms = forward_symbols(lat, bank);
  Spectrum phi(lat);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    double den = std::norm(H[i]);
    for (const auto& s : syms) den += c * std::norm(s[i]);
    phi[i] = 1.0 / den;
    fs.blur_power[i] = std::norm(H[i]);
  }
  for (int l = 0; l < bank.count(); ++l) {
    FrameBand b{0, l, Spectrum(lat), syms[static_cast<std::size_t>(l)]};
    for (std::size_t i = 0; i < lat.size(); ++i) b.analysis[i] = c * std::conj(b.synthesis[i]) * phi[i];
    fs.bands.push_back(std::move(b));
  }
  fs.lowpass.push_back(std::move(phi));
  enforce_hermitian(fs.lowpass, fs.bands);
  return fs;
}

FrameSet build_xi_theta(const DirectionBank& bank, double c, const Lattice& lattice) {
  if (!(c >= 0.0)) throw std::invalid_argument("build_xi_theta: c must be nonnegative");
  FrameSet fs{FrameKind::xi_theta, bank.count(), c, Spectrum(lattice, Complex(1.0)), {}, {}};
  const auto syms = forward_symbols(lattice, bank);
  for (int l = 0; l < bank.count(); ++l) {
    const Spectrum& s = syms[static_cast<std::size_t>(l)];
    Spectrum xi(lattice);
    FrameBand b{0, l, Spectrum(lattice), Spectrum(lattice)};
    for (std::size_t i = 0; i < lattice.size(); ++i) {
      xi[i] = 1.0 / (1.0 + c * std::norm(s[i]));
      b.synthesis[i] = -c * s[i] * xi[i];
      b.analysis[i] = -std::conj(s[i]);
    }
    fs.lowpass.push_back(std::move(xi));
    fs.bands.push_back(std::move(b));
  }
  enforce_hermitian(fs.lowpass, fs.bands);
  return fs;
}

std::string to_string(FrameFamily f) { return f == FrameFamily::phi_psi ? "phi-psi" : "xi-theta"; }
std::string to_string(FrameMode m) { return m == FrameMode::discrete ? "discrete" : "continuous"; }

FrameFamily parse_family(const std::string& s) {
  if (s == "phi-psi") return FrameFamily::phi_psi;
  if (s == "xi-theta") return FrameFamily::xi_theta;
  throw std::invalid_argument("unknown frame family '" + s + "' (expected phi-psi or xi-theta)");
}

FrameMode parse_mode(const std::string& s) {
  if (s == "discrete") return FrameMode::discrete;
  if (s == "continuous") return FrameMode::continuous;
  throw std::invalid_argument("unknown frame mode '" + s + "' (expected discrete or continuous)");
}

MultiscaleFrameSet::MultiscaleFrameSet(const Lattice& lattice, const MultiscaleConfig& config)
    : lattice_(lattice), config_(config), lowpass_(lattice) {
  if (config.scales < 1) throw std::invalid_argument("multiscale frames: scales must be >= 1");
  if (!(config.dilation > 0.0)) throw std::invalid_argument("multiscale frames: dilation must be > 0");
  if (!(config.c > 0.0)) throw std::invalid_argument("multiscale frames: c must be > 0");
  const DirectionBank bank(config.directions);
  const int I = config.scales;
  const int L = config.directions;
  const double c = config.c;
  const bool phi_psi = config.family == FrameFamily::phi_psi;
  const auto symbol = config.mode == FrameMode::discrete ? discrete_symbol : continuous_symbol;
  const double lowpass_norm = phi_psi ? 1.0 / I : 1.0 / (static_cast<double>(I) * L);
  const double band_norm = std::sqrt(lowpass_norm);

  for (int i = 0; i < I; ++i) {
    for (int l = 0; l < L; ++l) bands_.push_back({i, l, Spectrum(lattice), Spectrum(lattice)});
  }

  std::vector<Complex> sym(static_cast<std::size_t>(L));
  for (int k1 = 0; k1 < lattice.rows(); ++k1) {
    const double w1 = omega(k1, lattice.rows());
    for (int k2 = 0; k2 < lattice.cols(); ++k2) {
      const double w2 = omega(k2, lattice.cols());
      const std::size_t idx = static_cast<std::size_t>(k1) * lattice.cols() + k2;
      Complex low = 0.0;
      for (int i = 0; i < I; ++i) {
        const double s = std::pow(config.dilation, i);
        double energy = 0.0;
        for (int l = 0; l < L; ++l) {
          sym[static_cast<std::size_t>(l)] = symbol(bank.direction(l), w1, w2, s);
          energy += std::norm(sym[static_cast<std::size_t>(l)]);
        }
        if (phi_psi) {
          const double phi = 1.0 / (1.0 + c * energy);
          low += phi;
          for (int l = 0; l < L; ++l) {
            auto& b = bands_[static_cast<std::size_t>(i * L + l)];
            const Complex y = sym[static_cast<std::size_t>(l)];
            b.synthesis[idx] = band_norm * y;
            b.analysis[idx] = band_norm * c * std::conj(y) * phi;
          }
        } else {
          for (int l = 0; l < L; ++l) {
            auto& b = bands_[static_cast<std::size_t>(i * L + l)];
            const Complex y = sym[static_cast<std::size_t>(l)];
            const double xi = 1.0 / (1.0 + c * std::norm(y));
            low += xi;
            b.synthesis[idx] = band_norm * (-c * y * xi);
            b.analysis[idx] = band_norm * (-std::conj(y));
          }
        }
      }
      lowpass_[idx] = low * lowpass_norm;
    }
  }
  std::vector<Spectrum> lows{std::move(lowpass_)};
  enforce_hermitian(lows, bands_);
  lowpass_ = std::move(lows.front());
}

double MultiscaleFrameSet::unity_residual() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < lowpass_.size(); ++i) {
    Complex total = lowpass_[i];
    for (const auto& b : bands_) total += b.analysis[i] * b.synthesis[i];
    worst = std::max(worst, std::abs(total - 1.0));
  }
  return worst;
}

CoefficientPyramid MultiscaleFrameSet::analyze(const Image& f) const {
  require_same_lattice(lattice_, f.lattice(), "analyze");
  const Spectrum F = dft2(f);
  CoefficientPyramid p{idft2(F * lowpass_), std::vector<Image>(bands_.size(), Image(lattice_))};
  parallel_for(bands_.size(), [&](std::size_t b) { p.bands[b] = idft2(F * bands_[b].analysis); });
  return p;
}

Image MultiscaleFrameSet::synthesize(const CoefficientPyramid& p) const {
  require_same_lattice(lattice_, p.lowpass.lattice(), "synthesize");
  if (p.bands.size() != bands_.size()) {
    throw std::invalid_argument("synthesize: pyramid has " + std::to_string(p.bands.size()) +
                                " bands, frames have " + std::to_string(bands_.size()));
  }
  std::vector<Spectrum> parts(bands_.size(), Spectrum(lattice_));
  parallel_for(bands_.size(), [&](std::size_t b) {
    parts[b] = dft2(p.bands[b]);
    parts[b] *= bands_[b].synthesis;
  });
  Spectrum total(lattice_);
  for (const auto& s : parts) total += s;
  return p.lowpass + idft2(total);
}

MultiscaleFrameSet build_multiscale(const Lattice& lattice, const MultiscaleConfig& config) {
  return MultiscaleFrameSet(lattice, config);
}

double sup_coeff(const CoefficientPyramid& p) {
  double m = 0.0;
  for (const auto& b : p.bands) m = std::max(m, max_abs(b));
  return m;
}

double sup_coeff(const Image& f, const MultiscaleFrameSet& frames) {
  return sup_coeff(frames.analyze(f));
}

Image cst(const Image& f, double nu, const MultiscaleFrameSet& frames) {
  if (!(nu >= 0.0)) throw std::invalid_argument("cst: nu must be nonnegative");
  CoefficientPyramid p = frames.analyze(f);
  for (auto& b : p.bands) b = shrink(b, nu);
  return frames.synthesize(p);
}

Image cst_complement(const Image& f, double nu, const MultiscaleFrameSet& frames) {
  if (!(nu >= 0.0)) throw std::invalid_argument("cst_complement: nu must be nonnegative");
  if (nu == 0.0) return Image(f.lattice());
  CoefficientPyramid p = frames.analyze(f);
  for (auto& b : p.bands) {
    for (auto& x : b) x = std::clamp(x, -nu, nu);
  }
  p.lowpass = Image(f.lattice());
  return frames.synthesize(p);
}

}  // namespace dmcd
