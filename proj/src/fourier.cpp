#include "dmcd/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "dmcd/log.hpp"

namespace dmcd {
namespace {

// Plans are created once per (rows, cols, sign) and executed with the
// new-array interface, which is safe to call concurrently.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int rows, int cols, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(rows, cols, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::size_t n = static_cast<std::size_t>(rows) * cols;
    fftw_complex* in = fftw_alloc_complex(n);
    fftw_complex* out = fftw_alloc_complex(n);
    fftw_plan plan = fftw_plan_dft_2d(rows, cols, in, out, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    if (!plan) throw std::runtime_error("fft: plan creation failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

Spectrum transform(const Spectrum& in, int sign) {
  Spectrum out(in.lattice());
  fftw_plan plan = cache().get(in.rows(), in.cols(), sign);
  // std::complex<double> is layout-compatible with fftw_complex.
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.storage().data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.storage().data());
  fftw_execute_dft(plan, src, dst);
  return out;
}

Spectrum to_complex(const Image& f) {
  Spectrum s(f.lattice());
  for (std::size_t i = 0; i < f.size(); ++i) s[i] = Complex(f[i], 0.0);
  return s;
}

}  // namespace

double omega(int m, int d) {
  int shifted = (2 * m < d) ? m : m - d;
  return 2.0 * std::numbers::pi * shifted / d;
}

Spectrum dft2(const Image& f) { return transform(to_complex(f), FFTW_FORWARD); }

Spectrum dft2(const Spectrum& f) { return transform(f, FFTW_FORWARD); }

Spectrum idft2_complex(const Spectrum& F) {
  Spectrum out = transform(F, FFTW_BACKWARD);
  out /= Complex(static_cast<double>(F.size()), 0.0);
  return out;
}

RealInverse idft2_with_residue(const Spectrum& F) {
  Spectrum z = idft2_complex(F);
  RealInverse r{Image(F.lattice()), 0.0};
  for (std::size_t i = 0; i < z.size(); ++i) {
    r.image[i] = z[i].real();
    r.imag_residue = std::max(r.imag_residue, std::abs(z[i].imag()));
  }
  return r;
}

Image idft2(const Spectrum& F) {
  RealInverse r = idft2_with_residue(F);
  if (r.imag_residue > 1e-8 && log::level() <= log::Level::debug) {
    std::ostringstream msg;
    msg << "idft2: discarded imaginary residue " << r.imag_residue;
    log::debug(msg.str());
  }
  return std::move(r.image);
}

Image apply_multiplier(const Image& f, const Spectrum& M) {
  require_same_lattice(f.lattice(), M.lattice(), "apply_multiplier");
  Spectrum F = dft2(f);
  F *= M;
  return idft2(F);
}

Image circular_convolve_direct(const Image& f, const Image& d) {
  require_same_lattice(f.lattice(), d.lattice(), "circular_convolve_direct");
  Image out(f.lattice());
  for (int k1 = 0; k1 < f.rows(); ++k1) {
    for (int k2 = 0; k2 < f.cols(); ++k2) {
      double s = 0.0;
      for (int n1 = 0; n1 < f.rows(); ++n1) {
        for (int n2 = 0; n2 < f.cols(); ++n2) s += f(n1, n2) * d.at(k1 - n1, k2 - n2);
      }
      out(k1, k2) = s;
    }
  }
  return out;
}

Image circular_convolve(const Image& f, const Image& d) {
  require_same_lattice(f.lattice(), d.lattice(), "circular_convolve");
  Spectrum F = dft2(f);
  F *= dft2(d);
  return idft2(F);
}

Image time_reverse(const Image& f) {
  Image out(f.lattice());
  for (int k1 = 0; k1 < f.rows(); ++k1) {
    for (int k2 = 0; k2 < f.cols(); ++k2) out(k1, k2) = f.at(-k1, -k2);
  }
  return out;
}

Spectrum reflect(const Spectrum& S) {
  Spectrum out(S.lattice());
  for (int k1 = 0; k1 < S.rows(); ++k1) {
    for (int k2 = 0; k2 < S.cols(); ++k2) out(k1, k2) = S.at(-k1, -k2);
  }
  return out;
}

double hermitian_defect(const Spectrum& S) {
  double worst = 0.0;
  for (int k1 = 0; k1 < S.rows(); ++k1) {
    for (int k2 = 0; k2 < S.cols(); ++k2) {
      worst = std::max(worst, std::abs(S.at(-k1, -k2) - std::conj(S(k1, k2))));
    }
  }
  return worst;
}

}  // namespace dmcd
