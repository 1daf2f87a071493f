#include "bm3d/transforms.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace bm3d {

Dct2::Dct2(int side) {
  require(side >= 1, "Dct2: side must be >= 1");
  basis_.resize(side, side);
  const Real n = static_cast<Real>(side);
  for (int k = 0; k < side; ++k) {
    const Real scale = std::sqrt((k == 0 ? 1.0 : 2.0) / n);
    for (int j = 0; j < side; ++j) {
      basis_(k, j) = scale * std::cos(std::numbers::pi * (2.0 * j + 1.0) * k / (2.0 * n));
    }
  }
}

const Dct2& Dct2::of(int side) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<Dct2>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[side];
  if (!slot) slot = std::make_unique<Dct2>(side);
  return *slot;
}

SpectrumBlock dct2_forward(const Matrix& spatial) {
  require(spatial.rows() == spatial.cols(), "dct2_forward: block must be square");
  return Dct2::of(static_cast<int>(spatial.rows())).forward(spatial);
}

Matrix dct2_inverse(const SpectrumBlock& spectrum) {
  require(spectrum.rows() == spectrum.cols(), "dct2_inverse: block must be square");
  return Dct2::of(static_cast<int>(spectrum.rows())).inverse(spectrum);
}

namespace {

// In-place orthonormal Walsh-Hadamard down the stack axis. Rows are slices,
// so one butterfly updates two whole rows at a time.
void walsh_hadamard_rows(Matrix& stack) {
  const long depth = stack.rows();
  require(is_power_of_two(depth), "hadamard: group depth " + std::to_string(depth) +
                                      " is not a power of two");
  const Real inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  for (long half = 1; half < depth; half *= 2) {
    for (long base = 0; base < depth; base += 2 * half) {
      for (long i = base; i < base + half; ++i) {
        for (long c = 0; c < stack.cols(); ++c) {
          const Real a = stack(i, c);
          const Real b = stack(i + half, c);
          stack(i, c) = (a + b) * inv_sqrt2;
          stack(i + half, c) = (a - b) * inv_sqrt2;
        }
      }
    }
  }
}

}  // namespace

void hadamard_forward(GroupSpectrum& group) { walsh_hadamard_rows(group.coeffs); }

void hadamard_inverse(GroupSpectrum& group) { walsh_hadamard_rows(group.coeffs); }

long hard_threshold(GroupSpectrum& group, Real threshold) {
  require(threshold >= 0.0, "hard_threshold: threshold must be >= 0");
  Real* data = group.coeffs.data();
  const long count = group.coeffs.size();
  long retained = 1;  // the group DC (row 0, column 0) is exempt and always counts
  for (long i = 1; i < count; ++i) {
    if (std::abs(data[i]) > threshold) {
      ++retained;
    } else {
      data[i] = 0.0;
    }
  }
  return retained;
}

Real wiener_shrink(GroupSpectrum& noisy, const GroupSpectrum& pilot, Real sigma) {
  require(noisy.side == pilot.side && noisy.coeffs.rows() == pilot.coeffs.rows() &&
              noisy.coeffs.cols() == pilot.coeffs.cols(),
          "wiener_shrink: noisy and pilot spectra differ in shape");
  require(sigma > 0.0, "wiener_shrink: sigma must be positive");
  const Real sigma_sq = sigma * sigma;
  Real* n = noisy.coeffs.data();
  const Real* p = pilot.coeffs.data();
  const long count = noisy.coeffs.size();
  Real weight_energy = 0.0;
  for (long i = 0; i < count; ++i) {
    const Real p_sq = p[i] * p[i];
    const Real w = p_sq / (p_sq + sigma_sq);
    n[i] *= w;
    weight_energy += w * w;
  }
  return weight_energy;
}

}  // namespace bm3d
