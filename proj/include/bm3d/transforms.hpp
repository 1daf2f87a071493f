#pragma once

#include "bm3d/image.hpp"

namespace bm3d {

// 2-D transform coefficients of one block.
using SpectrumBlock = Matrix;

// Orthonormal DCT-II basis for one block side. Forward and inverse are plain
// basis-matrix products, which keeps odd sides (N1 = 11) as simple as even ones.
class Dct2 {
 public:
  explicit Dct2(int side);

  int side() const { return static_cast<int>(basis_.rows()); }

  SpectrumBlock forward(const Matrix& spatial) const {
    return basis_ * spatial * basis_.transpose();
  }
  Matrix inverse(const SpectrumBlock& spectrum) const {
    return basis_.transpose() * spectrum * basis_;
  }

  // Shared per-side instance, built on first use.
  static const Dct2& of(int side);

 private:
  Matrix basis_;
};

SpectrumBlock dct2_forward(const Matrix& spatial);
Matrix dct2_inverse(const SpectrumBlock& spectrum);

// Stack of per-block spectra for one group: row k is slice k flattened row-major.
struct GroupSpectrum {
  int side = 0;
  Matrix coeffs;  // depth x side*side

  int depth() const { return static_cast<int>(coeffs.rows()); }
};

constexpr bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

// Orthonormal Walsh-Hadamard transform along the stack axis. Every butterfly
// scales by 1/sqrt(2), so the transform is an involution and hadamard_inverse
// applies the identical matrix.
void hadamard_forward(GroupSpectrum& group);
void hadamard_inverse(GroupSpectrum& group);

// Zeroes every coefficient with |c| <= threshold except the group DC
// (stack index 0, spatial DC). Returns the retained count; the DC always counts.
long hard_threshold(GroupSpectrum& group, Real threshold);

// Empirical Wiener attenuation of `noisy` guided by the pilot spectrum:
// W = p^2 / (p^2 + sigma^2) per coefficient. Returns sum of W^2.
Real wiener_shrink(GroupSpectrum& noisy, const GroupSpectrum& pilot, Real sigma);

}  // namespace bm3d
