#include "bm3d/metrics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace bm3d {

namespace {

Real mse_sum(const ImagePlane& ref, const ImagePlane& test) {
  Real acc = 0.0;
  for (int y = 0; y < ref.height(); ++y) {
    for (int x = 0; x < ref.width(); ++x) {
      const Real d = ref.at(x, y) - test.at(x, y);
      acc += d * d;
    }
  }
  return acc;
}

Real psnr_of_mse(Real m) {
  if (m == 0.0) return std::numeric_limits<Real>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / m);
}

}  // namespace

Real mse(const ImagePlane& ref, const ImagePlane& test) {
  require(ref.width() == test.width() && ref.height() == test.height(),
          "mse: image dimensions differ");
  require(ref.width() > 0 && ref.height() > 0, "mse: empty image");
  return mse_sum(ref, test) / (static_cast<Real>(ref.width()) * ref.height());
}

Real psnr(const ImagePlane& ref, const ImagePlane& test) { return psnr_of_mse(mse(ref, test)); }

Real psnr_color(const ColorImage& ref, const ColorImage& test) {
  const Real channel_mean = (mse(ref.r, test.r) + mse(ref.g, test.g) + mse(ref.b, test.b)) / 3.0;
  return psnr_of_mse(channel_mean);
}

Real GaussianStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // 53-bit uniforms in [0,1); the shift keeps the mapping engine-exact and
  // platform-independent.
  constexpr Real scale = 0x1.0p-53;
  const Real u1 = static_cast<Real>(rng_() >> 11) * scale;
  const Real u2 = static_cast<Real>(rng_() >> 11) * scale;
  const Real radius = std::sqrt(-2.0 * std::log(1.0 - u1));
  const Real angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

ImagePlane awgn(const ImagePlane& plane, Real sigma, std::uint64_t seed) {
  ensure_finite(plane, "awgn");
  require(sigma >= 0.0, "awgn: sigma must be >= 0");
  GaussianStream stream(seed);
  ImagePlane out = plane;
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      out.at(x, y) += sigma * stream.next();
    }
  }
  return out;
}

}  // namespace bm3d
