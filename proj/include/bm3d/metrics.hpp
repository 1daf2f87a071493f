#pragma once

#include "bm3d/image.hpp"
#include "bm3d/image_io.hpp"

#include <cstdint>
#include <random>

namespace bm3d {

// Mean squared per-pixel difference; no clamping inside the metric.
Real mse(const ImagePlane& ref, const ImagePlane& test);

// 10 * log10(255^2 / mse); +infinity when mse is zero.
Real psnr(const ImagePlane& ref, const ImagePlane& test);

// PSNR over the channel-averaged MSE of two color images.
Real psnr_color(const ColorImage& ref, const ColorImage& test);

// Deterministic standard-normal stream: mt19937_64 driving an explicit
// Box-Muller mapping, so sequences depend only on the seed, not on any
// library's distribution internals.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

  Real next();

 private:
  std::mt19937_64 rng_;
  Real spare_ = 0.0;
  bool has_spare_ = false;
};

// Adds i.i.d. zero-mean Gaussian noise of std sigma. The result is left
// unclamped; clipping noisy inputs would bias sigma at high noise.
ImagePlane awgn(const ImagePlane& plane, Real sigma, std::uint64_t seed);

}  // namespace bm3d
