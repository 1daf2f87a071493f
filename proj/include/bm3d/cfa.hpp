#pragma once

#include "bm3d/image.hpp"
#include "bm3d/image_io.hpp"
#include "bm3d/profile.hpp"

#include <array>
#include <cstdint>
#include <string>

namespace bm3d {

enum class BayerPattern { RGGB, GRBG, GBRG, BGGR };

BayerPattern parse_pattern(const std::string& name);
std::string pattern_name(BayerPattern pattern);

// Channel sampled at pixel (x, y): 0 = R, 1 = G, 2 = B.
int pattern_channel(BayerPattern pattern, int x, int y);

// Single-sensor raster: one sample per pixel plus the 2x2 pattern and the
// per-channel noise levels (sigma_r, sigma_g, sigma_b).
struct BayerMosaic {
  ImagePlane plane;
  BayerPattern pattern = BayerPattern::RGGB;
  std::array<Real, 3> channel_sigmas{0.0, 0.0, 0.0};
};

// Samples the pattern's channel at every pixel. Dimensions must be even.
BayerMosaic mosaic_from_color(const ColorImage& image, BayerPattern pattern,
                              std::array<Real, 3> channel_sigmas = {0.0, 0.0, 0.0});

// Zero-mean Gaussian noise whose std follows the pixel's channel. Unclamped,
// deterministic per seed.
BayerMosaic add_cfa_noise(const BayerMosaic& mosaic, std::uint64_t seed);

// The four half-resolution 2x2 phase planes.
struct Subplanes {
  ImagePlane r, g1, g2, b;  // g1 is the row-major-first green phase
};

Subplanes split_subplanes(const BayerMosaic& mosaic);
BayerMosaic merge_subplanes(const Subplanes& subs, BayerPattern pattern,
                            std::array<Real, 3> channel_sigmas = {0.0, 0.0, 0.0});

// Denoises each phase subplane with its channel's sigma through the two-stage
// pipeline. Channels with sigma = 0 pass through untouched.
BayerMosaic denoise_cfa(const BayerMosaic& mosaic, Mode profile_mode = Mode::Improved,
                        int workers = 0);

// Missing channel samples become the average of the nearest available
// neighbors of that channel (2 or 4 taps, clipped at borders).
ColorImage demosaick_bilinear(const BayerMosaic& mosaic);

}  // namespace bm3d
