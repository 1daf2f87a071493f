#pragma once

#include "bm3d/image.hpp"
#include "bm3d/profile.hpp"

namespace bm3d {

struct DenoiseResult {
  ImagePlane basic;  // hard-threshold stage output
  ImagePlane final;  // Wiener stage output
};

// Two-stage collaborative-filtering denoiser. Both returned planes are clamped
// to [0,255]; all intermediate arithmetic stays unclamped. workers = 0 picks
// the hardware concurrency; workers = 1 is bit-deterministic.
DenoiseResult denoise(const ImagePlane& noisy, Real sigma, const ParameterProfile& profile,
                      int workers = 0);

}  // namespace bm3d
