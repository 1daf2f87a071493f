#pragma once

#include "bm3d/image.hpp"

namespace bm3d {

// Per-pixel taper applied to each block estimate during aggregation, values in (0,1].
struct WindowProfile {
  Matrix weights;

  int side() const { return static_cast<int>(weights.rows()); }
};

// Separable Kaiser taper normalized to max 1; beta = 0 degenerates to the flat window.
WindowProfile kaiser_window(int side, Real beta);
WindowProfile flat_window(int side);

// Running weighted sums for overlap averaging. The only mutable state in the
// pipeline; workers keep private copies and merge them afterwards.
struct EstimateAccumulator {
  Matrix numerator;    // sum of weight * window * estimate
  Matrix denominator;  // sum of weight * window

  EstimateAccumulator(int width, int height)
      : numerator(Matrix::Zero(height, width)), denominator(Matrix::Zero(height, width)) {}

  void merge(const EstimateAccumulator& other) {
    numerator += other.numerator;
    denominator += other.denominator;
  }
};

struct FilteredGroup {
  BlockGroup estimates;
  Real weight = 1.0;
};

// DCT -> Hadamard -> hard threshold (lambda_3d * sigma) -> inverse pair.
// weight = 1 / (sigma^2 * retained) when retained >= 1 and sigma > 0, else 1.
FilteredGroup ht_filter_group(const BlockGroup& group, Real sigma, Real lambda_3d);

// Both groups transformed; noisy spectrum attenuated by the pilot's Wiener
// coefficients. weight = 1 / (sigma^2 * sum W^2) when the sum is positive, else 1.
FilteredGroup wiener_filter_group(const BlockGroup& noisy, const BlockGroup& pilot, Real sigma);

void aggregate(EstimateAccumulator& acc, const BlockGroup& estimates, Real weight,
               const WindowProfile& window);

// Pixel-wise numerator / denominator. Throws CoverageError on any zero weight.
ImagePlane finalize(const EstimateAccumulator& acc);

}  // namespace bm3d
