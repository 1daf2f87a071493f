#pragma once

#include "bm3d/image.hpp"

#include <optional>
#include <vector>

namespace bm3d {

struct MatchParams {
  int side = 8;             // N1, block side
  int search_extent = 39;   // Ns, window side centered on the reference origin
  Real tau_match = 2500.0;  // maximum per-pixel mean-squared distance
  int max_group = 16;       // N2, power of two
  // Present: distances on hard-thresholded spectra (threshold lambda_2d * sigma).
  // Absent: plain noisy-block distance.
  std::optional<Real> lambda_2d;
};

struct MatchEntry {
  int x = 0;
  int y = 0;
  Real distance = 0.0;
};

// Matches kept for one reference block. Sorted by distance ascending; the
// reference wins ties, remaining ties break in row-major origin order.
struct SimilaritySet {
  std::vector<MatchEntry> entries;
  int reference_index = 0;
};

// Per-pixel mean squared difference of two same-side blocks, intensity^2 units.
Real block_distance_noisy(const Block& ref, const Block& cand);

// Same distance computed on hard-thresholded 2-D spectra (no DC exemption).
Real block_distance_prefiltered(const Block& ref, const Block& cand, Real sigma, Real lambda_2d);

// Exhaustive stride-1 scan over every candidate block that fits both the plane
// and the clipped search window. The reference is always a member.
SimilaritySet find_similar(const ImagePlane& plane, int ref_x, int ref_y, Real sigma,
                           const MatchParams& params);

// Keeps the K lowest-distance entries, K = largest power of two <= min(size, max_group).
SimilaritySet select_group(const SimilaritySet& set, int max_group);

BlockGroup gather_group(const ImagePlane& plane, const SimilaritySet& set, int side);

// Repeated-search context over one plane. Prefiltered distances reuse spectra
// computed once per origin; results are identical to find_similar, which is
// pinned by tests.
class MatchContext {
 public:
  MatchContext(const ImagePlane& plane, Real sigma, const MatchParams& params);

  SimilaritySet find(int ref_x, int ref_y) const;

  const MatchParams& params() const { return params_; }

 private:
  const Real* origin_data(int x, int y) const;

  const ImagePlane& plane_;
  MatchParams params_;
  int cache_w_ = 0;  // valid origins per row
  int cache_h_ = 0;
  Matrix spectra_;  // one thresholded spectrum per origin (prefiltered mode only)
};

}  // namespace bm3d
