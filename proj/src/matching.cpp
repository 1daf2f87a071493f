#include "bm3d/matching.hpp"

#include "bm3d/transforms.hpp"

#include <algorithm>
#include <string>

namespace bm3d {

namespace {

// Shared scalar kernel for every distance path. Plain sequential loop so the
// brute-force contract and the cached fast path produce bit-identical sums.
Real sum_squared_diff(const Real* a, const Real* b, long n) {
  Real acc = 0.0;
  for (long i = 0; i < n; ++i) {
    const Real d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

// Plain per-block hard threshold, no DC exemption.
void threshold_spectrum(Matrix& spectrum, Real threshold) {
  Real* data = spectrum.data();
  for (long i = 0; i < spectrum.size(); ++i) {
    if (std::abs(data[i]) <= threshold) data[i] = 0.0;
  }
}

void validate_match_params(const MatchParams& p) {
  require(p.side >= 1, "matching: side must be >= 1");
  require(p.search_extent >= p.side, "matching: search_extent must be >= side");
  require(p.tau_match >= 0.0, "matching: tau_match must be >= 0");
  require(is_power_of_two(p.max_group), "matching: max_group must be a power of two");
}

struct AxisRange {
  int first = 0;
  int last = -1;  // inclusive; empty when last < first
};

// Candidate origins whose block fits both the plane and the search window of
// side `extent` centered on the reference origin. The window itself is clipped
// at the plane borders, never re-anchored, so border references search less.
AxisRange candidate_range(int ref, int extent, int side, int plane_extent) {
  const int lo = std::max(0, ref - (extent - 1) / 2);
  const int hi = std::min(plane_extent - 1, ref + extent / 2);  // window's last pixel
  AxisRange range;
  range.first = lo;
  range.last = std::min(hi - side + 1, plane_extent - side);
  return range;
}

void sort_entries(std::vector<MatchEntry>& entries, int ref_x, int ref_y) {
  std::sort(entries.begin(), entries.end(),
            [ref_x, ref_y](const MatchEntry& a, const MatchEntry& b) {
              if (a.distance != b.distance) return a.distance < b.distance;
              const bool a_ref = a.x == ref_x && a.y == ref_y;
              const bool b_ref = b.x == ref_x && b.y == ref_y;
              if (a_ref != b_ref) return a_ref;  // reference wins ties
              if (a.y != b.y) return a.y < b.y;  // remaining ties: row-major origin
              return a.x < b.x;
            });
}

SimilaritySet finish_set(std::vector<MatchEntry> entries, int ref_x, int ref_y) {
  // The reference always belongs to its own set, with distance exactly zero.
  entries.push_back({ref_x, ref_y, 0.0});
  sort_entries(entries, ref_x, ref_y);
  SimilaritySet set;
  set.entries = std::move(entries);
  for (std::size_t i = 0; i < set.entries.size(); ++i) {
    if (set.entries[i].x == ref_x && set.entries[i].y == ref_y) {
      set.reference_index = static_cast<int>(i);
      break;
    }
  }
  return set;
}

}  // namespace

Real block_distance_noisy(const Block& ref, const Block& cand) {
  require(ref.side() == cand.side(), "block_distance_noisy: block side mismatch");
  const long n = ref.samples.size();
  return sum_squared_diff(ref.samples.data(), cand.samples.data(), n) / static_cast<Real>(n);
}

Real block_distance_prefiltered(const Block& ref, const Block& cand, Real sigma, Real lambda_2d) {
  require(ref.side() == cand.side(), "block_distance_prefiltered: block side mismatch");
  require(sigma >= 0.0, "block_distance_prefiltered: sigma must be >= 0");
  const Real threshold = lambda_2d * sigma;
  Matrix ref_spec = dct2_forward(ref.samples);
  Matrix cand_spec = dct2_forward(cand.samples);
  threshold_spectrum(ref_spec, threshold);
  threshold_spectrum(cand_spec, threshold);
  const long n = ref_spec.size();
  return sum_squared_diff(ref_spec.data(), cand_spec.data(), n) / static_cast<Real>(n);
}

SimilaritySet find_similar(const ImagePlane& plane, int ref_x, int ref_y, Real sigma,
                           const MatchParams& params) {
  validate_match_params(params);
  const Block ref = extract_block(plane, ref_x, ref_y, params.side);  // bounds check included

  const AxisRange xs = candidate_range(ref_x, params.search_extent, params.side, plane.width());
  const AxisRange ys = candidate_range(ref_y, params.search_extent, params.side, plane.height());

  std::vector<MatchEntry> entries;
  for (int cy = ys.first; cy <= ys.last; ++cy) {
    for (int cx = xs.first; cx <= xs.last; ++cx) {
      if (cx == ref_x && cy == ref_y) continue;
      const Block cand = extract_block(plane, cx, cy, params.side);
      const Real d = params.lambda_2d
                         ? block_distance_prefiltered(ref, cand, sigma, *params.lambda_2d)
                         : block_distance_noisy(ref, cand);
      if (d <= params.tau_match) entries.push_back({cx, cy, d});
    }
  }
  return finish_set(std::move(entries), ref_x, ref_y);
}

SimilaritySet select_group(const SimilaritySet& set, int max_group) {
  require(!set.entries.empty(), "select_group: set is empty");
  require(is_power_of_two(max_group), "select_group: max_group must be a power of two");
  long k = 1;
  const long bound = std::min<long>(static_cast<long>(set.entries.size()), max_group);
  while (k * 2 <= bound) k *= 2;

  SimilaritySet out;
  out.entries.assign(set.entries.begin(), set.entries.begin() + k);
  const MatchEntry& ref = set.entries[set.reference_index];
  out.reference_index = 0;
  for (std::size_t i = 0; i < out.entries.size(); ++i) {
    if (out.entries[i].x == ref.x && out.entries[i].y == ref.y) {
      out.reference_index = static_cast<int>(i);
      break;
    }
  }
  return out;
}

BlockGroup gather_group(const ImagePlane& plane, const SimilaritySet& set, int side) {
  BlockGroup group;
  group.side = side;
  group.slices.reserve(set.entries.size());
  group.origins.reserve(set.entries.size());
  for (const MatchEntry& entry : set.entries) {
    group.slices.push_back(extract_block(plane, entry.x, entry.y, side).samples);
    group.origins.emplace_back(entry.x, entry.y);
  }
  return group;
}

MatchContext::MatchContext(const ImagePlane& plane, Real sigma, const MatchParams& params)
    : plane_(plane), params_(params) {
  validate_match_params(params);
  require(plane.width() >= params.side && plane.height() >= params.side,
          "MatchContext: plane smaller than block side");
  if (!params_.lambda_2d) return;

  // One thresholded spectrum per valid origin; identical arithmetic to
  // block_distance_prefiltered, just computed once.
  cache_w_ = plane.width() - params_.side + 1;
  cache_h_ = plane.height() - params_.side + 1;
  const long coeffs = static_cast<long>(params_.side) * params_.side;
  spectra_.resize(static_cast<long>(cache_w_) * cache_h_, coeffs);
  const Real threshold = *params_.lambda_2d * sigma;
  const Dct2& dct = Dct2::of(params_.side);

  Matrix buffer;
  for (int y = 0; y < cache_h_; ++y) {
    for (int x = 0; x < cache_w_; ++x) {
      copy_block(plane, x, y, params_.side, buffer);
      Matrix spec = dct.forward(buffer);
      threshold_spectrum(spec, threshold);
      spectra_.row(static_cast<long>(y) * cache_w_ + x) =
          Eigen::Map<const Eigen::RowVectorXd>(spec.data(), coeffs);
    }
  }
}

const Real* MatchContext::origin_data(int x, int y) const {
  return spectra_.data() + (static_cast<long>(y) * cache_w_ + x) * spectra_.cols();
}

SimilaritySet MatchContext::find(int ref_x, int ref_y) const {
  const int side = params_.side;
  require(ref_x >= 0 && ref_y >= 0 && ref_x + side <= plane_.width() &&
              ref_y + side <= plane_.height(),
          "MatchContext::find: reference block out of bounds");

  const AxisRange xs = candidate_range(ref_x, params_.search_extent, side, plane_.width());
  const AxisRange ys = candidate_range(ref_y, params_.search_extent, side, plane_.height());
  const Real norm = static_cast<Real>(side) * side;

  std::vector<MatchEntry> entries;
  if (params_.lambda_2d) {
    const Real* ref_spec = origin_data(ref_x, ref_y);
    const long coeffs = spectra_.cols();
    for (int cy = ys.first; cy <= ys.last; ++cy) {
      for (int cx = xs.first; cx <= xs.last; ++cx) {
        if (cx == ref_x && cy == ref_y) continue;
        const Real d = sum_squared_diff(ref_spec, origin_data(cx, cy), coeffs) / norm;
        if (d <= params_.tau_match) entries.push_back({cx, cy, d});
      }
    }
  } else {
    thread_local Matrix ref_buf;
    thread_local Matrix cand_buf;
    copy_block(plane_, ref_x, ref_y, side, ref_buf);
    const long n = static_cast<long>(side) * side;
    for (int cy = ys.first; cy <= ys.last; ++cy) {
      for (int cx = xs.first; cx <= xs.last; ++cx) {
        if (cx == ref_x && cy == ref_y) continue;
        copy_block(plane_, cx, cy, side, cand_buf);
        const Real d = sum_squared_diff(ref_buf.data(), cand_buf.data(), n) / norm;
        if (d <= params_.tau_match) entries.push_back({cx, cy, d});
      }
    }
  }
  return finish_set(std::move(entries), ref_x, ref_y);
}

}  // namespace bm3d
