#include "bm3d/denoise.hpp"

#include "bm3d/filtering.hpp"
#include "bm3d/matching.hpp"

#include <algorithm>
#include <exception>
#include <thread>
#include <utility>
#include <vector>

namespace bm3d {

namespace {

int resolve_workers(int workers) {
  require(workers >= 0, "denoise: workers must be >= 0");
  if (workers != 0) return workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs `process(position, accumulator)` over all positions. Workers take
// contiguous chunks into private accumulators, merged in worker order so a
// fixed worker count always reproduces the same bits.
template <typename Fn>
void run_stage(const std::vector<std::pair<int, int>>& positions, int workers, int width,
               int height, EstimateAccumulator& acc, const Fn& process) {
  const int n = static_cast<int>(positions.size());
  const int used = std::max(1, std::min(workers, n));
  if (used == 1) {
    for (const auto& pos : positions) process(pos, acc);
    return;
  }
  std::vector<EstimateAccumulator> parts(used, EstimateAccumulator(width, height));
  std::vector<std::exception_ptr> errors(used);
  std::vector<std::thread> threads;
  threads.reserve(used);
  for (int t = 0; t < used; ++t) {
    threads.emplace_back([&, t] {
      try {
        const int lo = static_cast<int>(static_cast<long>(n) * t / used);
        const int hi = static_cast<int>(static_cast<long>(n) * (t + 1) / used);
        for (int i = lo; i < hi; ++i) process(positions[i], parts[t]);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& thread : threads) thread.join();
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
  for (const auto& part : parts) acc.merge(part);
}

}  // namespace

DenoiseResult denoise(const ImagePlane& noisy, Real sigma, const ParameterProfile& profile,
                      int workers) {
  ensure_finite(noisy, "denoise");
  require(sigma > 0.0, "denoise: sigma must be positive");
  validate_profile(profile);
  const int width = noisy.width();
  const int height = noisy.height();
  const int min_side = std::max(profile.ht.n1, profile.wie.n1);
  require(width >= min_side && height >= min_side,
          "denoise: plane is smaller than the profile's block sizes");
  const int used_workers = resolve_workers(workers);

  // Stage 1: hard-threshold collaborative filtering on the noisy plane.
  MatchParams ht_match;
  ht_match.side = profile.ht.n1;
  ht_match.search_extent = profile.ht.ns;
  ht_match.tau_match = profile.ht.tau_match;
  ht_match.max_group = profile.ht.n2;
  ht_match.lambda_2d = profile.ht.lambda_2d;
  const MatchContext ht_ctx(noisy, sigma, ht_match);
  const ScanGrid ht_grid = build_scan_grid(width, height, profile.ht.n1, profile.ht.nstep);
  const WindowProfile ht_window = kaiser_window(profile.ht.n1, profile.window_beta);

  EstimateAccumulator basic_acc(width, height);
  run_stage(ht_grid.positions, used_workers, width, height, basic_acc,
            [&](std::pair<int, int> pos, EstimateAccumulator& acc) {
              const SimilaritySet set =
                  select_group(ht_ctx.find(pos.first, pos.second), profile.ht.n2);
              const BlockGroup group = gather_group(noisy, set, profile.ht.n1);
              const FilteredGroup filtered = ht_filter_group(group, sigma, profile.ht.lambda_3d);
              aggregate(acc, filtered.estimates, filtered.weight, ht_window);
            });
  const ImagePlane basic = finalize(basic_acc);

  // Stage 2: empirical Wiener filtering. Matching runs on the (unclamped)
  // basic estimate; coefficients come from both planes at the same origins.
  MatchParams wie_match;
  wie_match.side = profile.wie.n1;
  wie_match.search_extent = profile.wie.ns;
  wie_match.tau_match = profile.wie.tau_match;
  wie_match.max_group = profile.wie.n2;
  const MatchContext wie_ctx(basic, sigma, wie_match);
  const ScanGrid wie_grid = build_scan_grid(width, height, profile.wie.n1, profile.wie.nstep);
  const WindowProfile wie_window = kaiser_window(profile.wie.n1, profile.window_beta);

  EstimateAccumulator final_acc(width, height);
  run_stage(wie_grid.positions, used_workers, width, height, final_acc,
            [&](std::pair<int, int> pos, EstimateAccumulator& acc) {
              const SimilaritySet set =
                  select_group(wie_ctx.find(pos.first, pos.second), profile.wie.n2);
              const BlockGroup pilot = gather_group(basic, set, profile.wie.n1);
              const BlockGroup noisy_group = gather_group(noisy, set, profile.wie.n1);
              const FilteredGroup filtered = wiener_filter_group(noisy_group, pilot, sigma);
              aggregate(acc, filtered.estimates, filtered.weight, wie_window);
            });
  const ImagePlane final_plane = finalize(final_acc);

  DenoiseResult result;
  result.basic = clamp_plane(basic);
  result.final = clamp_plane(final_plane);
  return result;
}

}  // namespace bm3d
