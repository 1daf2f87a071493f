#pragma once

#include "bm3d/profile.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace bm3d {

// One (image, sigma, mode, seed) measurement. PSNR fields are NaN on rows
// whose `error` is set.
struct BenchRecord {
  std::string image_name;
  Real sigma = 0.0;
  std::string mode;
  std::uint64_t seed = 0;
  Real psnr_noisy = 0.0;
  Real psnr_basic = 0.0;
  Real psnr_final = 0.0;
  double wall_seconds = 0.0;
  std::string error;
};

struct BenchmarkRequest {
  std::vector<std::string> images;  // file paths
  std::vector<Real> sigmas;
  std::vector<Mode> modes;
  std::vector<std::uint64_t> seeds;
  int workers = 0;  // per-run worker count handed to denoise
};

// Runs every (image, sigma, mode, seed) combination in input order. Per-item
// failures land in the record's error field and never abort the batch.
std::vector<BenchRecord> run_benchmark(const BenchmarkRequest& request);

// CSV with the exact header
// image,sigma,mode,seed,psnr_noisy,psnr_basic,psnr_final,wall_seconds,error
// PSNR printed with 2 decimals; infinity prints as inf; NaN prints empty.
void write_csv(const std::vector<BenchRecord>& records, std::ostream& out);

}  // namespace bm3d
