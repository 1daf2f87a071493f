#include "bm3d/benchmark.hpp"

#include "bm3d/denoise.hpp"
#include "bm3d/image_io.hpp"
#include "bm3d/metrics.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <ostream>
#include <system_error>

namespace bm3d {

namespace {

constexpr Real kNan = std::numeric_limits<Real>::quiet_NaN();

std::string display_name(const std::string& path) {
  return std::filesystem::path(path).filename().string();
}

BenchRecord blank_record(const std::string& image, Real sigma, Mode mode, std::uint64_t seed) {
  BenchRecord record;
  record.image_name = display_name(image);
  record.sigma = sigma;
  record.mode = mode_name(mode);
  record.seed = seed;
  record.psnr_noisy = kNan;
  record.psnr_basic = kNan;
  record.psnr_final = kNan;
  return record;
}

void run_item(BenchRecord& record, const ImagePlane& clean, Real sigma, Mode mode,
              std::uint64_t seed, int workers) {
  const ImagePlane noisy = awgn(clean, sigma, seed);
  record.psnr_noisy = psnr(clean, noisy);
  const ParameterProfile profile = select_profile(sigma, mode);
  const auto start = std::chrono::steady_clock::now();
  const DenoiseResult result = denoise(noisy, sigma, profile, workers);
  const auto stop = std::chrono::steady_clock::now();
  record.wall_seconds = std::chrono::duration<double>(stop - start).count();
  record.psnr_basic = psnr(clean, result.basic);
  record.psnr_final = psnr(clean, result.final);
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n") == std::string::npos) return value;
  std::string quoted = "\"";
  for (const char c : value) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string format_db(Real value) {
  if (std::isnan(value)) return "";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", value);
  return buf;
}

std::string format_sigma(Real value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  require(ec == std::errc(), "format_sigma: conversion failed");
  return std::string(buf, end);
}

}  // namespace

std::vector<BenchRecord> run_benchmark(const BenchmarkRequest& request) {
  std::vector<BenchRecord> records;
  records.reserve(request.images.size() * request.sigmas.size() * request.modes.size() *
                  request.seeds.size());
  for (const std::string& image_path : request.images) {
    ImagePlane clean;
    std::string load_error;
    try {
      clean = load_plane(image_path);
    } catch (const std::exception& e) {
      load_error = e.what();
    }
    for (const Real sigma : request.sigmas) {
      for (const Mode mode : request.modes) {
        for (const std::uint64_t seed : request.seeds) {
          BenchRecord record = blank_record(image_path, sigma, mode, seed);
          if (!load_error.empty()) {
            record.error = load_error;
          } else {
            try {
              run_item(record, clean, sigma, mode, seed, request.workers);
            } catch (const std::exception& e) {
              record.error = e.what();
              record.psnr_noisy = kNan;
              record.psnr_basic = kNan;
              record.psnr_final = kNan;
            }
          }
          records.push_back(std::move(record));
        }
      }
    }
  }
  return records;
}

void write_csv(const std::vector<BenchRecord>& records, std::ostream& out) {
  out << "image,sigma,mode,seed,psnr_noisy,psnr_basic,psnr_final,wall_seconds,error\n";
  for (const BenchRecord& record : records) {
    char wall[32];
    std::snprintf(wall, sizeof wall, "%.3f", record.wall_seconds);
    out << csv_field(record.image_name) << ',' << format_sigma(record.sigma) << ','
        << record.mode << ',' << record.seed << ',' << format_db(record.psnr_noisy) << ','
        << format_db(record.psnr_basic) << ',' << format_db(record.psnr_final) << ',' << wall
        << ',' << csv_field(record.error) << '\n';
  }
}

}  // namespace bm3d
