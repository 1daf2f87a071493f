#include "CLI11.hpp"

#include "bm3d/benchmark.hpp"
#include "bm3d/cfa.hpp"
#include "bm3d/denoise.hpp"
#include "bm3d/image_io.hpp"
#include "bm3d/metrics.hpp"
#include "bm3d/profile.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace bm3d;

std::string format_value(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return "?";
  return std::string(buf, end);
}

std::string format_db(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

struct DenoiseArgs {
  std::string input, output, mode = "improved", profile_file, save_basic;
  double sigma = 0.0;
  int workers = 0;
};

int run_denoise(const DenoiseArgs& args) {
  const ImagePlane noisy = load_plane(args.input);
  std::vector<std::string> warnings;
  ParameterProfile profile = select_profile(args.sigma, parse_mode(args.mode), &warnings);
  print_warnings(warnings);
  if (!args.profile_file.empty()) profile = load_profile_overrides(profile, args.profile_file);

  const auto start = std::chrono::steady_clock::now();
  const DenoiseResult result = denoise(noisy, args.sigma, profile, args.workers);
  const auto stop = std::chrono::steady_clock::now();
  const double seconds = std::chrono::duration<double>(stop - start).count();

  save_plane(result.final, args.output);
  if (!args.save_basic.empty()) save_plane(result.basic, args.save_basic);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", seconds);
  std::cout << "mode=" << args.mode << " sigma=" << format_value(args.sigma) << " seconds=" << buf
            << "\n";
  return 0;
}

struct CfaArgs {
  std::string input, output, pattern = "rggb";
  double sigma_r = 0.0, sigma_g = 0.0, sigma_b = 0.0;
  bool add_noise = false;
  std::uint64_t seed = 0;
};

int run_cfa_denoise(const CfaArgs& args) {
  const ColorImage original = load_color(args.input);
  const BayerPattern pattern = parse_pattern(args.pattern);
  const BayerMosaic clean =
      mosaic_from_color(original, pattern, {args.sigma_r, args.sigma_g, args.sigma_b});
  const BayerMosaic noisy = args.add_noise ? add_cfa_noise(clean, args.seed) : clean;
  const BayerMosaic denoised = denoise_cfa(noisy);
  const ColorImage restored = demosaick_bilinear(denoised);
  save_color(restored, args.output);
  if (args.add_noise) {
    const ColorImage noisy_view = demosaick_bilinear(noisy);
    std::cout << "psnr_noisy_demosaicked=" << format_db(psnr_color(original, noisy_view))
              << " psnr_denoised=" << format_db(psnr_color(original, restored)) << "\n";
  }
  return 0;
}

struct BenchArgs {
  std::vector<std::string> images;
  std::vector<double> sigmas;
  std::vector<std::string> modes;
  std::vector<std::uint64_t> seeds{0};
  std::string out;
};

std::vector<std::string> expand_images(const std::vector<std::string>& inputs) {
  namespace fs = std::filesystem;
  std::vector<std::string> files;
  for (const std::string& item : inputs) {
    const fs::path path(item);
    if (fs::is_directory(path)) {
      std::vector<std::string> found;
      for (const auto& entry : fs::directory_iterator(path)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (ext == ".pgm" || ext == ".png") found.push_back(entry.path().string());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::is_regular_file(path)) {
      files.push_back(item);
    } else {
      throw IoError("images path '" + item + "' does not exist");
    }
  }
  return files;
}

int run_benchmark_cmd(const BenchArgs& args) {
  BenchmarkRequest request;
  request.images = expand_images(args.images);
  request.sigmas.assign(args.sigmas.begin(), args.sigmas.end());
  for (const std::string& mode : args.modes) request.modes.push_back(parse_mode(mode));
  request.seeds = args.seeds;

  const std::vector<BenchRecord> records = run_benchmark(request);
  std::ofstream out(args.out, std::ios::binary);
  if (!out) throw IoError("cannot open '" + args.out + "' for writing");
  write_csv(records, out);
  out.flush();
  if (!out) throw IoError("failed writing '" + args.out + "'");
  return 0;
}

struct ProfileArgs {
  double sigma = 0.0;
  std::string mode;
};

int run_print_profile(const ProfileArgs& args) {
  std::vector<std::string> warnings;
  const ParameterProfile profile = select_profile(args.sigma, parse_mode(args.mode), &warnings);
  print_warnings(warnings);
  std::cout << format_profile(profile);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noise-adaptive BM3D image denoiser"};
  app.require_subcommand(1);
  const std::vector<std::string> mode_names{"baseline", "improved", "satellite"};

  DenoiseArgs dn;
  CLI::App* denoise_cmd = app.add_subcommand("denoise", "Denoise a grayscale image");
  denoise_cmd->add_option("--input", dn.input, "Noisy input image (PGM or PNG)")->required();
  denoise_cmd->add_option("--output", dn.output, "Where to write the denoised image")->required();
  denoise_cmd->add_option("--sigma", dn.sigma, "Noise standard deviation, [0,255] scale")
      ->required();
  denoise_cmd->add_option("--mode", dn.mode, "Parameter profile family")
      ->check(CLI::IsMember(mode_names));
  denoise_cmd->add_option("--profile-file", dn.profile_file,
                          "key = value overrides applied on top of the selected profile");
  denoise_cmd->add_option("--save-basic", dn.save_basic, "Also write the first-stage estimate");
  denoise_cmd->add_option("--workers", dn.workers, "Worker threads; 0 = hardware, 1 = exact")
      ->check(CLI::NonNegativeNumber);

  CfaArgs cfa;
  CLI::App* cfa_cmd = app.add_subcommand("cfa-denoise", "Denoise a Bayer-sampled color image");
  cfa_cmd->add_option("--input", cfa.input, "Color PNG input")->required();
  cfa_cmd->add_option("--output", cfa.output, "Color PNG output")->required();
  cfa_cmd->add_option("--sigma-r", cfa.sigma_r, "Red-channel noise std")
      ->required()
      ->check(CLI::NonNegativeNumber);
  cfa_cmd->add_option("--sigma-g", cfa.sigma_g, "Green-channel noise std")
      ->required()
      ->check(CLI::NonNegativeNumber);
  cfa_cmd->add_option("--sigma-b", cfa.sigma_b, "Blue-channel noise std")
      ->required()
      ->check(CLI::NonNegativeNumber);
  cfa_cmd->add_option("--pattern", cfa.pattern, "Bayer pattern")
      ->check(CLI::IsMember({"rggb", "grbg", "gbrg", "bggr"}));
  CLI::Option* add_noise_flag = cfa_cmd->add_flag(
      "--add-noise", cfa.add_noise, "Inject channel noise into the mosaic and report PSNR");
  cfa_cmd->add_option("--seed", cfa.seed, "Noise seed")->needs(add_noise_flag);

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand("benchmark", "PSNR benchmark over an image corpus");
  bench_cmd->add_option("--images", bench.images, "Image files and/or directories")
      ->required()
      ->expected(-1);
  bench_cmd->add_option("--sigmas", bench.sigmas, "Comma-separated noise levels")
      ->required()
      ->delimiter(',');
  bench_cmd->add_option("--modes", bench.modes, "Comma-separated profile families")
      ->required()
      ->delimiter(',')
      ->check(CLI::IsMember(mode_names));
  bench_cmd->add_option("--seed", bench.seeds, "Comma-separated seeds")->delimiter(',');
  bench_cmd->add_option("--out", bench.out, "CSV output path")->required();

  ProfileArgs prof;
  CLI::App* profile_cmd =
      app.add_subcommand("print-profile", "Print the resolved parameter profile");
  profile_cmd->add_option("--sigma", prof.sigma, "Noise standard deviation")->required();
  profile_cmd->add_option("--mode", prof.mode, "Parameter profile family")
      ->required()
      ->check(CLI::IsMember(mode_names));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (denoise_cmd->parsed()) return run_denoise(dn);
    if (cfa_cmd->parsed()) return run_cfa_denoise(cfa);
    if (bench_cmd->parsed()) return run_benchmark_cmd(bench);
    if (profile_cmd->parsed()) return run_print_profile(prof);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "error: no command selected\n" << app.help();
  return 2;
}
