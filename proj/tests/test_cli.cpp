#include "bm3d/image.hpp"
#include "bm3d/image_io.hpp"
#include "bm3d/metrics.hpp"

#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace bm3d;

namespace {

namespace fs = std::filesystem;

fs::path temp_root() {
  static const fs::path root = [] {
    const fs::path p = fs::temp_directory_path() / "bm3d_cli_tests";
    fs::create_directories(p);
    return p;
  }();
  return root;
}

std::string tmp_file(const std::string& name) { return (temp_root() / name).string(); }

std::string data_file(const std::string& name) {
  return (fs::path(TEST_DATA_DIR) / name).string();
}

// Runs the CLI with stdout/stderr captured (or discarded) and returns the exit code.
int run_cli(const std::string& args, const std::string& stdout_path = "",
            const std::string& stderr_path = "") {
  std::string cmd = std::string(BM3D_CLI_PATH) + " " + args;
  cmd += stdout_path.empty() ? " >/dev/null" : " >" + stdout_path;
  cmd += stderr_path.empty() ? " 2>/dev/null" : " 2>" + stderr_path;
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

std::string write_scene(const std::string& name, int width, int height) {
  ImagePlane plane = ImagePlane::zeros(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) plane.at(x, y) = (x * 13 + y * 29) % 256;
  }
  const std::string path = tmp_file(name);
  save_plane(plane, path);
  return path;
}

}  // namespace

TEST_CASE("print-profile emits the full resolved parameter set") {
  const std::string out = tmp_file("profile_improved_90.txt");
  REQUIRE(run_cli("print-profile --sigma 90 --mode improved", out) == 0);
  const std::string expected =
      "ht.n1 = 8\n"
      "ht.n2 = 64\n"
      "ht.nstep = 3\n"
      "ht.ns = 39\n"
      "ht.tau_match = 30000\n"
      "ht.lambda_2d = none\n"
      "ht.lambda_3d = 2.7\n"
      "wie.n1 = 8\n"
      "wie.n2 = 32\n"
      "wie.nstep = 3\n"
      "wie.ns = 39\n"
      "wie.tau_match = 400\n"
      "window_beta = 2\n";
  CHECK(read_file(out) == expected);

  const std::string base = tmp_file("profile_baseline_90.txt");
  REQUIRE(run_cli("print-profile --sigma 90 --mode baseline", base) == 0);
  const std::string text = read_file(base);
  CHECK(contains(text, "ht.n1 = 11\n"));
  CHECK(contains(text, "ht.n2 = 16\n"));
  CHECK(contains(text, "ht.tau_match = 5000\n"));
  CHECK(contains(text, "ht.lambda_2d = 2\n"));
}

TEST_CASE("print-profile clamps oversized sigma with a warning") {
  const std::string out = tmp_file("profile_clamped.txt");
  const std::string err = tmp_file("profile_clamped_err.txt");
  REQUIRE(run_cli("print-profile --sigma 140 --mode improved", out, err) == 0);

  const std::string warning = read_file(err);
  CHECK(contains(warning, "warning:"));
  CHECK(contains(warning, "140"));
  CHECK(contains(warning, "100"));

  const std::string at_cap = tmp_file("profile_cap.txt");
  const std::string cap_err = tmp_file("profile_cap_err.txt");
  REQUIRE(run_cli("print-profile --sigma 100 --mode improved", at_cap, cap_err) == 0);
  CHECK(read_file(out) == read_file(at_cap));
  CHECK(read_file(cap_err).empty());
}

TEST_CASE("usage mistakes exit with status 2") {
  CHECK(run_cli("") == 2);
  CHECK(run_cli("print-profile --sigma 25") == 2);
  CHECK(run_cli("denoise --input a.pgm --output b.pgm") == 2);
  CHECK(run_cli("denoise --input a.pgm --output b.pgm --sigma 25 --bogus") == 2);
  CHECK(run_cli("denoise --input a.pgm --output b.pgm --sigma 25 --mode turbo") == 2);
  CHECK(run_cli("cfa-denoise --input a.png --output b.png --sigma-r 5 --sigma-g 5 "
                "--sigma-b 5 --seed 3") == 2);
  CHECK(run_cli("cfa-denoise --input a.png --output b.png --sigma-r 5 --sigma-g 5 "
                "--sigma-b 5 --pattern xtrans") == 2);
}

TEST_CASE("help exits cleanly") {
  const std::string out = tmp_file("help.txt");
  CHECK(run_cli("--help", out) == 0);
  CHECK(contains(read_file(out), "denoise"));
}

TEST_CASE("runtime failures exit with status 1") {
  CHECK(run_cli("denoise --input " + tmp_file("no_such_image.pgm") +
                " --output " + tmp_file("unused.pgm") + " --sigma 25") == 1);
  CHECK(run_cli("benchmark --images " + tmp_file("no_such_dir") +
                " --sigmas 10 --modes improved --out " + tmp_file("unused.csv")) == 1);

  const std::string scene = write_scene("bench_unwritable_src.pgm", 16, 16);
  CHECK(run_cli("benchmark --images " + scene +
                " --sigmas 10 --modes improved --out /nonexistent/dir/out.csv") == 1);

  CHECK(run_cli("cfa-denoise --input " + data_file("color_odd.png") + " --output " +
                tmp_file("unused.png") + " --sigma-r 0 --sigma-g 0 --sigma-b 0") == 1);
}

TEST_CASE("denoise writes both estimates and a summary line") {
  const std::string input = write_scene("cli_denoise_in.pgm", 48, 48);
  const std::string output = tmp_file("cli_denoise_out.pgm");
  const std::string basic = tmp_file("cli_denoise_basic.pgm");
  const std::string stdout_path = tmp_file("cli_denoise_stdout.txt");

  REQUIRE(run_cli("denoise --input " + input + " --output " + output + " --sigma 25 " +
                  "--save-basic " + basic + " --workers 1", stdout_path) == 0);

  const std::string summary = read_file(stdout_path);
  CHECK(summary.rfind("mode=improved sigma=25 seconds=", 0) == 0);
  CHECK(summary.back() == '\n');

  const ImagePlane final_img = load_plane(output);
  const ImagePlane basic_img = load_plane(basic);
  CHECK(final_img.width() == 48);
  CHECK(final_img.height() == 48);
  CHECK(basic_img.width() == 48);
  CHECK(basic_img.height() == 48);
}

TEST_CASE("a printed profile fed back through --profile-file is a no-op") {
  const std::string profile_path = tmp_file("roundtrip_profile.txt");
  REQUIRE(run_cli("print-profile --sigma 45 --mode improved", profile_path) == 0);

  const std::string input = write_scene("cli_roundtrip_in.pgm", 48, 48);
  const std::string plain_out = tmp_file("cli_roundtrip_plain.pgm");
  const std::string override_out = tmp_file("cli_roundtrip_override.pgm");

  REQUIRE(run_cli("denoise --input " + input + " --output " + plain_out +
                  " --sigma 45 --workers 1") == 0);
  REQUIRE(run_cli("denoise --input " + input + " --output " + override_out +
                  " --sigma 45 --workers 1 --profile-file " + profile_path) == 0);

  CHECK(read_file(plain_out) == read_file(override_out));
}

TEST_CASE("benchmark over explicit files keeps request order") {
  const std::string first = write_scene("bench_first.pgm", 32, 32);
  const std::string second = write_scene("bench_second.pgm", 32, 32);
  const std::string csv_path = tmp_file("bench_files.csv");

  REQUIRE(run_cli("benchmark --images " + first + " " + second +
                  " --sigmas 10,20 --modes improved --seed 3 --out " + csv_path) == 0);

  const std::vector<std::string> lines = split_lines(read_file(csv_path));
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "image,sigma,mode,seed,psnr_noisy,psnr_basic,psnr_final,wall_seconds,error");
  CHECK(lines[1].rfind("bench_first.pgm,10,improved,3,", 0) == 0);
  CHECK(lines[2].rfind("bench_first.pgm,20,improved,3,", 0) == 0);
  CHECK(lines[3].rfind("bench_second.pgm,10,improved,3,", 0) == 0);
  CHECK(lines[4].rfind("bench_second.pgm,20,improved,3,", 0) == 0);
  for (std::size_t i = 1; i < lines.size(); ++i) CHECK(lines[i].back() == ',');
}

TEST_CASE("benchmark expands directories in sorted order and skips other files") {
  const fs::path dir = temp_root() / "bench_dir";
  fs::create_directories(dir);
  write_scene("bench_dir/zeta.pgm", 24, 24);
  write_scene("bench_dir/alpha.pgm", 24, 24);
  std::ofstream(dir / "notes.txt") << "not an image\n";

  const std::string csv_path = tmp_file("bench_dir.csv");
  REQUIRE(run_cli("benchmark --images " + dir.string() +
                  " --sigmas 15 --modes baseline --out " + csv_path) == 0);

  const std::vector<std::string> lines = split_lines(read_file(csv_path));
  REQUIRE(lines.size() == 3);
  CHECK(lines[1].rfind("alpha.pgm,15,baseline,0,", 0) == 0);
  CHECK(lines[2].rfind("zeta.pgm,15,baseline,0,", 0) == 0);
}

TEST_CASE("cfa-denoise round trips a color image") {
  const std::string input = data_file("color32.png");
  const std::string output = tmp_file("cfa_plain_out.png");
  const std::string stdout_path = tmp_file("cfa_plain_stdout.txt");

  REQUIRE(run_cli("cfa-denoise --input " + input + " --output " + output +
                  " --sigma-r 0 --sigma-g 0 --sigma-b 0", stdout_path) == 0);
  CHECK(read_file(stdout_path).empty());

  const ColorImage restored = load_color(output);
  CHECK(restored.r.width() == 32);
  CHECK(restored.r.height() == 32);
}

TEST_CASE("cfa-denoise with injected noise reports a PSNR gain") {
  const std::string input = data_file("color32.png");
  const std::string output = tmp_file("cfa_noise_out.png");
  const std::string stdout_path = tmp_file("cfa_noise_stdout.txt");

  REQUIRE(run_cli("cfa-denoise --input " + input + " --output " + output +
                  " --sigma-r 10 --sigma-g 10 --sigma-b 10 --add-noise --seed 7",
                  stdout_path) == 0);

  const std::string line = read_file(stdout_path);
  CAPTURE(line);
  const std::string noisy_key = "psnr_noisy_demosaicked=";
  const std::string denoised_key = " psnr_denoised=";
  const std::size_t noisy_pos = line.find(noisy_key);
  const std::size_t denoised_pos = line.find(denoised_key);
  REQUIRE(noisy_pos == 0);
  REQUIRE(denoised_pos != std::string::npos);

  const double noisy_db = std::strtod(line.c_str() + noisy_key.size(), nullptr);
  const double denoised_db = std::strtod(line.c_str() + denoised_pos + denoised_key.size(), nullptr);
  CHECK(noisy_db > 0.0);
  CHECK(denoised_db >= noisy_db + 0.5);
}
