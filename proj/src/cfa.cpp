#include "bm3d/cfa.hpp"

#include "bm3d/denoise.hpp"
#include "bm3d/metrics.hpp"

#include <algorithm>
#include <utility>

namespace bm3d {

namespace {

// Channel in each 2x2 tile, indexed [pattern][y & 1][x & 1]. 0 = R, 1 = G, 2 = B.
constexpr int kChannelTable[4][2][2] = {
    {{0, 1}, {1, 2}},  // RGGB
    {{1, 0}, {2, 1}},  // GRBG
    {{1, 2}, {0, 1}},  // GBRG
    {{2, 1}, {1, 0}},  // BGGR
};

void require_even(const ImagePlane& plane, const char* op) {
  require(plane.width() >= 2 && plane.height() >= 2 && plane.width() % 2 == 0 &&
              plane.height() % 2 == 0,
          std::string(op) + ": mosaic dimensions must be even and at least 2x2, got " +
              std::to_string(plane.width()) + "x" + std::to_string(plane.height()));
}

void require_sigmas(const std::array<Real, 3>& sigmas, const char* op) {
  for (const Real s : sigmas) {
    require(s >= 0.0, std::string(op) + ": channel sigmas must be >= 0");
  }
}

struct PhaseMap {
  std::pair<int, int> r, g1, g2, b;  // (dx, dy) tile offsets
};

PhaseMap phases_of(BayerPattern pattern) {
  PhaseMap map;
  bool first_green = true;
  for (int dy = 0; dy < 2; ++dy) {
    for (int dx = 0; dx < 2; ++dx) {
      switch (pattern_channel(pattern, dx, dy)) {
        case 0: map.r = {dx, dy}; break;
        case 2: map.b = {dx, dy}; break;
        default:
          if (first_green) {
            map.g1 = {dx, dy};
            first_green = false;
          } else {
            map.g2 = {dx, dy};
          }
      }
    }
  }
  return map;
}

}  // namespace

BayerPattern parse_pattern(const std::string& name) {
  if (name == "rggb") return BayerPattern::RGGB;
  if (name == "grbg") return BayerPattern::GRBG;
  if (name == "gbrg") return BayerPattern::GBRG;
  if (name == "bggr") return BayerPattern::BGGR;
  throw ContractError("unknown Bayer pattern '" + name + "' (expected rggb, grbg, gbrg, or bggr)");
}

std::string pattern_name(BayerPattern pattern) {
  switch (pattern) {
    case BayerPattern::RGGB: return "rggb";
    case BayerPattern::GRBG: return "grbg";
    case BayerPattern::GBRG: return "gbrg";
    case BayerPattern::BGGR: return "bggr";
  }
  throw ContractError("pattern_name: invalid pattern value");
}

int pattern_channel(BayerPattern pattern, int x, int y) {
  require(x >= 0 && y >= 0, "pattern_channel: coordinates must be non-negative");
  return kChannelTable[static_cast<int>(pattern)][y & 1][x & 1];
}

BayerMosaic mosaic_from_color(const ColorImage& image, BayerPattern pattern,
                              std::array<Real, 3> channel_sigmas) {
  require(image.g.width() == image.width() && image.g.height() == image.height() &&
              image.b.width() == image.width() && image.b.height() == image.height(),
          "mosaic_from_color: channel dimensions differ");
  require_sigmas(channel_sigmas, "mosaic_from_color");
  BayerMosaic mosaic;
  mosaic.pattern = pattern;
  mosaic.channel_sigmas = channel_sigmas;
  mosaic.plane = ImagePlane::zeros(image.width(), image.height());
  require_even(mosaic.plane, "mosaic_from_color");
  const ImagePlane* channels[3] = {&image.r, &image.g, &image.b};
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      mosaic.plane.at(x, y) = channels[pattern_channel(pattern, x, y)]->at(x, y);
    }
  }
  return mosaic;
}

BayerMosaic add_cfa_noise(const BayerMosaic& mosaic, std::uint64_t seed) {
  ensure_finite(mosaic.plane, "add_cfa_noise");
  require_sigmas(mosaic.channel_sigmas, "add_cfa_noise");
  GaussianStream stream(seed);
  BayerMosaic out = mosaic;
  for (int y = 0; y < out.plane.height(); ++y) {
    for (int x = 0; x < out.plane.width(); ++x) {
      const Real sigma = mosaic.channel_sigmas[pattern_channel(mosaic.pattern, x, y)];
      out.plane.at(x, y) += sigma * stream.next();
    }
  }
  return out;
}

Subplanes split_subplanes(const BayerMosaic& mosaic) {
  require_even(mosaic.plane, "split_subplanes");
  const PhaseMap map = phases_of(mosaic.pattern);
  const int half_w = mosaic.plane.width() / 2;
  const int half_h = mosaic.plane.height() / 2;
  Subplanes subs;
  auto fill = [&](ImagePlane& sub, std::pair<int, int> phase) {
    sub = ImagePlane::zeros(half_w, half_h);
    for (int v = 0; v < half_h; ++v) {
      for (int u = 0; u < half_w; ++u) {
        sub.at(u, v) = mosaic.plane.at(2 * u + phase.first, 2 * v + phase.second);
      }
    }
  };
  fill(subs.r, map.r);
  fill(subs.g1, map.g1);
  fill(subs.g2, map.g2);
  fill(subs.b, map.b);
  return subs;
}

BayerMosaic merge_subplanes(const Subplanes& subs, BayerPattern pattern,
                            std::array<Real, 3> channel_sigmas) {
  const int half_w = subs.r.width();
  const int half_h = subs.r.height();
  require(half_w >= 1 && half_h >= 1, "merge_subplanes: empty subplanes");
  for (const ImagePlane* sub : {&subs.g1, &subs.g2, &subs.b}) {
    require(sub->width() == half_w && sub->height() == half_h,
            "merge_subplanes: subplane dimensions differ");
  }
  require_sigmas(channel_sigmas, "merge_subplanes");
  const PhaseMap map = phases_of(pattern);
  BayerMosaic mosaic;
  mosaic.pattern = pattern;
  mosaic.channel_sigmas = channel_sigmas;
  mosaic.plane = ImagePlane::zeros(2 * half_w, 2 * half_h);
  auto place = [&](const ImagePlane& sub, std::pair<int, int> phase) {
    for (int v = 0; v < half_h; ++v) {
      for (int u = 0; u < half_w; ++u) {
        mosaic.plane.at(2 * u + phase.first, 2 * v + phase.second) = sub.at(u, v);
      }
    }
  };
  place(subs.r, map.r);
  place(subs.g1, map.g1);
  place(subs.g2, map.g2);
  place(subs.b, map.b);
  return mosaic;
}

BayerMosaic denoise_cfa(const BayerMosaic& mosaic, Mode profile_mode, int workers) {
  ensure_finite(mosaic.plane, "denoise_cfa");
  require_even(mosaic.plane, "denoise_cfa");
  require_sigmas(mosaic.channel_sigmas, "denoise_cfa");
  Subplanes subs = split_subplanes(mosaic);
  auto denoise_channel = [&](ImagePlane& sub, Real sigma) {
    if (sigma <= 0.0) return;  // clean channel passes through untouched
    const ParameterProfile profile = select_profile(sigma, profile_mode);
    const int min_side = std::max(profile.ht.n1, profile.wie.n1);
    if (sub.width() < min_side || sub.height() < min_side) {
      throw ContractError("denoise_cfa: subplane " + std::to_string(sub.width()) + "x" +
                          std::to_string(sub.height()) + " is smaller than the " +
                          std::to_string(min_side) + "x" + std::to_string(min_side) +
                          " block size; the mosaic must be at least " +
                          std::to_string(2 * min_side) + "x" + std::to_string(2 * min_side));
    }
    sub = denoise(sub, sigma, profile, workers).final;
  };
  denoise_channel(subs.r, mosaic.channel_sigmas[0]);
  denoise_channel(subs.g1, mosaic.channel_sigmas[1]);
  denoise_channel(subs.g2, mosaic.channel_sigmas[1]);
  denoise_channel(subs.b, mosaic.channel_sigmas[2]);
  return merge_subplanes(subs, mosaic.pattern, mosaic.channel_sigmas);
}

ColorImage demosaick_bilinear(const BayerMosaic& mosaic) {
  ensure_finite(mosaic.plane, "demosaick_bilinear");
  require_even(mosaic.plane, "demosaick_bilinear");
  const int w = mosaic.plane.width();
  const int h = mosaic.plane.height();
  ColorImage out;
  out.r = ImagePlane::zeros(w, h);
  out.g = ImagePlane::zeros(w, h);
  out.b = ImagePlane::zeros(w, h);
  ImagePlane* channels[3] = {&out.r, &out.g, &out.b};

  constexpr int kCross[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  constexpr int kDiagonal[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};

  auto gather = [&](const int (&taps)[4][2], int x, int y, int channel, Real (&vals)[4]) {
    int count = 0;
    for (const auto& tap : taps) {
      const int nx = x + tap[0];
      const int ny = y + tap[1];
      if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
      if (pattern_channel(mosaic.pattern, nx, ny) != channel) continue;
      vals[count++] = mosaic.plane.at(nx, ny);
    }
    return count;
  };

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int own = pattern_channel(mosaic.pattern, x, y);
      for (int c = 0; c < 3; ++c) {
        if (c == own) {
          channels[c]->at(x, y) = mosaic.plane.at(x, y);
          continue;
        }
        Real vals[4];
        int count = gather(kCross, x, y, c, vals);
        if (count == 0) count = gather(kDiagonal, x, y, c, vals);
        if (count == 0) {
          throw ContractError("demosaick_bilinear: no neighbor carries the needed channel");
        }
        // Pairwise sum keeps the 4-tap average of equal samples exact.
        Real sum;
        if (count == 4) sum = (vals[0] + vals[1]) + (vals[2] + vals[3]);
        else if (count == 3) sum = vals[0] + vals[1] + vals[2];
        else if (count == 2) sum = vals[0] + vals[1];
        else sum = vals[0];
        channels[c]->at(x, y) = sum / count;
      }
    }
  }
  return out;
}

}  // namespace bm3d
