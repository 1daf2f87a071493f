#include "bm3d/cfa.hpp"

#include "bm3d/metrics.hpp"

#include "doctest.h"

#include <array>
#include <cmath>
#include <random>

using namespace bm3d;

namespace {

constexpr BayerPattern kAllPatterns[4] = {BayerPattern::RGGB, BayerPattern::GRBG,
                                          BayerPattern::GBRG, BayerPattern::BGGR};

ColorImage constant_color(int width, int height, Real r, Real g, Real b) {
  ColorImage image;
  image.r = ImagePlane::constant(width, height, r);
  image.g = ImagePlane::constant(width, height, g);
  image.b = ImagePlane::constant(width, height, b);
  return image;
}

BayerMosaic indexed_mosaic(int width, int height, BayerPattern pattern) {
  BayerMosaic mosaic;
  mosaic.pattern = pattern;
  mosaic.plane = ImagePlane::zeros(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) mosaic.plane.at(x, y) = 100.0 * y + x;
  }
  return mosaic;
}

Real plane_std(const ImagePlane& plane) {
  const Real mean = plane.data.mean();
  return std::sqrt((plane.data.array() - mean).square().mean());
}

}  // namespace

TEST_CASE("pattern tables place the channels in their documented tiles") {
  using P = BayerPattern;
  // (0,0) (1,0) (0,1) (1,1) expectations, 0 = R, 1 = G, 2 = B.
  const std::array<std::array<int, 4>, 4> expected{{
      {0, 1, 1, 2},  // RGGB
      {1, 0, 2, 1},  // GRBG
      {1, 2, 0, 1},  // GBRG
      {2, 1, 1, 0},  // BGGR
  }};
  const P patterns[4] = {P::RGGB, P::GRBG, P::GBRG, P::BGGR};
  for (int p = 0; p < 4; ++p) {
    CHECK(pattern_channel(patterns[p], 0, 0) == expected[p][0]);
    CHECK(pattern_channel(patterns[p], 1, 0) == expected[p][1]);
    CHECK(pattern_channel(patterns[p], 0, 1) == expected[p][2]);
    CHECK(pattern_channel(patterns[p], 1, 1) == expected[p][3]);
  }
  // Two-pixel periodicity in both axes.
  for (const P pattern : patterns) {
    for (int y = 0; y < 2; ++y) {
      for (int x = 0; x < 2; ++x) {
        CHECK(pattern_channel(pattern, x, y) == pattern_channel(pattern, x + 2, y));
        CHECK(pattern_channel(pattern, x, y) == pattern_channel(pattern, x, y + 2));
      }
    }
  }
  // Every tile holds one red, one blue, and two greens.
  for (const P pattern : patterns) {
    int counts[3] = {0, 0, 0};
    for (int y = 0; y < 2; ++y) {
      for (int x = 0; x < 2; ++x) ++counts[pattern_channel(pattern, x, y)];
    }
    CHECK(counts[0] == 1);
    CHECK(counts[1] == 2);
    CHECK(counts[2] == 1);
  }
}

TEST_CASE("pattern names round trip") {
  for (const BayerPattern pattern : kAllPatterns) {
    CHECK(parse_pattern(pattern_name(pattern)) == pattern);
  }
  CHECK_THROWS_AS(parse_pattern("xtrans"), ContractError);
  CHECK_THROWS_AS(parse_pattern("RGGB"), ContractError);
}

TEST_CASE("mosaicking a constant color image lays out the 2x2 tile") {
  const ColorImage color = constant_color(4, 4, 10.0, 20.0, 30.0);
  const BayerMosaic mosaic = mosaic_from_color(color, BayerPattern::RGGB);
  CHECK(mosaic.plane.at(0, 0) == 10.0);
  CHECK(mosaic.plane.at(1, 0) == 20.0);
  CHECK(mosaic.plane.at(0, 1) == 20.0);
  CHECK(mosaic.plane.at(1, 1) == 30.0);
  CHECK(mosaic.plane.at(2, 2) == 10.0);
  CHECK(mosaic.plane.at(3, 3) == 30.0);
}

TEST_CASE("a grayscale scene mosaics to the gray plane for every pattern") {
  ImagePlane gray = ImagePlane::zeros(6, 6);
  for (int y = 0; y < 6; ++y) {
    for (int x = 0; x < 6; ++x) gray.at(x, y) = 7.0 * x + 11.0 * y;
  }
  ColorImage color;
  color.r = color.g = color.b = gray;
  for (const BayerPattern pattern : kAllPatterns) {
    const BayerMosaic mosaic = mosaic_from_color(color, pattern);
    CHECK(mosaic.plane.data == gray.data);
  }
}

TEST_CASE("mosaicking rejects odd dimensions") {
  CHECK_THROWS_AS(mosaic_from_color(constant_color(5, 4, 1, 2, 3), BayerPattern::RGGB),
                  ContractError);
  CHECK_THROWS_AS(mosaic_from_color(constant_color(4, 7, 1, 2, 3), BayerPattern::RGGB),
                  ContractError);
  CHECK_THROWS_AS(mosaic_from_color(constant_color(4, 4, 1, 2, 3),
                                    BayerPattern::RGGB, {-1.0, 0.0, 0.0}),
                  ContractError);
}

TEST_CASE("split and merge are exact inverses for every pattern") {
  for (const BayerPattern pattern : kAllPatterns) {
    const BayerMosaic mosaic = indexed_mosaic(8, 6, pattern);
    const Subplanes subs = split_subplanes(mosaic);
    CHECK(subs.r.width() == 4);
    CHECK(subs.r.height() == 3);
    const BayerMosaic back = merge_subplanes(subs, pattern);
    CHECK(back.plane.data == mosaic.plane.data);
    CHECK(back.pattern == pattern);
  }
}

TEST_CASE("split routes every sample to the subplane of its channel") {
  for (const BayerPattern pattern : kAllPatterns) {
    const BayerMosaic mosaic = indexed_mosaic(6, 4, pattern);
    const Subplanes subs = split_subplanes(mosaic);
    for (int y = 0; y < 4; ++y) {
      for (int x = 0; x < 6; ++x) {
        const Real value = mosaic.plane.at(x, y);
        switch (pattern_channel(pattern, x, y)) {
          case 0:
            CHECK(subs.r.at(x / 2, y / 2) == value);
            break;
          case 2:
            CHECK(subs.b.at(x / 2, y / 2) == value);
            break;
          default: {
            const bool in_g1 = subs.g1.at(x / 2, y / 2) == value;
            const bool in_g2 = subs.g2.at(x / 2, y / 2) == value;
            CHECK((in_g1 || in_g2));
          }
        }
      }
    }
  }
}

TEST_CASE("the first green phase is the row-major-first green tile position") {
  // RGGB greens sit at (1,0) and (0,1); row-major order makes (1,0) the g1 phase.
  const BayerMosaic rggb = indexed_mosaic(4, 4, BayerPattern::RGGB);
  CHECK(split_subplanes(rggb).g1.at(0, 0) == rggb.plane.at(1, 0));
  CHECK(split_subplanes(rggb).g2.at(0, 0) == rggb.plane.at(0, 1));
  const BayerMosaic grbg = indexed_mosaic(4, 4, BayerPattern::GRBG);
  CHECK(split_subplanes(grbg).g1.at(0, 0) == grbg.plane.at(0, 0));
  CHECK(split_subplanes(grbg).g2.at(0, 0) == grbg.plane.at(1, 1));
  const BayerMosaic bggr = indexed_mosaic(4, 4, BayerPattern::BGGR);
  CHECK(split_subplanes(bggr).g1.at(0, 0) == bggr.plane.at(1, 0));
  CHECK(split_subplanes(bggr).g2.at(0, 0) == bggr.plane.at(0, 1));
}

TEST_CASE("merge validates subplane shapes") {
  Subplanes subs;
  subs.r = ImagePlane::zeros(4, 4);
  subs.g1 = ImagePlane::zeros(4, 4);
  subs.g2 = ImagePlane::zeros(4, 3);
  subs.b = ImagePlane::zeros(4, 4);
  CHECK_THROWS_AS(merge_subplanes(subs, BayerPattern::RGGB), ContractError);
}

TEST_CASE("cfa noise is deterministic and honors per-channel sigmas") {
  const ColorImage color = constant_color(512, 512, 100.0, 120.0, 140.0);
  const BayerMosaic clean = mosaic_from_color(color, BayerPattern::RGGB,
                                              {10.0, 20.0, 30.0});
  const BayerMosaic noisy = add_cfa_noise(clean, 424242);
  const BayerMosaic again = add_cfa_noise(clean, 424242);
  CHECK(noisy.plane.data == again.plane.data);
  CHECK(add_cfa_noise(clean, 424243).plane.data != noisy.plane.data);

  const Subplanes subs = split_subplanes(noisy);
  // 256^2 samples per phase: the sample std sits within a fraction of a
  // percent of the channel sigma, so 3% catches routing mistakes.
  CHECK(plane_std(subs.r) == doctest::Approx(10.0).epsilon(0.03));
  CHECK(plane_std(subs.g1) == doctest::Approx(20.0).epsilon(0.03));
  CHECK(plane_std(subs.g2) == doctest::Approx(20.0).epsilon(0.03));
  CHECK(plane_std(subs.b) == doctest::Approx(30.0).epsilon(0.03));
  CHECK(subs.r.data.mean() == doctest::Approx(100.0).epsilon(0.01));
  CHECK(subs.b.data.mean() == doctest::Approx(140.0).epsilon(0.01));
}

TEST_CASE("zero sigmas make cfa noise a no-op") {
  const BayerMosaic mosaic = indexed_mosaic(8, 8, BayerPattern::GRBG);
  const BayerMosaic out = add_cfa_noise(mosaic, 7);
  CHECK(out.plane.data == mosaic.plane.data);
}

TEST_CASE("denoising with all-zero sigmas passes the mosaic through") {
  const BayerMosaic mosaic = indexed_mosaic(32, 32, BayerPattern::RGGB);
  const BayerMosaic out = denoise_cfa(mosaic, Mode::Improved, 1);
  CHECK(out.plane.data == mosaic.plane.data);
}

TEST_CASE("per-channel denoising pulls a constant mosaic back toward the plateau") {
  const ColorImage color = constant_color(64, 64, 90.0, 110.0, 130.0);
  const BayerMosaic clean = mosaic_from_color(color, BayerPattern::RGGB, {10.0, 9.0, 8.0});
  const BayerMosaic noisy = add_cfa_noise(clean, 5);
  const BayerMosaic denoised = denoise_cfa(noisy, Mode::Improved, 1);
  const Subplanes subs = split_subplanes(denoised);
  const Subplanes noisy_subs = split_subplanes(noisy);
  // Each 32x32 phase should recover its plateau: the mean stays near the
  // channel value and the residual spread collapses well below the input's.
  CHECK(std::abs(subs.r.data.mean() - 90.0) < 1.25);
  CHECK(std::abs(subs.g1.data.mean() - 110.0) < 1.2);
  CHECK(std::abs(subs.g2.data.mean() - 110.0) < 1.2);
  CHECK(std::abs(subs.b.data.mean() - 130.0) < 1.0);
  CHECK((subs.r.data.array() - 90.0).abs().maxCoeff() < 10.0);
  CHECK((subs.b.data.array() - 130.0).abs().maxCoeff() < 8.0);
  CHECK(plane_std(subs.r) < plane_std(noisy_subs.r) / 2.0);
  CHECK(plane_std(subs.b) < plane_std(noisy_subs.b) / 2.0);
}

TEST_CASE("a mosaic smaller than two blocks per axis is rejected") {
  const ColorImage color = constant_color(8, 8, 90.0, 110.0, 130.0);
  const BayerMosaic mosaic = mosaic_from_color(color, BayerPattern::RGGB, {10.0, 10.0, 10.0});
  CHECK_THROWS_WITH_AS(denoise_cfa(mosaic, Mode::Improved, 1),
                       doctest::Contains("at least 16x16"), ContractError);
}

TEST_CASE("denoise_cfa rejects odd mosaics") {
  BayerMosaic mosaic = indexed_mosaic(8, 8, BayerPattern::RGGB);
  mosaic.plane = ImagePlane::zeros(7, 8);
  CHECK_THROWS_AS(denoise_cfa(mosaic, Mode::Improved, 1), ContractError);
}

TEST_CASE("demosaicking preserves known samples and averages the right taps") {
  const BayerMosaic mosaic = indexed_mosaic(6, 6, BayerPattern::RGGB);
  const ImagePlane& m = mosaic.plane;
  const ColorImage color = demosaick_bilinear(mosaic);

  // Native samples pass through untouched.
  CHECK(color.r.at(0, 0) == m.at(0, 0));
  CHECK(color.r.at(2, 2) == m.at(2, 2));
  CHECK(color.g.at(1, 0) == m.at(1, 0));
  CHECK(color.g.at(0, 1) == m.at(0, 1));
  CHECK(color.b.at(1, 1) == m.at(1, 1));
  CHECK(color.b.at(3, 3) == m.at(3, 3));

  // Interior B site (3,3): red comes from the four diagonals, green from the
  // four cross neighbors.
  CHECK(color.r.at(3, 3) ==
        doctest::Approx((m.at(2, 2) + m.at(4, 2) + m.at(2, 4) + m.at(4, 4)) / 4.0)
            .epsilon(1e-14));
  CHECK(color.g.at(3, 3) ==
        doctest::Approx((m.at(4, 3) + m.at(2, 3) + m.at(3, 4) + m.at(3, 2)) / 4.0)
            .epsilon(1e-14));

  // Interior R site (2,2): blue from diagonals, green from the cross.
  CHECK(color.b.at(2, 2) ==
        doctest::Approx((m.at(3, 3) + m.at(3, 1) + m.at(1, 3) + m.at(1, 1)) / 4.0)
            .epsilon(1e-14));
  CHECK(color.g.at(2, 2) ==
        doctest::Approx((m.at(3, 2) + m.at(1, 2) + m.at(2, 3) + m.at(2, 1)) / 4.0)
            .epsilon(1e-14));

  // G site (1,2): red is the horizontal pair, blue the vertical pair.
  CHECK(color.r.at(1, 2) == doctest::Approx((m.at(2, 2) + m.at(0, 2)) / 2.0).epsilon(1e-14));
  CHECK(color.b.at(1, 2) == doctest::Approx((m.at(1, 3) + m.at(1, 1)) / 2.0).epsilon(1e-14));

  // G site (2,1): red vertical, blue horizontal.
  CHECK(color.r.at(2, 1) == doctest::Approx((m.at(2, 2) + m.at(2, 0)) / 2.0).epsilon(1e-14));
  CHECK(color.b.at(2, 1) == doctest::Approx((m.at(3, 1) + m.at(1, 1)) / 2.0).epsilon(1e-14));

  // Corner R site (0,0): green keeps the two in-bounds cross taps, blue falls
  // back to the lone in-bounds diagonal.
  CHECK(color.g.at(0, 0) == doctest::Approx((m.at(1, 0) + m.at(0, 1)) / 2.0).epsilon(1e-14));
  CHECK(color.b.at(0, 0) == m.at(1, 1));

  // Far edge G site (5,0): red is the single in-window horizontal tap at
  // (4,0); blue the single vertical tap at (5,1).
  CHECK(color.r.at(5, 0) == m.at(4, 0));
  CHECK(color.b.at(5, 0) == m.at(5, 1));
}

TEST_CASE("demosaicking a constant mosaic is exact for every pattern") {
  for (const BayerPattern pattern : kAllPatterns) {
    const ColorImage flat = constant_color(6, 6, 42.5, 42.5, 42.5);
    const BayerMosaic mosaic = mosaic_from_color(flat, pattern);
    const ColorImage out = demosaick_bilinear(mosaic);
    CHECK((out.r.data.array() == 42.5).all());
    CHECK((out.g.data.array() == 42.5).all());
    CHECK((out.b.data.array() == 42.5).all());
  }
}

TEST_CASE("demosaicking a constant color scene restores the channel plateaus") {
  for (const BayerPattern pattern : kAllPatterns) {
    const ColorImage color = constant_color(8, 8, 10.0, 177.0, 202.0);
    const ColorImage out = demosaick_bilinear(mosaic_from_color(color, pattern));
    CHECK((out.r.data.array() == 10.0).all());
    CHECK((out.g.data.array() == 177.0).all());
    CHECK((out.b.data.array() == 202.0).all());
  }
}

TEST_CASE("demosaicking rejects odd mosaics") {
  BayerMosaic mosaic = indexed_mosaic(6, 6, BayerPattern::RGGB);
  mosaic.plane = ImagePlane::zeros(6, 5);
  CHECK_THROWS_AS(demosaick_bilinear(mosaic), ContractError);
}
