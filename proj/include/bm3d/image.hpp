#pragma once

#include "bm3d/types.hpp"

#include <utility>
#include <vector>

namespace bm3d {

// Single-channel raster in nominal display range [0,255], one double per pixel.
struct ImagePlane {
  Matrix data;  // rows = height, cols = width

  ImagePlane() = default;
  explicit ImagePlane(Matrix m) : data(std::move(m)) {}

  static ImagePlane zeros(int width, int height) {
    return ImagePlane(Matrix::Zero(height, width));
  }
  static ImagePlane constant(int width, int height, Real value) {
    return ImagePlane(Matrix::Constant(height, width, value));
  }

  int width() const { return static_cast<int>(data.cols()); }
  int height() const { return static_cast<int>(data.rows()); }

  Real& at(int x, int y) { return data(y, x); }
  Real at(int x, int y) const { return data(y, x); }
};

// Throws ContractError if the plane is empty or holds NaN/Inf samples.
void ensure_finite(const ImagePlane& plane, const char* context);

ImagePlane clamp_plane(const ImagePlane& plane, Real lo = 0.0, Real hi = 255.0);

// Square patch copied out of a parent plane, remembering its origin.
struct Block {
  Matrix samples;
  int x = 0;
  int y = 0;

  int side() const { return static_cast<int>(samples.rows()); }
};

// Ordered stack of same-side blocks gathered for one reference.
struct BlockGroup {
  int side = 0;
  std::vector<Matrix> slices;
  std::vector<std::pair<int, int>> origins;  // (x, y) per slice

  int depth() const { return static_cast<int>(slices.size()); }
};

// Reference-block origins visited by one denoising stage, row-major.
struct ScanGrid {
  int step = 1;
  std::vector<std::pair<int, int>> positions;  // (x, y)
};

Block extract_block(const ImagePlane& plane, int x, int y, int side);

// Same copy as extract_block but into a caller-owned buffer, no allocation
// once `out` has the right shape.
void copy_block(const ImagePlane& plane, int x, int y, int side, Matrix& out);

// Strided origins in each axis, with the final row/column forced flush to the
// border so the grid covers the whole plane.
ScanGrid build_scan_grid(int width, int height, int side, int step);

}  // namespace bm3d
