#include "bm3d/image.hpp"

#include <algorithm>
#include <string>

namespace bm3d {

void ensure_finite(const ImagePlane& plane, const char* context) {
  require(plane.width() >= 1 && plane.height() >= 1,
          std::string(context) + ": plane is empty");
  if (!plane.data.allFinite()) {
    throw ContractError(std::string(context) + ": plane contains NaN or Inf samples");
  }
}

ImagePlane clamp_plane(const ImagePlane& plane, Real lo, Real hi) {
  return ImagePlane(plane.data.cwiseMax(lo).cwiseMin(hi));
}

Block extract_block(const ImagePlane& plane, int x, int y, int side) {
  require(side >= 1, "extract_block: side must be >= 1");
  if (x < 0 || y < 0 || x + side > plane.width() || y + side > plane.height()) {
    throw ContractError("extract_block: block [" + std::to_string(x) + "," +
                        std::to_string(y) + "]+" + std::to_string(side) +
                        " exceeds plane " + std::to_string(plane.width()) + "x" +
                        std::to_string(plane.height()));
  }
  Block block;
  block.samples = plane.data.block(y, x, side, side);
  block.x = x;
  block.y = y;
  return block;
}

void copy_block(const ImagePlane& plane, int x, int y, int side, Matrix& out) {
  out.resize(side, side);
  for (int r = 0; r < side; ++r) {
    const Real* src = plane.data.data() + static_cast<std::ptrdiff_t>(y + r) * plane.width() + x;
    std::copy(src, src + side, out.data() + static_cast<std::ptrdiff_t>(r) * side);
  }
}

namespace {

// {0, step, 2*step, ...} clipped to valid origins, final origin forced to
// extent - side so the last block flushes the border.
std::vector<int> axis_positions(int extent, int side, int step) {
  std::vector<int> positions;
  const int last = extent - side;
  for (int p = 0; p <= last; p += step) positions.push_back(p);
  if (positions.back() != last) positions.push_back(last);
  return positions;
}

}  // namespace

ScanGrid build_scan_grid(int width, int height, int side, int step) {
  require(side >= 1 && step >= 1, "build_scan_grid: side and step must be >= 1");
  if (side > width || side > height) {
    throw ContractError("build_scan_grid: side " + std::to_string(side) +
                        " exceeds plane extent " + std::to_string(width) + "x" +
                        std::to_string(height));
  }
  const std::vector<int> xs = axis_positions(width, side, step);
  const std::vector<int> ys = axis_positions(height, side, step);

  ScanGrid grid;
  grid.step = step;
  grid.positions.reserve(xs.size() * ys.size());
  for (int y : ys) {
    for (int x : xs) grid.positions.emplace_back(x, y);
  }
  return grid;
}

}  // namespace bm3d
