#pragma once

#include "bm3d/image.hpp"

#include <string>

namespace bm3d {

struct ColorImage {
  ImagePlane r, g, b;

  int width() const { return r.width(); }
  int height() const { return r.height(); }
};

// Reads an 8-bit binary PGM (P5) or an 8-bit PNG. True-color PNG input is
// reduced to luma with the BT.601 weights.
ImagePlane load_plane(const std::string& path);

// Clamps to [0,255], rounds half away from zero to 8 bits, and writes P5 PGM
// or PNG depending on the file extension.
void save_plane(const ImagePlane& plane, const std::string& path);

// 8-bit PNG only. Grayscale files replicate into all three channels.
ColorImage load_color(const std::string& path);
void save_color(const ColorImage& image, const std::string& path);

}  // namespace bm3d
