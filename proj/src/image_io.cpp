#include "bm3d/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

namespace bm3d {

namespace {

std::uint8_t quantize(Real v) {
  const Real clamped = std::min<Real>(255.0, std::max<Real>(0.0, v));
  return static_cast<std::uint8_t>(std::lround(clamped));  // lround: half away from zero
}

bool has_suffix(const std::string& path, const char* suffix) {
  const std::size_t n = std::strlen(suffix);
  if (path.size() < n) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::tolower(static_cast<unsigned char>(path[path.size() - n + i])) != suffix[i]) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------- PGM (P5)

// Skips whitespace and '#' comment lines, then parses one decimal token.
int read_pnm_int(std::istream& in, const std::string& path) {
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (!std::isspace(c)) {
      break;
    }
    c = in.get();
  }
  if (c == EOF || !std::isdigit(c)) {
    throw IoError(path + ": malformed PGM header");
  }
  long value = 0;
  while (c != EOF && std::isdigit(c)) {
    value = value * 10 + (c - '0');
    if (value > 1'000'000'000L) throw IoError(path + ": PGM header value out of range");
    c = in.get();
  }
  in.unget();
  return static_cast<int>(value);
}

ImagePlane load_pgm(std::ifstream& in, const std::string& path) {
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (magic[0] != 'P' || magic[1] != '5') {
    throw IoError(path + ": not a binary (P5) PGM file");
  }
  const int width = read_pnm_int(in, path);
  const int height = read_pnm_int(in, path);
  const int maxval = read_pnm_int(in, path);
  if (width < 1 || height < 1) {
    throw IoError(path + ": invalid PGM dimensions " + std::to_string(width) + "x" +
                  std::to_string(height));
  }
  if (maxval > 255) {
    throw IoError(path + ": PGM maxval " + std::to_string(maxval) +
                  " is unsupported; only 8-bit samples (maxval <= 255) are handled");
  }
  if (maxval < 1) throw IoError(path + ": invalid PGM maxval 0");
  in.get();  // single whitespace separating header from raster

  std::vector<std::uint8_t> raw(static_cast<std::size_t>(width) * height);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
    throw IoError(path + ": truncated PGM raster");
  }

  ImagePlane plane = ImagePlane::zeros(width, height);
  Real* dst = plane.data.data();
  for (std::size_t i = 0; i < raw.size(); ++i) dst[i] = static_cast<Real>(raw[i]);
  return plane;
}

void save_pgm(const ImagePlane& plane, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path + ": cannot open for writing");
  out << "P5\n" << plane.width() << " " << plane.height() << "\n255\n";
  std::vector<std::uint8_t> raw(static_cast<std::size_t>(plane.width()) * plane.height());
  const Real* src = plane.data.data();
  for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = quantize(src[i]);
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) throw IoError(path + ": write failed");
}

// ------------------------------------------------------------------- PNG

struct PngRead {
  FILE* file = nullptr;
  png_structp png = nullptr;
  png_infop info = nullptr;

  ~PngRead() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    if (file) std::fclose(file);
  }
};

struct PngWrite {
  FILE* file = nullptr;
  png_structp png = nullptr;
  png_infop info = nullptr;

  ~PngWrite() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    if (file) std::fclose(file);
  }
};

// Decoded 8-bit image, 1 (gray) or 3 (rgb) interleaved channels.
struct DecodedPng {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<std::uint8_t> samples;
};

DecodedPng decode_png(const std::string& path) {
  PngRead ctx;
  ctx.file = std::fopen(path.c_str(), "rb");
  if (!ctx.file) throw IoError(path + ": cannot open for reading");

  png_byte header[8];
  if (std::fread(header, 1, 8, ctx.file) != 8 || png_sig_cmp(header, 0, 8) != 0) {
    throw IoError(path + ": not a PNG file");
  }
  ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!ctx.png) throw IoError(path + ": libpng init failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) throw IoError(path + ": libpng init failed");

  // libpng reports errors via longjmp; convert to an exception in our frame.
  if (setjmp(png_jmpbuf(ctx.png))) {
    throw IoError(path + ": malformed PNG");
  }
  png_init_io(ctx.png, ctx.file);
  png_set_sig_bytes(ctx.png, 8);
  png_read_info(ctx.png, ctx.info);

  const int bit_depth = png_get_bit_depth(ctx.png, ctx.info);
  const int color_type = png_get_color_type(ctx.png, ctx.info);
  if (bit_depth != 8) {
    throw IoError(path + ": PNG bit depth " + std::to_string(bit_depth) +
                  " is unsupported; only 8-bit samples are handled");
  }
  if (color_type == PNG_COLOR_TYPE_PALETTE) {
    throw IoError(path + ": palette PNG is unsupported; only grayscale and true color");
  }
  if (color_type != PNG_COLOR_TYPE_GRAY && color_type != PNG_COLOR_TYPE_GRAY_ALPHA &&
      color_type != PNG_COLOR_TYPE_RGB && color_type != PNG_COLOR_TYPE_RGB_ALPHA) {
    throw IoError(path + ": unsupported PNG color type " + std::to_string(color_type));
  }
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(ctx.png);
  png_set_interlace_handling(ctx.png);
  png_read_update_info(ctx.png, ctx.info);

  DecodedPng out;
  out.width = static_cast<int>(png_get_image_width(ctx.png, ctx.info));
  out.height = static_cast<int>(png_get_image_height(ctx.png, ctx.info));
  out.channels = (color_type & PNG_COLOR_MASK_COLOR) ? 3 : 1;
  if (out.width < 1 || out.height < 1) throw IoError(path + ": empty PNG");

  out.samples.resize(static_cast<std::size_t>(out.width) * out.height * out.channels);
  std::vector<png_bytep> rows(out.height);
  for (int y = 0; y < out.height; ++y) {
    rows[y] = out.samples.data() + static_cast<std::size_t>(y) * out.width * out.channels;
  }
  png_read_image(ctx.png, rows.data());
  png_read_end(ctx.png, nullptr);
  return out;
}

void encode_png(const std::string& path, int width, int height, int channels,
                const std::vector<std::uint8_t>& samples) {
  PngWrite ctx;
  ctx.file = std::fopen(path.c_str(), "wb");
  if (!ctx.file) throw IoError(path + ": cannot open for writing");
  ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!ctx.png) throw IoError(path + ": libpng init failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) throw IoError(path + ": libpng init failed");

  if (setjmp(png_jmpbuf(ctx.png))) {
    throw IoError(path + ": PNG write failed");
  }
  png_init_io(ctx.png, ctx.file);
  png_set_IHDR(ctx.png, ctx.info, static_cast<png_uint_32>(width),
               static_cast<png_uint_32>(height), 8,
               channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(ctx.png, ctx.info);

  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y) {
    rows[y] = const_cast<png_bytep>(samples.data()) +
              static_cast<std::size_t>(y) * width * channels;
  }
  png_write_image(ctx.png, rows.data());
  png_write_end(ctx.png, nullptr);
}

// First bytes decide the container; extensions are only trusted for writing.
enum class FileKind { Pgm, Png, Unknown, Empty };

FileKind sniff(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open for reading");
  unsigned char head[8] = {0};
  in.read(reinterpret_cast<char*>(head), 8);
  const auto got = in.gcount();
  if (got == 0) return FileKind::Empty;
  if (got >= 2 && head[0] == 'P' && head[1] == '5') return FileKind::Pgm;
  if (got >= 8 && png_sig_cmp(head, 0, 8) == 0) return FileKind::Png;
  return FileKind::Unknown;
}

}  // namespace

ImagePlane load_plane(const std::string& path) {
  switch (sniff(path)) {
    case FileKind::Empty:
      throw IoError(path + ": empty file");
    case FileKind::Pgm: {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw IoError(path + ": cannot open for reading");
      ImagePlane plane = load_pgm(in, path);
      ensure_finite(plane, "load_plane");
      return plane;
    }
    case FileKind::Png: {
      const DecodedPng png = decode_png(path);
      ImagePlane plane = ImagePlane::zeros(png.width, png.height);
      Real* dst = plane.data.data();
      const std::size_t pixels = static_cast<std::size_t>(png.width) * png.height;
      if (png.channels == 1) {
        for (std::size_t i = 0; i < pixels; ++i) dst[i] = static_cast<Real>(png.samples[i]);
      } else {
        // BT.601 luma
        for (std::size_t i = 0; i < pixels; ++i) {
          const std::uint8_t* px = &png.samples[i * 3];
          dst[i] = 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2];
        }
      }
      ensure_finite(plane, "load_plane");
      return plane;
    }
    default:
      throw IoError(path + ": unsupported format; expected binary PGM (P5) or PNG");
  }
}

void save_plane(const ImagePlane& plane, const std::string& path) {
  ensure_finite(plane, "save_plane");
  if (has_suffix(path, ".pgm")) {
    save_pgm(plane, path);
  } else if (has_suffix(path, ".png")) {
    std::vector<std::uint8_t> raw(static_cast<std::size_t>(plane.width()) * plane.height());
    const Real* src = plane.data.data();
    for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = quantize(src[i]);
    encode_png(path, plane.width(), plane.height(), 1, raw);
  } else {
    throw IoError(path + ": unsupported output extension; use .pgm or .png");
  }
}

ColorImage load_color(const std::string& path) {
  if (sniff(path) != FileKind::Png) {
    throw IoError(path + ": color input must be a PNG file");
  }
  const DecodedPng png = decode_png(path);
  ColorImage image;
  image.r = ImagePlane::zeros(png.width, png.height);
  image.g = ImagePlane::zeros(png.width, png.height);
  image.b = ImagePlane::zeros(png.width, png.height);
  const std::size_t pixels = static_cast<std::size_t>(png.width) * png.height;
  Real* rd = image.r.data.data();
  Real* gd = image.g.data.data();
  Real* bd = image.b.data.data();
  if (png.channels == 1) {
    for (std::size_t i = 0; i < pixels; ++i) {
      rd[i] = gd[i] = bd[i] = static_cast<Real>(png.samples[i]);
    }
  } else {
    for (std::size_t i = 0; i < pixels; ++i) {
      rd[i] = static_cast<Real>(png.samples[i * 3 + 0]);
      gd[i] = static_cast<Real>(png.samples[i * 3 + 1]);
      bd[i] = static_cast<Real>(png.samples[i * 3 + 2]);
    }
  }
  return image;
}

void save_color(const ColorImage& image, const std::string& path) {
  require(image.g.width() == image.width() && image.b.width() == image.width() &&
              image.g.height() == image.height() && image.b.height() == image.height(),
          "save_color: channel dimensions differ");
  if (!has_suffix(path, ".png")) {
    throw IoError(path + ": color output must use the .png extension");
  }
  ensure_finite(image.r, "save_color");
  ensure_finite(image.g, "save_color");
  ensure_finite(image.b, "save_color");
  const std::size_t pixels = static_cast<std::size_t>(image.width()) * image.height();
  std::vector<std::uint8_t> raw(pixels * 3);
  const Real* rd = image.r.data.data();
  const Real* gd = image.g.data.data();
  const Real* bd = image.b.data.data();
  for (std::size_t i = 0; i < pixels; ++i) {
    raw[i * 3 + 0] = quantize(rd[i]);
    raw[i * 3 + 1] = quantize(gd[i]);
    raw[i * 3 + 2] = quantize(bd[i]);
  }
  encode_png(path, image.width(), image.height(), 3, raw);
}

}  // namespace bm3d
