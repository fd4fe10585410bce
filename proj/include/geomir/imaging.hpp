#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "geomir/color.hpp"

namespace geomir {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Decoded 8-bit sRGB raster, row-major.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<Rgb> pixels;

  RgbImage() = default;
  RgbImage(int w, int h, Rgb fill = {});

  Rgb& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
  const Rgb& at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  std::size_t pixel_count() const { return pixels.size(); }

  friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

inline constexpr int kStandardLong = 640;
inline constexpr int kStandardShort = 480;

/// True for the two normalized sizes, 640x480 and 480x640.
bool is_standard_size(const RgbImage& image);

/// Row-major scalar plane, indexed (row, col) = (y, x).
using Plane = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// L*a*b* image kept as three planes of identical shape.
struct LabImage {
  Plane L;
  Plane a;
  Plane b;

  int width() const { return static_cast<int>(L.cols()); }
  int height() const { return static_cast<int>(L.rows()); }
  LabPixel pixel(int x, int y) const { return {L(y, x), a(y, x), b(y, x)}; }
};

/// Decodes JPEG/PNG (anything the codec backend accepts) to an RGB raster.
/// Throws UndecodableImage.
RgbImage decode_image(std::span<const std::uint8_t> bytes);
RgbImage read_image(const std::filesystem::path& path);

/// Lossless PNG encoding of a raster.
std::vector<std::uint8_t> encode_png(const RgbImage& image);

/// Bilinear resample with pixel-center alignment. Resizing to the source
/// size returns the source unchanged.
RgbImage resize_bilinear(const RgbImage& image, int width, int height);

/// Stretches to 640x480 when width >= height, otherwise to 480x640.
/// Throws DegenerateImage when either side is below 2 pixels.
RgbImage normalize_geometry(const RgbImage& image);
RgbImage normalize_geometry(std::span<const std::uint8_t> bytes);

/// Per-pixel srgb_to_lab.
LabImage to_lab(const RgbImage& image);

/// Shrinks so the longest side is at most `longest`; never enlarges.
RgbImage make_thumbnail(const RgbImage& image, int longest);

}  // namespace geomir
