#include "geomir/imaging.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "geomir/error.hpp"

namespace geomir {

RgbImage::RgbImage(int w, int h, Rgb fill)
    : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

bool is_standard_size(const RgbImage& image) {
  return (image.width == kStandardLong && image.height == kStandardShort) ||
         (image.width == kStandardShort && image.height == kStandardLong);
}

RgbImage decode_image(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) throw Error(ErrorKind::UndecodableImage, "empty input");
  cv::Mat buffer(1, static_cast<int>(bytes.size()), CV_8UC1,
                 const_cast<std::uint8_t*>(bytes.data()));
  cv::Mat bgr;
  try {
    bgr = cv::imdecode(buffer, cv::IMREAD_COLOR);
  } catch (const cv::Exception& e) {
    throw Error(ErrorKind::UndecodableImage, e.what());
  }
  if (bgr.empty() || bgr.type() != CV_8UC3) {
    throw Error(ErrorKind::UndecodableImage, "unsupported or corrupt image data");
  }
  RgbImage out(bgr.cols, bgr.rows);
  for (int y = 0; y < bgr.rows; ++y) {
    const auto* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < bgr.cols; ++x) {
      out.at(x, y) = {row[x][2], row[x][1], row[x][0]};
    }
  }
  return out;
}

RgbImage read_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_image(bytes);
}

std::vector<std::uint8_t> encode_png(const RgbImage& image) {
  cv::Mat bgr(image.height, image.width, CV_8UC3);
  for (int y = 0; y < image.height; ++y) {
    auto* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < image.width; ++x) {
      const Rgb& p = image.at(x, y);
      row[x] = {p.b, p.g, p.r};
    }
  }
  std::vector<std::uint8_t> bytes;
  if (!cv::imencode(".png", bgr, bytes)) {
    throw Error(ErrorKind::IoError, "PNG encoding failed");
  }
  return bytes;
}

namespace {

struct Tap {
  int lo;
  int hi;
  double frac;
};

// Source taps for each destination coordinate along one axis.
std::vector<Tap> resample_taps(int src, int dst) {
  std::vector<Tap> taps(static_cast<std::size_t>(dst));
  const double scale = static_cast<double>(src) / dst;
  for (int i = 0; i < dst; ++i) {
    double pos = (i + 0.5) * scale - 0.5;
    pos = std::clamp(pos, 0.0, static_cast<double>(src - 1));
    const int lo = static_cast<int>(std::floor(pos));
    const int hi = std::min(lo + 1, src - 1);
    taps[static_cast<std::size_t>(i)] = {lo, hi, pos - lo};
  }
  return taps;
}

std::uint8_t to_channel(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

}  // namespace

RgbImage resize_bilinear(const RgbImage& image, int width, int height) {
  if (width == image.width && height == image.height) return image;
  const auto xs = resample_taps(image.width, width);
  const auto ys = resample_taps(image.height, height);
  RgbImage out(width, height);
  for (int y = 0; y < height; ++y) {
    const Tap& ty = ys[static_cast<std::size_t>(y)];
    for (int x = 0; x < width; ++x) {
      const Tap& tx = xs[static_cast<std::size_t>(x)];
      const Rgb& p00 = image.at(tx.lo, ty.lo);
      const Rgb& p10 = image.at(tx.hi, ty.lo);
      const Rgb& p01 = image.at(tx.lo, ty.hi);
      const Rgb& p11 = image.at(tx.hi, ty.hi);
      auto blend = [&](std::uint8_t Rgb::*channel) {
        const double top = (1.0 - tx.frac) * (p00.*channel) + tx.frac * (p10.*channel);
        const double bottom = (1.0 - tx.frac) * (p01.*channel) + tx.frac * (p11.*channel);
        return to_channel((1.0 - ty.frac) * top + ty.frac * bottom);
      };
      out.at(x, y) = {blend(&Rgb::r), blend(&Rgb::g), blend(&Rgb::b)};
    }
  }
  return out;
}

RgbImage normalize_geometry(const RgbImage& image) {
  if (image.width < 2 || image.height < 2) {
    throw Error(ErrorKind::DegenerateImage, std::to_string(image.width) + "x" +
                                                std::to_string(image.height));
  }
  if (image.width >= image.height) {
    return resize_bilinear(image, kStandardLong, kStandardShort);
  }
  return resize_bilinear(image, kStandardShort, kStandardLong);
}

RgbImage normalize_geometry(std::span<const std::uint8_t> bytes) {
  return normalize_geometry(decode_image(bytes));
}

LabImage to_lab(const RgbImage& image) {
  std::array<double, 256> linear{};
  for (int c = 0; c < 256; ++c) {
    linear[static_cast<std::size_t>(c)] = color::srgb_expand<double>(static_cast<std::uint8_t>(c));
  }
  LabImage lab{Plane(image.height, image.width), Plane(image.height, image.width),
               Plane(image.height, image.width)};
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      const Rgb& p = image.at(x, y);
      const LabPixel v = color::linear_to_lab<double>({linear[p.r], linear[p.g], linear[p.b]});
      lab.L(y, x) = v.L;
      lab.a(y, x) = v.a;
      lab.b(y, x) = v.b;
    }
  }
  return lab;
}

RgbImage make_thumbnail(const RgbImage& image, int longest) {
  const int side = std::max(image.width, image.height);
  if (side <= longest) return image;
  const double scale = static_cast<double>(longest) / side;
  const int w = std::max(1, static_cast<int>(std::lround(image.width * scale)));
  const int h = std::max(1, static_cast<int>(std::lround(image.height * scale)));
  return resize_bilinear(image, w, h);
}

}  // namespace geomir
