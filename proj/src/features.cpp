#include "geomir/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "geomir/error.hpp"

namespace geomir {

void FeatureConfig::validate() const {
  if (direction_bins != kDirectionBins) {
    throw Error(ErrorKind::InvalidConfig, "direction_bins must be 8");
  }
  if (chroma_bins_per_axis < 2) {
    throw Error(ErrorKind::InvalidConfig, "chroma_bins_per_axis must be >= 2");
  }
  if (!(edge_magnitude_threshold >= 0.0)) {
    throw Error(ErrorKind::InvalidConfig, "edge_magnitude_threshold must be >= 0");
  }
}

GradientField sobel(const LabImage& lab) {
  const Plane& L = lab.L;
  const Eigen::Index rows = L.rows();
  const Eigen::Index cols = L.cols();
  GradientField g{Plane::Zero(rows, cols), Plane::Zero(rows, cols)};
  auto at = [&](Eigen::Index y, Eigen::Index x) {
    return L(std::clamp<Eigen::Index>(y, 0, rows - 1), std::clamp<Eigen::Index>(x, 0, cols - 1));
  };
  for (Eigen::Index y = 0; y < rows; ++y) {
    for (Eigen::Index x = 0; x < cols; ++x) {
      const double nw = at(y - 1, x - 1), n = at(y - 1, x), ne = at(y - 1, x + 1);
      const double w = at(y, x - 1), e = at(y, x + 1);
      const double sw = at(y + 1, x - 1), s = at(y + 1, x), se = at(y + 1, x + 1);
      g.gx(y, x) = (ne + 2.0 * e + se) - (nw + 2.0 * w + sw);
      g.gy(y, x) = (sw + 2.0 * s + se) - (nw + 2.0 * n + ne);
    }
  }
  return g;
}

int edge_category(double gx, double gy, const FeatureConfig& cfg) {
  if (std::hypot(gx, gy) < cfg.edge_magnitude_threshold) return FeatureConfig::kNonEdge;
  // Zero magnitude with a zero threshold: no orientation, counts as sector 0.
  double theta = std::atan2(gy, gx);
  if (theta < 0.0) theta += std::numbers::pi;
  if (theta >= std::numbers::pi) theta -= std::numbers::pi;
  const int sector = static_cast<int>(std::floor(theta / (std::numbers::pi / cfg.direction_bins)));
  return std::clamp(sector, 0, cfg.direction_bins - 1);
}

int chroma_bin(double a, double b, const FeatureConfig& cfg) {
  const int bins = cfg.chroma_bins_per_axis;
  const double width = 256.0 / bins;
  // Round-off below a cell edge (neutral colors sit on a = b = 0) counts as
  // the upper cell.
  constexpr double kEdgeTolerance = 1e-9;
  auto axis = [&](double v) {
    const double clamped = std::clamp(v, -128.0, 128.0);
    const int cell = static_cast<int>(std::floor((clamped + 128.0) / width + kEdgeTolerance));
    return std::clamp(cell, 0, bins - 1);
  };
  return axis(a) * bins + axis(b);
}

CountVector histogram_counts(const LabImage& lab, const FeatureConfig& cfg) {
  cfg.validate();
  const GradientField grad = sobel(lab);
  CountVector counts = CountVector::Zero(cfg.dimension());
  for (int y = 0; y < lab.height(); ++y) {
    for (int x = 0; x < lab.width(); ++x) {
      const int category = edge_category(grad.gx(y, x), grad.gy(y, x), cfg);
      const int chroma = chroma_bin(lab.a(y, x), lab.b(y, x), cfg);
      ++counts(histogram_cell(category, chroma, cfg));
    }
  }
  return counts;
}

CountVector histogram_counts(const RgbImage& image, const FeatureConfig& cfg) {
  return histogram_counts(to_lab(image), cfg);
}

FeatureVector extract_features(const RgbImage& image, const FeatureConfig& cfg) {
  const CountVector counts = histogram_counts(image, cfg);
  const double total = static_cast<double>(image.pixel_count());
  return {counts.cast<double>() / total, true};
}

}  // namespace geomir
