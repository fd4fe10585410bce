#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "geomir/imaging.hpp"

namespace geomir {

/// Sobel responses on the L* plane, same shape as the source image.
struct GradientField {
  Plane gx;
  Plane gy;
};

struct FeatureConfig {
  static constexpr int kDirectionBins = 8;
  static constexpr int kNonEdge = kDirectionBins;
  static constexpr int kCategories = kDirectionBins + 1;

  int direction_bins = kDirectionBins;
  double edge_magnitude_threshold = 20.0;
  int chroma_bins_per_axis = 8;

  int chroma_cells() const { return chroma_bins_per_axis * chroma_bins_per_axis; }
  int dimension() const { return kCategories * chroma_cells(); }

  /// Throws InvalidConfig.
  void validate() const;
};

using CountVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

/// Edge-direction color histogram, either raw counts or L1-normalized.
struct FeatureVector {
  Eigen::VectorXd values;
  bool normalized = false;
};

/// 3x3 Sobel on L*, edge-replicated borders.
GradientField sobel(const LabImage& lab);

/// Orientation sector 0..7 of an undirected edge, or 8 when the gradient
/// magnitude is below the threshold.
int edge_category(double gx, double gy, const FeatureConfig& cfg);

/// Uniform a*b* cell over [-128, 128) per axis, out-of-range values clamped.
int chroma_bin(double a, double b, const FeatureConfig& cfg);

/// Cell index of (category, chroma bin) in the flattened histogram.
inline int histogram_cell(int category, int chroma, const FeatureConfig& cfg) {
  return category * cfg.chroma_cells() + chroma;
}

/// Raw per-cell pixel counts; the entries sum to the pixel count.
CountVector histogram_counts(const LabImage& lab, const FeatureConfig& cfg);
CountVector histogram_counts(const RgbImage& image, const FeatureConfig& cfg);

/// Histogram divided by the pixel count. Accepts any raster size; the index
/// pipeline feeds it normalized-geometry images.
FeatureVector extract_features(const RgbImage& image, const FeatureConfig& cfg = {});

}  // namespace geomir
