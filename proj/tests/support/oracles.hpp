#pragma once

// Independent reference implementations used only by the tests. Nothing here
// calls into the library's numeric code paths.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "geomir/imaging.hpp"
#include "geomir/retrieval.hpp"

namespace geomir::testing {

struct RefLab {
  double L, a, b;
};

/// sRGB -> XYZ -> L*a*b*, transcribed scalar by scalar from the CIE
/// definitions (epsilon = 216/24389, kappa = 24389/27, D65/2 degrees).
RefLab reference_srgb_to_lab(int r, int g, int b);

/// Inverse of the above, rounded to 8-bit codes.
std::array<int, 3> reference_lab_to_srgb(double L, double a, double b);

/// Per-pixel histogram recount with its own Sobel and binning loops.
std::vector<std::int64_t> naive_histogram(const RgbImage& image, double threshold, int chroma_bins);

/// keep[j] = any value in column j >= tau.
std::vector<bool> brute_force_keep_mask(const Eigen::MatrixXd& m, double tau);

/// Exhaustive scan, first minimum wins.
std::pair<int, double> exhaustive_bmu(const Eigen::MatrixXd& weights, const Eigen::VectorXd& v);

/// Single lexicographic sort over (-cluster distance, node, -image distance, id).
std::vector<std::string> sort_draw_order(const std::vector<RetrievedCluster>& clusters,
                                         const std::map<std::string, double>& image_distance);

}  // namespace geomir::testing
