#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "geomir/error.hpp"

namespace geomir {

struct SomConfig {
  int rows = 10;
  int cols = 10;
  int epochs = 20;
  double alpha_start = 0.5;
  double alpha_end = 0.01;
  /// Non-positive means max(rows, cols) / 2.
  double sigma_start = 0.0;
  double sigma_end = 0.5;
  std::uint64_t seed = 42;

  double effective_sigma_start() const;
  void validate() const;
};

/// Rectangular, non-toroidal Kohonen map. Node n sits at grid row n / cols,
/// column n % cols; its weight vector is row n of `weights`.
struct SomGrid {
  int rows = 0;
  int cols = 0;
  Eigen::MatrixXd weights;
  SomConfig config;

  int node_count() const { return rows * cols; }
  Eigen::Index dim() const { return weights.cols(); }
  int node_row(int node) const { return node / cols; }
  int node_col(int node) const { return node % cols; }
};

struct BestMatch {
  int node = 0;
  double distance = 0.0;
};

/// Nearest node by Euclidean distance; ties go to the lowest index.
template <typename Derived>
BestMatch bmu(const SomGrid& grid, const Eigen::MatrixBase<Derived>& v) {
  if (v.size() != grid.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "vector has " + std::to_string(v.size()) + " entries, map expects " +
                    std::to_string(grid.dim()));
  }
  int best = 0;
  double best_sq = 0.0;
  for (int n = 0; n < grid.node_count(); ++n) {
    const double sq = (grid.weights.row(n).transpose() - v.derived()).squaredNorm();
    if (n == 0 || sq < best_sq) {
      best = n;
      best_sq = sq;
    }
  }
  return {best, std::sqrt(best_sq)};
}

/// Called after every epoch with the zero-based epoch number.
using EpochObserver = std::function<void(int epoch, const SomGrid&)>;

/// The grid train_som starts from: weights uniform inside the bounding box
/// of the training rows, drawn from the seeded generator.
SomGrid initialize_som(const Eigen::MatrixXd& data, const SomConfig& cfg);

/// Online SOM with Gaussian neighborhood and exponentially decaying learning
/// rate and radius. Deterministic for a given (matrix, cfg).
/// Throws EmptyDataset, DimensionMismatch, InvalidConfig.
SomGrid train_som(const Eigen::MatrixXd& data, const SomConfig& cfg,
                  const EpochObserver& observer = {});

struct ClassificationMap {
  std::vector<std::string> ids;
  std::vector<int> nodes;
  std::vector<double> distances;

  std::size_t size() const { return ids.size(); }
};

ClassificationMap classify_all(const SomGrid& grid, const Eigen::MatrixXd& data,
                               const std::vector<std::string>& ids);

/// Nodes within Chebyshev radius `radius` of `node`, ordered by Euclidean
/// grid distance then index. Throws InvalidNode.
std::vector<int> neighbor_clusters(const SomGrid& grid, int node, int radius);

/// Mean BMU distance over the rows of `data`.
double quantization_error(const SomGrid& grid, const Eigen::MatrixXd& data);

}  // namespace geomir
