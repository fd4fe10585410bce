#include "geomir/som.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "geomir/random.hpp"

namespace geomir {

double SomConfig::effective_sigma_start() const {
  return sigma_start > 0.0 ? sigma_start : std::max(rows, cols) / 2.0;
}

void SomConfig::validate() const {
  if (rows < 1 || cols < 1 || rows * cols < 2) {
    throw Error(ErrorKind::InvalidConfig, "map needs at least 2 nodes");
  }
  if (epochs < 1) throw Error(ErrorKind::InvalidConfig, "epochs must be >= 1");
  if (!(alpha_end > 0.0 && alpha_end <= alpha_start)) {
    throw Error(ErrorKind::InvalidConfig, "need 0 < alpha_end <= alpha_start");
  }
  if (!(sigma_end > 0.0 && sigma_end <= effective_sigma_start())) {
    throw Error(ErrorKind::InvalidConfig, "need 0 < sigma_end <= sigma_start");
  }
}

namespace {

// Weights start uniformly inside the bounding box of the training rows.
// Degenerate dimensions are widened to +-0.5 so a single-sample dataset
// still starts away from its sample.
Eigen::MatrixXd initial_weights(const Eigen::MatrixXd& data, int nodes, Rng& rng) {
  const Eigen::RowVectorXd lo = data.colwise().minCoeff();
  const Eigen::RowVectorXd hi = data.colwise().maxCoeff();
  Eigen::MatrixXd w(nodes, data.cols());
  for (int n = 0; n < nodes; ++n) {
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
      double a = lo(j), b = hi(j);
      if (b - a <= 0.0) {
        a -= 0.5;
        b += 0.5;
      }
      w(n, j) = uniform(rng, a, b);
    }
  }
  return w;
}

double decay(double start, double end, double progress) {
  return start * std::pow(end / start, progress);
}

void check_training_data(const Eigen::MatrixXd& data, const SomConfig& cfg) {
  cfg.validate();
  if (data.rows() == 0) throw Error(ErrorKind::EmptyDataset, "no training rows");
  if (data.cols() == 0) throw Error(ErrorKind::DimensionMismatch, "training rows have no dimensions");
  if (!data.allFinite()) throw Error(ErrorKind::DimensionMismatch, "training data has non-finite entries");
}

}  // namespace

SomGrid initialize_som(const Eigen::MatrixXd& data, const SomConfig& cfg) {
  check_training_data(data, cfg);
  Rng rng(cfg.seed);
  return {cfg.rows, cfg.cols, initial_weights(data, cfg.rows * cfg.cols, rng), cfg};
}

SomGrid train_som(const Eigen::MatrixXd& data, const SomConfig& cfg, const EpochObserver& observer) {
  check_training_data(data, cfg);
  Rng rng(cfg.seed);
  SomGrid grid{cfg.rows, cfg.cols, initial_weights(data, cfg.rows * cfg.cols, rng), cfg};

  const int nodes = grid.node_count();
  Eigen::ArrayXd node_r(nodes), node_c(nodes);
  for (int n = 0; n < nodes; ++n) {
    node_r(n) = grid.node_row(n);
    node_c(n) = grid.node_col(n);
  }

  const auto samples = static_cast<std::size_t>(data.rows());
  const double total = static_cast<double>(samples) * cfg.epochs;
  const double sigma_start = cfg.effective_sigma_start();
  std::vector<Eigen::Index> order(samples);
  std::iota(order.begin(), order.end(), Eigen::Index{0});

  std::size_t t = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle(std::span(order), rng);
    for (const Eigen::Index i : order) {
      const double progress = total > 1.0 ? static_cast<double>(t) / (total - 1.0) : 0.0;
      const double alpha = decay(cfg.alpha_start, cfg.alpha_end, progress);
      const double sigma = decay(sigma_start, cfg.sigma_end, progress);
      const auto x = data.row(i);
      const BestMatch winner = bmu(grid, x.transpose());
      const double wr = grid.node_row(winner.node);
      const double wc = grid.node_col(winner.node);
      const Eigen::ArrayXd grid_sq = (node_r - wr).square() + (node_c - wc).square();
      const Eigen::ArrayXd rate = alpha * (-grid_sq / (2.0 * sigma * sigma)).exp();
      for (int n = 0; n < nodes; ++n) {
        grid.weights.row(n) += rate(n) * (x - grid.weights.row(n));
      }
      ++t;
    }
    if (observer) observer(epoch, grid);
  }
  return grid;
}

ClassificationMap classify_all(const SomGrid& grid, const Eigen::MatrixXd& data,
                               const std::vector<std::string>& ids) {
  if (static_cast<std::size_t>(data.rows()) != ids.size()) {
    throw Error(ErrorKind::DimensionMismatch, std::to_string(data.rows()) + " rows for " +
                                                  std::to_string(ids.size()) + " ids");
  }
  ClassificationMap map;
  map.ids = ids;
  map.nodes.reserve(ids.size());
  map.distances.reserve(ids.size());
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    const BestMatch m = bmu(grid, data.row(i).transpose());
    map.nodes.push_back(m.node);
    map.distances.push_back(m.distance);
  }
  return map;
}

std::vector<int> neighbor_clusters(const SomGrid& grid, int node, int radius) {
  if (node < 0 || node >= grid.node_count()) {
    throw Error(ErrorKind::InvalidNode, "node " + std::to_string(node) + " outside map of " +
                                            std::to_string(grid.node_count()));
  }
  if (radius < 0) throw Error(ErrorKind::InvalidConfig, "radius must be >= 0");
  const int r0 = grid.node_row(node);
  const int c0 = grid.node_col(node);
  std::vector<int> out;
  for (int r = std::max(0, r0 - radius); r <= std::min(grid.rows - 1, r0 + radius); ++r) {
    for (int c = std::max(0, c0 - radius); c <= std::min(grid.cols - 1, c0 + radius); ++c) {
      out.push_back(r * grid.cols + c);
    }
  }
  auto grid_sq = [&](int n) {
    const int dr = grid.node_row(n) - r0;
    const int dc = grid.node_col(n) - c0;
    return dr * dr + dc * dc;
  };
  std::sort(out.begin(), out.end(), [&](int a, int b) {
    const int da = grid_sq(a), db = grid_sq(b);
    return da != db ? da < db : a < b;
  });
  return out;
}

double quantization_error(const SomGrid& grid, const Eigen::MatrixXd& data) {
  if (data.rows() == 0) return 0.0;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < data.rows(); ++i) sum += bmu(grid, data.row(i).transpose()).distance;
  return sum / static_cast<double>(data.rows());
}

}  // namespace geomir
