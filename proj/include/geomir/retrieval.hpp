#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include "json.hpp"

#include "geomir/geostore.hpp"
#include "geomir/index.hpp"
#include "geomir/som.hpp"

namespace geomir {

struct QueryConfig {
  int radius = 1;
  std::size_t max_images = 200;

  void validate() const;
};

struct RetrievedCluster {
  int node = 0;
  /// Query to node weight vector.
  double distance = 0.0;
  /// Surviving members, sorted by id.
  std::vector<std::string> members;
};

struct RetrievedImage {
  std::string id;
  int node = 0;
  double distance = 0.0;
};

struct QueryResult {
  Eigen::VectorXd query;
  BestMatch best;
  /// Neighborhood nodes, nearest grid cell first.
  std::vector<RetrievedCluster> clusters;
  /// Ascending by distance, ties by id.
  std::vector<RetrievedImage> images;
  GeoTree tree;
  /// Painter's order: least similar first.
  std::vector<std::string> draw_order;
};

/// Clusters by descending distance (ties by node), members by descending
/// per-image distance (ties by ascending id), concatenated.
std::vector<std::string> draw_order(std::span<const RetrievedCluster> clusters,
                                    const std::map<std::string, double>& image_distance);

/// Query from raw (L1-normalized, unpruned) histogram values.
/// Throws EmptyIndex, DimensionMismatch, UnknownImage.
QueryResult query_features(const Eigen::Ref<const Eigen::VectorXd>& raw, const Index& index,
                           const QueryConfig& cfg = {});

/// Full pipeline from encoded image bytes. Also throws UndecodableImage.
QueryResult query(std::span<const std::uint8_t> image_bytes, const Index& index,
                  const QueryConfig& cfg = {});

nlohmann::json to_json(const QueryResult& result, const Index& index);

}  // namespace geomir
