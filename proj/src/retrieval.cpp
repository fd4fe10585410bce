#include "geomir/retrieval.hpp"

#include <algorithm>
#include <set>

#include "geomir/error.hpp"
#include "geomir/features.hpp"
#include "geomir/imaging.hpp"
#include "geomir/postproc.hpp"

namespace geomir {

void QueryConfig::validate() const {
  if (radius < 0) throw Error(ErrorKind::InvalidConfig, "radius must be >= 0");
  if (max_images < 1) throw Error(ErrorKind::InvalidConfig, "max_images must be >= 1");
}

std::vector<std::string> draw_order(std::span<const RetrievedCluster> clusters,
                                    const std::map<std::string, double>& image_distance) {
  std::vector<const RetrievedCluster*> sorted;
  for (const auto& c : clusters) sorted.push_back(&c);
  std::sort(sorted.begin(), sorted.end(), [](const RetrievedCluster* l, const RetrievedCluster* r) {
    return l->distance != r->distance ? l->distance > r->distance : l->node < r->node;
  });

  std::vector<std::string> order;
  for (const RetrievedCluster* cluster : sorted) {
    std::vector<std::string> members = cluster->members;
    std::sort(members.begin(), members.end(), [&](const std::string& l, const std::string& r) {
      const double dl = image_distance.at(l);
      const double dr = image_distance.at(r);
      return dl != dr ? dl > dr : l < r;
    });
    order.insert(order.end(), members.begin(), members.end());
  }
  return order;
}

QueryResult query_features(const Eigen::Ref<const Eigen::VectorXd>& raw, const Index& index,
                           const QueryConfig& cfg) {
  cfg.validate();
  if (index.size() == 0) throw Error(ErrorKind::EmptyIndex, "index holds no images");

  QueryResult result;
  result.query = apply_pipeline(index.pipeline, raw);
  result.best = bmu(index.grid, result.query);
  const std::vector<int> nodes = neighbor_clusters(index.grid, result.best.node, cfg.radius);
  const std::set<int> wanted(nodes.begin(), nodes.end());

  for (std::size_t i = 0; i < index.size(); ++i) {
    const int node = index.classification.nodes[i];
    if (wanted.count(node) == 0) continue;
    const double d = (index.processed.row(static_cast<Eigen::Index>(i)).transpose() - result.query).norm();
    result.images.push_back({index.features.ids[i], node, d});
  }
  std::sort(result.images.begin(), result.images.end(), [](const RetrievedImage& l, const RetrievedImage& r) {
    return l.distance != r.distance ? l.distance < r.distance : l.id < r.id;
  });
  if (result.images.size() > cfg.max_images) result.images.resize(cfg.max_images);

  std::map<std::string, double> distance_of;
  std::map<int, std::vector<std::string>> members_of;
  std::vector<std::string> ids;
  for (const auto& image : result.images) {
    distance_of[image.id] = image.distance;
    members_of[image.node].push_back(image.id);
    ids.push_back(image.id);
  }
  for (const int node : nodes) {
    RetrievedCluster cluster{node, (index.grid.weights.row(node).transpose() - result.query).norm(),
                             members_of[node]};
    std::sort(cluster.members.begin(), cluster.members.end());
    result.clusters.push_back(std::move(cluster));
  }

  result.tree = build_hierarchy(index.geo, ids);
  result.draw_order = draw_order(result.clusters, distance_of);
  return result;
}

QueryResult query(std::span<const std::uint8_t> image_bytes, const Index& index, const QueryConfig& cfg) {
  if (index.size() == 0) throw Error(ErrorKind::EmptyIndex, "index holds no images");
  const RgbImage image = normalize_geometry(image_bytes);
  return query_features(extract_features(image, index.features.config).values, index, cfg);
}

nlohmann::json to_json(const QueryResult& result, const Index& index) {
  using nlohmann::json;
  json clusters = json::array();
  for (const auto& c : result.clusters) {
    clusters.push_back({{"node", c.node}, {"distance", c.distance}, {"members", c.members}});
  }
  json images = json::array();
  for (const auto& image : result.images) {
    json entry = {{"id", image.id}, {"node", image.node}, {"distance", image.distance}};
    if (const auto it = index.geo.find(image.id); it != index.geo.end()) {
      entry["country"] = it->second.country;
      entry["city"] = it->second.city ? json(*it->second.city) : json(nullptr);
      entry["location"] = location_label(it->second);
    }
    images.push_back(std::move(entry));
  }
  json countries = json::array();
  for (const auto& country : result.tree.countries) {
    json cities = json::array();
    for (const auto& city : country.cities) cities.push_back({{"name", city.name}, {"images", city.images}});
    countries.push_back({{"name", country.name}, {"cities", cities}, {"images", country.images}});
  }
  return {{"bmu", {{"node", result.best.node}, {"distance", result.best.distance}}},
          {"query", std::vector<double>(result.query.data(), result.query.data() + result.query.size())},
          {"clusters", clusters},
          {"images", images},
          {"tree", {{"countries", countries}}},
          {"draw_order", result.draw_order}};
}

}  // namespace geomir
