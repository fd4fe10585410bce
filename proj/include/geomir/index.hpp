#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include "json.hpp"

#include "geomir/features.hpp"
#include "geomir/geostore.hpp"
#include "geomir/postproc.hpp"
#include "geomir/som.hpp"

namespace geomir {

inline constexpr std::string_view kFormatVersion = "geomir-index/1";

namespace index_files {
inline constexpr std::string_view kFeatures = "features.json";
inline constexpr std::string_view kPipeline = "pipeline.json";
inline constexpr std::string_view kSom = "som.json";
inline constexpr std::string_view kClassification = "classification.json";
inline constexpr std::string_view kStructure = "structure.csv";
}  // namespace index_files

/// Extracted, L1-normalized histograms for a set of images.
struct FeatureTable {
  FeatureConfig config;
  /// Directory the image paths are relative to.
  std::string image_root;
  std::vector<std::string> ids;
  std::vector<std::string> paths;
  /// One row per image.
  Eigen::MatrixXd values;

  std::size_t size() const { return ids.size(); }
};

/// Every component a query needs, plus the processed matrix derived from them.
struct Index {
  FeatureTable features;
  PipelineModel pipeline;
  SomGrid grid;
  ClassificationMap classification;
  GeoIndex geo;
  /// apply_pipeline over features.values; not serialized.
  Eigen::MatrixXd processed;

  std::size_t size() const { return features.size(); }
  std::filesystem::path image_path(std::size_t i) const;
  /// Position of `id` in features.ids, or npos.
  std::size_t find(std::string_view id) const;
};

using WarningSink = std::function<void(const std::string&)>;

/// Decodes every regular file in `dir` (sorted by name), normalizes geometry
/// and extracts features. Undecodable files are reported through `warn` and
/// skipped. The image id is the file stem. Throws EmptyDataset when nothing
/// decodes.
FeatureTable extract_directory(const std::filesystem::path& dir, const FeatureConfig& cfg,
                               const WarningSink& warn = {});

/// Fits the pipeline, trains the map and classifies every image.
Index train_index(FeatureTable features, const PostprocConfig& post, const SomConfig& som);

/// Recomputes `processed` and checks that the components agree.
/// Throws DimensionMismatch.
void finalize_index(Index& index);

// JSON component codecs. Readers check format_version and throw
// VersionMismatch or ParseError.
nlohmann::json to_json(const FeatureTable& table);
nlohmann::json to_json(const PipelineModel& model);
nlohmann::json to_json(const SomGrid& grid);
nlohmann::json to_json(const ClassificationMap& map);
FeatureTable features_from_json(const nlohmann::json& j);
PipelineModel pipeline_from_json(const nlohmann::json& j);
SomGrid som_from_json(const nlohmann::json& j);
ClassificationMap classification_from_json(const nlohmann::json& j);

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::filesystem::path& path);

void save_features(const std::filesystem::path& path, const FeatureTable& table);
FeatureTable load_features(const std::filesystem::path& path);

/// Writes pipeline, som, classification and (when non-empty) structure.
void save_trained(const std::filesystem::path& dir, const Index& index);

/// Writes all five components.
void save_index(const std::filesystem::path& dir, const Index& index);

/// Reads all five components from `dir` and finalizes.
Index load_index(const std::filesystem::path& dir);

}  // namespace geomir
