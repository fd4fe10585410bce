#include "geomir/index.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "geomir/error.hpp"
#include "geomir/imaging.hpp"

namespace geomir {

using nlohmann::json;
namespace fs = std::filesystem;

fs::path Index::image_path(std::size_t i) const {
  const fs::path p(features.paths.at(i));
  return p.is_absolute() || features.image_root.empty() ? p : fs::path(features.image_root) / p;
}

std::size_t Index::find(std::string_view id) const {
  const auto it = std::find(features.ids.begin(), features.ids.end(), id);
  return it == features.ids.end() ? std::string::npos
                                  : static_cast<std::size_t>(it - features.ids.begin());
}

FeatureTable extract_directory(const fs::path& dir, const FeatureConfig& cfg, const WarningSink& warn) {
  cfg.validate();
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorKind::IoError, "not a directory: " + dir.string());

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  FeatureTable table;
  table.config = cfg;
  table.image_root = fs::absolute(dir).lexically_normal().string();
  std::vector<Eigen::VectorXd> rows;
  std::set<std::string> seen;
  for (const auto& file : files) {
    const std::string id = file.stem().string();
    if (seen.count(id) != 0) {
      if (warn) warn("skipping " + file.filename().string() + ": duplicate image id " + id);
      continue;
    }
    try {
      const RgbImage image = normalize_geometry(read_image(file));
      rows.push_back(extract_features(image, cfg).values);
    } catch (const Error& e) {
      if (warn) warn("skipping " + file.filename().string() + ": " + e.what());
      continue;
    }
    seen.insert(id);
    table.ids.push_back(id);
    table.paths.push_back(file.filename().string());
  }
  if (rows.empty()) throw Error(ErrorKind::EmptyDataset, "no usable images in " + dir.string());

  table.values.resize(static_cast<Eigen::Index>(rows.size()), cfg.dimension());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    table.values.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  }
  return table;
}

Index train_index(FeatureTable features, const PostprocConfig& post, const SomConfig& som) {
  if (features.size() == 0) throw Error(ErrorKind::EmptyDataset, "feature table is empty");
  Index index;
  index.pipeline = fit_pipeline(features.values, post);
  index.processed = apply_pipeline_rows(index.pipeline, features.values);
  index.grid = train_som(index.processed, som);
  index.classification = classify_all(index.grid, index.processed, features.ids);
  index.features = std::move(features);
  return index;
}

void finalize_index(Index& index) {
  const auto& f = index.features;
  if (static_cast<std::size_t>(f.values.rows()) != f.ids.size() || f.paths.size() != f.ids.size()) {
    throw Error(ErrorKind::DimensionMismatch, "feature rows, ids and paths disagree");
  }
  if (f.values.cols() != f.config.dimension() || index.pipeline.raw_dimension() != f.values.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "pipeline was fitted on a different feature dimension");
  }
  if (index.grid.dim() != index.pipeline.kept_dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "map dimension differs from kept feature dimension");
  }
  if (index.classification.ids != f.ids) {
    throw Error(ErrorKind::DimensionMismatch, "classification covers a different image set");
  }
  for (const int node : index.classification.nodes) {
    if (node < 0 || node >= index.grid.node_count()) {
      throw Error(ErrorKind::DimensionMismatch, "classification names node " + std::to_string(node));
    }
  }
  index.processed = f.size() == 0 ? Eigen::MatrixXd(0, index.pipeline.kept_dimension())
                                  : apply_pipeline_rows(index.pipeline, f.values);
}

namespace {

json header(std::string_view kind) {
  return {{"format_version", kFormatVersion}, {"component", kind}};
}

void check_header(const json& j, std::string_view kind) {
  if (!j.is_object() || !j.contains("format_version")) {
    throw Error(ErrorKind::ParseError, std::string(kind) + ": missing format_version");
  }
  const auto version = j.at("format_version").get<std::string>();
  if (version != kFormatVersion) {
    throw Error(ErrorKind::VersionMismatch, std::string(kind) + " has format_version \"" + version +
                                                "\", reader expects \"" + std::string(kFormatVersion) + "\"");
  }
  if (j.value("component", "") != kind) {
    throw Error(ErrorKind::ParseError, "expected component \"" + std::string(kind) + "\"");
  }
}

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vector_from(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

template <typename F>
auto parsing(std::string_view kind, F&& body) {
  try {
    return body();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string(kind) + ": " + e.what());
  }
}

std::string_view mode_name(ExaggerationMode mode) {
  return mode == ExaggerationMode::Literal ? "literal" : "multiplicative";
}

ExaggerationMode mode_from(const std::string& name) {
  if (name == "literal") return ExaggerationMode::Literal;
  if (name == "multiplicative") return ExaggerationMode::Multiplicative;
  throw Error(ErrorKind::ParseError, "unknown exaggeration mode " + name);
}

}  // namespace

json to_json(const FeatureTable& table) {
  json j = header("features");
  j["feature_config"] = {{"direction_bins", table.config.direction_bins},
                         {"edge_magnitude_threshold", table.config.edge_magnitude_threshold},
                         {"chroma_bins_per_axis", table.config.chroma_bins_per_axis}};
  j["dimension"] = table.values.cols();
  j["image_root"] = table.image_root;
  json images = json::array();
  for (std::size_t i = 0; i < table.size(); ++i) {
    images.push_back({{"id", table.ids[i]},
                      {"path", table.paths[i]},
                      {"values", vector_json(table.values.row(static_cast<Eigen::Index>(i)).transpose())}});
  }
  j["images"] = std::move(images);
  return j;
}

FeatureTable features_from_json(const json& j) {
  check_header(j, "features");
  return parsing("features", [&] {
    FeatureTable t;
    const auto& c = j.at("feature_config");
    t.config.direction_bins = c.at("direction_bins").get<int>();
    t.config.edge_magnitude_threshold = c.at("edge_magnitude_threshold").get<double>();
    t.config.chroma_bins_per_axis = c.at("chroma_bins_per_axis").get<int>();
    t.config.validate();
    t.image_root = j.value("image_root", "");
    const auto dim = j.at("dimension").get<Eigen::Index>();
    if (dim != t.config.dimension()) {
      throw Error(ErrorKind::DimensionMismatch, "features dimension " + std::to_string(dim) +
                                                    " does not match its config");
    }
    const auto& images = j.at("images");
    t.values.resize(static_cast<Eigen::Index>(images.size()), dim);
    Eigen::Index row = 0;
    for (const auto& image : images) {
      t.ids.push_back(image.at("id").get<std::string>());
      t.paths.push_back(image.at("path").get<std::string>());
      const Eigen::VectorXd v = vector_from(image.at("values"));
      if (v.size() != dim) throw Error(ErrorKind::DimensionMismatch, "image " + t.ids.back() + " has wrong length");
      t.values.row(row++) = v.transpose();
    }
    return t;
  });
}

json to_json(const PipelineModel& model) {
  json j = header("pipeline");
  j["config"] = {{"prune_threshold", model.config.prune_threshold},
                 {"exaggeration_factor", model.config.exaggeration_factor},
                 {"exaggeration_mode", mode_name(model.config.mode)}};
  std::vector<int> mask;
  for (const bool keep : model.keep_mask) mask.push_back(keep ? 1 : 0);
  j["keep_mask"] = mask;
  j["min"] = vector_json(model.min);
  j["max"] = vector_json(model.max);
  j["output_scale"] = model.output_scale;
  return j;
}

PipelineModel pipeline_from_json(const json& j) {
  check_header(j, "pipeline");
  return parsing("pipeline", [&] {
    PipelineModel m;
    const auto& c = j.at("config");
    m.config.prune_threshold = c.at("prune_threshold").get<double>();
    m.config.exaggeration_factor = c.at("exaggeration_factor").get<double>();
    m.config.mode = mode_from(c.at("exaggeration_mode").get<std::string>());
    m.config.validate();
    std::size_t kept = 0;
    for (const int keep : j.at("keep_mask").get<std::vector<int>>()) {
      m.keep_mask.push_back(keep != 0);
      kept += keep != 0 ? 1 : 0;
    }
    m.min = vector_from(j.at("min"));
    m.max = vector_from(j.at("max"));
    m.output_scale = j.at("output_scale").get<double>();
    if (kept == 0 || m.min.size() != static_cast<Eigen::Index>(kept) || m.max.size() != m.min.size()) {
      throw Error(ErrorKind::DimensionMismatch, "pipeline statistics disagree with keep_mask");
    }
    return m;
  });
}

json to_json(const SomGrid& grid) {
  json j = header("som");
  const SomConfig& c = grid.config;
  j["config"] = {{"rows", c.rows},           {"cols", c.cols},
                 {"epochs", c.epochs},       {"alpha_start", c.alpha_start},
                 {"alpha_end", c.alpha_end}, {"sigma_start", c.effective_sigma_start()},
                 {"sigma_end", c.sigma_end}, {"seed", c.seed}};
  j["rows"] = grid.rows;
  j["cols"] = grid.cols;
  j["dim"] = grid.dim();
  json weights = json::array();
  for (int n = 0; n < grid.node_count(); ++n) weights.push_back(vector_json(grid.weights.row(n).transpose()));
  j["weights"] = std::move(weights);
  return j;
}

SomGrid som_from_json(const json& j) {
  check_header(j, "som");
  return parsing("som", [&] {
    SomGrid g;
    const auto& c = j.at("config");
    g.config.rows = c.at("rows").get<int>();
    g.config.cols = c.at("cols").get<int>();
    g.config.epochs = c.at("epochs").get<int>();
    g.config.alpha_start = c.at("alpha_start").get<double>();
    g.config.alpha_end = c.at("alpha_end").get<double>();
    g.config.sigma_start = c.at("sigma_start").get<double>();
    g.config.sigma_end = c.at("sigma_end").get<double>();
    g.config.seed = c.at("seed").get<std::uint64_t>();
    g.rows = j.at("rows").get<int>();
    g.cols = j.at("cols").get<int>();
    const auto dim = j.at("dim").get<Eigen::Index>();
    const auto& weights = j.at("weights");
    if (g.rows < 1 || g.cols < 1 || weights.size() != static_cast<std::size_t>(g.rows * g.cols)) {
      throw Error(ErrorKind::DimensionMismatch, "weight count does not match grid size");
    }
    g.weights.resize(g.node_count(), dim);
    int n = 0;
    for (const auto& w : weights) {
      const Eigen::VectorXd v = vector_from(w);
      if (v.size() != dim) throw Error(ErrorKind::DimensionMismatch, "weight vector has wrong length");
      g.weights.row(n++) = v.transpose();
    }
    if (!g.weights.allFinite()) throw Error(ErrorKind::ParseError, "non-finite weight");
    return g;
  });
}

json to_json(const ClassificationMap& map) {
  json j = header("classification");
  json rows = json::array();
  for (std::size_t i = 0; i < map.size(); ++i) {
    rows.push_back({{"id", map.ids[i]}, {"node", map.nodes[i]}, {"distance", map.distances[i]}});
  }
  j["assignments"] = std::move(rows);
  return j;
}

ClassificationMap classification_from_json(const json& j) {
  check_header(j, "classification");
  return parsing("classification", [&] {
    ClassificationMap map;
    for (const auto& row : j.at("assignments")) {
      map.ids.push_back(row.at("id").get<std::string>());
      map.nodes.push_back(row.at("node").get<int>());
      map.distances.push_back(row.at("distance").get<double>());
    }
    return map;
  });
}

void write_json_file(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << j.dump(1) << '\n';
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, path.filename().string() + ": " + e.what());
  }
}

void save_features(const fs::path& path, const FeatureTable& table) { write_json_file(path, to_json(table)); }

FeatureTable load_features(const fs::path& path) { return features_from_json(read_json_file(path)); }

void save_trained(const fs::path& dir, const Index& index) {
  fs::create_directories(dir);
  write_json_file(dir / index_files::kPipeline, to_json(index.pipeline));
  write_json_file(dir / index_files::kSom, to_json(index.grid));
  write_json_file(dir / index_files::kClassification, to_json(index.classification));
  if (!index.geo.empty()) {
    std::ofstream out(dir / index_files::kStructure, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot write structure.csv");
    write_geo(out, index.geo);
  }
}

void save_index(const fs::path& dir, const Index& index) {
  fs::create_directories(dir);
  save_features(dir / index_files::kFeatures, index.features);
  save_trained(dir, index);
}

Index load_index(const fs::path& dir) {
  Index index;
  index.features = load_features(dir / index_files::kFeatures);
  index.pipeline = pipeline_from_json(read_json_file(dir / index_files::kPipeline));
  index.grid = som_from_json(read_json_file(dir / index_files::kSom));
  index.classification = classification_from_json(read_json_file(dir / index_files::kClassification));
  const fs::path structure = dir / index_files::kStructure;
  if (fs::exists(structure)) index.geo = load_geo(structure);
  finalize_index(index);
  return index;
}

}  // namespace geomir
