// geomir: build an image index, query it, and serve query sessions.
//
//   geomir extract <images-dir> -o features.json
//   geomir train features.json -o <index-dir> [--geo locations.csv]
//   geomir query photo.jpg [--index <index-dir>] [--radius 1] [--top 200] [--json|--svg]
//   geomir serve [--index <index-dir>] [--port 8080]
//
// --index defaults to $GEOMIR_INDEX_DIR.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>

#include <CLI11.hpp>

#include "geomir/error.hpp"
#include "geomir/http_server.hpp"
#include "geomir/index.hpp"
#include "geomir/layout.hpp"
#include "geomir/retrieval.hpp"
#include "geomir/svg.hpp"

namespace fs = std::filesystem;

namespace {

std::string default_index_dir() {
  const char* env = std::getenv("GEOMIR_INDEX_DIR");
  return env != nullptr ? env : "";
}

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw geomir::Error(geomir::ErrorKind::IoError, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

geomir::Index open_index(const std::string& dir) {
  if (dir.empty()) {
    throw geomir::Error(geomir::ErrorKind::IoError, "no index directory (use --index or GEOMIR_INDEX_DIR)");
  }
  return geomir::load_index(dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scenic image retrieval by edge-direction color histograms"};
  app.require_subcommand(1);

  // extract
  auto* extract = app.add_subcommand("extract", "Extract edge-direction color histograms from a directory");
  std::string images_dir, features_out;
  geomir::FeatureConfig feature_cfg;
  extract->add_option("images", images_dir, "Directory of JPEG/PNG images")->required();
  extract->add_option("-o,--out", features_out, "Output features file")->required();
  extract->add_option("--edge-threshold", feature_cfg.edge_magnitude_threshold, "Non-edge gradient magnitude cutoff");
  extract->add_option("--chroma-bins", feature_cfg.chroma_bins_per_axis, "Chroma bins per a*/b* axis");

  // train
  auto* train = app.add_subcommand("train", "Fit post-processing, train the map and classify all images");
  std::string features_in, train_out, geo_path, mode = "literal";
  geomir::PostprocConfig post_cfg;
  geomir::SomConfig som_cfg;
  train->add_option("features", features_in, "Features file from `extract`")->required();
  train->add_option("-o,--out", train_out, "Index directory")->required();
  train->add_option("--geo", geo_path, "image_id,country,city CSV");
  train->add_option("--prune-threshold", post_cfg.prune_threshold);
  train->add_option("--exaggeration", post_cfg.exaggeration_factor);
  train->add_option("--mode", mode)->check(CLI::IsMember({"literal", "multiplicative"}));
  train->add_option("--rows", som_cfg.rows);
  train->add_option("--cols", som_cfg.cols);
  train->add_option("--epochs", som_cfg.epochs);
  train->add_option("--alpha-start", som_cfg.alpha_start);
  train->add_option("--alpha-end", som_cfg.alpha_end);
  train->add_option("--sigma-start", som_cfg.sigma_start, "Default max(rows, cols) / 2");
  train->add_option("--sigma-end", som_cfg.sigma_end);
  train->add_option("--seed", som_cfg.seed);

  // query
  auto* query = app.add_subcommand("query", "Query the index with an image");
  std::string query_image, index_dir = default_index_dir();
  geomir::QueryConfig query_cfg;
  bool as_json = false, as_svg = false;
  int layout_steps = 2000;
  query->add_option("image", query_image, "Query image")->required();
  query->add_option("--index", index_dir, "Index directory");
  query->add_option("--radius", query_cfg.radius, "Map neighborhood radius");
  query->add_option("--top", query_cfg.max_images, "Maximum images returned");
  auto* json_flag = query->add_flag("--json", as_json, "Print the result as JSON (default)");
  query->add_flag("--svg", as_svg, "Run the layout and print an SVG scene")->excludes(json_flag);
  query->add_option("--steps", layout_steps, "Layout ticks before the SVG snapshot");

  // serve
  auto* serve = app.add_subcommand("serve", "Serve query sessions over HTTP");
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t capacity = geomir::SessionStore::kDefaultCapacity;
  serve->add_option("--index", index_dir, "Index directory");
  serve->add_option("--host", host);
  serve->add_option("--port", port);
  serve->add_option("--sessions", capacity, "Sessions kept before LRU eviction");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*extract) {
      const auto table = geomir::extract_directory(images_dir, feature_cfg, [](const std::string& msg) {
        std::cerr << "warning: " << msg << '\n';
      });
      geomir::save_features(features_out, table);
      std::cerr << "extracted " << table.size() << " images\n";
    } else if (*train) {
      post_cfg.mode = mode == "literal" ? geomir::ExaggerationMode::Literal : geomir::ExaggerationMode::Multiplicative;
      geomir::Index index = geomir::train_index(geomir::load_features(features_in), post_cfg, som_cfg);
      if (!geo_path.empty()) index.geo = geomir::load_geo(geo_path);
      const fs::path out(train_out);
      fs::create_directories(out);
      const fs::path features_copy = out / geomir::index_files::kFeatures;
      std::error_code ec;
      if (!fs::equivalent(features_in, features_copy, ec)) {
        fs::copy_file(features_in, features_copy, fs::copy_options::overwrite_existing);
      }
      geomir::save_trained(out, index);
      std::cerr << "trained " << index.grid.rows << "x" << index.grid.cols << " map on " << index.size()
                << " images, " << index.pipeline.kept_dimension() << " of " << index.pipeline.raw_dimension()
                << " dimensions kept, quantization error "
                << geomir::quantization_error(index.grid, index.processed) << '\n';
    } else if (*query) {
      const geomir::Index index = open_index(index_dir);
      const geomir::QueryResult result = geomir::query(read_bytes(query_image), index, query_cfg);
      if (as_svg) {
        const geomir::LayoutConfig layout_cfg;
        geomir::LayoutGraph graph = geomir::build_graph(result.tree, layout_cfg);
        geomir::step(graph, layout_cfg, layout_steps);
        std::cout << geomir::render_svg(graph, result.draw_order, layout_cfg);
      } else {
        std::cout << geomir::to_json(result, index).dump(2) << '\n';
      }
    } else if (*serve) {
      auto index = std::make_shared<const geomir::Index>(open_index(index_dir));
      auto store = std::make_shared<geomir::SessionStore>(index, geomir::LayoutConfig{}, capacity);
      geomir::HttpServer server(store);
      const int bound = server.bind(host, port);
      if (bound < 0) {
        std::cerr << "error: cannot bind " << host << ':' << port << '\n';
        return 1;
      }
      std::cerr << "serving " << index->size() << " images on http://" << host << ':' << bound << '\n';
      return server.listen() ? 0 : 1;
    }
  } catch (const geomir::Error& e) {
    if (e.kind() == geomir::ErrorKind::EmptyDataset && *extract) {
      std::cerr << "error: no usable images in " << images_dir << '\n';
    } else {
      std::cerr << "error: " << e.what() << '\n';
    }
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
