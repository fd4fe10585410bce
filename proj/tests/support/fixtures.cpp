#include "support/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <stdexcept>

#include "geomir/features.hpp"
#include "geomir/geostore.hpp"

namespace geomir::testing {

namespace fs = std::filesystem;

TempDir::TempDir() {
  std::string pattern = (fs::temp_directory_path() / "geomir-XXXXXX").string();
  if (::mkdtemp(pattern.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
  path_ = pattern;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

const char* group_name(Group group) {
  switch (group) {
    case Group::WarmSmooth: return "warm";
    case Group::CoolSmooth: return "cool";
    case Group::Striped: return "striped";
  }
  return "?";
}

namespace {

std::uint8_t channel(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

// Two-corner smooth gradient between colors drawn from the given ranges.
RgbImage smooth(Rng& rng, int width, int height, const double (&lo)[3], const double (&hi)[3]) {
  double a[3], b[3];
  for (int c = 0; c < 3; ++c) {
    a[c] = uniform(rng, lo[c], hi[c]);
    b[c] = std::clamp(a[c] + uniform(rng, -40.0, 40.0), lo[c] - 15.0, hi[c] + 15.0);
  }
  const double tilt = uniform(rng, 0.0, 1.0);
  RgbImage image(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double t = tilt * x / (width - 1.0) + (1.0 - tilt) * y / (height - 1.0);
      image.at(x, y) = {channel(a[0] + t * (b[0] - a[0])), channel(a[1] + t * (b[1] - a[1])),
                        channel(a[2] + t * (b[2] - a[2]))};
    }
  }
  return image;
}

}  // namespace

RgbImage warm_smooth(Rng& rng, int width, int height) {
  const double lo[3] = {215, 100, 20};
  const double hi[3] = {255, 140, 50};
  return smooth(rng, width, height, lo, hi);
}

RgbImage cool_smooth(Rng& rng, int width, int height) {
  const double lo[3] = {20, 110, 190};
  const double hi[3] = {50, 150, 240};
  return smooth(rng, width, height, lo, hi);
}

RgbImage striped(Rng& rng, int width, int height) {
  // Pure grays keep every pixel in the neutral chroma cell; the stripe width
  // sets the edge share.
  const double stripe = uniform(rng, 2.0, 6.0);
  const std::uint8_t dark = channel(uniform(rng, 0, 40));
  const std::uint8_t light = channel(uniform(rng, 200, 255));
  RgbImage image(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::uint8_t v = static_cast<int>(x / stripe) % 2 == 0 ? dark : light;
      image.at(x, y) = {v, v, v};
    }
  }
  return image;
}

RgbImage make_group_image(Group group, Rng& rng, int width, int height) {
  switch (group) {
    case Group::WarmSmooth: return warm_smooth(rng, width, height);
    case Group::CoolSmooth: return cool_smooth(rng, width, height);
    case Group::Striped: return striped(rng, width, height);
  }
  return {};
}

RgbImage random_image(Rng& rng, int width, int height) {
  RgbImage image(width, height);
  for (auto& p : image.pixels) {
    const std::uint64_t bits = rng();
    p = {static_cast<std::uint8_t>(bits), static_cast<std::uint8_t>(bits >> 8), static_cast<std::uint8_t>(bits >> 16)};
  }
  return image;
}

Group FixtureSet::group_of(const std::string& id) const {
  for (const auto& image : images) {
    if (image.id == id) return image.group;
  }
  throw std::out_of_range("unknown fixture " + id);
}

FixtureSet write_fixture_set(const fs::path& root, int per_group, std::uint64_t seed) {
  FixtureSet set;
  set.image_dir = root / "images";
  set.geo_csv = root / "geo.csv";
  fs::create_directories(set.image_dir);

  static const char* const kCountries[] = {"France", "Japan", "Brazil", "Norway"};
  static const char* const kCities[][2] = {{"Paris", "Lyon"}, {"Tokyo", "Kyoto"}, {"Rio", ""}, {"", ""}};
  GeoIndex geo;
  Rng rng(seed);
  std::vector<Eigen::VectorXd> seen;
  int serial = 0;
  for (const Group group : {Group::WarmSmooth, Group::CoolSmooth, Group::Striped}) {
    for (int k = 0; k < per_group; ++k, ++serial) {
      char name[32];
      std::snprintf(name, sizeof name, "%s%02d", group_name(group), k);
      // Mix orientations so both standard sizes occur.
      const bool portrait = k % 4 == 3;
      // Redraw until the histogram differs from every earlier one, so each
      // image is its own unique nearest neighbor.
      RgbImage image;
      Eigen::VectorXd features;
      do {
        image = make_group_image(group, rng, portrait ? 480 : 640, portrait ? 640 : 480);
        features = extract_features(image).values;
      } while (std::find(seen.begin(), seen.end(), features) != seen.end());
      seen.push_back(features);
      const fs::path path = set.image_dir / (std::string(name) + ".png");
      const auto png = encode_png(image);
      std::ofstream(path, std::ios::binary).write(reinterpret_cast<const char*>(png.data()),
                                                  static_cast<std::streamsize>(png.size()));
      set.images.push_back({name, group, path});

      const int c = serial % 4;
      const char* city = kCities[c][(serial / 4) % 2];
      GeoRecord record{name, kCountries[c], std::nullopt};
      if (city[0] != '\0') record.city = city;
      geo.emplace(name, record);
    }
  }
  std::ofstream out(set.geo_csv);
  write_geo(out, geo);
  return set;
}

Index build_fixture_index(const FixtureSet& fixtures, std::uint64_t som_seed) {
  SomConfig som;
  som.seed = som_seed;
  Index index = train_index(extract_directory(fixtures.image_dir, FeatureConfig{}), PostprocConfig{}, som);
  index.geo = load_geo(fixtures.geo_csv);
  return index;
}

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace geomir::testing
