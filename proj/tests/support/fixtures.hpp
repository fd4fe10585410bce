#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "geomir/imaging.hpp"
#include "geomir/index.hpp"
#include "geomir/random.hpp"

namespace geomir::testing {

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

enum class Group { WarmSmooth, CoolSmooth, Striped };

const char* group_name(Group group);

RgbImage warm_smooth(Rng& rng, int width = 640, int height = 480);
RgbImage cool_smooth(Rng& rng, int width = 640, int height = 480);
RgbImage striped(Rng& rng, int width = 640, int height = 480);
RgbImage make_group_image(Group group, Rng& rng, int width = 640, int height = 480);

/// Uniform random pixels.
RgbImage random_image(Rng& rng, int width, int height);

struct FixtureImage {
  std::string id;
  Group group;
  std::filesystem::path path;
};

struct FixtureSet {
  std::filesystem::path image_dir;
  std::filesystem::path geo_csv;
  std::vector<FixtureImage> images;

  Group group_of(const std::string& id) const;
};

/// Writes `per_group` PNGs for each of the three groups into `root/images`
/// plus `root/geo.csv` covering every image (some without a city).
FixtureSet write_fixture_set(const std::filesystem::path& root, int per_group, std::uint64_t seed);

/// Extract + train (seed 42 unless overridden) + geo, all in memory.
Index build_fixture_index(const FixtureSet& fixtures, std::uint64_t som_seed = 42);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

}  // namespace geomir::testing
