#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace geomir {

struct GeoRecord {
  std::string image_id;
  std::string country;
  std::optional<std::string> city;

  friend bool operator==(const GeoRecord&, const GeoRecord&) = default;
};

/// image_id -> record.
using GeoIndex = std::map<std::string, GeoRecord>;

/// Parses `image_id,country,city` CSV with a mandatory header row. Fields may
/// be double-quoted; an empty city means none.
/// Throws ParseError (with line number) and DuplicateId.
GeoIndex parse_geo(std::istream& in);
GeoIndex load_geo(const std::filesystem::path& path);

/// Writes the same CSV dialect parse_geo reads.
void write_geo(std::ostream& out, const GeoIndex& geo);

struct CityNode {
  std::string name;
  std::vector<std::string> images;
};

struct CountryNode {
  std::string name;
  std::vector<CityNode> cities;
  /// Images without a city hang directly off the country.
  std::vector<std::string> images;
};

/// Root -> countries -> cities -> images, every level sorted lexicographically.
struct GeoTree {
  std::vector<CountryNode> countries;

  std::size_t leaf_count() const;
};

/// Throws UnknownImage naming the first id missing from `geo`.
GeoTree build_hierarchy(const GeoIndex& geo, const std::vector<std::string>& ids);

/// "City, Country" or just "Country".
std::string location_label(const GeoRecord& record);

}  // namespace geomir
