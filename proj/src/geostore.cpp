#include "geomir/geostore.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "geomir/error.hpp"

namespace geomir {

namespace {

std::string trim_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::vector<std::string> split_csv_line(const std::string& line, int line_no) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": unterminated quote");
  return fields;
}

std::string quote_if_needed(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

GeoIndex parse_geo(std::istream& in) {
  std::string line;
  int line_no = 1;
  if (!std::getline(in, line)) throw Error(ErrorKind::ParseError, "line 1: missing header");
  line = trim_cr(line);
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const auto header = split_csv_line(line, line_no);
  if (header != std::vector<std::string>{"image_id", "country", "city"}) {
    throw Error(ErrorKind::ParseError, "line 1: expected header image_id,country,city");
  }

  GeoIndex index;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim_cr(line);
    if (line.empty()) continue;
    auto fields = split_csv_line(line, line_no);
    if (fields.size() == 2) fields.emplace_back();
    if (fields.size() != 3) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected 3 fields, got " +
                                             std::to_string(fields.size()));
    }
    if (fields[0].empty()) throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": empty image_id");
    if (fields[1].empty()) throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": empty country");
    GeoRecord record{fields[0], fields[1], std::nullopt};
    if (!fields[2].empty()) record.city = fields[2];
    if (!index.emplace(record.image_id, record).second) {
      throw Error(ErrorKind::DuplicateId, record.image_id + " (line " + std::to_string(line_no) + ")");
    }
  }
  return index;
}

GeoIndex load_geo(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  return parse_geo(in);
}

void write_geo(std::ostream& out, const GeoIndex& geo) {
  out << "image_id,country,city\n";
  for (const auto& [id, record] : geo) {
    out << quote_if_needed(id) << ',' << quote_if_needed(record.country) << ','
        << quote_if_needed(record.city.value_or("")) << '\n';
  }
}

std::size_t GeoTree::leaf_count() const {
  std::size_t n = 0;
  for (const auto& country : countries) {
    n += country.images.size();
    for (const auto& city : country.cities) n += city.images.size();
  }
  return n;
}

GeoTree build_hierarchy(const GeoIndex& geo, const std::vector<std::string>& ids) {
  // country -> city -> images
  std::map<std::string, std::map<std::string, std::set<std::string>>> grouped;
  std::map<std::string, std::set<std::string>> direct;
  std::set<std::string> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) throw Error(ErrorKind::DuplicateId, id);
    const auto it = geo.find(id);
    if (it == geo.end()) throw Error(ErrorKind::UnknownImage, id);
    const GeoRecord& record = it->second;
    if (record.city) {
      grouped[record.country][*record.city].insert(id);
    } else {
      grouped[record.country];
      direct[record.country].insert(id);
    }
  }

  GeoTree tree;
  for (const auto& [country, cities] : grouped) {
    CountryNode node{country, {}, {}};
    for (const auto& [city, images] : cities) {
      node.cities.push_back({city, {images.begin(), images.end()}});
    }
    if (const auto d = direct.find(country); d != direct.end()) {
      node.images.assign(d->second.begin(), d->second.end());
    }
    tree.countries.push_back(std::move(node));
  }
  return tree;
}

std::string location_label(const GeoRecord& record) {
  return record.city ? *record.city + ", " + record.country : record.country;
}

}  // namespace geomir
