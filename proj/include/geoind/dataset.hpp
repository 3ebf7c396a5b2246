// Copyright 2026 The geoind Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GEOIND_DATASET_HPP_
#define GEOIND_DATASET_HPP_

// Site datasets in two encodings.
//
// CSV: comma separated, optional header line `id,lat,lon`, then rows
//   id,lat,lon[,key=value...]
// No quoting; commas inside fields are not representable and are rejected.
//
// GeoJSON: a FeatureCollection of Point features. The record id is the
// feature "id", coordinates are [lon, lat], and attributes are the
// "properties" object (values kept as strings, order preserved).

#include <cstddef>
#include <functional>
#include <istream>
#include <iterator>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "geoind/error.hpp"
#include "geoind/format.hpp"
#include "geoind/geo.hpp"
#include "geoind/mechanism.hpp"

namespace geoind {

inline constexpr int kDefaultPrecision = 6;

enum class DatasetFormat { kCsv, kGeoJson };

inline DatasetFormat ParseDatasetFormat(std::string_view name) {
  if (name == "csv") return DatasetFormat::kCsv;
  if (name == "geojson" || name == "json") return DatasetFormat::kGeoJson;
  throw Error(ErrorCode::kDomain,
              "unknown dataset format '" + std::string(name) + "'");
}

/// Guess from a file name; anything not ending in .geojson/.json is CSV.
inline DatasetFormat DatasetFormatFromPath(std::string_view path) {
  auto ends_with = [&](std::string_view suffix) {
    return path.size() >= suffix.size() &&
           path.substr(path.size() - suffix.size()) == suffix;
  };
  return ends_with(".geojson") || ends_with(".json") ? DatasetFormat::kGeoJson
                                                     : DatasetFormat::kCsv;
}

using Attributes = std::vector<std::pair<std::string, std::string>>;

struct SiteRecord {
  std::string id;
  GeoPoint location;
  Attributes attributes;

  friend bool operator==(const SiteRecord&, const SiteRecord&) = default;
};

namespace detail {

inline std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string_view> SplitCommas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(Trim(line.substr(start)));
      return fields;
    }
    fields.push_back(Trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

inline GeoPoint MakeLocation(double lat, double lon, std::size_t index) {
  try {
    return GeoPoint::Make(lat, lon);
  } catch (const Error& e) {
    throw ParseError(ErrorCode::kCoordinateRange, index, e.what());
  }
}

inline std::vector<SiteRecord> ReadCsv(std::istream& in) {
  std::vector<SiteRecord> records;
  std::set<std::string, std::less<>> seen;
  std::string line;
  std::size_t line_no = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view trimmed = Trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto fields = SplitCommas(trimmed);
    auto fail = [&](const std::string& what) {
      return ParseError(ErrorCode::kParse, line_no,
                        "line " + std::to_string(line_no) + ": " + what);
    };
    if (first_content_line) {
      first_content_line = false;
      if (fields.size() >= 3 && fields[0] == "id" && fields[1] == "lat" &&
          fields[2] == "lon") {
        continue;
      }
    }
    if (fields.size() < 3) throw fail("expected id,lat,lon");
    if (trimmed.find('"') != std::string_view::npos) {
      throw fail("quoted fields are not supported");
    }
    SiteRecord record;
    record.id = std::string(fields[0]);
    if (record.id.empty()) throw fail("empty id");
    const auto lat = ParseDouble(fields[1]);
    const auto lon = ParseDouble(fields[2]);
    if (!lat || !lon) throw fail("latitude/longitude are not numbers");
    record.location = MakeLocation(*lat, *lon, line_no);
    for (std::size_t i = 3; i < fields.size(); ++i) {
      const std::size_t eq = fields[i].find('=');
      if (eq == std::string_view::npos || eq == 0) {
        throw fail("attribute '" + std::string(fields[i]) +
                   "' is not key=value (commas inside values are not allowed)");
      }
      std::string key(fields[i].substr(0, eq));
      for (const auto& [existing, unused] : record.attributes) {
        if (existing == key) throw fail("repeated attribute '" + key + "'");
      }
      record.attributes.emplace_back(std::move(key),
                                     std::string(fields[i].substr(eq + 1)));
    }
    if (!seen.insert(record.id).second) {
      throw ParseError(ErrorCode::kDuplicateId, line_no,
                       "line " + std::to_string(line_no) + ": duplicate id '" +
                           record.id + "'");
    }
    records.push_back(std::move(record));
  }
  return records;
}

inline std::vector<SiteRecord> ReadGeoJson(std::istream& in) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(ErrorCode::kParse, 0, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
      !doc.contains("features") || !doc["features"].is_array()) {
    throw ParseError(ErrorCode::kParse, 0, "expected a GeoJSON FeatureCollection");
  }
  std::vector<SiteRecord> records;
  std::set<std::string, std::less<>> seen;
  const auto& features = doc["features"];
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& feature = features[i];
    auto fail = [&](const std::string& what) {
      return ParseError(ErrorCode::kParse, i,
                        "feature " + std::to_string(i) + ": " + what);
    };
    if (!feature.is_object() || feature.value("type", "") != "Feature") {
      throw fail("not a Feature");
    }
    SiteRecord record;
    if (feature.contains("id") && feature["id"].is_string()) {
      record.id = feature["id"].get<std::string>();
    } else if (feature.contains("id") && feature["id"].is_number()) {
      record.id = feature["id"].dump();
    }
    if (record.id.empty()) throw fail("missing id");
    if (!feature.contains("geometry") || !feature["geometry"].is_object()) {
      throw fail("missing geometry");
    }
    const auto& geometry = feature["geometry"];
    if (geometry.value("type", "") != "Point") throw fail("geometry is not a Point");
    const auto& coords = geometry.contains("coordinates")
                             ? geometry["coordinates"]
                             : nlohmann::ordered_json();
    if (!coords.is_array() || coords.size() < 2 || !coords[0].is_number() ||
        !coords[1].is_number()) {
      throw fail("Point coordinates must be [lon, lat]");
    }
    record.location =
        MakeLocation(coords[1].get<double>(), coords[0].get<double>(), i);
    if (feature.contains("properties") && feature["properties"].is_object()) {
      for (const auto& [key, value] : feature["properties"].items()) {
        record.attributes.emplace_back(
            key, value.is_string() ? value.get<std::string>() : value.dump());
      }
    }
    if (!seen.insert(record.id).second) {
      throw ParseError(ErrorCode::kDuplicateId, i,
                       "feature " + std::to_string(i) + ": duplicate id '" +
                           record.id + "'");
    }
    records.push_back(std::move(record));
  }
  return records;
}

inline void CheckCsvSafe(const std::string& text, const std::string& what) {
  if (text.find_first_of(",\"\n\r") != std::string::npos) {
    throw Error(ErrorCode::kDomain,
                what + " '" + text + "' cannot be written as CSV");
  }
}

}  // namespace detail

/// Throws ParseError (with line number / feature index) on malformed input,
/// ErrorCode::kDuplicateId on a repeated id and kCoordinateRange on invalid
/// coordinates.
inline std::vector<SiteRecord> ReadSites(std::istream& in, DatasetFormat format) {
  return format == DatasetFormat::kCsv ? detail::ReadCsv(in)
                                       : detail::ReadGeoJson(in);
}

inline std::vector<SiteRecord> ReadSites(std::string_view text,
                                         DatasetFormat format) {
  std::istringstream in{std::string(text)};
  return ReadSites(in, format);
}

inline std::string WriteSites(const std::vector<SiteRecord>& records,
                              DatasetFormat format,
                              int precision = kDefaultPrecision) {
  std::string out;
  if (format == DatasetFormat::kCsv) {
    out = "id,lat,lon\n";
    for (const auto& r : records) {
      detail::CheckCsvSafe(r.id, "id");
      out += r.id + "," + FormatFixed(r.location.lat, precision) + "," +
             FormatFixed(r.location.lon, precision);
      for (const auto& [key, value] : r.attributes) {
        detail::CheckCsvSafe(key, "attribute key");
        detail::CheckCsvSafe(value, "attribute value");
        if (key.empty() || key.find('=') != std::string::npos) {
          throw Error(ErrorCode::kDomain, "attribute key '" + key + "' is invalid");
        }
        out += "," + key + "=" + value;
      }
      out += "\n";
    }
    return out;
  }

  out = "{\"type\":\"FeatureCollection\",\"features\":[";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    out += i == 0 ? "\n" : ",\n";
    out += "{\"type\":\"Feature\",\"id\":" + nlohmann::json(r.id).dump() +
           ",\"geometry\":{\"type\":\"Point\",\"coordinates\":[" +
           FormatFixed(r.location.lon, precision) + "," +
           FormatFixed(r.location.lat, precision) + "]},\"properties\":{";
    for (std::size_t k = 0; k < r.attributes.size(); ++k) {
      if (k > 0) out += ",";
      out += nlohmann::json(r.attributes[k].first).dump() + ":" +
             nlohmann::json(r.attributes[k].second).dump();
    }
    out += "}}";
  }
  out += records.empty() ? "]}\n" : "\n]}\n";
  return out;
}

namespace detail {

inline Polygon PolygonFromJson(const nlohmann::json& rings) {
  if (!rings.is_array()) throw Error(ErrorCode::kInvalidMask, "polygon is not an array");
  Polygon polygon;
  for (const auto& ring_json : rings) {
    if (!ring_json.is_array()) throw Error(ErrorCode::kInvalidMask, "ring is not an array");
    Ring ring;
    for (const auto& pos : ring_json) {
      if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() ||
          !pos[1].is_number()) {
        throw Error(ErrorCode::kInvalidMask, "ring position must be [lon, lat]");
      }
      try {
        ring.push_back(GeoPoint::Make(pos[1].get<double>(), pos[0].get<double>()));
      } catch (const Error& e) {
        throw Error(ErrorCode::kInvalidMask, e.what());
      }
    }
    polygon.push_back(std::move(ring));
  }
  return polygon;
}

inline void CollectPolygons(const nlohmann::json& node, std::vector<Polygon>& out) {
  if (!node.is_object()) throw Error(ErrorCode::kInvalidMask, "expected a GeoJSON object");
  const std::string type = node.value("type", "");
  if (type == "FeatureCollection") {
    if (!node.contains("features") || !node["features"].is_array()) {
      throw Error(ErrorCode::kInvalidMask, "FeatureCollection without features");
    }
    for (const auto& f : node["features"]) CollectPolygons(f, out);
  } else if (type == "Feature") {
    if (!node.contains("geometry")) {
      throw Error(ErrorCode::kInvalidMask, "Feature without geometry");
    }
    CollectPolygons(node["geometry"], out);
  } else if (type == "Polygon") {
    out.push_back(PolygonFromJson(node.value("coordinates", nlohmann::json())));
  } else if (type == "MultiPolygon") {
    const auto coords = node.value("coordinates", nlohmann::json());
    if (!coords.is_array()) throw Error(ErrorCode::kInvalidMask, "bad MultiPolygon");
    for (const auto& p : coords) out.push_back(PolygonFromJson(p));
  } else {
    throw Error(ErrorCode::kInvalidMask,
                "mask geometry must be Polygon or MultiPolygon, got '" + type + "'");
  }
}

}  // namespace detail

/// Region mask from GeoJSON: a Polygon, MultiPolygon, Feature or
/// FeatureCollection of those. The mask is the union of all polygons.
inline RegionMask ReadRegionMask(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidMask, std::string("invalid JSON: ") + e.what());
  }
  std::vector<Polygon> polygons;
  detail::CollectPolygons(doc, polygons);
  return RegionMask::Make(std::move(polygons));
}

}  // namespace geoind

#endif  // GEOIND_DATASET_HPP_
