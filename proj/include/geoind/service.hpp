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

#ifndef GEOIND_SERVICE_HPP_
#define GEOIND_SERVICE_HPP_

// Local JSON-over-HTTP front end.
//
//   POST /api/perturb  {lat, lon, epsilon | (level, radius), seed?}
//   GET  /api/cloud    ?lat&lon&epsilon|level&radius&n&seed
//   GET  /api/table1   ?lat&lon&n&seed
//
// Handlers are pure functions of their parameters and seed; absent seeds are
// drawn from OS entropy and echoed back. Errors are {code, message}.
// Submitted coordinates are never logged: the access log records method,
// path and status only.

#include <charconv>
#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "httplib.h"
#include "json.hpp"

#include "geoind/dataset.hpp"
#include "geoind/error.hpp"
#include "geoind/format.hpp"
#include "geoind/geo.hpp"
#include "geoind/mechanism.hpp"
#include "geoind/random.hpp"
#include "geoind/stats.hpp"

namespace geoind::service {

inline constexpr std::size_t kMaxCloudSize = 100'000;
inline constexpr std::size_t kDefaultCloudSize = 512;

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

using Params = std::map<std::string, std::string, std::less<>>;

namespace detail {

struct ApiError {
  int status;
  std::string code;
  std::string message;
};

inline ApiResponse ErrorResponse(const ApiError& e) {
  return ApiResponse{e.status, {{"code", e.code}, {"message", e.message}}};
}

inline const std::string* Find(const Params& params, std::string_view key) {
  auto it = params.find(key);
  return it == params.end() ? nullptr : &it->second;
}

inline double RequireNumber(const Params& params, std::string_view key) {
  const std::string* raw = Find(params, key);
  if (raw == nullptr) {
    throw ApiError{400, "missing_parameter",
                   "parameter '" + std::string(key) + "' is required"};
  }
  auto value = ParseDouble(*raw);
  if (!value) {
    throw ApiError{400, "invalid_parameter",
                   "parameter '" + std::string(key) + "' must be a number"};
  }
  return *value;
}

inline std::optional<std::uint64_t> ParseUnsigned(std::string_view text) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

inline std::uint64_t SeedOrEntropy(const Params& params) {
  const std::string* raw = Find(params, "seed");
  if (raw == nullptr) return EntropySeed();
  auto seed = ParseUnsigned(*raw);
  if (!seed) {
    throw ApiError{400, "invalid_parameter",
                   "seed must be a nonnegative integer"};
  }
  return *seed;
}

inline std::size_t SampleCount(const Params& params) {
  const std::string* raw = Find(params, "n");
  if (raw == nullptr) return kDefaultCloudSize;
  auto n = ParseUnsigned(*raw);
  if (!n) throw ApiError{400, "invalid_parameter", "n must be a positive integer"};
  if (*n == 0) throw ApiError{400, "n_out_of_range", "n must be at least 1"};
  if (*n > kMaxCloudSize) {
    throw ApiError{413, "n_too_large",
                   "n must not exceed " + std::to_string(kMaxCloudSize)};
  }
  return static_cast<std::size_t>(*n);
}

inline GeoPoint Site(const Params& params) {
  const double lat = RequireNumber(params, "lat");
  const double lon = RequireNumber(params, "lon");
  try {
    return GeoPoint::Make(lat, lon);
  } catch (const Error& e) {
    throw ApiError{400, "coordinate_out_of_range", e.what()};
  }
}

inline PrivacyParams Privacy(const Params& params) {
  const bool has_epsilon = Find(params, "epsilon") != nullptr;
  const bool has_pair =
      Find(params, "level") != nullptr || Find(params, "radius") != nullptr;
  if (has_epsilon && has_pair) {
    throw ApiError{400, "conflicting_parameters",
                   "give either epsilon or (level, radius), not both"};
  }
  if (has_epsilon) {
    const double epsilon = RequireNumber(params, "epsilon");
    if (!(epsilon > 0.0)) {
      throw ApiError{400, "epsilon_out_of_range",
                     "epsilon must be > 0 (per meter)"};
    }
    return PrivacyParams::FromEpsilon(epsilon);
  }
  if (!has_pair) {
    throw ApiError{400, "missing_parameter",
                   "epsilon or (level, radius) is required"};
  }
  const double level = RequireNumber(params, "level");
  const double radius = RequireNumber(params, "radius");
  if (!(level > 0.0)) throw ApiError{400, "level_out_of_range", "level must be > 0"};
  if (!(radius > 0.0)) {
    throw ApiError{400, "radius_out_of_range", "radius must be > 0 (meters)"};
  }
  try {
    return PrivacyParams::Calibrate(level, radius);
  } catch (const Error& e) {
    throw ApiError{400, "epsilon_out_of_range", e.what()};
  }
}

template <typename Fn>
ApiResponse Guard(Fn&& fn) {
  try {
    return fn();
  } catch (const ApiError& e) {
    return ErrorResponse(e);
  } catch (const Error& e) {
    return ErrorResponse({400, std::string(ErrorCodeName(e.code())), e.what()});
  }
}

inline nlohmann::json StatsJson(const CloudStats& s) {
  return {{"n", s.n},
          {"mean_distance_m", s.mean_distance_m},
          {"median_distance_m", s.median_distance_m},
          {"expected_mean_m", s.expected_mean_m},
          {"angle_chi2", s.angle_chi2},
          {"radius_ks", s.radius_ks}};
}

}  // namespace detail

/// Flattens a JSON object body into Params. Numbers keep their exact text.
inline std::optional<Params> ParamsFromJsonBody(std::string_view body) {
  nlohmann::json doc = nlohmann::json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) return std::nullopt;
  Params params;
  for (const auto& [key, value] : doc.items()) {
    if (value.is_null()) continue;
    params[key] = value.is_string() ? value.get<std::string>() : value.dump();
  }
  return params;
}

inline ApiResponse HandlePerturb(const Params& params) {
  return detail::Guard([&] {
    const GeoPoint site = detail::Site(params);
    const PrivacyParams privacy = detail::Privacy(params);
    const std::uint64_t seed = detail::SeedOrEntropy(params);
    NoiseRng rng(seed);
    const PerturbResult result = Perturb(site, privacy, rng);
    return ApiResponse{
        200,
        {{"lat", RoundToDecimals(result.noisy.lat, kDefaultPrecision)},
         {"lon", RoundToDecimals(result.noisy.lon, kDefaultPrecision)},
         {"distance_m", result.applied_radius_m},
         {"guarantee_weakened", result.guarantee_weakened},
         {"epsilon", privacy.epsilon()},
         {"seed", seed}}};
  });
}

inline ApiResponse HandlePerturbBody(std::string_view body) {
  auto params = ParamsFromJsonBody(body);
  if (!params) {
    return detail::ErrorResponse(
        {400, "invalid_json", "request body must be a JSON object"});
  }
  return HandlePerturb(*params);
}

/// FeatureCollection of the cloud with foreign members "stats", "epsilon",
/// "seed" and "n". Each feature carries its distance_m from the site.
inline ApiResponse HandleCloud(const Params& params) {
  return detail::Guard([&] {
    const GeoPoint site = detail::Site(params);
    const PrivacyParams privacy = detail::Privacy(params);
    const std::size_t n = detail::SampleCount(params);
    const std::uint64_t seed = detail::SeedOrEntropy(params);
    const auto cloud = GenerateCloud(site, privacy, n, seed);
    nlohmann::json features = nlohmann::json::array();
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      features.push_back(
          {{"type", "Feature"},
           {"id", std::to_string(i + 1)},
           {"geometry",
            {{"type", "Point"},
             {"coordinates",
              {RoundToDecimals(cloud[i].lon, kDefaultPrecision),
               RoundToDecimals(cloud[i].lat, kDefaultPrecision)}}}},
           {"properties",
            {{"distance_m", GreatCircleDistance(site, cloud[i])}}}});
    }
    return ApiResponse{
        200,
        {{"type", "FeatureCollection"},
         {"features", std::move(features)},
         {"stats", detail::StatsJson(Summarize(site, cloud, privacy))},
         {"epsilon", privacy.epsilon()},
         {"seed", seed},
         {"n", n}}};
  });
}

inline ApiResponse HandleTable1(const Params& params) {
  return detail::Guard([&] {
    const GeoPoint site = detail::Site(params);
    const std::size_t n = detail::SampleCount(params);
    const std::uint64_t seed = detail::SeedOrEntropy(params);
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : Table1Report(site, n, seed)) {
      rows.push_back({{"epsilon", row.epsilon},
                      {"n", row.n},
                      {"mean_m", row.mean_m},
                      {"median_m", row.median_m},
                      {"expected_m", row.expected_mean_m},
                      {"seed", seed}});
    }
    return ApiResponse{200, std::move(rows)};
  });
}

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string static_dir;  // UI assets served at "/" when set
};

namespace detail {

inline Params QueryParams(const httplib::Request& req) {
  Params params;
  for (const auto& [key, value] : req.params) params[key] = value;
  return params;
}

inline void Reply(httplib::Response& res, const ApiResponse& api) {
  res.status = api.status;
  res.set_content(api.body.dump(), "application/json");
}

inline constexpr std::string_view kIndexPage =
    "<!doctype html><title>geoind</title>"
    "<p>geoind service. Endpoints: POST /api/perturb, GET /api/cloud, "
    "GET /api/table1. Start with --ui-dir to serve the web client here.</p>\n";

}  // namespace detail

/// Installs the API routes (and static UI, if configured) on `server`.
inline void RegisterRoutes(httplib::Server& server, const ServerOptions& options,
                           std::ostream* access_log = nullptr) {
  server.Post("/api/perturb", [](const httplib::Request& req, httplib::Response& res) {
    detail::Reply(res, HandlePerturbBody(req.body));
  });
  server.Get("/api/cloud", [](const httplib::Request& req, httplib::Response& res) {
    detail::Reply(res, HandleCloud(detail::QueryParams(req)));
  });
  server.Get("/api/table1", [](const httplib::Request& req, httplib::Response& res) {
    detail::Reply(res, HandleTable1(detail::QueryParams(req)));
  });
  const bool mounted = !options.static_dir.empty() &&
                       server.set_mount_point("/", options.static_dir);
  if (!mounted) {
    server.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(std::string(detail::kIndexPage), "text/html");
    });
  }
  if (access_log != nullptr) {
    server.set_logger([access_log](const httplib::Request& req,
                                   const httplib::Response& res) {
      *access_log << req.method << " " << req.path << " " << res.status << "\n";
    });
  }
}

}  // namespace geoind::service

#endif  // GEOIND_SERVICE_HPP_
