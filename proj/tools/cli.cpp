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

#include "cli.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "geoind/geoind.hpp"
#include "geoind/service.hpp"

namespace geoind::cli {
namespace {

struct PrivacyFlags {
  std::optional<double> epsilon;
  std::optional<double> level;
  std::optional<double> radius;
};

void AddPrivacyFlags(CLI::App& cmd, PrivacyFlags& flags) {
  auto* eps = cmd.add_option("--epsilon", flags.epsilon,
                             "privacy parameter, per meter");
  auto* level = cmd.add_option("--level", flags.level,
                               "privacy level l of 'l-privacy within r'");
  auto* radius = cmd.add_option("--radius", flags.radius,
                                "protection radius r in meters");
  level->needs(radius);
  radius->needs(level);
  eps->excludes(level);
  eps->excludes(radius);
}

// Parsing guarantees at most one parameterization is present.
PrivacyParams ResolvePrivacy(const PrivacyFlags& flags) {
  if (flags.epsilon) return PrivacyParams::FromEpsilon(*flags.epsilon);
  if (flags.level && flags.radius) {
    return PrivacyParams::Calibrate(*flags.level, *flags.radius);
  }
  throw CLI::RequiredError("--epsilon or --level/--radius");
}

std::uint64_t ResolveSeed(const std::optional<std::uint64_t>& seed,
                          std::ostream& err) {
  if (seed) return *seed;
  const std::uint64_t chosen = EntropySeed();
  err << "seed = " << chosen << " (pass --seed to reproduce)\n";
  return chosen;
}

void Emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::kParse, "cannot open '" + path + "' for writing");
  file << text;
  if (!file) throw Error(ErrorCode::kParse, "failed writing '" + path + "'");
}

std::ifstream OpenInput(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParse, "cannot open '" + path + "'");
  return in;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Geo-indistinguishable release of sensitive site coordinates "
               "(planar Laplace mechanism)",
               "geoind"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  int precision = kDefaultPrecision;
  std::string format_name;
  std::string out_path;

  // perturb
  auto* perturb = app.add_subcommand("perturb", "perturb every site of a dataset");
  std::string in_path;
  std::string mask_path;
  int max_attempts = kDefaultMaxAttempts;
  PrivacyFlags perturb_privacy;
  perturb->add_option("--in", in_path, "input dataset (.csv or .geojson)")
      ->required()
      ->check(CLI::ExistingFile);
  perturb->add_option("--out", out_path, "output file (default: stdout)");
  AddPrivacyFlags(*perturb, perturb_privacy);
  perturb->add_option("--seed", seed, "64-bit seed")->envname("GEOIND_SEED");
  perturb->add_option("--format", format_name, "output format: csv|geojson")
      ->check(CLI::IsMember({"csv", "geojson"}));
  perturb->add_option("--precision", precision, "decimal places")
      ->check(CLI::Range(0, 15));
  perturb->add_option("--mask", mask_path,
                      "GeoJSON polygon(s); redraw until inside (weakens the guarantee)")
      ->check(CLI::ExistingFile);
  perturb->add_option("--max-attempts", max_attempts, "redraw limit with --mask")
      ->check(CLI::PositiveNumber);

  // cloud
  auto* cloud = app.add_subcommand("cloud", "sample n releases of one site");
  double lat = 0.0;
  double lon = 0.0;
  std::size_t n = 512;
  PrivacyFlags cloud_privacy;
  cloud->add_option("--lat", lat, "site latitude")->required();
  cloud->add_option("--lon", lon, "site longitude")->required();
  AddPrivacyFlags(*cloud, cloud_privacy);
  cloud->add_option("--n", n, "number of points")->check(CLI::PositiveNumber);
  cloud->add_option("--seed", seed, "64-bit seed")->envname("GEOIND_SEED");
  cloud->add_option("--format", format_name, "output format: csv|geojson")
      ->check(CLI::IsMember({"csv", "geojson"}));
  cloud->add_option("--precision", precision, "decimal places")
      ->check(CLI::Range(0, 15));
  cloud->add_option("--out", out_path, "output file (default: stdout)");

  // calibrate
  auto* calibrate = app.add_subcommand("calibrate", "epsilon from (level, radius)");
  double level = 0.0;
  double radius = 0.0;
  calibrate->add_option("--level", level, "privacy level l")->required();
  calibrate->add_option("--radius", radius, "protection radius r, meters")->required();

  // validate
  auto* validate = app.add_subcommand(
      "validate", "mean release distance for the nine reference epsilons");
  validate->add_option("--lat", lat, "site latitude")->required();
  validate->add_option("--lon", lon, "site longitude")->required();
  validate->add_option("--n", n, "releases per epsilon")->check(CLI::PositiveNumber);
  validate->add_option("--seed", seed, "64-bit seed")->envname("GEOIND_SEED");
  validate->add_option("--format", format_name, "report format: text|csv")
      ->check(CLI::IsMember({"text", "csv"}));
  validate->add_option("--out", out_path, "output file (default: stdout)");

  // serve
  auto* serve = app.add_subcommand("serve", "run the local JSON service");
  service::ServerOptions server_options;
  serve->add_option("--port", server_options.port, "TCP port")
      ->check(CLI::Range(1, 65535));
  serve->add_option("--host", server_options.host, "bind address");
  serve->add_option("--ui-dir", server_options.static_dir,
                    "directory of web UI assets served at /")
      ->check(CLI::ExistingDirectory);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (perturb->parsed()) {
      const PrivacyParams privacy = ResolvePrivacy(perturb_privacy);
      const DatasetFormat in_format = DatasetFormatFromPath(in_path);
      const DatasetFormat out_format =
          !format_name.empty() ? ParseDatasetFormat(format_name)
          : !out_path.empty()  ? DatasetFormatFromPath(out_path)
                               : in_format;
      std::ifstream in = OpenInput(in_path);
      std::vector<SiteRecord> records = ReadSites(in, in_format);

      std::optional<RegionMask> mask;
      if (!mask_path.empty()) {
        std::ifstream mask_in = OpenInput(mask_path);
        mask = ReadRegionMask(mask_in);
      }
      const std::uint64_t base_seed = ResolveSeed(seed, err);
      std::size_t weakened = 0;
      for (std::size_t i = 0; i < records.size(); ++i) {
        NoiseRng rng(DeriveSeed(base_seed, i));
        const PerturbResult result =
            mask ? PerturbConstrained(records[i].location, privacy, *mask,
                                      max_attempts, rng)
                 : Perturb(records[i].location, privacy, rng);
        if (result.guarantee_weakened) ++weakened;
        records[i].location = result.noisy;
      }
      Emit(WriteSites(records, out_format, precision), out_path, out);
      if (weakened > 0) {
        err << "WARNING: " << weakened << " of " << records.size()
            << " records were redrawn to fall inside the mask. Those releases"
               " do NOT carry the epsilon geo-indistinguishability guarantee:"
               " an adversary who knows the mask learns more than epsilon"
               " allows.\n";
      }
      return kExitOk;
    }

    if (cloud->parsed()) {
      const PrivacyParams privacy = ResolvePrivacy(cloud_privacy);
      const GeoPoint site = GeoPoint::Make(lat, lon);
      const DatasetFormat out_format =
          !format_name.empty() ? ParseDatasetFormat(format_name)
          : !out_path.empty()  ? DatasetFormatFromPath(out_path)
                               : DatasetFormat::kCsv;
      const auto points = GenerateCloud(site, privacy, n, ResolveSeed(seed, err));
      std::vector<SiteRecord> records;
      records.reserve(points.size());
      for (std::size_t i = 0; i < points.size(); ++i) {
        records.push_back(SiteRecord{std::to_string(i + 1), points[i], {}});
      }
      Emit(WriteSites(records, out_format, precision), out_path, out);
      return kExitOk;
    }

    if (calibrate->parsed()) {
      const PrivacyParams privacy = PrivacyParams::Calibrate(level, radius);
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.6g", privacy.epsilon());
      out << "epsilon = " << buf << " per meter\n";
      return kExitOk;
    }

    if (validate->parsed()) {
      const GeoPoint site = GeoPoint::Make(lat, lon);
      const auto rows = Table1Report(site, n, ResolveSeed(seed, err));
      Emit(format_name == "csv" ? FormatTable1Csv(rows) : FormatTable1Text(rows),
           out_path, out);
      for (const auto& row : rows) {
        if (!row.WithinThreeStandardErrors()) {
          err << "validation: mean distance for epsilon " << row.epsilon
              << " is outside the 3-standard-error band\n";
          return kExitValidation;
        }
      }
      return kExitOk;
    }

    if (serve->parsed()) {
      httplib::Server server;
      service::RegisterRoutes(server, server_options, &err);
      err << "serving on http://" << server_options.host << ":"
          << server_options.port << "\n";
      if (!server.listen(server_options.host, server_options.port)) {
        err << "error: cannot listen on " << server_options.host << ":"
            << server_options.port << "\n";
        return kExitValidation;
      }
      return kExitOk;
    }
  } catch (const CLI::Error& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}

}  // namespace geoind::cli
