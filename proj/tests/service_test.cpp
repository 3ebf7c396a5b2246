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

#include "geoind/service.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "gtest/gtest.h"

namespace geoind::service {
namespace {

const Params kRonsReef{{"lat", "26.689"}, {"lon", "-80.018"}};

Params With(Params base, const Params& extra) {
  for (const auto& [k, v] : extra) base[k] = v;
  return base;
}

TEST(HandlePerturb, EqualsLibraryPerturb) {
  const ApiResponse res = HandlePerturbBody(
      R"({"lat":26.689,"lon":-80.018,"epsilon":0.1,"seed":7})");
  ASSERT_EQ(res.status, 200) << res.body.dump();
  NoiseRng rng(7);
  const PerturbResult expected = Perturb(GeoPoint{26.689, -80.018},
                                         PrivacyParams::FromEpsilon(0.1), rng);
  EXPECT_EQ(res.body["lat"].get<double>(), RoundToDecimals(expected.noisy.lat, 6));
  EXPECT_EQ(res.body["lon"].get<double>(), RoundToDecimals(expected.noisy.lon, 6));
  EXPECT_EQ(res.body["distance_m"].get<double>(), expected.applied_radius_m);
  EXPECT_EQ(res.body["guarantee_weakened"], false);
  EXPECT_EQ(res.body["epsilon"].get<double>(), 0.1);
  EXPECT_EQ(res.body["seed"].get<std::uint64_t>(), 7u);
  // Frozen from the reference build.
  EXPECT_EQ(res.body["lat"].get<double>(), 26.68901);
  EXPECT_EQ(res.body["lon"].get<double>(), -80.018083);
  EXPECT_EQ(res.body.dump(), HandlePerturbBody(
      R"({"lat":26.689,"lon":-80.018,"epsilon":0.1,"seed":7})").body.dump());
}

TEST(HandlePerturb, CalibrationPairMatchesEpsilon) {
  const ApiResponse pair = HandlePerturb(
      With(kRonsReef, {{"level", std::to_string(std::numbers::ln2)}, {"radius", "100"}, {"seed", "7"}}));
  const ApiResponse eps = HandlePerturb(
      With(kRonsReef, {{"epsilon", std::to_string(std::numbers::ln2 / 100)}, {"seed", "7"}}));
  ASSERT_EQ(pair.status, 200);
  ASSERT_EQ(eps.status, 200);
  EXPECT_NEAR(pair.body["lat"].get<double>(), eps.body["lat"].get<double>(), 1e-6);
  EXPECT_NEAR(pair.body["lon"].get<double>(), eps.body["lon"].get<double>(), 1e-6);

  const ApiResponse exact = HandlePerturbBody(
      R"({"lat":26.689,"lon":-80.018,"level":0.6931471805599453,"radius":100,"seed":7})");
  const ApiResponse exact_eps = HandlePerturbBody(
      R"({"lat":26.689,"lon":-80.018,"epsilon":0.006931471805599453,"seed":7})");
  EXPECT_EQ(exact.body, exact_eps.body);
}

TEST(HandlePerturb, ValidationErrors) {
  auto code = [](const ApiResponse& r) { return r.body["code"].get<std::string>(); };
  ApiResponse r = HandlePerturb(With(kRonsReef, {{"epsilon", "0"}}));
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(code(r), "epsilon_out_of_range");
  EXPECT_TRUE(r.body.contains("message"));

  r = HandlePerturb(With(kRonsReef, {{"epsilon", "-1"}}));
  EXPECT_EQ(code(r), "epsilon_out_of_range");
  r = HandlePerturb(kRonsReef);
  EXPECT_EQ(code(r), "missing_parameter");
  r = HandlePerturb({{"lon", "1"}, {"epsilon", "0.1"}});
  EXPECT_EQ(code(r), "missing_parameter");
  r = HandlePerturb({{"lat", "95"}, {"lon", "1"}, {"epsilon", "0.1"}});
  EXPECT_EQ(code(r), "coordinate_out_of_range");
  r = HandlePerturb(With(kRonsReef, {{"epsilon", "0.1"}, {"level", "1"}, {"radius", "2"}}));
  EXPECT_EQ(code(r), "conflicting_parameters");
  r = HandlePerturb(With(kRonsReef, {{"epsilon", "abc"}}));
  EXPECT_EQ(code(r), "invalid_parameter");
  r = HandlePerturb(With(kRonsReef, {{"epsilon", "0.1"}, {"seed", "-3"}}));
  EXPECT_EQ(code(r), "invalid_parameter");
  r = HandlePerturbBody("[1,2]");
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(code(r), "invalid_json");
}

TEST(HandlePerturb, EchoesEntropySeed) {
  const ApiResponse r = HandlePerturb(With(kRonsReef, {{"epsilon", "0.1"}}));
  ASSERT_EQ(r.status, 200);
  const auto seed = r.body["seed"].get<std::uint64_t>();
  EXPECT_LT(seed, std::uint64_t{1} << 53);
  const ApiResponse replay =
      HandlePerturb(With(kRonsReef, {{"epsilon", "0.1"}, {"seed", std::to_string(seed)}}));
  EXPECT_EQ(replay.body, r.body);
}

TEST(HandleCloud, FeatureCollectionWithStats) {
  const ApiResponse r = HandleCloud(
      With(kRonsReef, {{"epsilon", "0.05"}, {"n", "512"}, {"seed", "7"}}));
  ASSERT_EQ(r.status, 200) << r.body.dump();
  EXPECT_EQ(r.body["type"], "FeatureCollection");
  ASSERT_EQ(r.body["features"].size(), 512u);
  EXPECT_EQ(r.body["stats"]["expected_mean_m"].get<double>(), 40.0);
  EXPECT_EQ(r.body["stats"]["n"].get<int>(), 512);
  EXPECT_EQ(r.body["epsilon"].get<double>(), 0.05);
  EXPECT_EQ(r.body["seed"].get<int>(), 7);
  const auto& f = r.body["features"][0];
  EXPECT_EQ(f["geometry"]["type"], "Point");
  EXPECT_TRUE(f["properties"].contains("distance_m"));

  const auto cloud = GenerateCloud(GeoPoint{26.689, -80.018},
                                   PrivacyParams::FromEpsilon(0.05), 512, 7);
  EXPECT_EQ(f["geometry"]["coordinates"][0].get<double>(), RoundToDecimals(cloud[0].lon, 6));
  EXPECT_EQ(f["geometry"]["coordinates"][1].get<double>(), RoundToDecimals(cloud[0].lat, 6));

  const ApiResponse again = HandleCloud(
      With(kRonsReef, {{"epsilon", "0.05"}, {"n", "512"}, {"seed", "7"}}));
  EXPECT_EQ(again.body.dump(), r.body.dump());
}

TEST(HandleCloud, SizeLimits) {
  EXPECT_EQ(HandleCloud(With(kRonsReef, {{"epsilon", "0.05"}, {"n", "0"}})).status, 400);
  EXPECT_EQ(HandleCloud(With(kRonsReef, {{"epsilon", "0.05"}, {"n", "100001"}})).status, 413);
  EXPECT_EQ(HandleCloud(With(kRonsReef, {{"epsilon", "0.05"}, {"n", "1.5"}})).status, 400);
  const ApiResponse one = HandleCloud(With(kRonsReef, {{"epsilon", "0.05"}, {"n", "1"}}));
  EXPECT_EQ(one.body["features"].size(), 1u);
  const ApiResponse dflt = HandleCloud(With(kRonsReef, {{"epsilon", "0.05"}}));
  EXPECT_EQ(dflt.body["features"].size(), kDefaultCloudSize);
}

TEST(HandleTable1, NineEntries) {
  const ApiResponse r = HandleTable1(With(kRonsReef, {{"n", "512"}, {"seed", "7"}}));
  ASSERT_EQ(r.status, 200);
  ASSERT_TRUE(r.body.is_array());
  ASSERT_EQ(r.body.size(), 9u);
  for (std::size_t i = 0; i < 9; ++i) {
    EXPECT_EQ(r.body[i]["epsilon"].get<double>(), kTable1Epsilons[i]);
    EXPECT_EQ(r.body[i]["expected_m"].get<double>(), 2.0 / kTable1Epsilons[i]);
    EXPECT_EQ(r.body[i]["seed"].get<int>(), 7);
  }
  EXPECT_EQ(HandleTable1({{"lon", "1"}}).status, 400);
}

TEST(HandleTable1, LargeSampleWithinThreePercent) {
  const ApiResponse r = HandleTable1(With(kRonsReef, {{"n", "10000"}, {"seed", "1"}}));
  ASSERT_EQ(r.status, 200);
  for (const auto& row : r.body) {
    const double expected = row["expected_m"].get<double>();
    EXPECT_LE(std::abs(row["mean_m"].get<double>() - expected) / expected, 0.03);
  }
}

class LiveServer : public ::testing::Test {
 protected:
  void SetUp() override {
    RegisterRoutes(server_, ServerOptions{}, &log_);
    port_ = server_.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  httplib::Server server_;
  std::ostringstream log_;
  std::thread thread_;
  int port_ = 0;
};

TEST_F(LiveServer, EndpointsOverHttp) {
  httplib::Client client("127.0.0.1", port_);
  auto post = client.Post("/api/perturb",
                          R"({"lat":26.689,"lon":-80.018,"epsilon":0.1,"seed":7})",
                          "application/json");
  ASSERT_TRUE(post);
  EXPECT_EQ(post->status, 200);
  EXPECT_EQ(nlohmann::json::parse(post->body),
            HandlePerturbBody(R"({"lat":26.689,"lon":-80.018,"epsilon":0.1,"seed":7})").body);

  auto cloud = client.Get("/api/cloud?lat=26.689&lon=-80.018&epsilon=0.05&n=512&seed=7");
  ASSERT_TRUE(cloud);
  EXPECT_EQ(cloud->status, 200);
  EXPECT_EQ(nlohmann::json::parse(cloud->body)["features"].size(), 512u);

  auto big = client.Get("/api/cloud?lat=26.689&lon=-80.018&epsilon=0.05&n=200000");
  ASSERT_TRUE(big);
  EXPECT_EQ(big->status, 413);
  EXPECT_EQ(nlohmann::json::parse(big->body)["code"], "n_too_large");

  auto table = client.Get("/api/table1?lon=-80.018&n=512");
  ASSERT_TRUE(table);
  EXPECT_EQ(table->status, 400);

  auto index = client.Get("/");
  ASSERT_TRUE(index);
  EXPECT_EQ(index->status, 200);

  // Coordinates never reach the access log.
  const std::string log = log_.str();
  EXPECT_NE(log.find("/api/cloud"), std::string::npos);
  EXPECT_EQ(log.find("26.689"), std::string::npos);
  EXPECT_EQ(log.find("80.018"), std::string::npos);
}

}  // namespace
}  // namespace geoind::service
