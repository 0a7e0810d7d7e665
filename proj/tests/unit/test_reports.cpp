#include <doctest.h>

#include <limits>
#include <sstream>

#include "potlab/builders.hpp"
#include "potlab/reports.hpp"

using namespace potlab;

TEST_CASE("config hash is FNV-1a of the compact dump") {
  // independent: python FNV-1a over b"null"
  CHECK(hex(config_hash(Json::parse("null"))) == "5b9bc4ba528108e4");
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : std::string("{\"a\":1,\"b\":[2,3]}")) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  CHECK(config_hash(Json{{"b", {2, 3}}, {"a", 1}}) == h);
  CHECK(config_hash(Json{{"a", 1}, {"b", {2, 3}}}) == h);
  CHECK(config_hash(Json{{"a", 2}}) != config_hash(Json{{"a", 1}}));
}

TEST_CASE("hex is zero padded lower case") {
  CHECK(hex(0) == "0000000000000000");
  CHECK(hex(0xABCULL) == "0000000000000abc");
}

TEST_CASE("envelope layout") {
  const Json config{{"command", "x"}};
  const Json env = envelope(config, Json{{"value", 1.5}});
  CHECK(env.at("tool") == "potlab");
  CHECK(env.at("version") == version());
  CHECK(env.at("config") == config);
  CHECK(env.at("config_hash") == hex(config_hash(config)));
  CHECK(env.at("result").at("value") == 1.5);
}

TEST_CASE("profile CSV round-trips exact doubles") {
  const BallProfile profile = lattice_profile(2, 3);
  std::ostringstream out;
  write_profile_csv(out, profile);
  CHECK(out.str() ==
        "radius,ball_measure,sphere_count,sphere_measure\n"
        "0,4,1,4\n1,20,4,16\n2,52,8,32\n3,100,12,48\n");
}

TEST_CASE("checkpoint CSV and verdict JSON") {
  const std::vector<double> terms(65, 0.1);
  const SeriesVerdict v = summarize_series(terms, 1);
  std::ostringstream out;
  write_checkpoints_csv(out, v);
  CHECK(out.str().rfind("n,partial_sum\n1,0.1\n2,0.2\n", 0) == 0);
  const Json j = to_json(v);
  CHECK(j.at("checkpoints").size() == v.checkpoints.size());
  CHECK(j.at("model") == to_string(v.model));
}

TEST_CASE("non-finite values serialize as null") {
  GaussianBand band;
  band.upper_constant = std::numeric_limits<double>::infinity();
  CHECK(to_json(band).at("upper_constant").is_null());
}
