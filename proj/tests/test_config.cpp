#include <algorithm>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "mrassoc/config.hpp"
#include "mrassoc/config_io.hpp"

using namespace mrassoc;

namespace {

bool has(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

std::filesystem::path configs_dir() {
  return std::filesystem::path(__FILE__).parent_path().parent_path() / "configs";
}

}  // namespace

TEST(Validate, CapacityInfeasible) {
  SystemConfig c;
  c.num_users = 40;
  c.num_mrs = 2;
  c.bs_capacity = 20;
  c.mr_capacity = 5;
  EXPECT_TRUE(has(validate_config(c), "capacity infeasible: 20+2\xC2\xB7" "5 < 40"));
  EXPECT_THROW(require_valid(c), ConfigError);
}

TEST(Validate, ReferenceRunIsValid) {
  SystemConfig c;
  c.bs_capacity = 40;
  c.mr_capacity = 40;
  EXPECT_TRUE(validate_config(c).empty());
  EXPECT_TRUE(validate_config(SystemConfig{}).empty());
}

TEST(Validate, BsFractionBounds) {
  SystemConfig c;
  c.bs_bandwidth_fraction = 1.0;
  EXPECT_TRUE(has(validate_config(c), "BS fraction must be < 1"));
  c.bs_bandwidth_fraction = 0.0;
  EXPECT_TRUE(has(validate_config(c), "BS fraction must be > 0"));
}

TEST(Validate, ReportsEveryViolation) {
  SystemConfig c;
  c.num_mrs = 0;
  c.min_distance_m = 0.0;
  c.half_power_beamwidth_deg = 200.0;
  c.si_cancellation = -1.0;
  EXPECT_GE(validate_config(c).size(), 4u);
}

TEST(BandwidthFractions, Examples) {
  SystemConfig c;
  c.bs_bandwidth_fraction = 1.0 / 3.0;
  c.num_mrs = 2;
  auto a = bandwidth_fractions(c);
  ASSERT_EQ(a.size(), 3u);
  for (double x : a) EXPECT_NEAR(x, 1.0 / 3.0, 1e-15);

  c.bs_bandwidth_fraction = 0.4;
  c.num_mrs = 3;
  a = bandwidth_fractions(c);
  ASSERT_EQ(a.size(), 4u);
  EXPECT_NEAR(a[0], 0.2, 1e-15);
  EXPECT_NEAR(a[1], 0.2, 1e-15);
  EXPECT_NEAR(a[2], 0.2, 1e-15);
  EXPECT_DOUBLE_EQ(a[3], 0.4);

  c.bs_bandwidth_fraction = 0.1;
  c.num_mrs = 1;
  a = bandwidth_fractions(c);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_NEAR(a[0], 0.9, 1e-15);
  EXPECT_DOUBLE_EQ(a[1], 0.1);
}

TEST(BandwidthFractions, SumToOneProperty) {
  std::uint64_t x = 88172645463325252ull;
  auto next = [&] {
    x ^= x << 13;
    x ^= x >> 7;
    x ^= x << 17;
    return x;
  };
  for (int trial = 0; trial < 2000; ++trial) {
    SystemConfig c;
    c.num_mrs = 1 + static_cast<int>(next() % 12);
    c.bs_bandwidth_fraction = 1e-3 + (next() % 997) / 1000.0;
    double sum = 0.0;
    for (double a : bandwidth_fractions(c)) sum += a;
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(ConfigIo, JsonRoundTrip) {
  SystemConfig c;
  c.num_mrs = 4;
  c.bs_capacity = 12;
  c.fading = FadingModel::nakagami;
  c.geometry.train_length_m = 123.5;
  c.rng_seed = 0xfedcba9876543210ull;
  EXPECT_EQ(config_from_json(to_json(c)), c);
  EXPECT_EQ(config_from_json(json::parse(to_json(c).dump())), c);
}

TEST(ConfigIo, TomlAndJsonAgree) {
  const auto t = load_config(configs_dir() / "base.toml");
  const auto j = load_config(configs_dir() / "base.json");
  EXPECT_EQ(t, j);
  EXPECT_EQ(t.num_users, 40);
  EXPECT_DOUBLE_EQ(t.si_cancellation, 1e-13);
}

TEST(ConfigIo, FormatSniffing) {
  const auto a = config_from_json(parse_document("num_mrs = 3\n[geometry]\ntrain_length_m = 90.0\n"));
  const auto b = config_from_json(parse_document(R"({"num_mrs": 3, "geometry": {"train_length_m": 90}})"));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.num_mrs, 3);
}

TEST(ConfigIo, UnknownKeysAreErrors) {
  EXPECT_THROW(config_from_json(json{{"num_mrz", 2}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"geometry", {{"length", 1.0}}}}), ConfigError);
  EXPECT_THROW(config_from_json(parse_document("bogus = 1\n")), ConfigError);
}

TEST(ConfigIo, TypeErrors) {
  EXPECT_THROW(config_from_json(json{{"num_mrs", 2.5}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"num_users", "forty"}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"duplex_mode", "triple"}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"rng_seed", -1}}), ConfigError);
  EXPECT_EQ(config_from_json(json{{"num_mrs", 3.0}}).num_mrs, 3);
  EXPECT_THROW(parse_document("{ not json"), ConfigError);
  EXPECT_THROW(parse_document("x = = 1"), ConfigError);
}

TEST(ConfigIo, MissingFile) {
  EXPECT_THROW(load_config("/nonexistent/dir/cfg.toml"), IoError);
}

TEST(ConfigIo, DottedOverrides) {
  const SystemConfig base;
  EXPECT_EQ(with_override(base, "num_mrs", parse_override_value("4")).num_mrs, 4);
  EXPECT_EQ(with_override(base, "duplex_mode", parse_override_value("half")).duplex_mode,
            DuplexMode::half);
  EXPECT_DOUBLE_EQ(
      with_override(base, "geometry.train_length_m", parse_override_value("150")).geometry.train_length_m,
      150.0);
  EXPECT_FALSE(with_override(base, "bs_capacity", parse_override_value("null")).bs_capacity);
  EXPECT_THROW(with_override(base, "geometry.nope", json(1)), ConfigError);
  EXPECT_THROW(with_override(base, "num_mrs.x", json(1)), ConfigError);
  EXPECT_THROW(with_override(base, "", json(1)), ConfigError);
}
