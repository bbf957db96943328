#include <cmath>

#include <gtest/gtest.h>

#include "mrassoc/scenario.hpp"
#include "support.hpp"

using namespace mrassoc;

TEST(Layout, MrsEquallySpaced) {
  SystemConfig c;
  c.num_mrs = 2;
  c.geometry.train_length_m = 200.0;
  const auto l = generate_layout(c);
  ASSERT_EQ(l.mrs.size(), 2u);
  EXPECT_DOUBLE_EQ(l.mrs[0].x, 50.0);
  EXPECT_DOUBLE_EQ(l.mrs[1].x, 150.0);
  EXPECT_DOUBLE_EQ(l.mrs[0].y, 0.0);
}

TEST(Layout, ZeroLengthTrainWithTwoMrsIsInfeasible) {
  SystemConfig c;
  c.num_mrs = 2;
  c.geometry.train_length_m = 0.0;
  EXPECT_THROW(generate_layout(c), ConfigError);
  c.num_mrs = 1;
  EXPECT_NO_THROW(generate_layout(c));
}

TEST(Layout, UsersInsideTheirRegions) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SystemConfig c;
    c.rng_seed = seed;
    c.num_users = 50;
    const auto l = generate_layout(c);
    const auto& g = c.geometry;
    int onboard = 0;
    for (std::size_t k = 0; k < l.users.size(); ++k) {
      const auto& p = l.users[k];
      if (l.onboard[k]) {
        ++onboard;
        EXPECT_GE(p.x, 0.0);
        EXPECT_LE(p.x, g.train_length_m);
        EXPECT_LE(std::abs(p.y), g.train_width_m / 2.0);
      } else {
        EXPECT_GE(p.y, g.outdoor_gap_m);
        EXPECT_LE(p.y, g.outdoor_gap_m + g.outdoor_depth_m);
        EXPECT_LE(std::abs(p.x - g.train_length_m / 2.0), g.track_length_m / 2.0);
      }
    }
    EXPECT_EQ(onboard, 25);
  }
}

TEST(Scenario, DeterministicForSameSeed) {
  SystemConfig c;
  c.rng_seed = 42;
  c.fading = FadingModel::nakagami;
  const auto a = build_scenario(c);
  const auto b = build_scenario(c);
  EXPECT_TRUE(a == b);
  c.rng_seed = 43;
  EXPECT_FALSE(a == build_scenario(c));
}

TEST(Scenario, DistanceClamp) {
  SystemConfig c;
  c.num_mrs = 1;
  c.num_users = 1;
  c.min_distance_m = 1.0;
  Layout l;
  l.bs = {100.0, 50.0};
  l.mrs = {{100.0, 0.0}};
  l.users = {{100.2, 0.0}};
  l.onboard = {true};
  const auto s = scenario_from_layout(c, l);
  EXPECT_EQ(s.link_distance(0, 0), 1.0);
  EXPECT_NEAR(s.link_distance(0, 1), std::hypot(0.2, 50.0), 1e-12);
}

TEST(Scenario, DistancesNeverBelowMinimum) {
  testsupport::Gen g(5);
  for (int trial = 0; trial < 50; ++trial) {
    SystemConfig c;
    c.rng_seed = g.next();
    c.num_users = g.uniform_int(1, 40);
    c.num_mrs = g.uniform_int(1, 6);
    c.min_distance_m = g.uniform(0.5, 20.0);
    const auto s = build_scenario(c);
    for (double d : s.distance) EXPECT_GE(d, c.min_distance_m);
  }
}

TEST(Scenario, RateTableMatchesLinkBudget) {
  SystemConfig c;
  c.num_users = 12;
  c.num_mrs = 3;
  c.penetration_loss_db = 10.0;
  const auto s = build_scenario(c);
  const double g0 = std::pow(10.0, channel::peak_gain_db(c.half_power_beamwidth_deg) / 10.0);
  const double k0 = std::pow(c.carrier_wavelength_m / (4.0 * std::acos(-1.0)), 2.0);
  for (int l = 0; l < c.num_users; ++l) {
    for (int i = 0; i <= c.num_mrs; ++i) {
      const bool bs = i == c.num_mrs;
      const double p = std::pow(10.0, ((bs ? c.bs_tx_power_dbm : c.mr_tx_power_dbm) - 30.0) / 10.0);
      const double loss = (bs && s.layout.onboard[l]) ? 10.0 : 1.0;
      const double d = s.link_distance(l, i);
      const double rx = k0 * g0 * g0 * p / (d * d) / loss;
      const double alpha = bs ? c.bs_bandwidth_fraction : (1.0 - c.bs_bandwidth_fraction) / c.num_mrs;
      const double noise = std::pow(10.0, (c.noise_psd_dbm_per_mhz - 30.0) / 10.0) * alpha * 2160.0;
      const double interference = bs ? 0.0 : c.si_cancellation * std::pow(10.0, (23.0 - 30.0) / 10.0);
      const double expected = alpha * c.total_bandwidth_hz * std::log2(1.0 + rx / (noise + interference));
      EXPECT_NEAR(s.rates(l, i), expected, 1e-9 * expected);
    }
  }
}

TEST(Scenario, NakagamiFadingHasUnitMean) {
  SystemConfig c;
  c.fading = FadingModel::nakagami;
  c.nakagami_m = 3.0;
  c.num_users = 2000;
  c.num_mrs = 4;
  const auto s = build_scenario(c);
  double sum = 0.0;
  for (double f : s.fading) {
    EXPECT_GT(f, 0.0);
    sum += f;
  }
  EXPECT_NEAR(sum / static_cast<double>(s.fading.size()), 1.0, 0.02);
}

TEST(Scenario, InvalidConfigRejected) {
  SystemConfig c;
  c.bs_bandwidth_fraction = 1.0;
  EXPECT_THROW(build_scenario(c), ConfigError);
}

TEST(Rng, StreamsAreIndependentAndReproducible) {
  auto a = make_rng(7, RngStream::topology);
  auto b = make_rng(7, RngStream::topology);
  auto c = make_rng(7, RngStream::fading);
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
}
