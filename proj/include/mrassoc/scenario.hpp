#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "mrassoc/channel.hpp"
#include "mrassoc/config.hpp"
#include "mrassoc/errors.hpp"
#include "mrassoc/partition.hpp"
#include "mrassoc/rates.hpp"

namespace mrassoc {

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

inline double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

inline double clamped_distance(const Point& a, const Point& b, double min_distance_m) {
  return std::max(distance(a, b), min_distance_m);
}

// Node positions and user placement before any link computation.
struct Layout {
  Point bs;
  std::vector<Point> mrs;
  std::vector<Point> users;
  std::vector<bool> onboard;

  bool operator==(const Layout&) const = default;
};

// Independent random streams derived from one seed.
enum class RngStream : std::uint32_t { topology = 0, fading = 1, initial_partition = 2 };

inline std::mt19937_64 make_rng(std::uint64_t seed, RngStream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

/// Realized topology plus everything derived from it. Immutable once built.
struct Scenario {
  SystemConfig config;
  Layout layout;
  std::vector<double> alpha;     // per node, MRs first, BS last
  std::vector<double> distance;  // [user * num_nodes + node], clamped
  std::vector<double> fading;    // |h0|^2 per link
  RateTable rates;

  int num_users() const { return config.num_users; }
  int num_mrs() const { return config.num_mrs; }
  int num_nodes() const { return config.num_mrs + 1; }
  int bs_index() const { return config.num_mrs; }
  Capacities capacities() const {
    return {config.effective_bs_capacity(), config.effective_mr_capacity()};
  }
  const Point& node_position(int node) const {
    return node == bs_index() ? layout.bs : layout.mrs.at(static_cast<std::size_t>(node));
  }
  double link_distance(int user, int node) const {
    return distance.at(static_cast<std::size_t>(user) * static_cast<std::size_t>(num_nodes()) +
                       static_cast<std::size_t>(node));
  }
  double link_fading(int user, int node) const {
    return fading.at(static_cast<std::size_t>(user) * static_cast<std::size_t>(num_nodes()) +
                     static_cast<std::size_t>(node));
  }

  bool operator==(const Scenario&) const = default;
};

/// Received power on the serving link, both antennas at boresight. BS links
/// to onboard users additionally suffer the car-body penetration loss.
inline double serving_rx_power_w(const Scenario& s, int user, int node) {
  const SystemConfig& c = s.config;
  const bool via_bs = node == s.bs_index();
  const double g0 = channel::db_to_linear(channel::antenna_gain_db(0.0, c.half_power_beamwidth_deg));
  const double tx_w = channel::dbm_to_w(via_bs ? c.bs_tx_power_dbm : c.mr_tx_power_dbm);
  const bool onboard = s.layout.onboard.at(static_cast<std::size_t>(user));
  const double loss = (via_bs && onboard) ? channel::db_to_linear(c.penetration_loss_db) : 1.0;
  return channel::received_power_w(tx_w, g0, g0, s.link_distance(user, node),
                                   s.link_fading(user, node), loss, c.carrier_wavelength_m,
                                   c.path_loss_exponent);
}

/// PHY rate (bit/s) of `user` when served alone by `node`, evaluated from
/// the link budget (the scenario's rate table caches exactly this value).
inline double phy_rate(int user, int node, const Scenario& s) {
  if (user < 0 || user >= s.num_users() || node < 0 || node >= s.num_nodes()) {
    throw DomainError("phy_rate: index out of range");
  }
  return link_phy_rate(s.config, s.alpha[static_cast<std::size_t>(node)], node == s.bs_index(),
                       serving_rx_power_w(s, user, node));
}

/// Builds a scenario from explicit positions. Validates the config.
inline Scenario scenario_from_layout(const SystemConfig& config, Layout layout) {
  require_valid(config);
  const int n = config.num_mrs;
  const int users = config.num_users;
  if (static_cast<int>(layout.mrs.size()) != n || static_cast<int>(layout.users.size()) != users ||
      static_cast<int>(layout.onboard.size()) != users) {
    throw ConfigError("layout does not match num_mrs/num_users");
  }
  Scenario s;
  s.config = config;
  s.layout = std::move(layout);
  s.alpha = bandwidth_fractions(config);
  const int nodes = n + 1;
  const auto links = static_cast<std::size_t>(users) * static_cast<std::size_t>(nodes);
  s.distance.resize(links);
  s.fading.assign(links, 1.0);

  if (config.fading == FadingModel::nakagami) {
    auto rng = make_rng(config.rng_seed, RngStream::fading);
    std::gamma_distribution<double> power(config.nakagami_m, 1.0 / config.nakagami_m);
    for (auto& f : s.fading) f = power(rng);
  }

  for (int l = 0; l < users; ++l) {
    for (int i = 0; i < nodes; ++i) {
      s.distance[static_cast<std::size_t>(l) * nodes + i] = clamped_distance(
          s.layout.users[static_cast<std::size_t>(l)], s.node_position(i), config.min_distance_m);
    }
  }

  s.rates = RateTable(users, nodes, config.duplex_mode);
  for (int l = 0; l < users; ++l) {
    for (int i = 0; i < nodes; ++i) s.rates.at(l, i) = phy_rate(l, i, s);
  }
  return s;
}

/// Places nodes and users per the configured geometry. MRs are equally
/// spaced along the train, onboard users uniform over the car body and
/// outdoor users uniform over the roadside rectangle.
inline Layout generate_layout(const SystemConfig& config) {
  const Geometry& g = config.geometry;
  const int n = config.num_mrs;
  if (g.train_length_m <= 0.0 && n >= 2) {
    throw ConfigError("infeasible geometry: a zero-length train cannot carry " +
                      std::to_string(n) + " MRs");
  }
  Layout layout;
  layout.bs = {g.train_length_m / 2.0, g.bs_offset_m};
  for (int i = 0; i < n; ++i) {
    layout.mrs.push_back({(i + 0.5) * g.train_length_m / n, 0.0});
  }

  auto rng = make_rng(config.rng_seed, RngStream::topology);
  const int users = config.num_users;
  const int onboard = static_cast<int>(std::lround(g.onboard_fraction * users));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double x_mid = g.train_length_m / 2.0;
  for (int l = 0; l < users; ++l) {
    const bool on = l < onboard;
    const double u = unit(rng);
    const double v = unit(rng);
    Point p;
    if (on) {
      p = {u * g.train_length_m, (v - 0.5) * g.train_width_m};
    } else {
      p = {x_mid + (u - 0.5) * g.track_length_m, g.outdoor_gap_m + v * g.outdoor_depth_m};
    }
    layout.users.push_back(p);
    layout.onboard.push_back(on);
  }
  return layout;
}

inline Scenario build_scenario(const SystemConfig& config) {
  require_valid(config);
  return scenario_from_layout(config, generate_layout(config));
}

}  // namespace mrassoc
