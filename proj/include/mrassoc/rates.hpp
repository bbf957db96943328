#pragma once

// PHY rates per (user, node) and the throughput metrics built on them.
// TDMA with equal time shares: achieved throughput = PHY rate / coalition
// size. Coalition utility is the mean member PHY rate, i.e. the node's total.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mrassoc/channel.hpp"
#include "mrassoc/config.hpp"
#include "mrassoc/errors.hpp"
#include "mrassoc/partition.hpp"

namespace mrassoc {

class RateTable {
 public:
  RateTable() = default;
  RateTable(int num_users, int num_nodes, DuplexMode duplex)
      : num_users_(num_users),
        num_nodes_(num_nodes),
        duplex_(duplex),
        phy_(static_cast<std::size_t>(num_users) * static_cast<std::size_t>(num_nodes), 0.0) {}

  int num_users() const { return num_users_; }
  int num_nodes() const { return num_nodes_; }
  int bs_index() const { return num_nodes_ - 1; }
  DuplexMode duplex() const { return duplex_; }

  double operator()(int user, int node) const { return phy_[index(user, node)]; }
  double& at(int user, int node) { return phy_[index(user, node)]; }
  std::span<const double> row(int user) const {
    return {phy_.data() + static_cast<std::size_t>(user) * static_cast<std::size_t>(num_nodes_),
            static_cast<std::size_t>(num_nodes_)};
  }

  bool operator==(const RateTable&) const = default;

 private:
  std::size_t index(int user, int node) const {
    if (user < 0 || user >= num_users_ || node < 0 || node >= num_nodes_) {
      throw DomainError("RateTable: index (" + std::to_string(user) + ", " +
                        std::to_string(node) + ") out of range");
    }
    return static_cast<std::size_t>(user) * static_cast<std::size_t>(num_nodes_) +
           static_cast<std::size_t>(node);
  }

  int num_users_ = 0;
  int num_nodes_ = 0;
  DuplexMode duplex_ = DuplexMode::full;
  std::vector<double> phy_;
};

/// Shannon rate (bit/s) of one link given the received power and the
/// sub-band fraction of the serving node. BS links are noise-limited; MR
/// links in full duplex also see residual self-interference; MR links in
/// half duplex lose half the air time to the backhaul hop and see no RSI.
inline double link_phy_rate(const SystemConfig& c, double alpha, bool serving_node_is_bs,
                            double rx_power_w) {
  const double band_hz = alpha * c.total_bandwidth_hz;
  const double noise = channel::noise_power_w(alpha, c.total_bandwidth_hz, c.noise_psd_dbm_per_mhz);
  if (serving_node_is_bs) return band_hz * std::log2(1.0 + channel::snr(rx_power_w, noise));
  if (c.duplex_mode == DuplexMode::full) {
    const double sinr = channel::sinr_fd(rx_power_w, noise, c.si_cancellation,
                                         channel::dbm_to_w(c.mr_tx_power_dbm));
    return band_hz * std::log2(1.0 + sinr);
  }
  return 0.5 * band_hz * std::log2(1.0 + channel::snr(rx_power_w, noise));
}

inline double coalition_utility(std::span<const int> members, int node, const RateTable& rates) {
  if (members.empty()) return 0.0;
  double sum = 0.0;
  for (int l : members) sum += rates(l, node);
  return sum / static_cast<double>(members.size());
}

inline double coalition_utility(const Partition& p, int node, const RateTable& rates) {
  return coalition_utility(p.members(node), node, rates);
}

/// Sum of coalition utilities, i.e. the total throughput delivered.
inline double total_utility(const Partition& p, const RateTable& rates) {
  double total = 0.0;
  for (int i = 0; i < p.num_nodes(); ++i) total += coalition_utility(p, i, rates);
  return total;
}

inline double achieved_user_throughput(int user, const Partition& p, const RateTable& rates) {
  const int c = p.coalition_of(user);
  if (c == Partition::kUnassigned) {
    throw DomainError("achieved_user_throughput: user " + std::to_string(user) + " is unassigned");
  }
  return rates(user, c) / static_cast<double>(p.size(c));
}

inline void require_complete(const Partition& p, const RateTable& rates, const char* who) {
  if (!p.complete()) throw DomainError(std::string(who) + ": partition is incomplete");
  if (p.num_users() != rates.num_users() || p.num_nodes() != rates.num_nodes()) {
    throw DomainError(std::string(who) + ": partition and rate table disagree in shape");
  }
}

/// Mean achieved throughput over all N users (bit/s per user).
inline double system_average_throughput(const Partition& p, const RateTable& rates) {
  require_complete(p, rates, "system_average_throughput");
  return total_utility(p, rates) / static_cast<double>(p.num_users());
}

/// Mean utility over the n+1 coalitions (bit/s per coalition). This is the
/// average system throughput reported by the experiment harness.
inline double mean_coalition_utility(const Partition& p, const RateTable& rates) {
  require_complete(p, rates, "mean_coalition_utility");
  return total_utility(p, rates) / static_cast<double>(p.num_nodes());
}

struct ClassThroughput {
  std::optional<double> bs_users;
  std::optional<double> mr_users;
};

/// Mean achieved throughput of BS-served users and of MR-served users; a
/// class with no members is reported as absent.
inline ClassThroughput per_class_throughput(const Partition& p, const RateTable& rates) {
  require_complete(p, rates, "per_class_throughput");
  double bs_sum = 0.0, mr_sum = 0.0;
  int bs_n = 0, mr_n = 0;
  for (int l = 0; l < p.num_users(); ++l) {
    const double r = achieved_user_throughput(l, p, rates);
    if (p.is_bs(p.coalition_of(l))) {
      bs_sum += r;
      ++bs_n;
    } else {
      mr_sum += r;
      ++mr_n;
    }
  }
  ClassThroughput out;
  if (bs_n > 0) out.bs_users = bs_sum / bs_n;
  if (mr_n > 0) out.mr_users = mr_sum / mr_n;
  return out;
}

}  // namespace mrassoc
