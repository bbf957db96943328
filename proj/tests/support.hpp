#pragma once

// Hand-rolled generators and independent reference computations shared by
// the unit tests.

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "mrassoc/config.hpp"
#include "mrassoc/partition.hpp"
#include "mrassoc/rates.hpp"

namespace testsupport {

// xorshift64*; deliberately unrelated to the library's RNG.
struct Gen {
  std::uint64_t s;
  explicit Gen(std::uint64_t seed) : s(seed * 0x9E3779B97F4A7C15ull + 1) {}
  std::uint64_t next() {
    s ^= s >> 12;
    s ^= s << 25;
    s ^= s >> 27;
    return s * 2685821657736338717ull;
  }
  int uniform_int(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(next() >> 11) * 0x1.0p-53);
  }
};

inline mrassoc::RateTable random_rates(Gen& g, int users, int nodes, double lo = 1e8,
                                       double hi = 5e9) {
  mrassoc::RateTable t(users, nodes, mrassoc::DuplexMode::full);
  for (int l = 0; l < users; ++l) {
    for (int i = 0; i < nodes; ++i) t.at(l, i) = g.uniform(lo, hi);
  }
  return t;
}

// Sum of per-coalition mean rates, computed straight from an assignment.
inline double objective(const std::vector<int>& assign, const mrassoc::RateTable& r) {
  std::vector<double> sum(static_cast<std::size_t>(r.num_nodes()), 0.0);
  std::vector<int> cnt(static_cast<std::size_t>(r.num_nodes()), 0);
  for (std::size_t l = 0; l < assign.size(); ++l) {
    sum[static_cast<std::size_t>(assign[l])] += r(static_cast<int>(l), assign[l]);
    ++cnt[static_cast<std::size_t>(assign[l])];
  }
  double total = 0.0;
  for (std::size_t i = 0; i < sum.size(); ++i) {
    if (cnt[i] > 0) total += sum[i] / cnt[i];
  }
  return total;
}

// Odometer enumeration of every labeled assignment; returns the best
// objective among those within capacity.
inline double brute_force_best(const mrassoc::RateTable& r, const mrassoc::Capacities& caps,
                               std::vector<int>* best_assign = nullptr) {
  const int users = r.num_users();
  const int nodes = r.num_nodes();
  std::vector<int> a(static_cast<std::size_t>(users), 0);
  double best = -std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<int> cnt(static_cast<std::size_t>(nodes), 0);
    for (int x : a) ++cnt[static_cast<std::size_t>(x)];
    bool ok = cnt.back() <= caps.bs;
    for (int i = 0; i + 1 < nodes; ++i) ok = ok && cnt[static_cast<std::size_t>(i)] <= caps.mr;
    if (ok) {
      const double v = objective(a, r);
      if (v > best) {
        best = v;
        if (best_assign) *best_assign = a;
      }
    }
    int k = users - 1;
    while (k >= 0 && a[static_cast<std::size_t>(k)] == nodes - 1) a[static_cast<std::size_t>(k--)] = 0;
    if (k < 0) break;
    ++a[static_cast<std::size_t>(k)];
  }
  return best;
}

}  // namespace testsupport
