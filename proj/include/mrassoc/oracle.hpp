#pragma once

// Exhaustive search over labeled assignments (user -> node): all (n+1)^N
// of them, minus those breaking a capacity cap.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mrassoc/errors.hpp"
#include "mrassoc/partition.hpp"
#include "mrassoc/rates.hpp"
#include "mrassoc/scenario.hpp"

namespace mrassoc {

struct OracleLimits {
  int max_users = 14;
  int max_mrs = 4;
};

inline double assignment_space_size(int num_users, int num_mrs) {
  return std::pow(static_cast<double>(num_mrs) + 1.0, num_users);
}

inline void check_oracle_cap(int num_users, int num_mrs, const OracleLimits& limits) {
  if (num_users <= limits.max_users && num_mrs <= limits.max_mrs) return;
  std::ostringstream os;
  os << "exhaustive search refused: N=" << num_users << ", n=" << num_mrs << " spans "
     << assignment_space_size(num_users, num_mrs) << " assignments ((n+1)^N); cap is N<="
     << limits.max_users << ", n<=" << limits.max_mrs;
  throw OracleCapError(os.str());
}

namespace detail {

template <typename Visitor>
void enumerate_from(int user, std::vector<int>& assignment, std::vector<int>& counts,
                    const Capacities& caps, Visitor& visit) {
  const int users = static_cast<int>(assignment.size());
  if (user == users) {
    visit(std::span<const int>(assignment));
    return;
  }
  const int nodes = static_cast<int>(counts.size());
  for (int c = 0; c < nodes; ++c) {
    const int cap = c == nodes - 1 ? caps.bs : caps.mr;
    if (counts[static_cast<std::size_t>(c)] >= cap) continue;
    assignment[static_cast<std::size_t>(user)] = c;
    ++counts[static_cast<std::size_t>(c)];
    enumerate_from(user + 1, assignment, counts, caps, visit);
    --counts[static_cast<std::size_t>(c)];
  }
}

}  // namespace detail

/// Calls `visit(span<const int>)` once per feasible assignment, in
/// lexicographic order with user 0 most significant. With
/// `fixed_first >= 0` only assignments giving user 0 that label are visited.
template <typename Visitor>
void enumerate_feasible(int num_users, int num_mrs, const Capacities& caps, Visitor&& visit,
                        const OracleLimits& limits = {}, int fixed_first = -1) {
  check_oracle_cap(num_users, num_mrs, limits);
  if (num_users < 0 || num_mrs < 1) throw DomainError("enumerate_feasible: bad sizes");
  std::vector<int> assignment(static_cast<std::size_t>(num_users), 0);
  std::vector<int> counts(static_cast<std::size_t>(num_mrs) + 1, 0);
  if (fixed_first < 0 || num_users == 0) {
    detail::enumerate_from(0, assignment, counts, caps, visit);
    return;
  }
  const int cap = fixed_first == num_mrs ? caps.bs : caps.mr;
  if (cap < 1) return;
  assignment[0] = fixed_first;
  counts[static_cast<std::size_t>(fixed_first)] = 1;
  detail::enumerate_from(1, assignment, counts, caps, visit);
}

inline std::uint64_t count_feasible(int num_users, int num_mrs, const Capacities& caps,
                                    const OracleLimits& limits = {}) {
  std::uint64_t n = 0;
  enumerate_feasible(num_users, num_mrs, caps, [&](std::span<const int>) { ++n; }, limits);
  return n;
}

/// Total utility of a raw assignment, summed in the same order as
/// total_utility() on the equivalent Partition.
inline double assignment_objective(std::span<const int> assignment, const RateTable& rates,
                                   std::vector<double>& sums, std::vector<int>& counts) {
  sums.assign(static_cast<std::size_t>(rates.num_nodes()), 0.0);
  counts.assign(static_cast<std::size_t>(rates.num_nodes()), 0);
  for (std::size_t l = 0; l < assignment.size(); ++l) {
    const int c = assignment[l];
    sums[static_cast<std::size_t>(c)] += rates(static_cast<int>(l), c);
    ++counts[static_cast<std::size_t>(c)];
  }
  double total = 0.0;
  for (std::size_t i = 0; i < sums.size(); ++i) {
    if (counts[i] > 0) total += sums[i] / counts[i];
  }
  return total;
}

struct OracleResult {
  Partition best;
  double best_objective = -std::numeric_limits<double>::infinity();
  std::uint64_t enumerated = 0;
  double wall_time_ms = 0.0;
};

namespace detail {

struct BranchBest {
  std::vector<int> assignment;
  double objective = -std::numeric_limits<double>::infinity();
  std::uint64_t enumerated = 0;
};

inline BranchBest search_branch(const RateTable& rates, const Capacities& caps,
                                const OracleLimits& limits, int fixed_first) {
  BranchBest b;
  std::vector<double> sums;
  std::vector<int> counts;
  enumerate_feasible(
      rates.num_users(), rates.num_nodes() - 1, caps,
      [&](std::span<const int> a) {
        ++b.enumerated;
        const double v = assignment_objective(a, rates, sums, counts);
        if (v > b.objective) {
          b.objective = v;
          b.assignment.assign(a.begin(), a.end());
        }
      },
      limits, fixed_first);
  return b;
}

}  // namespace detail

/// Maximizer of the total utility over all feasible assignments. Ties keep
/// the first assignment in enumeration order. `threads > 1` splits the
/// search on user 0's coalition; the result is identical to the serial run.
inline OracleResult optimal_partition(const RateTable& rates, const Capacities& caps,
                                      const OracleLimits& limits = {}, int threads = 1) {
  const auto t0 = std::chrono::steady_clock::now();
  const int users = rates.num_users();
  const int mrs = rates.num_nodes() - 1;
  check_oracle_cap(users, mrs, limits);

  std::vector<detail::BranchBest> branches;
  if (threads <= 1 || users == 0) {
    branches.push_back(detail::search_branch(rates, caps, limits, -1));
  } else {
    std::vector<std::future<detail::BranchBest>> futures;
    for (int c = 0; c <= mrs; ++c) {
      futures.push_back(std::async(std::launch::async, [&, c] {
        return detail::search_branch(rates, caps, limits, c);
      }));
    }
    for (auto& f : futures) branches.push_back(f.get());
  }

  OracleResult r;
  const detail::BranchBest* best = nullptr;
  for (const auto& b : branches) {
    r.enumerated += b.enumerated;
    if (!b.assignment.empty() && (best == nullptr || b.objective > best->objective)) best = &b;
  }
  if (best == nullptr) {
    if (users == 0) {
      r.best = Partition::unassigned(0, mrs + 1);
      r.best_objective = 0.0;
    } else {
      throw ConfigError("optimal_partition: no feasible assignment under the capacities");
    }
  } else {
    r.best = Partition(mrs + 1, best->assignment);
    r.best_objective = best->objective;
  }
  r.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline OracleResult optimal_partition(const Scenario& s, const OracleLimits& limits = {},
                                      int threads = 1) {
  return optimal_partition(s.rates, s.capacities(), limits, threads);
}

/// Mean relative shortfall of `alg` against the optimum `os` over k points.
inline double average_deviation(std::span<const double> os, std::span<const double> alg) {
  if (os.size() != alg.size()) throw DomainError("average_deviation: series lengths differ");
  if (os.empty()) throw DomainError("average_deviation: empty series");
  double sum = 0.0;
  for (std::size_t p = 0; p < os.size(); ++p) {
    if (!(os[p] > 0.0)) throw DomainError("average_deviation: optimum values must be positive");
    sum += (os[p] - alg[p]) / os[p];
  }
  return sum / static_cast<double>(os.size());
}

/// Bell numbers via B(k) = sum_{j<k} C(k-1, j) B(j), B(0) = 1. Exact for k <= 25.
inline std::uint64_t bell_number(int k) {
  if (k < 0) throw DomainError("bell_number: k must be non-negative");
  if (k > 25) throw DomainError("bell_number: B(k) exceeds 64-bit range for k > 25");
  std::vector<std::uint64_t> bell(static_cast<std::size_t>(k) + 1, 0);
  bell[0] = 1;
  std::vector<std::uint64_t> binom{1};  // row k-1 of Pascal's triangle
  for (int m = 1; m <= k; ++m) {
    std::uint64_t b = 0;
    for (int j = 0; j < m; ++j) b += binom[static_cast<std::size_t>(j)] * bell[static_cast<std::size_t>(j)];
    bell[static_cast<std::size_t>(m)] = b;
    std::vector<std::uint64_t> next(binom.size() + 1, 1);
    for (std::size_t j = 1; j < binom.size(); ++j) next[j] = binom[j - 1] + binom[j];
    binom = std::move(next);
  }
  return bell[static_cast<std::size_t>(k)];
}

inline nlohmann::json to_json(const OracleResult& r) {
  return {{"best_assignment", r.best.assignment()},
          {"best_objective", r.best_objective},
          {"enumerated", r.enumerated},
          {"wall_time_ms", r.wall_time_ms}};
}

}  // namespace mrassoc
