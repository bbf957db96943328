#pragma once

// Coalition formation for user association. Players are users, coalitions
// are the n+1 serving nodes, and a player switches coalition when its
// preference order says the move is an improvement.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mrassoc/config.hpp"
#include "mrassoc/errors.hpp"
#include "mrassoc/partition.hpp"
#include "mrassoc/rates.hpp"
#include "mrassoc/scenario.hpp"

namespace mrassoc {

// Relative margin a comparison must clear to count as a strict improvement.
// Exact ties (and rounding-level differences) never trigger a switch.
inline constexpr double kStrictMargin = 1e-12;

inline bool strictly_greater(double lhs, double rhs) {
  return lhs - rhs > kStrictMargin * std::max(std::abs(lhs), std::abs(rhs));
}

// One coalition seen from a preference test: its node and member list.
struct CoalitionView {
  int node = 0;
  std::span<const int> members;
};

inline CoalitionView view(const Partition& p, int node) { return {node, p.members(node)}; }

// Utilities involved in moving `user` from S to T.
struct SwitchUtilities {
  double current = 0.0;         // U(S)
  double candidate = 0.0;       // U(T)
  double current_without = 0.0; // U(S \ {l})
  double candidate_with = 0.0;  // U(T u {l})

  double gain() const { return (candidate_with + current_without) - (candidate + current); }
};

inline SwitchUtilities switch_utilities(int user, CoalitionView s, CoalitionView t,
                                        const RateTable& rates) {
  if (s.node == t.node) throw DomainError("preference test: S and T must differ");
  if (!std::binary_search(s.members.begin(), s.members.end(), user)) {
    throw DomainError("preference test: user " + std::to_string(user) + " is not in S");
  }
  if (std::binary_search(t.members.begin(), t.members.end(), user)) {
    throw DomainError("preference test: user " + std::to_string(user) + " is already in T");
  }
  SwitchUtilities u;
  u.current = coalition_utility(s.members, s.node, rates);
  u.candidate = coalition_utility(t.members, t.node, rates);

  double without = 0.0;
  for (int m : s.members) {
    if (m != user) without += rates(m, s.node);
  }
  const auto s_rest = s.members.size() - 1;
  u.current_without = s_rest == 0 ? 0.0 : without / static_cast<double>(s_rest);

  // Ascending user order.
  double with = 0.0;
  bool added = false;
  for (int m : t.members) {
    if (!added && user < m) {
      with += rates(user, t.node);
      added = true;
    }
    with += rates(m, t.node);
  }
  if (!added) with += rates(user, t.node);
  u.candidate_with = with / static_cast<double>(t.members.size() + 1);
  return u;
}

/// Utilitarian order: l prefers T iff U(T u {l}) + U(S \ {l}) > U(T) + U(S).
inline bool utilitarian_prefers(int user, CoalitionView s, CoalitionView t, const RateTable& rates) {
  const auto u = switch_utilities(user, s, t, rates);
  return strictly_greater(u.candidate_with + u.current_without, u.candidate + u.current);
}

/// Selfish order: l prefers T iff the utility of T after joining exceeds
/// that of its current coalition (with l in it).
inline bool selfish_prefers(int user, CoalitionView s, CoalitionView t, const RateTable& rates) {
  const auto u = switch_utilities(user, s, t, rates);
  return strictly_greater(u.candidate_with, u.current);
}

inline bool prefers(PreferenceMode mode, int user, CoalitionView s, CoalitionView t,
                    const RateTable& rates) {
  return mode == PreferenceMode::utilitarian ? utilitarian_prefers(user, s, t, rates)
                                             : selfish_prefers(user, s, t, rates);
}

inline bool has_room(const Partition& p, int coalition, const Capacities& caps) {
  return p.size(coalition) + 1 <= p.capacity_of(coalition, caps);
}

/// Returns a copy of `p` with `user` moved to `target`. Throws DomainError,
/// leaving `p` untouched, when the target is full or already holds the user.
inline Partition apply_switch(const Partition& p, int user, int target, const Capacities& caps) {
  if (target < 0 || target >= p.num_nodes()) throw DomainError("apply_switch: bad coalition index");
  if (p.coalition_of(user) == target) {
    throw DomainError("apply_switch: user " + std::to_string(user) + " already in coalition " +
                      std::to_string(target));
  }
  if (!has_room(p, target, caps)) {
    throw DomainError("apply_switch: coalition " + std::to_string(target) + " is full (" +
                      std::to_string(p.size(target)) + "/" +
                      std::to_string(p.capacity_of(target, caps)) + ")");
  }
  Partition out = p;
  out.move(user, target);
  return out;
}

/// Uniformly random capacity-respecting assignment: users in index order,
/// each placed in a coalition drawn uniformly among those with room left.
template <typename Rng>
Partition initial_partition(int num_users, int num_nodes, const Capacities& caps, Rng& rng) {
  Partition p = Partition::unassigned(num_users, num_nodes);
  std::vector<int> open;
  for (int l = 0; l < num_users; ++l) {
    open.clear();
    for (int i = 0; i < num_nodes; ++i) {
      if (has_room(p, i, caps)) open.push_back(i);
    }
    if (open.empty()) {
      throw ConfigError("initial_partition: capacities cannot hold " + std::to_string(num_users) +
                        " users");
    }
    std::uniform_int_distribution<std::size_t> pick(0, open.size() - 1);
    p.move(l, open[pick(rng)]);
  }
  return p;
}

inline Partition initial_partition(const Scenario& s) {
  auto rng = make_rng(s.config.rng_seed, RngStream::initial_partition);
  return initial_partition(s.num_users(), s.num_nodes(), s.capacities(), rng);
}

struct SwitchEvent {
  int user = 0;
  int from = 0;
  int to = 0;
  double utility_before = 0.0;  // total utility of the partition
  double utility_after = 0.0;
  bool operator==(const SwitchEvent&) const = default;
};

enum class Termination { stable_budget_exhausted, visit_cap_reached };

inline const char* to_string(Termination t) {
  return t == Termination::stable_budget_exhausted ? "non_switch_budget_exhausted"
                                                   : "visit_cap_reached";
}

struct GameTrace {
  std::vector<SwitchEvent> events;
  std::vector<long long> non_switch_history;  // counter j just before each switch
  long long switch_count = 0;
  long long iterations = 0;  // user visits
  Termination termination = Termination::stable_budget_exhausted;
  double initial_utility = 0.0;
  double final_utility = 0.0;
  bool operator==(const GameTrace&) const = default;
};

struct GameOptions {
  PreferenceMode mode = PreferenceMode::utilitarian;
  int non_switch_budget_multiplier = 10;
  // Hard bound on user visits, in multiples of N.
  long long visit_cap_multiplier = 1000;
};

struct GameResult {
  Partition partition;
  GameTrace trace;
};

/// Round-robin switch dynamics. Each visited user takes the admissible
/// preferred switch with the largest score (utilitarian: total-utility gain;
/// selfish: post-join utility), lowest coalition index on ties. Stops after
/// budget * N consecutive visits without a switch.
inline GameResult run_coalition_formation(const RateTable& rates, const Capacities& caps,
                                          Partition start, const GameOptions& opt) {
  const int users = rates.num_users();
  const int nodes = rates.num_nodes();
  if (start.num_users() != users || start.num_nodes() != nodes || !start.complete()) {
    throw DomainError("run_coalition_formation: initial partition does not match the rate table");
  }
  if (!start.respects(caps)) throw DomainError("run_coalition_formation: initial partition over capacity");

  GameResult r{std::move(start), {}};
  Partition& p = r.partition;
  GameTrace& trace = r.trace;
  trace.initial_utility = total_utility(p, rates);
  double utility = trace.initial_utility;

  const long long budget = static_cast<long long>(opt.non_switch_budget_multiplier) * users;
  const long long visit_cap = opt.visit_cap_multiplier * users;
  long long j = 0;
  int next = 0;
  while (j < budget) {
    if (trace.iterations >= visit_cap) {
      trace.termination = Termination::visit_cap_reached;
      break;
    }
    const int l = next;
    next = (next + 1) % users;
    ++trace.iterations;

    const int from = p.coalition_of(l);
    int best = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int t = 0; t < nodes; ++t) {
      if (t == from || !has_room(p, t, caps)) continue;
      const auto u = switch_utilities(l, view(p, from), view(p, t), rates);
      const bool ok = opt.mode == PreferenceMode::utilitarian
                          ? strictly_greater(u.candidate_with + u.current_without,
                                             u.candidate + u.current)
                          : strictly_greater(u.candidate_with, u.current);
      if (!ok) continue;
      const double score = opt.mode == PreferenceMode::utilitarian ? u.gain() : u.candidate_with;
      if (score > best_score) {
        best_score = score;
        best = t;
      }
    }

    if (best < 0) {
      ++j;
      continue;
    }
    trace.non_switch_history.push_back(j);
    j = 0;
    p.move(l, best);
    const double after = total_utility(p, rates);
    trace.events.push_back({l, from, best, utility, after});
    utility = after;
    ++trace.switch_count;
  }
  trace.final_utility = utility;
  return r;
}

inline GameResult run_coalition_formation(const Scenario& s, PreferenceMode mode) {
  GameOptions opt;
  opt.mode = mode;
  opt.non_switch_budget_multiplier = s.config.non_switch_budget_multiplier;
  opt.visit_cap_multiplier = s.config.visit_cap_multiplier;
  return run_coalition_formation(s.rates, s.capacities(), initial_partition(s), opt);
}

inline GameResult run_coalition_formation(const Scenario& s) {
  return run_coalition_formation(s, s.config.preference_mode);
}

/// True iff no user has a capacity-feasible deviation it prefers.
inline bool is_nash_stable(const Partition& p, PreferenceMode mode, const RateTable& rates,
                           const Capacities& caps) {
  require_complete(p, rates, "is_nash_stable");
  for (int l = 0; l < p.num_users(); ++l) {
    const int s = p.coalition_of(l);
    for (int t = 0; t < p.num_nodes(); ++t) {
      if (t == s || !has_room(p, t, caps)) continue;
      if (prefers(mode, l, view(p, s), view(p, t), rates)) return false;
    }
  }
  return true;
}

inline nlohmann::json to_json(const GameTrace& t) {
  nlohmann::json events = nlohmann::json::array();
  for (const auto& e : t.events) {
    events.push_back({{"user", e.user},
                      {"from", e.from},
                      {"to", e.to},
                      {"utility_before", e.utility_before},
                      {"utility_after", e.utility_after}});
  }
  return {{"events", events},
          {"summary",
           {{"switch_count", t.switch_count},
            {"iterations", t.iterations},
            {"termination", to_string(t.termination)},
            {"initial_utility", t.initial_utility},
            {"final_utility", t.final_utility},
            {"non_switch_history", t.non_switch_history}}}};
}

}  // namespace mrassoc
