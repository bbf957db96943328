#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mrassoc/errors.hpp"

namespace mrassoc {

// Upper bounds on coalition sizes: the BS coalition may hold `bs` users,
// each MR coalition `mr` users.
struct Capacities {
  int bs = 0;
  int mr = 0;
};

// Assignment of users to the n+1 labeled coalitions: labels 0..n-1 are the
// MRs, label n is the BS. Member lists are kept sorted by user index.
class Partition {
 public:
  static constexpr int kUnassigned = -1;

  Partition() = default;

  Partition(int num_nodes, std::vector<int> assignment)
      : num_nodes_(num_nodes), assignment_(std::move(assignment)) {
    if (num_nodes_ < 2) throw DomainError("Partition: need at least one MR and the BS");
    members_.assign(static_cast<std::size_t>(num_nodes_), {});
    for (std::size_t l = 0; l < assignment_.size(); ++l) {
      const int c = assignment_[l];
      if (c == kUnassigned) continue;
      if (c < 0 || c >= num_nodes_) {
        throw DomainError("Partition: user " + std::to_string(l) + " has invalid coalition " +
                          std::to_string(c));
      }
      members_[static_cast<std::size_t>(c)].push_back(static_cast<int>(l));
    }
  }

  static Partition unassigned(int num_users, int num_nodes) {
    return Partition(num_nodes, std::vector<int>(static_cast<std::size_t>(num_users), kUnassigned));
  }

  int num_users() const { return static_cast<int>(assignment_.size()); }
  int num_nodes() const { return num_nodes_; }
  int num_mrs() const { return num_nodes_ - 1; }
  int bs_index() const { return num_nodes_ - 1; }
  bool is_bs(int coalition) const { return coalition == bs_index(); }

  int coalition_of(int user) const { return assignment_.at(static_cast<std::size_t>(user)); }
  std::span<const int> members(int coalition) const {
    return members_.at(static_cast<std::size_t>(coalition));
  }
  int size(int coalition) const { return static_cast<int>(members(coalition).size()); }
  const std::vector<int>& assignment() const { return assignment_; }

  bool complete() const {
    return std::none_of(assignment_.begin(), assignment_.end(),
                        [](int c) { return c == kUnassigned; });
  }

  int capacity_of(int coalition, const Capacities& caps) const {
    return is_bs(coalition) ? caps.bs : caps.mr;
  }

  bool respects(const Capacities& caps) const {
    for (int i = 0; i < num_nodes_; ++i) {
      if (size(i) > capacity_of(i, caps)) return false;
    }
    return true;
  }

  // Moves (or places) `user` into `coalition` without any capacity check.
  void move(int user, int coalition) {
    if (coalition < 0 || coalition >= num_nodes_) throw DomainError("Partition::move: bad coalition");
    int& cur = assignment_.at(static_cast<std::size_t>(user));
    if (cur == coalition) return;
    if (cur != kUnassigned) {
      auto& from = members_[static_cast<std::size_t>(cur)];
      from.erase(std::lower_bound(from.begin(), from.end(), user));
    }
    auto& to = members_[static_cast<std::size_t>(coalition)];
    to.insert(std::lower_bound(to.begin(), to.end(), user), user);
    cur = coalition;
  }

  bool operator==(const Partition& o) const {
    return num_nodes_ == o.num_nodes_ && assignment_ == o.assignment_;
  }

 private:
  int num_nodes_ = 0;
  std::vector<int> assignment_;
  std::vector<std::vector<int>> members_;
};

}  // namespace mrassoc
