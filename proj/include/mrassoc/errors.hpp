#pragma once

#include <stdexcept>
#include <string>

namespace mrassoc {

// Invalid or infeasible configuration (bad field, unknown key, capacity
// shortfall, impossible geometry).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A function was called outside its mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Exhaustive search refused because the instance exceeds the size cap.
class OracleCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mrassoc
