#pragma once

#include <stdexcept>
#include <string>

namespace qae {

// Invalid run configuration or out-of-range structural parameter.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data that is well-formed but unusable (zero vectors, short classes).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed file contents (bad magic, truncation, unknown schema).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke an operation's precondition (bad qubit index, size mismatch).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace qae
