#pragma once

#include <stdexcept>
#include <string>

namespace shadowkit {

/// Argument violates an operation's mathematical precondition
/// (out-of-range angle, mismatched dimensions, empty region, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Structurally invalid input: bad config values, malformed manifest
/// lines, graph profiles that cannot be wired.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File missing, unreadable or unwritable.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace shadowkit
