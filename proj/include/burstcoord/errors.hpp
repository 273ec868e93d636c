#pragma once

#include <stdexcept>
#include <string>

namespace burstcoord {

// Malformed or invalid user input (files, configs, parameters). CLI exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke an operation's precondition (empty profile, mismatched node
// sets, ...). Treated like InputError at the CLI boundary.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Filesystem failure. CLI exit code 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Valid input that does not carry enough data to proceed. CLI exit code 4.
class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical fitting failure (degenerate sample, optimizer did not converge).
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace burstcoord
