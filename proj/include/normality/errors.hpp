#pragma once

#include <stdexcept>
#include <string>

namespace normality {

// Malformed arguments, out-of-range indices, unparsable files.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The request is well-formed but exceeds what exhaustive methods can do
// (e.g. an n! witness search beyond the cap).
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A claimed structural property failed on a concrete instance. The message
// carries the witness.
class InvariantViolation : public std::runtime_error {
 public:
  InvariantViolation(const std::string& what, std::string witness)
      : std::runtime_error(what), witness_(std::move(witness)) {}

  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string witness_;
};

}  // namespace normality
