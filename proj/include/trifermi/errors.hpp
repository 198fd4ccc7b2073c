#pragma once

#include <stdexcept>
#include <string>

namespace trifermi {

/// Raised for malformed arguments: wrong dimensions, party out of range,
/// non-Hermitian input, invalid coefficient triples, bad CLI values.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a geometry places two fermions on top of each other.
class CoincidentParticles : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class LpError : public std::runtime_error {
 public:
  enum class Kind { Infeasible, Unbounded };

  LpError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace trifermi
