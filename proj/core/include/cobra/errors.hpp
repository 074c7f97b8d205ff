#pragma once

#include <stdexcept>
#include <string>

namespace cobra {

// Invalid experiment or instance parameters. Maps to CLI exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An adversary produced a corrupted reward outside [0,1].
class AdversaryRangeViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Algorithm bookkeeping reached a state its invariants rule out. Exit code 2.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Series or CSV inputs with incompatible shapes.
class ShapeMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem failures. Exit code 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cobra
