#pragma once

#include <stdexcept>
#include <string>

namespace pdlab {

/// Raised when an input would push a computation past a configured size cap.
class CostGuardError : public std::runtime_error {
 public:
  explicit CostGuardError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a self-check on a computed result fails. Seeing one means the
/// implementation is wrong, not the input.
class SelfCheckError : public std::logic_error {
 public:
  explicit SelfCheckError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace pdlab
