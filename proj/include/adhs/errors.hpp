#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace adhs {

/// Dense node identifier, 0..n-1. The base station is id 0 in every preset.
using NodeId = std::uint32_t;

/// Rejected configuration: invalid deployment, unknown key, out-of-range parameter.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A caller broke a documented precondition (empty input, zero baseline, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The unit-disk graph does not reach every node from the initiator.
class ConnectivityError : public std::runtime_error {
 public:
  ConnectivityError(NodeId unreachable, const std::string& what)
      : std::runtime_error(what), unreachable_(unreachable) {}

  NodeId unreachable() const noexcept { return unreachable_; }

 private:
  NodeId unreachable_;
};

}  // namespace adhs
