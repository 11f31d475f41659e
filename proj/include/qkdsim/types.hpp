#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace qkdsim {

/// Node identifiers are 1-based, matching the numbering used in topology files.
using NodeId = std::uint32_t;
/// Index into Topology::links().
using LinkId = std::uint32_t;
/// Simulation time in seconds.
using Seconds = double;

inline constexpr LinkId kNoLink = std::numeric_limits<LinkId>::max();
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Raised for malformed topology / scenario input. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when the simulation would violate a causal or accounting invariant
/// (time regression, double finalization). Maps to CLI exit code 3.
class SimulationIntegrityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace qkdsim
