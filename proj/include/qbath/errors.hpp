#pragma once

#include <stdexcept>
#include <string>

namespace qbath {

/// Malformed user input (spectrum text, grid syntax, atom files).
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Request outside the mathematical domain of an operation
/// (beta < 0, energy outside (ground, mean], wrong law for a method, ...).
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Request exceeds a documented work bound (lattice too large, n too big
/// for an alternating-sum evaluation, ...).
struct ResourceError : std::runtime_error {
  explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Discrete law whose atoms do not sit on a common lattice; exact
/// convolution is unavailable and callers should fall back to Monte Carlo.
struct IncommensurateError : DomainError {
  explicit IncommensurateError(const std::string& msg) : DomainError(msg) {}
};

}  // namespace qbath
