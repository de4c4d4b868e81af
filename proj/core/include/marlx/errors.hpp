#pragma once

#include <stdexcept>
#include <string>

namespace marlx {

/// Incompatible tensor/vector shapes or mismatched architectures.
class ShapeError : public std::runtime_error {
public:
  explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

/// Non-finite values or numerically degenerate updates.
class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Out-of-range actions, positions or rewards fed to an environment.
class DomainError : public std::runtime_error {
public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// Bad experiment configuration (unknown keys, invalid modes, misaligned logs).
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A forward cache used after the network it was built from was mutated.
class CacheError : public std::runtime_error {
public:
  explicit CacheError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace marlx
