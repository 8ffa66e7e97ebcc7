#pragma once

#include <stdexcept>
#include <string>

namespace qei {

/// Bad configuration or I/O: maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A numerical certificate failed (quadrature disagreement, ODE step-halving
/// failure, truncation proxy too large): maps to CLI exit code 3.
class CertificationError : public std::runtime_error {
public:
    explicit CertificationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A physics inequality was violated beyond its certified tolerance:
/// maps to CLI exit code 1.
class PhysicsViolation : public std::runtime_error {
public:
    explicit PhysicsViolation(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace qei
