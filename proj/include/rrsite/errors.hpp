#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace rrsite {

// Argument outside the domain of an operation (negative fraction, zero
// bandwidth share, mismatched lengths, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class EmptySeriesError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ResolutionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NotEnoughData : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A control vector that violates one of the hard constraints of the site.
class InfeasibleControl : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// theta_SITE larger than the energy stored at the beginning of the slot.
class EnergyViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A simulation invariant broke (queue truncation, ledger mismatch, ...).
class InvariantViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Platform parameters that cannot meet the feasibility inequalities; raised
// before any slot is simulated.
class InfeasibleConfig : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

} // namespace rrsite
