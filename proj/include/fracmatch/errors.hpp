#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fracmatch {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public Error {
public:
    using Error::Error;
};

/// Raised when matrices do not have the expected n-by-n shape.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// Raised when an instance violates the strict-preference invariants.
/// Carries the individual violation messages from the validation report.
class ValidationError : public Error {
public:
    ValidationError(const std::string& what, std::vector<std::string> violations)
        : Error(what), violations_(std::move(violations)) {}
    const std::vector<std::string>& violations() const { return violations_; }

private:
    std::vector<std::string> violations_;
};

/// A pairing is not injective or references out-of-range agents.
class InvalidMatching : public Error {
public:
    using Error::Error;
};

/// Exhaustive enumeration was requested above the configured size bound.
class BoundExceeded : public Error {
public:
    using Error::Error;
};

class GenerationExhausted : public Error {
public:
    using Error::Error;
};

/// Edge weights break the fractional-matching invariants (range or degree sums).
class WeightInvariantViolated : public Error {
public:
    using Error::Error;
};

class WeightsNotConvex : public Error {
public:
    using Error::Error;
};

class NotDoublyStochastic : public Error {
public:
    using Error::Error;
};

class CycleEncountered : public Error {
public:
    using Error::Error;
};

class InvalidRotation : public Error {
public:
    using Error::Error;
};

/// Rational magnitudes grew past the configured bit budget.
class NumericBlowup : public Error {
public:
    using Error::Error;
};

/// The solver produced something the theory says cannot happen
/// (for example an unstable composition). Always a bug, never an input error.
class InternalInstabilityBug : public Error {
public:
    using Error::Error;
};

class FamilyTooLarge : public Error {
public:
    using Error::Error;
};

}  // namespace fracmatch
