#pragma once

#include <stdexcept>
#include <string>

namespace wecs {

/// Base of every error raised by the bench models.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (negative TSR, v <= 0, empty grid).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Torque requested below the rotor speed floor where T = P / omega is singular.
class LowSpeedError : public Error {
public:
    using Error::Error;
};

/// Parameter block or scenario that violates its invariants.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Cp coefficients that do not produce an interior maximum.
class ModelError : public Error {
public:
    using Error::Error;
};

class StepSizeError : public Error {
public:
    using Error::Error;
};

class EstimationError : public Error {
public:
    using Error::Error;
};

class IdentificationError : public Error {
public:
    using Error::Error;
};

/// Raised by the simulation loop; wraps the failing sub-operation with the step index.
class SimulationError : public Error {
public:
    SimulationError(long long step_index, const std::string& what)
        : Error("step " + std::to_string(step_index) + ": " + what), step_index_(step_index) {}

    [[nodiscard]] long long step_index() const noexcept { return step_index_; }

private:
    long long step_index_;
};

}  // namespace wecs
