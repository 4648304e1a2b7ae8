// errors.hpp — typed failures raised by the simulation layers

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qfn {

// Base for all numerical/runtime failures (CLI exit code 3).
struct SimulationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A sampling grid captured less than the required share of a pulse's norm.
struct SupportTruncated : SimulationError {
    SupportTruncated(const std::string& what, double captured)
        : SimulationError(what), captured_norm_sq(captured) {}
    double captured_norm_sq;
};

// Superposition coefficients violate |c1*G1 + c2*G2|^2 = G1^2 + G2^2.
struct NormConstraintViolated : SimulationError {
    using SimulationError::SimulationError;
};

// Transfer-function evaluation point too close to a pole of (sI - A)^-1.
struct PoleProximity : SimulationError {
    using SimulationError::SimulationError;
};

// Trace drift of the master-equation hierarchy exceeded its bound.
struct StepTooLarge : SimulationError {
    using SimulationError::SimulationError;
};

// A trajectory ended before meeting its decay criterion.
struct NotConverged : SimulationError {
    using SimulationError::SimulationError;
};

// Closed-form solution requested outside the equal-detuning slice.
struct DetuningMismatch : SimulationError {
    using SimulationError::SimulationError;
};

// Configuration rejected; carries one message per offending field.
struct ConfigError : std::runtime_error {
    explicit ConfigError(std::vector<std::string> errs)
        : std::runtime_error(join(errs)), errors(std::move(errs)) {}
    std::vector<std::string> errors;

  private:
    static std::string join(const std::vector<std::string>& errs) {
        std::string out = "invalid configuration:";
        for (const auto& e : errs) {
            out += "\n  - " + e;
        }
        return out;
    }
};

}  // namespace qfn
