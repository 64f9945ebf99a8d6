#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wavepot {

// Invalid or inconsistent configuration document (CLI exit code 1).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A run could not continue: ray crossing, turn-back, or a medium violation
// (CLI exit code 2). Carries the step at which the failure was detected.
class SimulationAbort : public std::runtime_error {
public:
    SimulationAbort(const std::string& what, std::size_t step)
        : std::runtime_error(what), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

// Post-processing failed: missing rays, z outside the record, bad files
// (CLI exit code 3).
class AnalysisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace wavepot
