#pragma once

#include <stdexcept>
#include <string>

namespace ssinfer {

/// Thrown when a forward simulation produces a non-finite state.
/// Carries the index of the step at which the state became invalid.
class SimulationFailure : public std::runtime_error {
public:
    SimulationFailure(const std::string& what, long step)
        : std::runtime_error(what + " (step " + std::to_string(step) + ")"),
          step_index(step) {}
    long step_index;
};

/// Covariance could not be factorized even after the maximum jitter.
class SingularCovariance : public std::runtime_error {
public:
    explicit SingularCovariance(const std::string& what)
        : std::runtime_error(what) {}
};

/// All particle weights are zero: the filter cannot continue.
class DegenerateFilter : public std::runtime_error {
public:
    explicit DegenerateFilter(const std::string& what)
        : std::runtime_error(what) {}
};

/// Malformed input file; carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, long line_number)
        : std::runtime_error(what + " (line " + std::to_string(line_number) + ")"),
          line(line_number) {}
    long line;
};

}  // namespace ssinfer
