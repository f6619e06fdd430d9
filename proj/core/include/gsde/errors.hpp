#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gsde {

/// Invalid caller input: dimension mismatches, bad parameters, malformed files.
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Problem instance exceeds a configured size cap.
class CapacityError : public std::runtime_error {
public:
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

/// A simulated state left the admissible region (non-finite or huge).
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, std::size_t step)
        : std::runtime_error(what + " at step " + std::to_string(step)), step_(step) {}
    std::size_t step() const { return step_; }

private:
    std::size_t step_;
};

/// Invariant violation inside the library itself, e.g. an LP reported
/// infeasible on a problem family that is feasible by construction.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

} // namespace gsde
