#pragma once

#include <stdexcept>
#include <string>

namespace locbench {

// File/instance-level problems. The CLI maps these to exit code 2.
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Solver-level problems. The CLI maps these to exit code 3.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InfeasibleError : SolverError {
    using SolverError::SolverError;
};
struct SizeCapError : SolverError {
    using SolverError::SolverError;
};
struct AlphaViolationError : SolverError {
    using SolverError::SolverError;
};
struct InadmissibleControlError : SolverError {
    InadmissibleControlError(const std::string& what, int step_index)
        : SolverError(what), index(step_index) {}
    int index;
};
struct UnreachableTargetError : SolverError {
    using SolverError::SolverError;
};
struct AtDemandPointError : SolverError {
    using SolverError::SolverError;
};

}  // namespace locbench
