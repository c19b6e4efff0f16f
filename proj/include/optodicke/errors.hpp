#pragma once

#include <stdexcept>
#include <string>

namespace optodicke {

/// Base for numerical failures; the CLI maps these to exit code 3.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two roots of the extremum polynomial coincide to rounding, so their count
/// cannot be certified. Happens only at (or within ulps of) a fold.
class DegenerateBracket : public SolverError {
 public:
  using SolverError::SolverError;
};

class NotFound : public SolverError {
 public:
  using SolverError::SolverError;
};

class ConvergenceFailure : public SolverError {
 public:
  using SolverError::SolverError;
};

}  // namespace optodicke
