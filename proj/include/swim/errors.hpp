#pragma once

#include <stdexcept>
#include <string>

namespace swim {

// Base class for all failures raised by the library.
struct SwimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shape map is not orientation preserving / left the admissible set.
struct NonPositiveJacobian : SwimError {
  using SwimError::SwimError;
};

// Newton inversion of the shape map failed to converge.
struct InverseMapDiverged : SwimError {
  using SwimError::SwimError;
};

// Boundary collocation system could not be factored.
struct SingularSystem : SwimError {
  using SwimError::SwimError;
};

// Combined body+fluid mass matrix is not positive definite.
struct MassMatrixSingular : SwimError {
  using SwimError::SwimError;
};

// Body inertia tensor is singular (degenerate mass distribution).
struct InertiaSingular : SwimError {
  using SwimError::SwimError;
};

// Interior correction basis cannot satisfy the moment constraints.
struct CorrectionBasisDeficient : SwimError {
  using SwimError::SwimError;
};

// Bracket span does not reach full rank at the initial state.
struct NotControllable : SwimError {
  using SwimError::SwimError;
};

// Planner could not reach the requested tracking tolerance.
struct ToleranceNotMet : SwimError {
  using SwimError::SwimError;
};

// Requested combination has no implemented formula.
struct Unsupported : SwimError {
  using SwimError::SwimError;
};

// Scenario file is malformed; message names the offending field.
struct ConfigError : SwimError {
  using SwimError::SwimError;
};

}  // namespace swim
