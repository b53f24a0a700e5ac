#pragma once

#include <vector>

#include "swim/config.hpp"
#include "swim/fields.hpp"
#include "swim/quadrature.hpp"

namespace swim {

// Fixed library of 40 interior bump fields, all supported in the closed unit
// ball and vanishing on the sphere together with their gradients; the moment
// corrections of rectify_fields are drawn from their span.
const std::vector<FieldPtr>& correction_library();

struct RectifyResult {
  SwimmerConfig config;               // movements replaced by corrected fields
  std::vector<FieldPtr> corrections;  // the added interior parts, one per movement
  double max_residual = 0.0;          // worst remaining moment, relative to body mass
};

// Adds interior corrections to each movement field, in order, so that the
// self-propulsion moments vanish: for the k-th corrected field V*,
//   int rho V* = 0,  int rho Theta x V* = 0,  int rho Theta . V* = 0,
//   int rho V*_j x V* = 0 for every earlier field j.
// Boundary traces are untouched (the library vanishes on the sphere).
// Throws CorrectionBasisDeficient when the moment-matching system cannot be
// satisfied from the library.
RectifyResult rectify_fields(const SwimmerConfig& draft, const QuadratureRule& rule = ball_rule(),
                             double tol = 1e-8);

// The six movement fields whose boundary traces are the rigid displacements
// of the rest surface: e_i x Theta(x) for i = 1..3 and e_{i-3} for i = 4..6.
// The base deformation must be of the affine-blended family.  The returned
// fields satisfy the traces exactly but still need rectify_fields.
std::vector<FieldPtr> rigid_shell_basis(const FieldPtr& base);

// Convenience: rigid-shell swimmer with the first n generators, rectified.
SwimmerConfig make_rigid_shell_config(const DensityField& density, const FieldPtr& base, int n,
                                      const QuadratureRule& rule = ball_rule());

}  // namespace swim
