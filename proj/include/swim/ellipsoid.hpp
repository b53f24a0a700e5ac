#pragma once

#include "swim/types.hpp"

namespace swim {

// Analytic added-mass matrix of a triaxial ellipsoid with semi-axes
// (a, b, c) in unit-density fluid, diagonal in the body frame.  Rows/columns
// 1..3 are rotational (about the x, y, z axes), 4..6 translational.
Mat6 ellipsoid_added_mass(double a, double b, double c);

// The shape-factor integrals alpha_i = abc * int_0^inf dl / ((a_i^2+l) Delta)
// underlying the added masses; exposed for tests.
Vec3 ellipsoid_shape_factors(double a, double b, double c);

}  // namespace swim
