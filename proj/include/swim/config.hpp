#pragma once

#include <utility>
#include <vector>

#include "swim/density.hpp"
#include "swim/fields.hpp"
#include "swim/quadrature.hpp"
#include "swim/types.hpp"

namespace swim {

// A swimmer: reference density on the unit ball, base deformation carrying
// the ball to the rest shape, and the ordered basic movement fields.
struct SwimmerConfig {
  DensityField density;
  FieldPtr base;
  std::vector<FieldPtr> movements;

  int n() const { return static_cast<int>(movements.size()); }
};

// Displacement field of the shape map at coordinates s, i.e. theta + sum s_i V_i.
FieldPtr total_field(const SwimmerConfig& config, const VecX& s);

// Theta_s(x) = x + theta(x) + sum s_i V_i(x).
Vec3 eval_map(const SwimmerConfig& config, const VecX& s, const Vec3& x);

// Gradient of Theta_s and its determinant; throws NonPositiveJacobian when
// the determinant is not strictly positive (s has left the valid set).
std::pair<Mat3, double> eval_jacobian(const SwimmerConfig& config, const VecX& s, const Vec3& x);

// Density carried to the deformed configuration at a point of Theta_s(B).
double pushforward_density(const SwimmerConfig& config, const VecX& s, const Vec3& x_deformed);

// Margin along the straight segment from 0 to s, sampled at segment_samples
// parameters; a positive return certifies that s lies in the connected
// component of valid shapes around 0.
double certify_shape(const SwimmerConfig& config, const VecX& s, int segment_samples = 32);

struct ValidationReport {
  double margin = 0.0;                // diffeomorphism margin of Id + theta
  double min_density = 0.0;           // infimum of rho over the reference ball
  double moment_residual = 0.0;       // worst self-propulsion moment, relative to body mass
  double gram_min_eigenvalue = 0.0;   // smallest eigenvalue of the normalized movement Gram

  bool ok(double moment_tol = 1e-8, double gram_tol = 1e-8) const {
    return margin > 0.0 && min_density > 0.0 && moment_residual <= moment_tol &&
           gram_min_eigenvalue > gram_tol;
  }
};

// Checks the configuration invariants: positive margin and density, the
// self-propulsion moments int rho V and int rho V x V' over {Theta, V_1..V_n},
// and linear independence of the movement restrictions via the L2 Gram
// matrix (normalized so the threshold is scale free).
ValidationReport validate_config(const SwimmerConfig& config, const QuadratureRule& rule);

// validate_config with the default ball rule; throws ConfigError naming the
// failed invariant.
void require_valid(const SwimmerConfig& config, double moment_tol = 1e-8,
                   double gram_tol = 1e-8);

}  // namespace swim
