#include "swim/density.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "swim/errors.hpp"

namespace swim {

namespace {

// Monomial moments of the unit ball: int x1^2, int x1^4, int x1^2 x2^2.
constexpr double kPi = std::numbers::pi;
constexpr double kM2 = 4.0 * kPi / 15.0;
constexpr double kM4 = 4.0 * kPi / 35.0;
constexpr double kM22 = 4.0 * kPi / 105.0;

}  // namespace

DensityField fit_inertia_targets(const Vec3& semi_axes, const Vec3& inertia_targets, double c0) {
  if ((semi_axes.array() <= 0.0).any())
    throw ConfigError("inertia targeting requires positive semi-axes");
  // Inertia is measured over the reference ball with deformed positions:
  // entry k is int rho(x) (a_j^2 x_j^2 + a_k^2 x_k^2) dx, matching
  // inertia_and_mass for an ellipsoid base.
  const Vec3 scaled = inertia_targets;
  for (double offset : {c0, 2.0 * c0, 4.0 * c0, 8.0 * c0, 16.0 * c0, 0.5 * c0, 0.25 * c0}) {
    const Vec3 a2 = semi_axes.cwiseProduct(semi_axes);
    Mat3 sys;
    Vec3 rhs;
    for (int k = 0; k < 3; ++k) {
      double cross = 0.0;
      for (int j = 0; j < 3; ++j)
        if (j != k) cross += a2[j];
      for (int j = 0; j < 3; ++j)
        sys(k, j) = (j != k ? a2[j] * (kM4 - kM22) : 0.0) + kM22 * cross;
      rhs[k] = scaled[k] - offset * kM2 * cross;
    }
    const Vec3 coeffs = sys.partialPivLu().solve(rhs);
    if (!coeffs.allFinite()) continue;
    DensityField rho = DensityField::quadratic(offset, coeffs);
    if (rho.min_on_ball() > 0.0) return rho;
  }
  throw ConfigError("density.targets: no positive quadratic density matches the inertia targets");
}

double pushforward_density(const DensityField& rho, const DeformationField& f, const Vec3& y,
                           const Vec3& initial_guess) {
  const Vec3 x = inverse_shape_map(f, y, initial_guess);
  const double jac = (Mat3::Identity() + f.gradient(x)).determinant();
  if (jac <= 0.0)
    throw NonPositiveJacobian("pushforward hit a non orientation preserving point");
  return rho.value(x) / jac;
}

}  // namespace swim
