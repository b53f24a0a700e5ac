#pragma once

#include "swim/fields.hpp"
#include "swim/types.hpp"

namespace swim {

// Mass density on the reference ball, either constant or of the axis-aligned
// quadratic family c0 + c1 x1^2 + c2 x2^2 + c3 x3^2.
class DensityField {
 public:
  static DensityField constant(double v) { return DensityField(v, Vec3::Zero()); }
  static DensityField quadratic(double c0, const Vec3& c) { return DensityField(c0, c); }

  double value(const Vec3& x) const { return c0_ + coeffs_.dot(x.cwiseProduct(x)); }
  bool is_constant() const { return coeffs_.isZero(0.0); }
  int poly_degree() const { return is_constant() ? 0 : 2; }

  // Exact minimum over the closed unit ball: the quadratic part is bounded
  // below by min(0, min_i c_i) there.
  double min_on_ball() const { return c0_ + std::min(0.0, coeffs_.minCoeff()); }

  double base() const { return c0_; }
  const Vec3& coeffs() const { return coeffs_; }

 private:
  DensityField(double c0, const Vec3& c) : c0_(c0), coeffs_(c) {}
  double c0_;
  Vec3 coeffs_;
};

// Quadratic density whose rest body (unit ball stretched to the given
// semi-axes) has the requested diagonal inertia tensor.  The uniform offset
// c0 is bumped along a fixed ladder until the density is positive on the
// ball; throws ConfigError when no member of the family works.
DensityField fit_inertia_targets(const Vec3& semi_axes, const Vec3& inertia_targets,
                                 double c0 = 1.0);

// Density carried to the deformed configuration: rho(x) / det(Id + grad f)(x)
// evaluated at x = (id + f)^{-1}(y).  Throws InverseMapDiverged if the point
// cannot be pulled back.
double pushforward_density(const DensityField& rho, const DeformationField& f, const Vec3& y,
                           const Vec3& initial_guess);

}  // namespace swim
