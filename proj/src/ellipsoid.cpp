#include "swim/ellipsoid.hpp"

#include <cmath>
#include <numbers>

#include "swim/errors.hpp"
#include "swim/quadrature.hpp"

namespace swim {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

Vec3 ellipsoid_shape_factors(double a, double b, double c) {
  if (a <= 0.0 || b <= 0.0 || c <= 0.0)
    throw ConfigError("ellipsoid semi-axes must be positive");
  const double axes[3] = {a, b, c};
  const double scale = std::max({a, b, c});
  Vec3 alpha;
  for (int i = 0; i < 3; ++i) {
    // lambda = scale^2 t/(1-t) maps the half-line to (0,1); the transformed
    // integrand vanishes like sqrt(1-t) at the far end.
    auto integrand = [&](double t) {
      const double lam = scale * scale * t / (1.0 - t);
      const double dlam = scale * scale / ((1.0 - t) * (1.0 - t));
      double delta = 1.0;
      for (double ax : axes) delta *= ax * ax + lam;
      return dlam / ((axes[i] * axes[i] + lam) * std::sqrt(delta));
    };
    alpha[i] = a * b * c * adaptive_integrate(integrand, 0.0, 1.0, 1e-12);
  }
  return alpha;
}

Mat6 ellipsoid_added_mass(double a, double b, double c) {
  const Vec3 alpha = ellipsoid_shape_factors(a, b, c);
  const double axes[3] = {a, b, c};
  const double volume = 4.0 / 3.0 * kPi * a * b * c;

  Mat6 mu = Mat6::Zero();
  for (int i = 0; i < 3; ++i) {
    // Rotation about axis i stirs the section spanned by the other two axes.
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    const double dj = axes[j] * axes[j], dk = axes[k] * axes[k];
    const double diff = dj - dk;
    const double denom = 2.0 * diff + (dj + dk) * (alpha[j] - alpha[k]);
    mu(i, i) = denom != 0.0
                   ? (4.0 * kPi / 15.0) * a * b * c * diff * diff * (alpha[k] - alpha[j]) / denom
                   : 0.0;
    mu(3 + i, 3 + i) = volume * alpha[i] / (2.0 - alpha[i]);
  }
  return mu;
}

}  // namespace swim
