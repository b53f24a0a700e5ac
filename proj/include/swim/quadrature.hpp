#pragma once

#include <functional>
#include <type_traits>
#include <vector>

#include "swim/types.hpp"

namespace swim {

// Nodes and weights of a fixed quadrature rule in R^3.
struct QuadratureRule {
  std::vector<Vec3> points;
  std::vector<double> weights;

  template <class F>
  auto integrate(F&& f) const {
    // Accumulate in the integrand's value type so matrix-valued integrands
    // evaluate instead of stacking expression templates.
    using Value = std::decay_t<decltype(f(points[0]))>;
    Value acc = f(points[0]);
    acc = acc * weights[0];
    for (size_t k = 1; k < points.size(); ++k) {
      const Value term = f(points[k]);
      acc += term * weights[k];
    }
    return acc;
  }
};

// Gauss-Legendre nodes/weights on [-1, 1], computed by Newton iteration.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Positive-weight rule on the unit sphere, exact for polynomials of total
// degree <= strength: Gauss-Legendre in cos(theta) times uniform azimuth.
QuadratureRule sphere_rule(int strength);

// Product rule on the closed unit ball, weights sum to 4*pi/3.  Exact for
// polynomials of total degree <= min(angular_strength, 2*radial_order-3).
QuadratureRule ball_rule(int radial_order = 16, int angular_strength = 17);

// Adaptive Gauss-Kronrod 7-15 integration of f over [a, b].
double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double abs_tol = 1e-12, int max_depth = 40);

}  // namespace swim
