#pragma once

#include <Eigen/Dense>

#include "swim/mesh.hpp"
#include "swim/types.hpp"

namespace swim {

// Discrete solution of an exterior Neumann problem on a mesh: the boundary
// potential at panel centroids together with the prescribed flux (normal
// derivative toward the body interior).
struct BoundarySolution {
  VecX potentials;
  VecX fluxes;
  double compatibility = 0.0;  // |sum flux*area| / sum |flux|*area
};

// Collocation operator for a fixed mesh.  Green's representation formula for
// the decaying exterior potential gives, at panel centroids, the second-kind
// system (1/2 I + K) psi = S b: K is the double-layer operator, assembled
// exactly per flat panel from signed solid angles, and S the single-layer
// operator; b is the interior-directed normal derivative.  Factoring the
// system once serves any number of fluxes.
class PanelOperator {
 public:
  explicit PanelOperator(const SurfaceMesh& mesh);

  BoundarySolution solve(const VecX& flux) const;

  // Potential at a point strictly outside the body, by the representation
  // formula psi(x) = (S b)(x) - (K psi)(x).
  double potential_at(const BoundarySolution& solution, const Vec3& x) const;

  const SurfaceMesh& mesh() const { return mesh_; }

 private:
  SurfaceMesh mesh_;
  Eigen::PartialPivLU<MatX> lu_;  // factors 1/2 I + K
  MatX single_layer_;             // S_pq = int over panel q of G(centroid_p, y)
};

// One-shot convenience wrapper around PanelOperator.
BoundarySolution solve_exterior_neumann(const SurfaceMesh& mesh, const VecX& flux);

// Single-layer potential of one triangle with unit density, divided by 4 pi.
// Exact for observation points in the panel plane (used for self terms);
// off-plane points go through quadrature instead.
double triangle_potential_in_plane(const Vec3& observation, const Vec3& a, const Vec3& b,
                                   const Vec3& c, const Vec3& unit_normal);

// Signed solid angle subtended by triangle (a, b, c) at x, positive when the
// right-hand winding normal points away from x.  Exact double-layer panel
// integral: int over the triangle of (x - y) . m / |x - y|^3 dS(y) equals the
// solid angle computed with the winding normal m.
double triangle_solid_angle(const Vec3& x, const Vec3& a, const Vec3& b, const Vec3& c);

}  // namespace swim
