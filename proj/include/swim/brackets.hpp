#pragma once

#include "swim/mass.hpp"
#include "swim/types.hpp"

namespace swim {

// Tangent vector at a state of the R x r x s system, in body-frame
// components: the spatial field at orientation R has R-rotated rigid blocks
// and the same shape block.
struct TangentVector {
  Vec3 rot = Vec3::Zero();
  Vec3 trans = Vec3::Zero();
  VecX shape;

  VecX stacked() const;  // (rot; trans; shape)
};

// Rigid responses of all control fields at once: column i is
// X_i(s) = -Mr(s)^{-1} N(s) f_i, in body components (6 x n).
MatX control_matrix(const MassModel& model, const VecX& s);

// The i-th control vector field in body components (independent of R):
// rigid part X_i(s), shape part f_i.  Indices are 0-based.
TangentVector vector_field(const MassModel& model, int i, const VecX& s);

// Spatial representation at orientation R.
TangentVector lift_field(const TangentVector& body, const Mat3& rot);

// First-order bracket [Z_i, Z_j] in body components: the rigid cross terms
// plus the antisymmetrized shape derivatives of the rigid parts (central
// differences in s, one optional Richardson level).  Shape part is zero.
TangentVector lie_bracket_numeric(const MassModel& model, int i, int j, const VecX& s,
                                  double h = 1e-4, bool richardson = true);

// Published closed forms of the first-order brackets of a rigid-shell body
// with a diagonal added-mass matrix, evaluated at the rest shape.  Supports
// the six published index pairs and their transposes; anything else throws
// Unsupported.
TangentVector lie_bracket_closed_form(const Vec3& inertia, double mass, const Vec6& mu, int i,
                                      int j);

struct ConditionReport {
  Vec3 factors = Vec3::Zero();       // the three rotational bracket polynomials
  double mu4_minus_mu6 = 0.0;        // mu4 - mu6
  double mu5_minus_mu4 = 0.0;        // mu5 - mu4
  bool controllable = false;
};

// The explicit sufficient controllability condition for a 5-field rigid
// shell: all three inertia polynomials and both translational added-mass
// differences are nonzero (beyond a scale-relative tolerance).
ConditionReport controllability_condition(const Vec3& inertia, double mass, const Vec6& mu,
                                          double tol = 1e-12);

struct RankReport {
  int rank = 0;
  int depth = 0;
  int columns = 0;
  double svd_tol = 0.0;
  VecX singular_values;
};

// Dimension of the span of the control fields and their iterated brackets
// (left-nested words up to the given length) at shape s, over the
// (6+n)-dimensional tangent space.  Rank by SVD with a relative threshold.
// The result is independent of (R, r) by equivariance.
RankReport lie_rank(const MassModel& model, const VecX& s, int depth = 2, double svd_tol = 1e-8);

}  // namespace swim
