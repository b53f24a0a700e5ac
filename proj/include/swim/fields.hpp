#pragma once

#include <array>
#include <memory>
#include <utility>
#include <vector>

#include "swim/errors.hpp"
#include "swim/types.hpp"

namespace swim {

// Smooth compactly supported displacement field on R^3 with an analytic
// gradient.  The shape map associated with a field f is x -> x + f(x).
class DeformationField {
 public:
  virtual ~DeformationField() = default;
  virtual Vec3 value(const Vec3& x) const = 0;
  virtual Mat3 gradient(const Vec3& x) const = 0;
  virtual double support_radius() const = 0;
};

using FieldPtr = std::shared_ptr<const DeformationField>;

// Radial blending profile shared by the whole field library: identically 1 up
// to kBlendInner, identically 0 from kBlendOuter on, quintic smoothstep (C^2)
// in between.  Everything supported in the closed unit ball sees the plain
// unblended field.
constexpr double kBlendInner = 1.5;
constexpr double kBlendOuter = 2.5;
double blend(double r);
double blend_deriv(double r);

// x -> blend(|x|) * (b + A x).  Exactly affine on |x| <= kBlendInner.
class AffineBlendedField final : public DeformationField {
 public:
  AffineBlendedField(const Mat3& lin, const Vec3& shift) : lin_(lin), shift_(shift) {}
  Vec3 value(const Vec3& x) const override;
  Mat3 gradient(const Vec3& x) const override;
  double support_radius() const override { return kBlendOuter; }
  const Mat3& linear_part() const { return lin_; }
  const Vec3& shift_part() const { return shift_; }

 private:
  Mat3 lin_;
  Vec3 shift_;
};

// Interior bump monomial supported in the closed unit ball:
//   x -> (1-|x|^2)^decay * (|x|^2)^radial * x1^p1 x2^p2 x3^p3 * e_axis.
// Vanishes on the unit sphere together with its gradient (decay >= 2), so it
// never alters boundary traces.
class BumpField final : public DeformationField {
 public:
  BumpField(int decay, int radial, std::array<int, 3> powers, int axis)
      : decay_(decay), radial_(radial), powers_(powers), axis_(axis) {}
  Vec3 value(const Vec3& x) const override;
  Mat3 gradient(const Vec3& x) const override;
  double support_radius() const override { return 1.0; }
  int poly_degree() const { return 2 * decay_ + 2 * radial_ + powers_[0] + powers_[1] + powers_[2]; }

 private:
  int decay_;
  int radial_;
  std::array<int, 3> powers_;
  int axis_;
};

// Linear combination of fields.
class FieldSum final : public DeformationField {
 public:
  FieldSum() = default;
  explicit FieldSum(std::vector<std::pair<double, FieldPtr>> terms);
  void add(double coeff, FieldPtr f);
  Vec3 value(const Vec3& x) const override;
  Mat3 gradient(const Vec3& x) const override;
  double support_radius() const override { return radius_; }
  const std::vector<std::pair<double, FieldPtr>>& terms() const { return terms_; }

 private:
  std::vector<std::pair<double, FieldPtr>> terms_;
  double radius_ = 0.0;
};

// Frame correction applied to a base field: inside the blending region the
// shape map is replaced by R*(x + base(x) - shift) and smoothly interpolated
// back to the untouched base field outside.
class FrameCorrectedField final : public DeformationField {
 public:
  FrameCorrectedField(FieldPtr base, const Mat3& frame, const Vec3& shift)
      : base_(std::move(base)), frame_(frame), shift_(shift) {}
  Vec3 value(const Vec3& x) const override;
  Mat3 gradient(const Vec3& x) const override;
  double support_radius() const override;

 private:
  FieldPtr base_;
  Mat3 frame_;
  Vec3 shift_;
};

FieldPtr make_affine_field(const Mat3& lin, const Vec3& shift = Vec3::Zero());
FieldPtr make_zero_field();
// Scales the unit ball to the given semi-axes: lin = diag(axes) - Id.
FieldPtr make_ellipsoid_field(const Vec3& semi_axes);

// --- shape map operations ---------------------------------------------------

inline Vec3 shape_map(const DeformationField& f, const Vec3& x) { return x + f.value(x); }

// Jacobian of the shape map; throws NonPositiveJacobian if det <= 0 at x.
Mat3 shape_jacobian(const DeformationField& f, const Vec3& x);

// Orientation margin inf <(Id + grad f) e, e> over a deterministic grid of
// sample points in the support ball; the direction infimum is the smallest
// eigenvalue of the symmetric part and is computed exactly.
double diffeo_margin(const DeformationField& f, int radial_samples = 40,
                     int angular_strength = 9);

// Solves x + f(x) = y by damped Newton iteration (tol 1e-12, at most 50
// steps).  Throws InverseMapDiverged on failure.
Vec3 inverse_shape_map(const DeformationField& f, const Vec3& y,
                       const Vec3& initial_guess, double tol = 1e-12,
                       int max_iter = 50);

}  // namespace swim
