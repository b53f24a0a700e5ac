#include "swim/fields.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "swim/quadrature.hpp"

namespace swim {

double blend(double r) {
  if (r <= kBlendInner) return 1.0;
  if (r >= kBlendOuter) return 0.0;
  const double t = (r - kBlendInner) / (kBlendOuter - kBlendInner);
  const double s = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
  return 1.0 - s;
}

double blend_deriv(double r) {
  if (r <= kBlendInner || r >= kBlendOuter) return 0.0;
  const double w = kBlendOuter - kBlendInner;
  const double t = (r - kBlendInner) / w;
  return -30.0 * t * t * (1.0 + t * (-2.0 + t)) / w;
}

Vec3 AffineBlendedField::value(const Vec3& x) const {
  const double r = x.norm();
  if (r >= kBlendOuter) return Vec3::Zero();
  return blend(r) * (shift_ + lin_ * x);
}

Mat3 AffineBlendedField::gradient(const Vec3& x) const {
  const double r = x.norm();
  if (r >= kBlendOuter) return Mat3::Zero();
  Mat3 g = blend(r) * lin_;
  if (r > kBlendInner) {
    const Vec3 dir = x / r;
    g += (shift_ + lin_ * x) * (blend_deriv(r) * dir).transpose();
  }
  return g;
}

namespace {

double int_pow(double base, int n) {
  double out = 1.0;
  for (int i = 0; i < n; ++i) out *= base;
  return out;
}

}  // namespace

Vec3 BumpField::value(const Vec3& x) const {
  const double u = x.squaredNorm();
  if (u >= 1.0) return Vec3::Zero();
  double g = int_pow(1.0 - u, decay_) * int_pow(u, radial_);
  for (int i = 0; i < 3; ++i) g *= int_pow(x[i], powers_[i]);
  Vec3 out = Vec3::Zero();
  out[axis_] = g;
  return out;
}

Mat3 BumpField::gradient(const Vec3& x) const {
  const double u = x.squaredNorm();
  if (u >= 1.0) return Mat3::Zero();
  const double one_mu = 1.0 - u;
  double mono = 1.0;
  for (int i = 0; i < 3; ++i) mono *= int_pow(x[i], powers_[i]);
  const double radial = int_pow(one_mu, decay_) * int_pow(u, radial_);

  // d/du of (1-u)^decay u^radial, times 2x from u = |x|^2
  double d_radial = -decay_ * int_pow(one_mu, decay_ - 1) * int_pow(u, radial_);
  if (radial_ > 0) d_radial += radial_ * int_pow(u, radial_ - 1) * int_pow(one_mu, decay_);

  Vec3 grad = 2.0 * d_radial * mono * x;
  for (int i = 0; i < 3; ++i) {
    if (powers_[i] == 0) continue;
    double dm = powers_[i] * int_pow(x[i], powers_[i] - 1);
    for (int j = 0; j < 3; ++j)
      if (j != i) dm *= int_pow(x[j], powers_[j]);
    grad[i] += radial * dm;
  }
  Mat3 out = Mat3::Zero();
  out.row(axis_) = grad.transpose();
  return out;
}

FieldSum::FieldSum(std::vector<std::pair<double, FieldPtr>> terms) {
  for (auto& [c, f] : terms) add(c, std::move(f));
}

void FieldSum::add(double coeff, FieldPtr f) {
  radius_ = std::max(radius_, f->support_radius());
  terms_.emplace_back(coeff, std::move(f));
}

Vec3 FieldSum::value(const Vec3& x) const {
  Vec3 out = Vec3::Zero();
  for (const auto& [c, f] : terms_) out += c * f->value(x);
  return out;
}

Mat3 FieldSum::gradient(const Vec3& x) const {
  Mat3 out = Mat3::Zero();
  for (const auto& [c, f] : terms_) out += c * f->gradient(x);
  return out;
}

Vec3 FrameCorrectedField::value(const Vec3& x) const {
  const Vec3 base = base_->value(x);
  const double r = x.norm();
  if (r >= kBlendOuter) return base;
  const Vec3 rotated = frame_ * (x + base - shift_);
  return base + blend(r) * (rotated - x - base);
}

Mat3 FrameCorrectedField::gradient(const Vec3& x) const {
  const Mat3 gbase = base_->gradient(x);
  const double r = x.norm();
  if (r >= kBlendOuter) return gbase;
  const Mat3 id = Mat3::Identity();
  Mat3 g = gbase + blend(r) * (frame_ * (id + gbase) - id - gbase);
  if (r > kBlendInner) {
    const Vec3 base = base_->value(x);
    const Vec3 diff = frame_ * (x + base - shift_) - x - base;
    g += diff * (blend_deriv(r) * x / r).transpose();
  }
  return g;
}

double FrameCorrectedField::support_radius() const {
  return std::max(base_->support_radius(), kBlendOuter);
}

FieldPtr make_affine_field(const Mat3& lin, const Vec3& shift) {
  return std::make_shared<AffineBlendedField>(lin, shift);
}

FieldPtr make_zero_field() {
  return std::make_shared<AffineBlendedField>(Mat3::Zero(), Vec3::Zero());
}

FieldPtr make_ellipsoid_field(const Vec3& semi_axes) {
  Mat3 lin = semi_axes.asDiagonal();
  return make_affine_field(lin - Mat3::Identity());
}

Mat3 shape_jacobian(const DeformationField& f, const Vec3& x) {
  Mat3 jac = Mat3::Identity() + f.gradient(x);
  if (jac.determinant() <= 0.0)
    throw NonPositiveJacobian("shape map jacobian not orientation preserving at sample point");
  return jac;
}

double diffeo_margin(const DeformationField& f, int radial_samples, int angular_strength) {
  const QuadratureRule dirs = sphere_rule(angular_strength);
  const double radius = f.support_radius();
  Eigen::SelfAdjointEigenSolver<Mat3> eig;
  auto margin_at = [&](const Vec3& x) {
    const Mat3 jac = Mat3::Identity() + f.gradient(x);
    eig.compute(0.5 * (jac + jac.transpose()), Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff();
  };
  double out = margin_at(Vec3::Zero());
  for (int i = 1; i <= radial_samples; ++i) {
    const double r = radius * static_cast<double>(i) / radial_samples;
    for (const Vec3& d : dirs.points) out = std::min(out, margin_at(r * d));
  }
  return out;
}

Vec3 inverse_shape_map(const DeformationField& f, const Vec3& y, const Vec3& initial_guess,
                       double tol, int max_iter) {
  Vec3 x = initial_guess;
  Vec3 res = shape_map(f, x) - y;
  for (int it = 0; it < max_iter; ++it) {
    if (res.norm() <= tol) return x;
    const Mat3 jac = Mat3::Identity() + f.gradient(x);
    const Vec3 step = jac.partialPivLu().solve(res);
    if (!step.allFinite()) throw InverseMapDiverged("newton step not finite");
    double damping = 1.0;
    while (true) {
      const Vec3 trial = x - damping * step;
      const Vec3 trial_res = shape_map(f, trial) - y;
      if (trial_res.norm() < res.norm()) {
        x = trial;
        res = trial_res;
        break;
      }
      damping *= 0.5;
      if (damping < 1e-8) throw InverseMapDiverged("newton line search stalled");
    }
  }
  if (res.norm() <= tol) return x;
  throw InverseMapDiverged("newton iteration exceeded the step budget");
}

}  // namespace swim
