#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "swim/config.hpp"
#include "swim/density.hpp"
#include "swim/errors.hpp"
#include "swim/fields.hpp"
#include "swim/mass.hpp"
#include "swim/mesh.hpp"
#include "swim/quadrature.hpp"
#include "swim/rectify.hpp"

using namespace swim;

namespace {

constexpr double kPi = 3.14159265358979323846;

Vec3 random_ball_point(std::mt19937& gen, double radius = 0.9) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    const Vec3 x(u(gen), u(gen), u(gen));
    if (x.norm() <= 1.0) return radius * x;
  }
}

// Central-difference Jacobian of the shape map of a config.
Mat3 fd_jacobian(const SwimmerConfig& config, const VecX& s, const Vec3& x, double h) {
  Mat3 J;
  for (int j = 0; j < 3; ++j) {
    Vec3 xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    J.col(j) = (eval_map(config, s, xp) - eval_map(config, s, xm)) / (2.0 * h);
  }
  return J;
}

const Vec3 kAxes(1.0, 0.8, 0.6);

}  // namespace

TEST_CASE("ball rule integrates volume, odd moments, and |x|^2 exactly") {
  const QuadratureRule rule = ball_rule();
  const double volume = rule.integrate([](const Vec3&) { return 1.0; });
  CHECK(std::abs(volume - 4.0 * kPi / 3.0) < 1e-12);

  const Vec3 first = rule.integrate([](const Vec3& x) { return Vec3(x); });
  CHECK(first.norm() < 1e-12);

  const double second = rule.integrate([](const Vec3& x) { return x.squaredNorm(); });
  CHECK(std::abs(second - 4.0 * kPi / 5.0) < 1e-10);
}

TEST_CASE("sphere rule reproduces area and second moments") {
  const QuadratureRule rule = sphere_rule(17);
  const double area = rule.integrate([](const Vec3&) { return 1.0; });
  CHECK(std::abs(area - 4.0 * kPi) < 1e-10);
  // int x_i x_j over the sphere = (4 pi / 3) delta_ij.
  const Mat3 moments =
      rule.integrate([](const Vec3& x) { return Mat3(x * x.transpose()); });
  CHECK((moments - (4.0 * kPi / 3.0) * Mat3::Identity()).norm() < 1e-10);
}

TEST_CASE("Gauss-Legendre rule of order n is exact to degree 2n-1") {
  std::vector<double> nodes, weights;
  gauss_legendre(5, nodes, weights);
  double acc = 0.0;
  for (size_t k = 0; k < nodes.size(); ++k) acc += weights[k] * std::pow(nodes[k], 8);
  CHECK(std::abs(acc - 2.0 / 9.0) < 1e-14);
}

TEST_CASE("adaptive integration hits smooth integrals at requested tolerance") {
  const double s = adaptive_integrate([](double t) { return std::sin(t); }, 0.0, kPi);
  CHECK(std::abs(s - 2.0) < 1e-12);
}

TEST_CASE("shape map of the empty config is the identity") {
  const SwimmerConfig config{DensityField::constant(1.0), make_zero_field(), {}};
  std::mt19937 gen(7);
  for (int k = 0; k < 10; ++k) {
    const Vec3 x = random_ball_point(gen);
    CHECK((eval_map(config, VecX(), x) - x).norm() < 1e-15);
    const auto [J, det] = eval_jacobian(config, VecX(), x);
    CHECK((J - Mat3::Identity()).norm() < 1e-15);
    CHECK(det == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("ellipsoid base is exactly affine on the unit ball") {
  const SwimmerConfig config{DensityField::constant(1.0), make_ellipsoid_field(kAxes), {}};
  CHECK((eval_map(config, VecX(), Vec3(0, 0, 1)) - Vec3(0, 0, 0.6)).norm() < 1e-15);
  CHECK((eval_map(config, VecX(), Vec3(1, 0, 0)) - Vec3(1, 0, 0)).norm() < 1e-15);
  CHECK((eval_map(config, VecX(), Vec3(0, 0.5, 0)) - Vec3(0, 0.4, 0)).norm() < 1e-15);

  const auto [J, det] = eval_jacobian(config, VecX(), Vec3(0.2, -0.1, 0.3));
  CHECK((J - kAxes.asDiagonal().toDenseMatrix()).norm() < 1e-14);
  CHECK(det == doctest::Approx(0.48).epsilon(1e-12));
}

TEST_CASE("movement coordinates superpose linearly inside the ball") {
  Mat3 A = Mat3::Zero();
  A(0, 1) = 0.2;
  A(2, 2) = -0.1;
  SwimmerConfig config{DensityField::constant(1.0), make_ellipsoid_field(kAxes),
                       {make_affine_field(A)}};
  VecX s(1);
  s << 0.7;
  const Vec3 x(0.3, -0.4, 0.5);
  const Vec3 expected = kAxes.asDiagonal() * x + 0.7 * (A * x);
  CHECK((eval_map(config, s, x) - expected).norm() < 1e-14);
}

TEST_CASE("analytic Jacobian matches central differences on a smooth config") {
  Mat3 A;
  A << 0.05, 0.12, -0.03, -0.07, 0.02, 0.09, 0.04, -0.06, 0.08;
  SwimmerConfig config{
      DensityField::constant(1.0),
      make_ellipsoid_field(kAxes),
      {make_affine_field(A, Vec3(0.02, -0.01, 0.03)),
       std::make_shared<BumpField>(2, 1, std::array<int, 3>{1, 0, 1}, 2)}};
  VecX s(2);
  s << 0.4, 0.8;
  std::mt19937 gen(11);
  for (int k = 0; k < 25; ++k) {
    const Vec3 x = random_ball_point(gen);
    const auto [J, det] = eval_jacobian(config, s, x);
    CHECK(det > 0.0);
    CHECK((J - fd_jacobian(config, s, x, 1e-4)).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("non-orientation-preserving maps are rejected") {
  const SwimmerConfig config{DensityField::constant(1.0),
                             make_affine_field(-1.5 * Mat3::Identity()), {}};
  CHECK_THROWS_AS(eval_jacobian(config, VecX(), Vec3::Zero()), NonPositiveJacobian);
  const AffineBlendedField squash(-1.5 * Mat3::Identity(), Vec3::Zero());
  CHECK_THROWS_AS(shape_jacobian(squash, Vec3::Zero()), NonPositiveJacobian);
}

TEST_CASE("diffeomorphism margin of simple fields is exact") {
  const auto zero = make_zero_field();
  CHECK(diffeo_margin(*zero) == doctest::Approx(1.0).epsilon(1e-12));
  const AffineBlendedField shrink(-0.5 * Mat3::Identity(), Vec3::Zero());
  CHECK(diffeo_margin(shrink) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("inverse shape map round-trips random points") {
  Mat3 A;
  A << 0.0, 0.15, 0.0, -0.1, 0.05, 0.0, 0.0, 0.08, -0.04;
  FieldSum total;
  total.add(1.0, make_ellipsoid_field(kAxes));
  total.add(1.0, make_affine_field(A));
  total.add(0.6, std::make_shared<BumpField>(2, 0, std::array<int, 3>{0, 1, 0}, 0));
  std::mt19937 gen(3);
  for (int k = 0; k < 20; ++k) {
    const Vec3 x = random_ball_point(gen);
    const Vec3 y = shape_map(total, x);
    const Vec3 back = inverse_shape_map(total, y, Vec3::Zero());
    CHECK((back - x).norm() < 1e-10);
  }
}

TEST_CASE("bump fields vanish on the sphere with their gradients") {
  const BumpField bump(2, 1, {1, 0, 2}, 1);
  for (const Vec3& u : {Vec3(1, 0, 0), Vec3(0.6, 0.8, 0.0), Vec3(0, 0, 1)}) {
    CHECK(bump.value(u).norm() == 0.0);
    CHECK(bump.gradient(u).norm() < 1e-14);
  }
  // Analytic gradient against central differences at interior points.
  std::mt19937 gen(5);
  for (int k = 0; k < 15; ++k) {
    const Vec3 x = random_ball_point(gen);
    Mat3 fd;
    for (int j = 0; j < 3; ++j) {
      Vec3 xp = x, xm = x;
      xp[j] += 1e-5;
      xm[j] -= 1e-5;
      fd.col(j) = (bump.value(xp) - bump.value(xm)) / 2e-5;
    }
    CHECK((bump.gradient(x) - fd).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("pushforward density divides by the volume change") {
  // Dilation by 1.1: the carried density is 1 / 1.1^3 everywhere inside.
  const SwimmerConfig dilate{DensityField::constant(1.0),
                             make_affine_field(0.1 * Mat3::Identity()), {}};
  const double rho = pushforward_density(dilate, VecX(), Vec3(0.55, 0.0, 0.0));
  CHECK(rho == doctest::Approx(1.0 / 1.331).epsilon(1e-10));

  // Identity map carries the density unchanged.
  const SwimmerConfig ident{DensityField::quadratic(1.0, Vec3(0.2, 0.1, 0.3)),
                            make_zero_field(), {}};
  const Vec3 p(0.3, -0.2, 0.4);
  CHECK(pushforward_density(ident, VecX(), p) ==
        doctest::Approx(ident.density.value(p)).epsilon(1e-12));
}

TEST_CASE("pushforward conserves mass pointwise: rho_s(Theta(x)) det J = rho(x)") {
  Mat3 A;
  A << 0.05, 0.1, 0.0, -0.08, 0.0, 0.06, 0.0, 0.05, -0.04;
  SwimmerConfig config{DensityField::quadratic(1.0, Vec3(0.1, -0.05, 0.2)),
                       make_ellipsoid_field(kAxes),
                       {make_affine_field(A)}};
  VecX s(1);
  s << 0.5;
  std::mt19937 gen(13);
  for (int k = 0; k < 10; ++k) {
    const Vec3 x = random_ball_point(gen);
    const auto [J, det] = eval_jacobian(config, s, x);
    (void)J;
    const double carried = pushforward_density(config, s, eval_map(config, s, x));
    CHECK(carried * det == doctest::Approx(config.density.value(x)).epsilon(1e-8));
  }
}

TEST_CASE("icosphere meshes close up and converge to the round sphere") {
  for (int ref = 0; ref <= 3; ++ref) {
    const SurfaceMesh mesh = unit_icosphere(ref);
    CHECK(mesh.panel_count() == 20 * (1 << (2 * ref)));
    CHECK(mesh.closure_residual() < 1e-12);
    // Normals point into the body: against the radial direction.
    for (int q = 0; q < mesh.panel_count(); ++q)
      CHECK(mesh.normals[q].dot(mesh.centroids[q]) < 0.0);
  }
  const SurfaceMesh fine = unit_icosphere(2);
  CHECK(fine.panel_count() == 320);
  // Inscribed polyhedron: area and volume deficits shrink at second order
  // (about 1.9% and 3.4% here, a quarter of that at the next refinement).
  CHECK(std::abs(fine.total_area() - 4.0 * kPi) / (4.0 * kPi) < 0.025);
  CHECK(std::abs(fine.enclosed_volume() - 4.0 * kPi / 3.0) / (4.0 * kPi / 3.0) < 0.045);
  const SurfaceMesh finer = unit_icosphere(3);
  CHECK(std::abs(finer.total_area() - 4.0 * kPi) <
        0.3 * std::abs(fine.total_area() - 4.0 * kPi));
  CHECK(fine.max_aspect() < 6.0);
}

TEST_CASE("deformed mesh area agrees with the quadrature oracle") {
  const SwimmerConfig config{DensityField::constant(1.0), make_ellipsoid_field(kAxes), {}};
  // Area of an affine image of the sphere: int over S^2 of |cof(D) n|.
  const Vec3 cof(kAxes[1] * kAxes[2], kAxes[0] * kAxes[2], kAxes[0] * kAxes[1]);
  const double oracle = sphere_rule(51).integrate(
      [&](const Vec3& n) { return (cof.asDiagonal() * n).norm(); });
  const SurfaceMesh coarse = surface_mesh(config, VecX(), 3);
  CHECK(std::abs(coarse.total_area() - oracle) / oracle < 0.01);
  const SurfaceMesh fine = surface_mesh(config, VecX(), 4);
  CHECK(std::abs(fine.total_area() - oracle) / oracle < 0.002);
  CHECK(std::abs(fine.enclosed_volume() - 0.48 * 4.0 * kPi / 3.0) /
            (0.48 * 4.0 * kPi / 3.0) <
        0.003);
  CHECK(fine.closure_residual() < 1e-12);
}

TEST_CASE("rigid transforms move vertices exactly and keep the measures") {
  const SurfaceMesh mesh = unit_icosphere(2);
  const Mat3 R = rot_exp(Vec3(0.4, -0.3, 0.8));
  const Vec3 t(0.5, -1.0, 0.25);
  const SurfaceMesh moved = transform_mesh(mesh, R, t);
  for (size_t v = 0; v < mesh.vertices.size(); ++v) {
    CHECK((moved.vertices[v] - (R * mesh.vertices[v] + t)).norm() < 1e-14);
    CHECK((moved.ref_vertices[v] - mesh.ref_vertices[v]).norm() == 0.0);
  }
  CHECK(moved.total_area() == doctest::Approx(mesh.total_area()).epsilon(1e-12));
  CHECK(moved.enclosed_volume() == doctest::Approx(mesh.enclosed_volume()).epsilon(1e-12));
  CHECK(moved.closure_residual() < 1e-12);
}

TEST_CASE("OFF export carries the right header and counts") {
  const SurfaceMesh mesh = unit_icosphere(1);
  std::ostringstream out;
  write_off(mesh, out);
  std::istringstream in(out.str());
  std::string magic;
  int nv = 0, nf = 0, ne = 0;
  in >> magic >> nv >> nf >> ne;
  CHECK(magic == "OFF");
  CHECK(nv == static_cast<int>(mesh.vertices.size()));
  CHECK(nf == mesh.panel_count());
}

TEST_CASE("rigid shell generators restrict to rigid velocities on the surface") {
  const FieldPtr base = make_ellipsoid_field(kAxes);
  const auto basis = rigid_shell_basis(base);
  REQUIRE(basis.size() == 6);
  std::mt19937 gen(17);
  std::normal_distribution<double> nrm;
  for (int k = 0; k < 8; ++k) {
    Vec3 u(nrm(gen), nrm(gen), nrm(gen));
    u.normalize();
    const Vec3 surface_point = kAxes.asDiagonal() * u;
    for (int i = 0; i < 3; ++i) {
      const Vec3 expected = Vec3::Unit(i).cross(surface_point);
      CHECK((basis[i]->value(u) - expected).norm() < 1e-13);
      CHECK((basis[3 + i]->value(u) - Vec3::Unit(i)).norm() < 1e-13);
    }
  }
}

TEST_CASE("rectification zeros the self-propulsion moments, traces untouched") {
  const FieldPtr base = make_ellipsoid_field(kAxes);
  const auto basis = rigid_shell_basis(base);
  SwimmerConfig draft{DensityField::constant(1.0), base,
                      {basis.begin(), basis.begin() + 5}};
  const QuadratureRule rule = ball_rule();
  const RectifyResult fixed = rectify_fields(draft, rule);
  CHECK(fixed.max_residual <= 1e-8);
  REQUIRE(fixed.config.n() == 5);

  // The raw translation generator carries the whole body mass; its corrected
  // version must have zero linear moment.
  const double mass = rule.integrate([&](const Vec3& x) { return draft.density.value(x); });
  const Vec3 raw_moment = rule.integrate(
      [&](const Vec3& x) { return Vec3(draft.density.value(x) * draft.movements[3]->value(x)); });
  CHECK(raw_moment.norm() > 0.9 * mass);
  const Vec3 fixed_moment = rule.integrate([&](const Vec3& x) {
    return Vec3(draft.density.value(x) * fixed.config.movements[3]->value(x));
  });
  CHECK(fixed_moment.norm() < 1e-7);

  // Corrections are interior: traces on the reference sphere are unchanged.
  std::mt19937 gen(23);
  std::normal_distribution<double> nrm;
  for (int k = 0; k < 6; ++k) {
    Vec3 u(nrm(gen), nrm(gen), nrm(gen));
    u.normalize();
    for (int i = 0; i < 5; ++i)
      CHECK((fixed.config.movements[i]->value(u) - draft.movements[i]->value(u)).norm() <
            1e-12);
  }

  const ValidationReport report = validate_config(fixed.config, rule);
  CHECK(report.margin > 0.0);
  CHECK(report.min_density > 0.0);
  CHECK(report.moment_residual <= 1e-8);
  CHECK(report.gram_min_eigenvalue > 1e-8);
  CHECK(report.ok());
}

TEST_CASE("shape certification accepts small coordinates, rejects large ones") {
  const SwimmerConfig config = make_rigid_shell_config(
      DensityField::constant(1.0), make_ellipsoid_field(kAxes), 5);
  // The momentum-cancelling corrections are strong in the interior, so the
  // invertibility margin shrinks quickly with the coordinates.
  VecX s(5);
  s << 0.05, -0.04, 0.025, 0.06, -0.03;
  CHECK(certify_shape(config, s) > 0.0);
  CHECK(certify_shape(config, VecX(2.0 * s)) < 0.0);
  CHECK_NOTHROW(require_valid(config));
}

TEST_CASE("density fitting reproduces requested inertia targets") {
  const SwimmerConfig uniform{DensityField::constant(1.0), make_ellipsoid_field(kAxes), {}};
  const auto [I0, m0] = inertia_and_mass(uniform, VecX());
  CHECK(m0 == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-12));
  const Vec3 expected0 = (4.0 * kPi / 15.0) *
                         Vec3(kAxes[1] * kAxes[1] + kAxes[2] * kAxes[2],
                              kAxes[0] * kAxes[0] + kAxes[2] * kAxes[2],
                              kAxes[0] * kAxes[0] + kAxes[1] * kAxes[1]);
  CHECK((I0.diagonal() - expected0).norm() < 1e-10);

  const Vec3 targets = expected0.cwiseProduct(Vec3(1.1, 0.95, 1.05));
  const DensityField fitted = fit_inertia_targets(kAxes, targets);
  CHECK(fitted.min_on_ball() > 0.0);
  const SwimmerConfig shaped{fitted, make_ellipsoid_field(kAxes), {}};
  const auto [I, m] = inertia_and_mass(shaped, VecX());
  (void)m;
  CHECK((I.diagonal() - targets).norm() / targets.norm() < 1e-8);
  CHECK((I - Mat3(I.diagonal().asDiagonal())).norm() < 1e-10);
}
