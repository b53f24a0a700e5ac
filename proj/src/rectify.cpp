#include "swim/rectify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <memory>

#include "swim/errors.hpp"

namespace swim {

namespace {

FieldPtr bump(int decay, int radial, std::array<int, 3> powers, int axis) {
  return std::make_shared<BumpField>(decay, radial, powers, axis);
}

std::vector<FieldPtr> build_library() {
  std::vector<FieldPtr> lib;
  // (1-r^2)^2 times every monomial of degree <= 2, on each axis: 30 fields.
  std::vector<std::array<int, 3>> monos = {{0, 0, 0}};
  for (int d = 0; d < 3; ++d) {
    std::array<int, 3> p = {0, 0, 0};
    p[d] = 1;
    monos.push_back(p);
  }
  for (int d = 0; d < 3; ++d)
    for (int e = d; e < 3; ++e) {
      std::array<int, 3> p = {0, 0, 0};
      p[d] += 1;
      p[e] += 1;
      monos.push_back(p);
    }
  for (const auto& p : monos)
    for (int axis = 0; axis < 3; ++axis) lib.push_back(bump(2, 0, p, axis));

  // (1-r^2)^3 times e_c, e_c x x, and x_c e_c: 9 more.
  for (int axis = 0; axis < 3; ++axis) lib.push_back(bump(3, 0, {0, 0, 0}, axis));
  for (int c = 0; c < 3; ++c) {
    // e_c x x = x_b e_a - x_a e_b  with (c, a, b) a cyclic triple
    const int a = (c + 1) % 3, b = (c + 2) % 3;
    auto sum = std::make_shared<FieldSum>();
    std::array<int, 3> pb = {0, 0, 0};
    pb[b] = 1;
    sum->add(1.0, bump(3, 0, pb, a));
    std::array<int, 3> pa = {0, 0, 0};
    pa[a] = 1;
    sum->add(-1.0, bump(3, 0, pa, b));
    lib.push_back(sum);
  }
  for (int c = 0; c < 3; ++c) {
    std::array<int, 3> p = {0, 0, 0};
    p[c] = 1;
    lib.push_back(bump(3, 0, p, c));
  }

  // (1-r^2)^2 r^2 x: one radial push.
  {
    auto sum = std::make_shared<FieldSum>();
    for (int c = 0; c < 3; ++c) {
      std::array<int, 3> p = {0, 0, 0};
      p[c] = 1;
      sum->add(1.0, bump(2, 1, p, c));
    }
    lib.push_back(sum);
  }
  return lib;
}

}  // namespace

const std::vector<FieldPtr>& correction_library() {
  static const std::vector<FieldPtr> lib = build_library();
  return lib;
}

RectifyResult rectify_fields(const SwimmerConfig& draft, const QuadratureRule& rule, double tol) {
  const auto& lib = correction_library();
  const int n_lib = static_cast<int>(lib.size());
  const size_t nq = rule.points.size();

  // Density weights and Theta = id + theta at every node, shared below.
  std::vector<double> w(nq);
  std::vector<Vec3> theta(nq);
  for (size_t q = 0; q < nq; ++q) {
    w[q] = rule.weights[q] * draft.density.value(rule.points[q]);
    theta[q] = rule.points[q] + draft.base->value(rule.points[q]);
  }
  double mass = 0.0;
  for (size_t q = 0; q < nq; ++q) mass += w[q];

  std::vector<std::vector<Vec3>> lib_vals(n_lib, std::vector<Vec3>(nq));
  for (int a = 0; a < n_lib; ++a)
    for (size_t q = 0; q < nq; ++q) lib_vals[a][q] = lib[a]->value(rule.points[q]);

  RectifyResult out{draft, {}, 0.0};
  std::vector<std::vector<Vec3>> done;  // corrected field values at the nodes

  for (int k = 0; k < draft.n(); ++k) {
    const int rows = 7 + 3 * static_cast<int>(done.size());
    if (rows > n_lib)
      throw CorrectionBasisDeficient(
          "more moment constraints than correction fields; enlarge the bump library");

    // moments(f) = (int rho f; int rho Theta x f; int rho Theta . f;
    //               int rho V*_j x f for each earlier j)
    auto moments = [&](const std::vector<Vec3>& vals) {
      VecX m = VecX::Zero(rows);
      for (size_t q = 0; q < nq; ++q) {
        const Vec3& f = vals[q];
        m.segment<3>(0) += w[q] * f;
        m.segment<3>(3) += w[q] * theta[q].cross(f);
        m[6] += w[q] * theta[q].dot(f);
        for (size_t j = 0; j < done.size(); ++j)
          m.segment<3>(7 + 3 * j) += w[q] * done[j][q].cross(f);
      }
      return m;
    };

    std::vector<Vec3> vk(nq);
    for (size_t q = 0; q < nq; ++q) vk[q] = draft.movements[k]->value(rule.points[q]);

    MatX sys(rows, n_lib);
    for (int a = 0; a < n_lib; ++a) sys.col(a) = moments(lib_vals[a]);
    const VecX rhs = -moments(vk);

    // The constraint rows can be linearly dependent (cross-moments against
    // corrected fields overlap the rigid-moment rows), so solve in the
    // least-squares sense and judge success by the achieved residual below.
    Eigen::CompleteOrthogonalDecomposition<MatX> cod(sys);
    const VecX coeffs = cod.solve(rhs);

    auto corrected = std::make_shared<FieldSum>();
    corrected->add(1.0, draft.movements[k]);
    auto correction = std::make_shared<FieldSum>();
    for (int a = 0; a < n_lib; ++a) {
      if (coeffs[a] == 0.0) continue;
      corrected->add(coeffs[a], lib[a]);
      correction->add(coeffs[a], lib[a]);
    }
    out.config.movements[k] = corrected;
    out.corrections.push_back(correction);

    std::vector<Vec3> star(nq);
    for (size_t q = 0; q < nq; ++q) {
      star[q] = vk[q];
      for (int a = 0; a < n_lib; ++a) star[q] += coeffs[a] * lib_vals[a][q];
    }
    const double residual = moments(star).norm() / mass;
    out.max_residual = std::max(out.max_residual, residual);
    if (residual > tol)
      throw CorrectionBasisDeficient("corrections left a moment residual above tolerance");
    done.push_back(std::move(star));
  }
  return out;
}

std::vector<FieldPtr> rigid_shell_basis(const FieldPtr& base) {
  const auto* affine = dynamic_cast<const AffineBlendedField*>(base.get());
  if (affine == nullptr)
    throw Unsupported("rigid shell basis requires an affine-blended base deformation");
  const Mat3 shape = Mat3::Identity() + affine->linear_part();
  const Vec3 shift = affine->shift_part();

  std::vector<FieldPtr> fields;
  for (int i = 0; i < 3; ++i) {
    const Mat3 spin = hat(Vec3::Unit(i));
    fields.push_back(make_affine_field(spin * shape, spin * shift));
  }
  for (int i = 0; i < 3; ++i) fields.push_back(make_affine_field(Mat3::Zero(), Vec3::Unit(i)));
  return fields;
}

SwimmerConfig make_rigid_shell_config(const DensityField& density, const FieldPtr& base, int n,
                                      const QuadratureRule& rule) {
  if (n < 1 || n > 6) throw ConfigError("rigid-shell swimmers support 1 to 6 movement fields");
  auto basis = rigid_shell_basis(base);
  basis.resize(n);
  SwimmerConfig draft{density, base, std::move(basis)};
  return rectify_fields(draft, rule).config;
}

}  // namespace swim
