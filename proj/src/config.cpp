#include "swim/config.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <memory>

#include "swim/errors.hpp"

namespace swim {

FieldPtr total_field(const SwimmerConfig& config, const VecX& s) {
  if (s.size() != config.n())
    throw ConfigError("shape coordinate count does not match the movement fields");
  auto sum = std::make_shared<FieldSum>();
  sum->add(1.0, config.base);
  for (int i = 0; i < config.n(); ++i) sum->add(s[i], config.movements[i]);
  return sum;
}

Vec3 eval_map(const SwimmerConfig& config, const VecX& s, const Vec3& x) {
  return shape_map(*total_field(config, s), x);
}

std::pair<Mat3, double> eval_jacobian(const SwimmerConfig& config, const VecX& s, const Vec3& x) {
  const Mat3 jac = shape_jacobian(*total_field(config, s), x);
  return {jac, jac.determinant()};
}

double pushforward_density(const SwimmerConfig& config, const VecX& s, const Vec3& x_deformed) {
  return pushforward_density(config.density, *total_field(config, s), x_deformed, x_deformed);
}

double certify_shape(const SwimmerConfig& config, const VecX& s, int segment_samples) {
  double margin = diffeo_margin(*config.base);
  for (int k = 1; k <= segment_samples; ++k) {
    const double t = static_cast<double>(k) / segment_samples;
    margin = std::min(margin, diffeo_margin(*total_field(config, t * s)));
  }
  return margin;
}

ValidationReport validate_config(const SwimmerConfig& config, const QuadratureRule& rule) {
  ValidationReport report;
  report.margin = diffeo_margin(*config.base);
  report.min_density = config.density.min_on_ball();

  const int n = config.n();
  const double mass = rule.integrate([&](const Vec3& x) { return config.density.value(x); });

  // Values of Theta = id + theta and of each movement at every node, reused
  // across all the moment integrals.
  std::vector<std::vector<Vec3>> vals(n + 1);
  for (int i = 0; i <= n; ++i) {
    vals[i].reserve(rule.points.size());
    for (const Vec3& x : rule.points)
      vals[i].push_back(i == 0 ? Vec3(x + config.base->value(x)) : config.movements[i - 1]->value(x));
  }

  double worst = 0.0;
  auto weighted_sum = [&](auto&& per_node) {
    Vec3 acc = Vec3::Zero();
    for (size_t q = 0; q < rule.points.size(); ++q)
      acc += rule.weights[q] * config.density.value(rule.points[q]) * per_node(q);
    return acc;
  };
  for (int i = 0; i <= n; ++i) {
    const Vec3 linear = weighted_sum([&](size_t q) { return vals[i][q]; });
    worst = std::max(worst, linear.norm());
    for (int j = i + 1; j <= n; ++j) {
      const Vec3 angular = weighted_sum([&](size_t q) { return Vec3(vals[i][q].cross(vals[j][q])); });
      worst = std::max(worst, angular.norm());
    }
  }
  report.moment_residual = worst / std::max(mass, 1e-300);

  if (n > 0) {
    MatX gram = MatX::Zero(n, n);
    for (size_t q = 0; q < rule.points.size(); ++q)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
          gram(i, j) += rule.weights[q] * vals[i + 1][q].dot(vals[j + 1][q]);
    gram = gram.selfadjointView<Eigen::Upper>();
    VecX scale = gram.diagonal().cwiseMax(1e-300).cwiseSqrt();
    MatX normalized = gram.array() / (scale * scale.transpose()).array();
    Eigen::SelfAdjointEigenSolver<MatX> eig(normalized, Eigen::EigenvaluesOnly);
    report.gram_min_eigenvalue = eig.eigenvalues().minCoeff();
  } else {
    report.gram_min_eigenvalue = 1.0;
  }
  return report;
}

void require_valid(const SwimmerConfig& config, double moment_tol, double gram_tol) {
  const ValidationReport report = validate_config(config, ball_rule());
  if (report.margin <= 0.0)
    throw ConfigError("base deformation is not certified injective (margin <= 0)");
  if (report.min_density <= 0.0) throw ConfigError("density is not positive on the body");
  if (report.moment_residual > moment_tol)
    throw ConfigError("self-propulsion moment conditions violated beyond tolerance");
  if (report.gram_min_eigenvalue <= gram_tol)
    throw ConfigError("movement fields are numerically linearly dependent");
}

}  // namespace swim
