#include "swim/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace swim {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

QuadratureRule sphere_rule(int strength) {
  if (strength < 1) throw std::invalid_argument("sphere_rule: strength must be positive");
  const int n_theta = (strength + 2) / 2;  // GL exact to degree 2n-1 >= strength
  const int n_phi = strength + 1;
  std::vector<double> u, wu;
  gauss_legendre(n_theta, u, wu);

  QuadratureRule rule;
  rule.points.reserve(size_t(n_theta) * n_phi);
  rule.weights.reserve(size_t(n_theta) * n_phi);
  const double wphi = 2.0 * M_PI / n_phi;
  for (int i = 0; i < n_theta; ++i) {
    const double c = u[i];
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    for (int j = 0; j < n_phi; ++j) {
      const double phi = wphi * j;
      rule.points.emplace_back(s * std::cos(phi), s * std::sin(phi), c);
      rule.weights.push_back(wu[i] * wphi);
    }
  }
  return rule;
}

QuadratureRule ball_rule(int radial_order, int angular_strength) {
  if (radial_order < 1) throw std::invalid_argument("ball_rule: radial order must be positive");
  std::vector<double> t, wt;
  gauss_legendre(radial_order, t, wt);
  const QuadratureRule sph = sphere_rule(angular_strength);

  QuadratureRule rule;
  rule.points.reserve(t.size() * sph.points.size());
  rule.weights.reserve(t.size() * sph.points.size());
  for (size_t i = 0; i < t.size(); ++i) {
    const double r = 0.5 * (t[i] + 1.0);  // map [-1,1] -> [0,1]
    const double wr = 0.5 * wt[i] * r * r;
    for (size_t j = 0; j < sph.points.size(); ++j) {
      rule.points.push_back(r * sph.points[j]);
      rule.weights.push_back(wr * sph.weights[j]);
    }
  }
  return rule;
}

namespace {

// Gauss-Kronrod 7-15 abscissae and weights on [-1, 1] (QUADPACK constants).
const double kX[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
const double kWK[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
const double kWG[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

void gk15(const std::function<double(double)>& f, double a, double b, double& val,
          double& err) {
  const double h = 0.5 * (b - a);
  const double c = 0.5 * (a + b);
  double resk = kWK[7] * f(c);
  double resg = kWG[3] * f(c);
  for (int i = 0; i < 7; ++i) {
    const double fv = f(c - h * kX[i]) + f(c + h * kX[i]);
    resk += kWK[i] * fv;
    if (i % 2 == 1) resg += kWG[i / 2] * fv;
  }
  val = resk * h;
  err = std::abs((resk - resg) * h);
}

double adaptive_rec(const std::function<double(double)>& f, double a, double b,
                    double tol, int depth, int max_depth) {
  double val, err;
  gk15(f, a, b, val, err);
  if (err <= tol || depth >= max_depth) return val;
  const double c = 0.5 * (a + b);
  return adaptive_rec(f, a, c, 0.5 * tol, depth + 1, max_depth) +
         adaptive_rec(f, c, b, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_depth) {
  return adaptive_rec(f, a, b, abs_tol, 0, max_depth);
}

}  // namespace swim
