#include "swim/panel.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "swim/errors.hpp"

namespace swim {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

// Degree-5 triangle rule, 7 points in barycentric coordinates.
struct TrianglePoint {
  double b0, b1, b2, w;
};
constexpr double kA1 = 0.059715871789770;
constexpr double kB1 = 0.470142064105115;
constexpr double kW1 = 0.132394152788506;
constexpr double kA2 = 0.797426985353087;
constexpr double kB2 = 0.101286507323456;
constexpr double kW2 = 0.125939180544827;
constexpr TrianglePoint kTriangleRule[7] = {
    {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.225},
    {kA1, kB1, kB1, kW1}, {kB1, kA1, kB1, kW1}, {kB1, kB1, kA1, kW1},
    {kA2, kB2, kB2, kW2}, {kB2, kA2, kB2, kW2}, {kB2, kB2, kA2, kW2}};

// Single-layer integral (1/4pi omitted) of one flat source triangle seen from
// x.  The fixed rule degrades when x sits within a few diameters of the
// triangle (the 1/r scale is then comparable to the node spacing), so such
// triangles are split in four recursively; the error of the nearly-singular
// pieces shrinks geometrically with depth while far pieces stop immediately.
void accumulate_potential(const Vec3& x, const Vec3& a, const Vec3& b, const Vec3& c, int depth,
                          double& pot) {
  const double diam2 =
      std::max({(b - a).squaredNorm(), (c - b).squaredNorm(), (a - c).squaredNorm()});
  if (depth > 0 && (x - (a + b + c) / 3.0).squaredNorm() < 6.25 * diam2) {
    const Vec3 ab = 0.5 * (a + b), bc = 0.5 * (b + c), ca = 0.5 * (c + a);
    accumulate_potential(x, a, ab, ca, depth - 1, pot);
    accumulate_potential(x, ab, b, bc, depth - 1, pot);
    accumulate_potential(x, ca, bc, c, depth - 1, pot);
    accumulate_potential(x, ab, bc, ca, depth - 1, pot);
    return;
  }
  const double area = 0.5 * (b - a).cross(c - a).norm();
  for (const auto& tp : kTriangleRule) {
    const Vec3 y = tp.b0 * a + tp.b1 * b + tp.b2 * c;
    pot += tp.w * area / (x - y).norm();
  }
}

constexpr int kNearDepth = 5;

}  // namespace

double triangle_potential_in_plane(const Vec3& observation, const Vec3& a, const Vec3& b,
                                   const Vec3& c, const Vec3& unit_normal) {
  // Classic edge-wise closed form for the in-plane potential of a flat
  // polygon: sum over edges of d * log((R_end + t_end)/(R_start + t_start)),
  // with d the signed in-plane distance to the edge line.  The sign works
  // out when d is measured along u x n with the winding matching n.
  const Vec3 corners[3] = {a, b, c};
  double total = 0.0;
  for (int e = 0; e < 3; ++e) {
    const Vec3 start = corners[e] - observation;
    const Vec3 end = corners[(e + 1) % 3] - observation;
    const Vec3 edge = end - start;
    const double len = edge.norm();
    if (len <= 0.0) continue;
    const Vec3 u = edge / len;
    const double t0 = start.dot(u), t1 = end.dot(u);
    const double r0 = start.norm(), r1 = end.norm();
    const double d = start.dot(u.cross(unit_normal));
    if (r0 + t0 <= 0.0 || r1 + t1 <= 0.0) continue;  // observation on the edge line
    total += d * std::log((r1 + t1) / (r0 + t0));
  }
  return total / kFourPi;
}

double triangle_solid_angle(const Vec3& x, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ax = a - x, bx = b - x, cx = c - x;
  const double la = ax.norm(), lb = bx.norm(), lc = cx.norm();
  const double num = ax.dot(bx.cross(cx));
  const double den = la * lb * lc + ax.dot(bx) * lc + bx.dot(cx) * la + cx.dot(ax) * lb;
  if (num == 0.0) return 0.0;  // x in the triangle plane: principal value
  return 2.0 * std::atan2(num, den);
}

PanelOperator::PanelOperator(const SurfaceMesh& mesh) : mesh_(mesh) {
  const int np = mesh_.panel_count();
  MatX influence(np, np);
  single_layer_.resize(np, np);

  for (int p = 0; p < np; ++p) {
    const Vec3& x = mesh_.centroids[p];
    for (int q = 0; q < np; ++q) {
      const Vec3& a = mesh_.vertices[mesh_.panels[q][0]];
      const Vec3& b = mesh_.vertices[mesh_.panels[q][1]];
      const Vec3& c = mesh_.vertices[mesh_.panels[q][2]];
      if (q == p) {
        // Flat panel: the centroid sees its own panel edge-on, so the
        // double-layer principal value vanishes and only the 1/2 jump term
        // remains on the diagonal.
        influence(p, p) = 0.5;
        // The stored normal is interior; the winding matches the exterior one.
        single_layer_(p, p) = triangle_potential_in_plane(x, a, b, c, Vec3(-mesh_.normals[p]));
        continue;
      }
      influence(p, q) = triangle_solid_angle(x, a, b, c) / kFourPi;
      double pot = 0.0;
      accumulate_potential(x, a, b, c, kNearDepth, pot);
      single_layer_(p, q) = pot / kFourPi;
    }
  }

  lu_.compute(influence);
  // PartialPivLU has no rank query; probe the factor diagonal instead.
  const double largest = lu_.matrixLU().diagonal().cwiseAbs().maxCoeff();
  const double smallest = lu_.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(largest > 0.0) || smallest < 1e-14 * largest)
    throw SingularSystem("panel collocation matrix is numerically singular");
}

BoundarySolution PanelOperator::solve(const VecX& flux) const {
  const int np = mesh_.panel_count();
  if (flux.size() != np) throw ConfigError("flux vector does not match the panel count");
  BoundarySolution out;
  out.fluxes = flux;
  out.potentials = lu_.solve(VecX(single_layer_ * flux));

  double net = 0.0, scale = 0.0;
  for (int p = 0; p < np; ++p) {
    net += flux[p] * mesh_.areas[p];
    scale += std::abs(flux[p]) * mesh_.areas[p];
  }
  out.compatibility = scale > 0.0 ? std::abs(net) / scale : 0.0;
  return out;
}

double PanelOperator::potential_at(const BoundarySolution& solution, const Vec3& x) const {
  const int np = mesh_.panel_count();
  if (solution.fluxes.size() != np || solution.potentials.size() != np)
    throw ConfigError("boundary solution does not match the panel count");
  double pot = 0.0;
  for (int q = 0; q < np; ++q) {
    const Vec3& a = mesh_.vertices[mesh_.panels[q][0]];
    const Vec3& b = mesh_.vertices[mesh_.panels[q][1]];
    const Vec3& c = mesh_.vertices[mesh_.panels[q][2]];
    double single = 0.0;
    accumulate_potential(x, a, b, c, kNearDepth, single);
    pot += solution.fluxes[q] * single / kFourPi;
    pot -= solution.potentials[q] * triangle_solid_angle(x, a, b, c) / kFourPi;
  }
  return pot;
}

BoundarySolution solve_exterior_neumann(const SurfaceMesh& mesh, const VecX& flux) {
  return PanelOperator(mesh).solve(flux);
}

}  // namespace swim
