#include "swim/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <utility>

#include "swim/errors.hpp"

namespace swim {

namespace {

// Recomputes the derived per-panel data from vertices and connectivity.
// Winding is fixed so that the raw cross product points outward on the unit
// sphere; the deformed map preserves orientation, so flipping the cross
// product always yields the interior normal.
void finish_panels(SurfaceMesh& mesh) {
  const size_t np = mesh.panels.size();
  mesh.centroids.resize(np);
  mesh.areas.resize(np);
  mesh.normals.resize(np);
  for (size_t p = 0; p < np; ++p) {
    const Vec3& a = mesh.vertices[mesh.panels[p][0]];
    const Vec3& b = mesh.vertices[mesh.panels[p][1]];
    const Vec3& c = mesh.vertices[mesh.panels[p][2]];
    const Vec3 raw = (b - a).cross(c - a);
    const double doubled = raw.norm();
    if (doubled <= 0.0) throw ConfigError("degenerate mesh panel");
    mesh.centroids[p] = (a + b + c) / 3.0;
    mesh.areas[p] = 0.5 * doubled;
    mesh.normals[p] = -raw / doubled;
  }
}

}  // namespace

double SurfaceMesh::total_area() const {
  double area = 0.0;
  for (double a : areas) area += a;
  return area;
}

double SurfaceMesh::closure_residual() const {
  Vec3 flux = Vec3::Zero();
  for (size_t p = 0; p < panels.size(); ++p) flux += areas[p] * normals[p];
  return flux.norm() / total_area();
}

double SurfaceMesh::enclosed_volume() const {
  double vol = 0.0;
  for (size_t p = 0; p < panels.size(); ++p) vol -= centroids[p].dot(normals[p]) * areas[p];
  return vol / 3.0;
}

double SurfaceMesh::max_aspect() const {
  double worst = 0.0;
  for (size_t p = 0; p < panels.size(); ++p) {
    double longest = 0.0;
    for (int e = 0; e < 3; ++e) {
      const Vec3 d = vertices[panels[p][e]] - vertices[panels[p][(e + 1) % 3]];
      longest = std::max(longest, d.squaredNorm());
    }
    worst = std::max(worst, longest / areas[p]);
  }
  return worst;
}

SurfaceMesh unit_icosphere(int refinement) {
  if (refinement < 0) throw ConfigError("mesh refinement must be nonnegative");

  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> verts = {
      {-1, t, 0}, {1, t, 0},   {-1, -t, 0}, {1, -t, 0}, {0, -1, t},  {0, 1, t},
      {0, -1, -t}, {0, 1, -t}, {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  for (Vec3& v : verts) v.normalize();
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},  {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6},  {3, 6, 8},
      {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};

  for (int level = 0; level < refinement; ++level) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int i, int j) {
      const auto key = std::minmax(i, j);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      const int idx = static_cast<int>(verts.size());
      verts.push_back((verts[i] + verts[j]).normalized());
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(4 * faces.size());
    for (const auto& f : faces) {
      const int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }

  // Make the raw cross products point outward while still on the sphere.
  for (auto& f : faces) {
    const Vec3& a = verts[f[0]];
    const Vec3 raw = (verts[f[1]] - a).cross(verts[f[2]] - a);
    if (raw.dot(a + verts[f[1]] + verts[f[2]]) < 0.0) std::swap(f[1], f[2]);
  }

  SurfaceMesh mesh;
  mesh.ref_vertices = verts;
  mesh.vertices = std::move(verts);
  mesh.panels = std::move(faces);
  finish_panels(mesh);
  return mesh;
}

SurfaceMesh surface_mesh(const SwimmerConfig& config, const VecX& s, int refinement) {
  SurfaceMesh mesh = unit_icosphere(refinement);
  const FieldPtr field = total_field(config, s);
  for (size_t i = 0; i < mesh.vertices.size(); ++i) {
    // A nonpositive jacobian on the surface means s left the valid set.
    shape_jacobian(*field, mesh.ref_vertices[i]);
    mesh.vertices[i] = shape_map(*field, mesh.ref_vertices[i]);
  }
  finish_panels(mesh);
  return mesh;
}

SurfaceMesh transform_mesh(const SurfaceMesh& mesh, const Mat3& rot, const Vec3& shift) {
  SurfaceMesh out = mesh;
  for (Vec3& v : out.vertices) v = rot * v + shift;
  finish_panels(out);
  return out;
}

void write_off(const SurfaceMesh& mesh, std::ostream& out) {
  out << "OFF\n" << mesh.vertices.size() << ' ' << mesh.panels.size() << " 0\n";
  char line[128];
  for (const Vec3& v : mesh.vertices) {
    std::snprintf(line, sizeof(line), "%.17g %.17g %.17g\n", v[0], v[1], v[2]);
    out << line;
  }
  for (const auto& f : mesh.panels) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

}  // namespace swim
