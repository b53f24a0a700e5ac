#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "swim/config.hpp"
#include "swim/types.hpp"

namespace swim {

// Triangulated body surface.  Normals are unit vectors pointing INTO the
// body; ref_vertices keep the unit-sphere preimages of the vertices so that
// boundary data prescribed on the reference sphere can be sampled exactly.
struct SurfaceMesh {
  std::vector<Vec3> ref_vertices;
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> panels;
  std::vector<Vec3> centroids;
  std::vector<double> areas;
  std::vector<Vec3> normals;

  int panel_count() const { return static_cast<int>(panels.size()); }
  double total_area() const;
  // |sum over panels of area * normal| / total area; zero for a closed surface.
  double closure_residual() const;
  // Enclosed volume by the divergence theorem (normals point inward).
  double enclosed_volume() const;
  // Worst panel shape quality, longest edge squared over area.
  double max_aspect() const;
};

// Subdivided icosahedron with 20*4^refinement panels on the unit sphere.
SurfaceMesh unit_icosphere(int refinement);

// Icosphere pushed through the shape map Theta_s.
SurfaceMesh surface_mesh(const SwimmerConfig& config, const VecX& s, int refinement);

// Mesh moved rigidly: vertices to R v + shift, reference vertices untouched.
SurfaceMesh transform_mesh(const SurfaceMesh& mesh, const Mat3& rot, const Vec3& shift);

// OFF text export, 17 significant digits.
void write_off(const SurfaceMesh& mesh, std::ostream& out);

}  // namespace swim
