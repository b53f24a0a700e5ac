#include "swim/mass.hpp"

#include <cmath>
#include <utility>

#include "swim/errors.hpp"

namespace swim {

MatX rigid_fluxes(const SurfaceMesh& mesh) {
  const int np = mesh.panel_count();
  MatX flux(np, 6);
  for (int p = 0; p < np; ++p) {
    const Vec3& x = mesh.centroids[p];
    const Vec3& n = mesh.normals[p];
    for (int i = 0; i < 3; ++i) flux(p, i) = Vec3::Unit(i).cross(x).dot(n);
    for (int i = 0; i < 3; ++i) flux(p, 3 + i) = n[i];
  }
  return flux;
}

namespace {

// Boundary energy form int psi (w . n) dsigma for a batch of solved
// potentials (columns of psi) against a batch of fluxes (columns of wn).
MatX boundary_form(const SurfaceMesh& mesh, const MatX& psi, const MatX& wn) {
  VecX area = Eigen::Map<const VecX>(mesh.areas.data(), mesh.panel_count());
  return psi.transpose() * area.asDiagonal() * wn;
}

MatX solve_columns(const PanelOperator& op, const MatX& fluxes) {
  MatX psi(fluxes.rows(), fluxes.cols());
  for (int j = 0; j < fluxes.cols(); ++j) psi.col(j) = op.solve(fluxes.col(j)).potentials;
  return psi;
}

}  // namespace

Mat6 added_mass_matrix(const PanelOperator& op, double* asymmetry) {
  const MatX flux = rigid_fluxes(op.mesh());
  const MatX psi = solve_columns(op, flux);
  const Mat6 raw = boundary_form(op.mesh(), psi, flux);
  const double scale = raw.norm();
  if (asymmetry != nullptr)
    *asymmetry = scale > 0.0 ? (raw - raw.transpose()).norm() / scale : 0.0;
  return 0.5 * (raw + raw.transpose());
}

Mat6 added_mass_matrix(const SurfaceMesh& mesh, double* asymmetry) {
  return added_mass_matrix(PanelOperator(mesh), asymmetry);
}

MatX coupling_matrix(const PanelOperator& op, const SwimmerConfig& config, const VecX&) {
  // The shape coordinates are already baked into the mesh; the trace of V_j
  // at a surface point is V_j at the stored reference preimage.
  const SurfaceMesh& mesh = op.mesh();
  const int np = mesh.panel_count();
  const int n = config.n();

  // Panel Neumann data is the vertex average dotted with the panel normal,
  // which reproduces the rigid fluxes exactly for rigid-shell fields.
  MatX flux = MatX::Zero(np, n);
  std::vector<Vec3> vertex_vals(mesh.ref_vertices.size());
  for (int j = 0; j < n; ++j) {
    for (size_t v = 0; v < mesh.ref_vertices.size(); ++v)
      vertex_vals[v] = config.movements[j]->value(mesh.ref_vertices[v]);
    for (int p = 0; p < np; ++p) {
      const Vec3 mean = (vertex_vals[mesh.panels[p][0]] + vertex_vals[mesh.panels[p][1]] +
                         vertex_vals[mesh.panels[p][2]]) /
                        3.0;
      flux(p, j) = mean.dot(mesh.normals[p]);
    }
  }

  const MatX psi = solve_columns(op, rigid_fluxes(mesh));
  return boundary_form(mesh, psi, flux);
}

MatX coupling_matrix(const SurfaceMesh& mesh, const SwimmerConfig& config, const VecX& s) {
  return coupling_matrix(PanelOperator(mesh), config, s);
}

std::pair<Mat3, double> inertia_and_mass(const SwimmerConfig& config, const VecX& s,
                                         const QuadratureRule& rule) {
  const FieldPtr field = total_field(config, s);
  Mat3 inertia = Mat3::Zero();
  double mass = 0.0;
  for (size_t q = 0; q < rule.points.size(); ++q) {
    const Vec3& x = rule.points[q];
    const double w = rule.weights[q] * config.density.value(x);
    const Vec3 y = shape_map(*field, x);
    mass += w;
    inertia += w * (y.squaredNorm() * Mat3::Identity() - y * y.transpose());
  }
  return {inertia, mass};
}

Mat6 transport_added_mass(const Mat6& mf_ref, const Mat3& rot, const Vec3& tau) {
  Mat6 rr = Mat6::Zero();
  rr.topLeftCorner<3, 3>() = rot;
  rr.bottomRightCorner<3, 3>() = rot;
  Mat6 left = Mat6::Identity();
  left.topRightCorner<3, 3>() = hat(tau);
  Mat6 right = Mat6::Identity();
  right.bottomLeftCorner<3, 3>() = -hat(tau);
  return left * rr * mf_ref * rr.transpose() * right;
}

void shell_frame(const VecX& s, Mat3& rot, Vec3& tau) {
  double coord[6] = {0, 0, 0, 0, 0, 0};
  for (int i = 0; i < s.size() && i < 6; ++i) coord[i] = s[i];
  rot = rot_exp(coord[0] * Vec3::UnitX()) * rot_exp(coord[1] * Vec3::UnitY()) *
        rot_exp(coord[2] * Vec3::UnitZ());
  tau = Vec3(coord[3], coord[4], coord[5]);
}

Mat6 shell_generators(const VecX& s) {
  double coord[6] = {0, 0, 0, 0, 0, 0};
  for (int i = 0; i < s.size() && i < 6; ++i) coord[i] = s[i];
  const Mat3 r1 = rot_exp(coord[0] * Vec3::UnitX());
  const Mat3 r12 = r1 * rot_exp(coord[1] * Vec3::UnitY());
  const Vec3 tau(coord[3], coord[4], coord[5]);

  // Unit rate of s_i spins the shell about column i of A = (e1, R1 e2,
  // R1 R2 e3) (body frame); translation rates enter directly, but a spin of
  // the shell also swings the offset tau.
  Mat3 axes;
  axes.col(0) = Vec3::UnitX();
  axes.col(1) = r1 * Vec3::UnitY();
  axes.col(2) = r12 * Vec3::UnitZ();

  Mat6 gen = Mat6::Zero();
  gen.topLeftCorner<3, 3>() = axes;
  gen.bottomLeftCorner<3, 3>() = hat(tau) * axes;
  gen.bottomRightCorner<3, 3>() = Mat3::Identity();
  return gen;
}

ShellTransportModel::ShellTransportModel(const Mat3& inertia, double mass, const Mat6& mf_rest,
                                         int n)
    : inertia_(inertia), mass_(mass), mf_rest_(mf_rest), n_(n) {
  if (n < 1 || n > 6) throw ConfigError("shell-rigid models support 1 to 6 shape coordinates");
}

ShellTransportModel ShellTransportModel::from_diagonal(const Vec3& inertia, double mass,
                                                       const Vec6& mu, int n) {
  return ShellTransportModel(inertia.asDiagonal(), mass, Mat6(mu.asDiagonal()), n);
}

MassMatrices ShellTransportModel::at(const VecX& s) const {
  if (s.size() != n_) throw ConfigError("shape coordinate count does not match the model");
  Mat3 rot;
  Vec3 tau;
  shell_frame(s, rot, tau);

  MassMatrices mm;
  mm.inertia = inertia_;
  mm.mass = mass_;
  mm.Mb.topLeftCorner<3, 3>() = inertia_;
  mm.Mb.bottomRightCorner<3, 3>() = mass_ * Mat3::Identity();
  mm.Mf = transport_added_mass(mf_rest_, rot, tau);
  mm.N = (mm.Mf * shell_generators(s)).leftCols(n_);
  return mm;
}

PanelMethodModel::PanelMethodModel(SwimmerConfig config, int refinement, QuadratureRule rule)
    : config_(std::move(config)), refinement_(refinement), rule_(std::move(rule)) {}

MassMatrices PanelMethodModel::at(const VecX& s) const {
  const SurfaceMesh mesh = surface_mesh(config_, s, refinement_);
  const PanelOperator op(mesh);

  MassMatrices mm;
  mm.Mf = added_mass_matrix(op, &mm.asymmetry);
  mm.N = coupling_matrix(op, config_, s);
  std::tie(mm.inertia, mm.mass) = inertia_and_mass(config_, s, rule_);
  mm.Mb.topLeftCorner<3, 3>() = mm.inertia;
  mm.Mb.bottomRightCorner<3, 3>() = mm.mass * Mat3::Identity();
  return mm;
}

}  // namespace swim
