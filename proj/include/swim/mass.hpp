#pragma once

#include <memory>

#include "swim/config.hpp"
#include "swim/mesh.hpp"
#include "swim/panel.hpp"
#include "swim/quadrature.hpp"
#include "swim/types.hpp"

namespace swim {

// Mass data of one shape: rigid block Mb = diag(I, m Id), added-mass block
// Mf, and the shape-to-rigid coupling N.  Rows/columns 1..3 are rotational,
// 4..6 translational.
struct MassMatrices {
  Mat6 Mb = Mat6::Zero();
  Mat6 Mf = Mat6::Zero();
  MatX N;  // 6 x n
  Mat3 inertia = Mat3::Zero();
  double mass = 0.0;
  double asymmetry = 0.0;  // relative asymmetry of Mf before symmetrization

  Mat6 Mr() const { return Mb + Mf; }
};

// Neumann data of the six rigid velocity fields w_i on the mesh:
// (e_i x centroid) . n for i = 1..3 and e_{i-3} . n for i = 4..6.
MatX rigid_fluxes(const SurfaceMesh& mesh);

// Added-mass matrix of the body bounded by the mesh: Mf_ij is the boundary
// form int psi_i (w_j . n), with psi_i solving the exterior Neumann problem
// for the i-th rigid flux.  Result is symmetrized; asymmetry, when requested,
// receives the discrete defect that was averaged away.
Mat6 added_mass_matrix(const PanelOperator& op, double* asymmetry = nullptr);
Mat6 added_mass_matrix(const SurfaceMesh& mesh, double* asymmetry = nullptr);

// Coupling matrix: column j is the boundary form of the movement field V_j,
// whose trace on the deformed surface is sampled at the reference vertices
// and averaged per panel.
MatX coupling_matrix(const PanelOperator& op, const SwimmerConfig& config, const VecX& s);
MatX coupling_matrix(const SurfaceMesh& mesh, const SwimmerConfig& config, const VecX& s);

// Inertia tensor and mass of the deformed body, as reference-ball integrals
// int rho (|Theta_s|^2 Id - Theta_s x Theta_s) and int rho.
std::pair<Mat3, double> inertia_and_mass(const SwimmerConfig& config, const VecX& s,
                                         const QuadratureRule& rule = ball_rule());

// Rigid transport of an added-mass matrix:
//   [Id  hat(tau); 0  Id] diag(R,R) Mf_ref diag(R',R') [Id  0; -hat(tau)  Id].
Mat6 transport_added_mass(const Mat6& mf_ref, const Mat3& rot, const Vec3& tau);

// Rotation and translation of the shell frame at shell-rigid coordinates s:
// R_s = exp(s1 e1^) exp(s2 e2^) exp(s3 e3^), tau_s = (s4, s5, s6), with
// missing coordinates read as zero.
void shell_frame(const VecX& s, Mat3& rot, Vec3& tau);

// Columns are the rigid velocities produced by unit rates of the shell
// coordinates: d/dt of (R_s, tau_s) pulled to the body frame.
Mat6 shell_generators(const VecX& s);

// Uniform interface dynamics integrates against: mass data as a function of
// shape coordinates.
class MassModel {
 public:
  virtual ~MassModel() = default;
  virtual int n() const = 0;
  virtual MassMatrices at(const VecX& s) const = 0;
};

// Mass data propagated from the rest shape by the rigid-transport law; valid
// when the movement fields move the boundary rigidly.  The rigid block stays
// at its rest value.
class ShellTransportModel final : public MassModel {
 public:
  ShellTransportModel(const Mat3& inertia, double mass, const Mat6& mf_rest, int n);
  // Synthetic model from diagonal data, the closed-form bracket setting.
  static ShellTransportModel from_diagonal(const Vec3& inertia, double mass, const Vec6& mu,
                                           int n);
  int n() const override { return n_; }
  MassMatrices at(const VecX& s) const override;

 private:
  Mat3 inertia_;
  double mass_;
  Mat6 mf_rest_;
  int n_;
};

// Mass data recomputed from scratch at every shape: fresh mesh, fresh panel
// solve.  The general path for non-rigid movement fields.
class PanelMethodModel final : public MassModel {
 public:
  PanelMethodModel(SwimmerConfig config, int refinement,
                   QuadratureRule rule = ball_rule());
  int n() const override { return config_.n(); }
  MassMatrices at(const VecX& s) const override;
  const SwimmerConfig& config() const { return config_; }

 private:
  SwimmerConfig config_;
  int refinement_;
  QuadratureRule rule_;
};

}  // namespace swim
