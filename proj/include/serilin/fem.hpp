#pragma once

#include "serilin/hierarchy.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <memory>
#include <string>
#include <vector>

namespace serilin {

/// P1 hat functions on [-L, L]. A = <phi_i, phi_j>, B = <phi_i', phi_j'>,
/// C = <phi_i, phi_j'> on the full node set (boundary rows truncated at the ends).
struct FemMesh {
  double halfWidth = 0.0;
  double spacing = 0.0;
  int center = 0;
  UniformGrid grid;
  Eigen::SparseMatrix<double> A, B, C;

  int nodes() const { return grid.count[0]; }
  double x(int i) const { return grid.coordinate(i); }
};

/// Closed-form assembly, cross-checked against element quadrature.
FemMesh build_mesh(double halfWidth, double spacing);

/// L2 projection of the unit point mass at x = 0: a = A^{-1} e_center.
Eigen::VectorXd project_delta_ic(const FemMesh& mesh);

/// Nodal coefficients per order; the end nodes stay pinned at 0.
struct GalerkinState {
  std::vector<Eigen::VectorXd> coeffs;
  double time = 0.0;
};

/// Implicit Euler with cached factorizations. Gradients are recovered by the
/// L2 projection A g = C a.
///
/// With `mirror` set, coefficients are kept exactly even about x = 0 and gradients
/// exactly odd. The solves break the reflection symmetry at round-off level and the
/// higher-order forcings amplify that noise at the critical point grad u_0 = 0.
class GalerkinStepper {
 public:
  GalerkinStepper(const FemMesh& mesh, double dt, bool mirror = false);

  /// [A + dt B] a+ = A a + dt C f+ on interior nodes.
  Eigen::VectorXd step(const Eigen::VectorXd& a, const Eigen::VectorXd& forcingEnd) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& a) const;
  const FemMesh& mesh() const { return mesh_; }
  double dt() const { return dt_; }

 private:
  FemMesh mesh_;
  double dt_;
  bool mirror_;
  Eigen::SparseMatrix<double> interiorA_, interiorC_;
  std::shared_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> evolve_, mass_;
};

/// One step for every order, forcing rebuilt from the freshly advanced lower orders.
GalerkinState step_implicit_euler(const GalerkinState& state, const GalerkinStepper& stepper,
                                  const HomotopySpec& spec);

/// Nodal forcing F_n from nodal coefficients of the lower orders.
Eigen::VectorXd fem_forcing(int order, const std::vector<Eigen::VectorXd>& lower, const GalerkinStepper& stepper,
                            const HomotopySpec& spec);

struct EvolutionConfig {
  double p = 3.0;
  HomotopyKind series = HomotopyKind::PLapDual;
  int order = 4;
  double halfWidth = 6.0;
  double dx = 0.02;
  double dt = 0.01;
  double tFinal = 1.0;
  int refeedEvery = 0;  // steps between refeeds, 0 disables
  bool mirrorSymmetry = true;
  std::vector<double> sampleTimes;  // defaults to {tFinal}

  void validate() const;
};

struct EvolutionSample {
  double time = 0.0;
  GalerkinState state;
  std::vector<double> residual;  // L2 distance of S_n to the Barenblatt profile, n = 0..order
};

struct EvolutionResult {
  FemMesh mesh;
  double evaluationDelta = 0.0;
  std::vector<EvolutionSample> samples;
  std::vector<double> refeedTimes;
  std::vector<double> refeedResiduals;  // residual of S_N just before each refeed
  bool diverged = false;
  std::string divergenceNote;
};

/// Delta-IC hierarchy with optional refeeding and Barenblatt residuals.
EvolutionResult solve_evolution_hierarchy(const EvolutionConfig& config);

/// L2 norm (trapezoid) of nodal values on the mesh.
double fem_l2(const FemMesh& mesh, const Eigen::VectorXd& values);

}  // namespace serilin
