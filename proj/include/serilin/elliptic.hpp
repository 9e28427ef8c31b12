#pragma once

#include "serilin/hierarchy.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCholesky>

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace serilin {

/// Flux field on the staggered faces of a vertex grid. In 1D `x` holds the
/// values at x_{i+1/2}, i = 0..n-2. In 2D `x` holds faces (i+1/2, j) stored as
/// j*(nx-1) + i and `y` holds faces (i, j+1/2) stored as j*nx + i.
struct FaceField {
  UniformGrid grid;
  Eigen::VectorXd x;
  Eigen::VectorXd y;
};

/// Full gradient vectors at the faces (points x dimension). The component normal
/// to the face is the compact difference; the transverse one averages centered
/// differences at the two adjacent nodes. Only faces touching interior nodes in the
/// transverse direction are meaningful in 2D; boundary-row faces carry the one-sided
/// transverse difference.
struct FaceGradients {
  Eigen::MatrixXd xFaces;
  Eigen::MatrixXd yFaces;  // empty in 1D
};

FaceGradients face_gradients(const GridField& u);

/// Discrete divergence at interior nodes (boundary entries are zero).
GridField face_divergence(const FaceField& flux);

/// 3-point / 5-point Dirichlet Laplacian with a cached sparse factorization.
class PoissonSolver {
 public:
  explicit PoissonSolver(const UniformGrid& grid);

  /// Solves Lap_h u = rhs at interior nodes with u = boundary on the boundary
  /// (interior entries of `boundary` are ignored).
  GridField solve(const GridField& rhs, const GridField& boundary) const;
  /// Max-norm residual of the last solve relative to max(|rhs|, 1).
  double last_residual() const { return lastResidual_; }
  const UniformGrid& grid() const { return grid_; }

  /// Lap_h u at interior nodes, zero on the boundary.
  GridField apply(const GridField& u) const;

 private:
  UniformGrid grid_;
  std::vector<int> interiorIndex_;  // node -> unknown, -1 on the boundary
  std::vector<int> nodeOf_;         // unknown -> node
  std::shared_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> factor_;
  mutable double lastResidual_ = 0.0;
};

bool is_boundary_node(const UniformGrid& grid, int node);

/// One-shot Dirichlet solve (factorizes each call).
GridField solve_poisson_dirichlet(const GridField& rhs, const GridField& boundary);
/// Lap_h u = div_h flux with Dirichlet data.
GridField solve_poisson_dirichlet(const FaceField& flux, const GridField& boundary);

/// p-Laplacian Dirichlet problem on [-1, 1] or [-1, 1]^2 with N_G cells per axis.
struct DirichletProblem {
  int dimension = 1;
  int cells = 2048;
  std::function<double(double x, double y)> source;
  std::function<double(double x, double y)> boundary;
  double p = 2.0;
  HomotopyKind series = HomotopyKind::PLapDual;

  /// Delta_p u = -1 with boundary data of the unit-ball solution; in 1D this is the ball problem.
  static DirichletProblem ball(int dimension, int cells, double p, HomotopyKind series);

  UniformGrid grid() const;
  HomotopySpec homotopy(int order) const;
  void validate() const;
};

struct DirichletResult {
  HierarchyState state;
  double evaluationDelta = 0.0;
  double maxResidual = 0.0;
  std::vector<std::string> warnings;
};

/// u_0 solves Lap u_0 = f with the full boundary data; u_n solves
/// Lap u_n = -div F_n with zero boundary data, sharing one factorization.
DirichletResult solve_dirichlet_hierarchy(const DirichletProblem& problem, int order);

}  // namespace serilin
