#include "serilin/elliptic.hpp"

#include "serilin/errors.hpp"
#include "serilin/exact.hpp"
#include "serilin/plap_forcing.hpp"

#include <cmath>
#include <sstream>

namespace serilin {

namespace {

void require_vertex_grid(const UniformGrid& grid, const char* who) {
  if (grid.periodic) throw ArgumentError(std::string(who) + ": expected a non-periodic vertex grid");
  if (grid.count[0] < 3 || (grid.dimension == 2 && grid.count[1] < 3))
    throw ArgumentError(std::string(who) + ": grid too small");
  if (grid.dimension == 2 && (grid.count[0] != grid.count[1] || grid.spacing(0) != grid.spacing(1)))
    throw ArgumentError(std::string(who) + ": 2D grids must be square with equal spacing");
}

}  // namespace

bool is_boundary_node(const UniformGrid& grid, int node) {
  const int nx = grid.count[0];
  const int i = node % nx;
  if (i == 0 || i == nx - 1) return true;
  if (grid.dimension == 1) return false;
  const int j = node / nx;
  return j == 0 || j == grid.count[1] - 1;
}

FaceGradients face_gradients(const GridField& u) {
  const UniformGrid& g = u.grid;
  require_vertex_grid(g, "face_gradients");
  const int n = g.count[0];
  const double h = g.spacing(0);
  FaceGradients out;
  if (g.dimension == 1) {
    out.xFaces.resize(n - 1, 1);
    for (int i = 0; i + 1 < n; ++i) out.xFaces(i, 0) = (u[i + 1] - u[i]) / h;
    return out;
  }
  auto at = [&](int i, int j) { return u[g.index(i, j)]; };
  auto cy = [&](int i, int j) {
    if (j == 0) return (at(i, 1) - at(i, 0)) / h;
    if (j == n - 1) return (at(i, n - 1) - at(i, n - 2)) / h;
    return (at(i, j + 1) - at(i, j - 1)) / (2.0 * h);
  };
  auto cx = [&](int i, int j) {
    if (i == 0) return (at(1, j) - at(0, j)) / h;
    if (i == n - 1) return (at(n - 1, j) - at(n - 2, j)) / h;
    return (at(i + 1, j) - at(i - 1, j)) / (2.0 * h);
  };
  out.xFaces.resize((n - 1) * n, 2);
  out.yFaces.resize(n * (n - 1), 2);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i + 1 < n; ++i) {
      const int f = j * (n - 1) + i;
      out.xFaces(f, 0) = (at(i + 1, j) - at(i, j)) / h;
      out.xFaces(f, 1) = 0.5 * (cy(i, j) + cy(i + 1, j));
    }
  for (int j = 0; j + 1 < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int f = j * n + i;
      out.yFaces(f, 1) = (at(i, j + 1) - at(i, j)) / h;
      out.yFaces(f, 0) = 0.5 * (cx(i, j) + cx(i, j + 1));
    }
  return out;
}

GridField face_divergence(const FaceField& flux) {
  const UniformGrid& g = flux.grid;
  require_vertex_grid(g, "face_divergence");
  const int n = g.count[0];
  const double h = g.spacing(0);
  GridField out(g);
  if (g.dimension == 1) {
    if (flux.x.size() != n - 1) throw StructuralError("face_divergence: face count mismatch");
    for (int i = 1; i + 1 < n; ++i) out[i] = (flux.x[i] - flux.x[i - 1]) / h;
    return out;
  }
  if (flux.x.size() != (n - 1) * n || flux.y.size() != n * (n - 1))
    throw StructuralError("face_divergence: face count mismatch");
  for (int j = 1; j + 1 < n; ++j)
    for (int i = 1; i + 1 < n; ++i)
      out[g.index(i, j)] = (flux.x[j * (n - 1) + i] - flux.x[j * (n - 1) + i - 1]) / h +
                           (flux.y[j * n + i] - flux.y[(j - 1) * n + i]) / h;
  return out;
}

PoissonSolver::PoissonSolver(const UniformGrid& grid) : grid_(grid) {
  require_vertex_grid(grid, "PoissonSolver");
  const int total = grid.size();
  interiorIndex_.assign(total, -1);
  for (int node = 0; node < total; ++node)
    if (!is_boundary_node(grid, node)) {
      interiorIndex_[node] = static_cast<int>(nodeOf_.size());
      nodeOf_.push_back(node);
    }
  const int m = static_cast<int>(nodeOf_.size());
  const double h2 = grid.spacing(0) * grid.spacing(0);
  const int nx = grid.count[0];
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(m) * (grid.dimension == 1 ? 3 : 5));
  for (int k = 0; k < m; ++k) {
    const int node = nodeOf_[k];
    trip.emplace_back(k, k, 2.0 * grid.dimension / h2);
    std::vector<int> nbrs{node - 1, node + 1};
    if (grid.dimension == 2) {
      nbrs.push_back(node - nx);
      nbrs.push_back(node + nx);
    }
    for (int nb : nbrs)
      if (interiorIndex_[nb] >= 0) trip.emplace_back(k, interiorIndex_[nb], -1.0 / h2);
  }
  Eigen::SparseMatrix<double> mat(m, m);
  mat.setFromTriplets(trip.begin(), trip.end());
  factor_ = std::make_shared<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>(mat);
  if (factor_->info() != Eigen::Success) throw InternalError("PoissonSolver: factorization failed");
}

GridField PoissonSolver::apply(const GridField& u) const {
  require_same_grid(grid_, u.grid, "PoissonSolver::apply");
  GridField out(grid_);
  const int nx = grid_.count[0];
  const double h2 = grid_.spacing(0) * grid_.spacing(0);
  for (int node : nodeOf_) {
    double lap = u[node - 1] + u[node + 1] - 2.0 * u[node];
    if (grid_.dimension == 2) lap += u[node - nx] + u[node + nx] - 2.0 * u[node];
    out[node] = lap / h2;
  }
  return out;
}

GridField PoissonSolver::solve(const GridField& rhs, const GridField& boundary) const {
  require_same_grid(grid_, rhs.grid, "PoissonSolver::solve");
  require_same_grid(grid_, boundary.grid, "PoissonSolver::solve");
  const int m = static_cast<int>(nodeOf_.size());
  const int nx = grid_.count[0];
  const double h2 = grid_.spacing(0) * grid_.spacing(0);
  Eigen::VectorXd b(m);
  for (int k = 0; k < m; ++k) {
    const int node = nodeOf_[k];
    if (!std::isfinite(rhs[node])) throw ArgumentError("Poisson right-hand side contains non-finite values");
    double val = -rhs[node];
    std::vector<int> nbrs{node - 1, node + 1};
    if (grid_.dimension == 2) {
      nbrs.push_back(node - nx);
      nbrs.push_back(node + nx);
    }
    for (int nb : nbrs)
      if (interiorIndex_[nb] < 0) val += boundary[nb] / h2;
    b[k] = val;
  }
  const Eigen::VectorXd x = factor_->solve(b);
  if (factor_->info() != Eigen::Success) throw InternalError("PoissonSolver: solve failed");
  GridField u(grid_);
  for (int node = 0; node < grid_.size(); ++node)
    u[node] = interiorIndex_[node] >= 0 ? x[interiorIndex_[node]] : boundary[node];

  const GridField lap = apply(u);
  double res = 0.0, scale = 1.0;
  for (int node : nodeOf_) {
    res = std::max(res, std::abs(lap[node] - rhs[node]));
    scale = std::max(scale, std::abs(rhs[node]));
  }
  lastResidual_ = res / scale;
  return u;
}

GridField solve_poisson_dirichlet(const GridField& rhs, const GridField& boundary) {
  return PoissonSolver(rhs.grid).solve(rhs, boundary);
}

GridField solve_poisson_dirichlet(const FaceField& flux, const GridField& boundary) {
  return PoissonSolver(flux.grid).solve(face_divergence(flux), boundary);
}

DirichletProblem DirichletProblem::ball(int dimension, int cells, double p, HomotopyKind series) {
  DirichletProblem prob;
  prob.dimension = dimension;
  prob.cells = cells;
  prob.p = p;
  prob.series = series;
  prob.source = [](double, double) { return -1.0; };
  prob.boundary = [p, dimension](double x, double y) {
    return plap_radial_profile(p, dimension, dimension == 1 ? x : std::hypot(x, y));
  };
  return prob;
}

UniformGrid DirichletProblem::grid() const {
  return dimension == 1 ? UniformGrid::interval(-1.0, 1.0, cells + 1) : UniformGrid::square(-1.0, 1.0, cells + 1);
}

HomotopySpec DirichletProblem::homotopy(int order) const {
  const int len = std::max(order, 1);
  switch (series) {
    case HomotopyKind::PLapOrdinary: return HomotopySpec::plap_ordinary(p, len);
    case HomotopyKind::PLapDual: return HomotopySpec::plap_dual(p, len);
    case HomotopyKind::BurgersLinear: break;
  }
  throw ArgumentError("Dirichlet problem needs the ordinary or dual series");
}

void DirichletProblem::validate() const {
  if (dimension != 1 && dimension != 2) throw ArgumentError("Dirichlet problem dimension must be 1 or 2");
  if (cells < 8) throw ArgumentError("Dirichlet problem needs at least 8 cells per axis");
  if (!source || !boundary) throw ArgumentError("Dirichlet problem needs source and boundary data");
  if (!(p > 1.0)) throw DomainError("p must exceed 1");
  if (series == HomotopyKind::BurgersLinear) throw ArgumentError("Dirichlet problem needs the ordinary or dual series");
}

DirichletResult solve_dirichlet_hierarchy(const DirichletProblem& problem, int order) {
  problem.validate();
  if (order < 0) throw ArgumentError("hierarchy order must be non-negative");
  const UniformGrid grid = problem.grid();
  const HomotopySpec spec = problem.homotopy(order);
  const PoissonSolver solver(grid);
  const int n = grid.count[0];

  DirichletResult result;
  result.evaluationDelta = spec.targetDelta;
  if (problem.series == HomotopyKind::PLapOrdinary && !(problem.p > 1.0 && problem.p < 3.0)) {
    std::ostringstream os;
    os << "ordinary series at p = " << problem.p << " lies outside 1 < p < 3; convergence is not expected";
    result.warnings.push_back(os.str());
  }

  GridField rhs(grid), bdry(grid);
  for (int node = 0; node < grid.size(); ++node) {
    const double x = grid.coordinate(node % n, 0);
    const double y = grid.dimension == 2 ? grid.coordinate(node / n, 1) : 0.0;
    rhs[node] = problem.source(x, y);
    if (is_boundary_node(grid, node)) bdry[node] = problem.boundary(x, y);
  }
  result.state.coeffs.push_back(solver.solve(rhs, bdry));
  result.maxResidual = solver.last_residual();

  // Faces feeding the divergence at interior nodes.
  std::vector<int> usedX, usedY;
  if (grid.dimension == 1) {
    for (int f = 0; f + 1 < n; ++f) usedX.push_back(f);
  } else {
    for (int j = 1; j + 1 < n; ++j)
      for (int i = 0; i + 1 < n; ++i) usedX.push_back(j * (n - 1) + i);
    for (int j = 0; j + 1 < n; ++j)
      for (int i = 1; i + 1 < n; ++i) usedY.push_back(j * n + i);
  }
  auto rows = [](const Eigen::MatrixXd& m, const std::vector<int>& idx) {
    Eigen::MatrixXd out(idx.size(), m.cols());
    for (std::size_t r = 0; r < idx.size(); ++r) out.row(r) = m.row(idx[r]);
    return out;
  };

  std::vector<Eigen::MatrixXd> gx, gy;
  const GridField zero(grid);
  for (int k = 1; k <= order; ++k) {
    const FaceGradients fg = face_gradients(result.state.coeffs.back());
    gx.push_back(rows(fg.xFaces, usedX));
    if (grid.dimension == 2) gy.push_back(rows(fg.yFaces, usedY));

    FaceField flux{grid, Eigen::VectorXd::Zero(grid.dimension == 1 ? n - 1 : (n - 1) * n),
                   Eigen::VectorXd::Zero(grid.dimension == 1 ? 0 : n * (n - 1))};
    auto assemble = [&](const std::vector<Eigen::MatrixXd>& grads, const std::vector<int>& used, int component,
                        Eigen::VectorXd& target) {
      try {
        const Eigen::MatrixXd F = plap_forcing(k, GradientTable(grads), spec);
        for (std::size_t r = 0; r < used.size(); ++r) target[used[r]] = F(r, component);
      } catch (const SingularForcingError& e) {
        const int face = used.at(e.point());
        std::ostringstream os;
        if (grid.dimension == 1) {
          os << e.what() << " (face x = " << grid.coordinate(face) + 0.5 * grid.spacing() << ")";
        } else {
          const int stride = component == 0 ? n - 1 : n;
          const double fx = grid.coordinate(face % stride, 0) + (component == 0 ? 0.5 * grid.spacing() : 0.0);
          const double fy = grid.coordinate(face / stride, 1) + (component == 1 ? 0.5 * grid.spacing() : 0.0);
          os << e.what() << " (face x = " << fx << ", y = " << fy << ")";
        }
        throw SingularForcingError(os.str(), k, face);
      }
    };
    assemble(gx, usedX, 0, flux.x);
    if (grid.dimension == 2) assemble(gy, usedY, 1, flux.y);

    GridField div = face_divergence(flux);
    div.values = -div.values;
    result.state.coeffs.push_back(solver.solve(div, zero));
    result.maxResidual = std::max(result.maxResidual, solver.last_residual());
  }
  if (result.maxResidual > 1e-8) {
    std::ostringstream os;
    os << "Poisson residual " << result.maxResidual << " above tolerance";
    throw InternalError(os.str());
  }
  return result;
}

}  // namespace serilin
