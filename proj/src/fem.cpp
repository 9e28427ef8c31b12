#include "serilin/fem.hpp"

#include "serilin/errors.hpp"
#include "serilin/exact.hpp"
#include "serilin/plap_forcing.hpp"
#include "serilin/special.hpp"

#include <cmath>
#include <sstream>

namespace serilin {

namespace {

using Sparse = Eigen::SparseMatrix<double>;
using Triplets = std::vector<Eigen::Triplet<double>>;

void mirror(Eigen::VectorXd& v, int center, double sign) {
  for (int j = 1; j <= center; ++j) {
    const double s = 0.5 * (v[center + j] + sign * v[center - j]);
    v[center + j] = s;
    v[center - j] = sign * s;
  }
  if (sign < 0.0) v[center] = 0.0;
}

Sparse interior_block(const Sparse& m) {
  const int n = static_cast<int>(m.rows());
  return m.block(1, 1, n - 2, n - 2);
}

// Element-by-element Gauss quadrature; exact for the P1 products involved.
void check_against_quadrature(const FemMesh& mesh) {
  const int n = mesh.nodes();
  const double h = mesh.spacing;
  const GaussRule& rule = gauss_legendre(3);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n), B = A, C = A;
  for (int e = 0; e + 1 < n; ++e)
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double s = 0.5 * (1.0 + rule.nodes[q]), w = 0.5 * h * rule.weights[q];
      const double phi[2] = {1.0 - s, s}, dphi[2] = {-1.0 / h, 1.0 / h};
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          A(e + a, e + b) += w * phi[a] * phi[b];
          B(e + a, e + b) += w * dphi[a] * dphi[b];
          C(e + a, e + b) += w * phi[a] * dphi[b];
        }
    }
  const double dev = std::max({(Eigen::MatrixXd(mesh.A) - A).cwiseAbs().maxCoeff() / h,
                               (Eigen::MatrixXd(mesh.B) - B).cwiseAbs().maxCoeff() * h,
                               (Eigen::MatrixXd(mesh.C) - C).cwiseAbs().maxCoeff()});
  if (dev > 1e-12) throw InternalError("FEM assembly disagrees with element quadrature");
}

}  // namespace

FemMesh build_mesh(double halfWidth, double spacing) {
  if (!(halfWidth > 0.0) || !(spacing > 0.0)) throw ArgumentError("build_mesh: L and dx must be positive");
  const double ratio = halfWidth / spacing;
  const long cellsHalf = std::lround(ratio);
  if (cellsHalf < 1 || std::abs(ratio - static_cast<double>(cellsHalf)) > 1e-9 * std::max(1.0, ratio))
    throw ArgumentError("build_mesh: L/dx must be an integer");
  if (cellsHalf > 5'000'000) throw ArgumentError("build_mesh: mesh too large");

  FemMesh mesh;
  mesh.halfWidth = halfWidth;
  mesh.spacing = spacing;
  const int n = static_cast<int>(2 * cellsHalf + 1);
  mesh.center = static_cast<int>(cellsHalf);
  mesh.grid = UniformGrid::interval(-halfWidth, halfWidth, n);

  const double h = spacing;
  Triplets a, b, c;
  for (int i = 0; i < n; ++i) {
    const bool end = i == 0 || i == n - 1;
    a.emplace_back(i, i, end ? h / 3.0 : 2.0 * h / 3.0);
    b.emplace_back(i, i, end ? 1.0 / h : 2.0 / h);
    if (i == 0) c.emplace_back(i, i, -0.5);
    if (i == n - 1) c.emplace_back(i, i, 0.5);
    if (i > 0) {
      a.emplace_back(i, i - 1, h / 6.0);
      b.emplace_back(i, i - 1, -1.0 / h);
      c.emplace_back(i, i - 1, -0.5);
    }
    if (i + 1 < n) {
      a.emplace_back(i, i + 1, h / 6.0);
      b.emplace_back(i, i + 1, -1.0 / h);
      c.emplace_back(i, i + 1, 0.5);
    }
  }
  mesh.A.resize(n, n);
  mesh.B.resize(n, n);
  mesh.C.resize(n, n);
  mesh.A.setFromTriplets(a.begin(), a.end());
  mesh.B.setFromTriplets(b.begin(), b.end());
  mesh.C.setFromTriplets(c.begin(), c.end());
  if (n <= 2001) check_against_quadrature(mesh);
  return mesh;
}

Eigen::VectorXd project_delta_ic(const FemMesh& mesh) {
  const int n = mesh.nodes();
  if (n < 3 || std::abs(mesh.x(mesh.center)) > 1e-12 * mesh.halfWidth)
    throw ArgumentError("project_delta_ic: mesh has no node at x = 0");
  Eigen::SimplicialLDLT<Sparse> solver(mesh.A);
  if (solver.info() != Eigen::Success) throw InternalError("project_delta_ic: mass factorization failed");
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  e[mesh.center] = 1.0;
  Eigen::VectorXd a = solver.solve(e);
  mirror(a, mesh.center, 1.0);
  a[0] = a[n - 1] = 0.0;
  return a;
}

GalerkinStepper::GalerkinStepper(const FemMesh& mesh, double dt, bool mirror)
    : mesh_(mesh), dt_(dt), mirror_(mirror) {
  if (!(dt > 0.0)) throw ArgumentError("time step must be positive");
  if (mesh.nodes() < 3) throw ArgumentError("mesh needs at least 3 nodes");
  interiorA_ = interior_block(mesh.A);
  interiorC_ = mesh.C.block(1, 0, mesh.nodes() - 2, mesh.nodes());
  Sparse sys = interiorA_ + dt * interior_block(mesh.B);
  evolve_ = std::make_shared<Eigen::SimplicialLDLT<Sparse>>(sys);
  mass_ = std::make_shared<Eigen::SimplicialLDLT<Sparse>>(mesh.A);
  if (evolve_->info() != Eigen::Success || mass_->info() != Eigen::Success)
    throw InternalError("Galerkin factorization failed");
}

Eigen::VectorXd GalerkinStepper::step(const Eigen::VectorXd& a, const Eigen::VectorXd& forcingEnd) const {
  const int n = mesh_.nodes();
  if (a.size() != n) throw StructuralError("Galerkin step: coefficient length mismatch");
  Eigen::VectorXd rhs = interiorA_ * a.segment(1, n - 2);
  if (forcingEnd.size() == n) rhs += dt_ * (interiorC_ * forcingEnd);
  else if (forcingEnd.size() != 0) throw StructuralError("Galerkin step: forcing length mismatch");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  out.segment(1, n - 2) = evolve_->solve(rhs);
  if (evolve_->info() != Eigen::Success) throw InternalError("Galerkin solve failed");
  if (mirror_) mirror(out, mesh_.center, 1.0);
  return out;
}

Eigen::VectorXd GalerkinStepper::gradient(const Eigen::VectorXd& a) const {
  Eigen::VectorXd g = mass_->solve(mesh_.C * a);
  if (mirror_) mirror(g, mesh_.center, -1.0);
  return g;
}

Eigen::VectorXd fem_forcing(int order, const std::vector<Eigen::VectorXd>& lower, const GalerkinStepper& stepper,
                            const HomotopySpec& spec) {
  if (order < 1 || static_cast<int>(lower.size()) < order) throw ArgumentError("fem_forcing: lower orders missing");
  std::vector<Eigen::MatrixXd> grads;
  grads.reserve(order);
  for (int j = 0; j < order; ++j) grads.emplace_back(stepper.gradient(lower[j]));
  const Eigen::MatrixXd F = plap_forcing(order, GradientTable(std::move(grads)), spec);
  return F.col(0);
}

GalerkinState step_implicit_euler(const GalerkinState& state, const GalerkinStepper& stepper,
                                  const HomotopySpec& spec) {
  if (state.coeffs.empty()) throw StructuralError("Galerkin state has no coefficients");
  GalerkinState next;
  next.time = state.time + stepper.dt();
  next.coeffs.reserve(state.coeffs.size());
  for (std::size_t n = 0; n < state.coeffs.size(); ++n) {
    const int order = static_cast<int>(n);
    Eigen::VectorXd f;
    if (order > 0) f = fem_forcing(order, next.coeffs, stepper, spec);
    try {
      next.coeffs.push_back(stepper.step(state.coeffs[n], f));
    } catch (const InternalError& e) {
      throw SolverError(e.what(), order, 0);
    }
    if (!next.coeffs.back().allFinite()) throw SolverError("non-finite Galerkin coefficients", order, 0);
  }
  return next;
}

double fem_l2(const FemMesh& mesh, const Eigen::VectorXd& v) {
  const int n = mesh.nodes();
  double s = v.squaredNorm() - 0.5 * (v[0] * v[0] + v[n - 1] * v[n - 1]);
  return std::sqrt(s * mesh.spacing);
}

void EvolutionConfig::validate() const {
  if (!(p > 1.0)) throw DomainError("p must exceed 1");
  if (series == HomotopyKind::BurgersLinear) throw ArgumentError("evolution needs the ordinary or dual series");
  if (order < 0 || order > 24) throw ArgumentError("order must lie in 0..24");
  if (!(dt > 0.0) || !(tFinal > 0.0)) throw ArgumentError("dt and tFinal must be positive");
  if (refeedEvery < 0) throw ArgumentError("refeed cadence must be non-negative");
  for (double t : sampleTimes)
    if (!(t >= 0.0) || t > tFinal * (1 + 1e-12)) throw ArgumentError("sample times must lie in [0, tFinal]");
}

EvolutionResult solve_evolution_hierarchy(const EvolutionConfig& config) {
  config.validate();
  const HomotopySpec spec = config.series == HomotopyKind::PLapDual
                                ? HomotopySpec::plap_dual(config.p, std::max(config.order, 1))
                                : HomotopySpec::plap_ordinary(config.p, std::max(config.order, 1));
  EvolutionResult result;
  result.mesh = build_mesh(config.halfWidth, config.dx);
  result.evaluationDelta = spec.targetDelta;
  const FemMesh& mesh = result.mesh;
  const GalerkinStepper stepper(mesh, config.dt, config.mirrorSymmetry);
  const double delta = spec.targetDelta;
  const int N = config.order;

  const long steps = std::lround(config.tFinal / config.dt);
  if (std::abs(steps * config.dt - config.tFinal) > 1e-9 * config.tFinal)
    throw ArgumentError("tFinal must be a multiple of dt");
  std::vector<long> sampleSteps;
  for (double t : config.sampleTimes.empty() ? std::vector<double>{config.tFinal} : config.sampleTimes)
    sampleSteps.push_back(std::lround(t / config.dt));

  auto reference = [&](double t) {
    Eigen::VectorXd h(mesh.nodes());
    for (int i = 0; i < mesh.nodes(); ++i) h[i] = barenblatt(config.p, 1, t, std::abs(mesh.x(i)));
    return h;
  };
  auto residuals = [&](const GalerkinState& s) {
    const Eigen::VectorXd h = reference(s.time);
    std::vector<double> out;
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(mesh.nodes());
    double power = 1.0;
    for (const auto& c : s.coeffs) {
      acc += power * c;
      power *= delta;
      out.push_back(fem_l2(mesh, acc - h));
    }
    return out;
  };

  GalerkinState state;
  state.coeffs.assign(N + 1, Eigen::VectorXd::Zero(mesh.nodes()));
  state.coeffs[0] = project_delta_ic(mesh);
  auto record = [&](long step) {
    for (long s : sampleSteps)
      if (s == step) result.samples.push_back({state.time, state, step == 0 ? std::vector<double>{} : residuals(state)});
  };
  record(0);

  for (long step = 1; step <= steps; ++step) {
    try {
      state = step_implicit_euler(state, stepper, spec);
    } catch (const SolverError& e) {
      if (config.refeedEvery == 0) throw SolverError(e.what(), e.order(), step);
      result.diverged = true;
      result.divergenceNote = std::string("solver failure during refeeding run: ") + e.what();
      return result;
    } catch (const SingularForcingError& e) {
      if (config.refeedEvery == 0) throw;
      result.diverged = true;
      result.divergenceNote = std::string("singular forcing during refeeding run: ") + e.what();
      return result;
    }
    state.time = step * config.dt;
    record(step);
    if (config.refeedEvery > 0 && step % config.refeedEvery == 0 && step < steps) {
      const double r = residuals(state).back();
      if (!result.refeedResiduals.empty() && r > 10.0 * result.refeedResiduals.back() && !result.diverged) {
        std::ostringstream os;
        os << "residual grew from " << result.refeedResiduals.back() << " to " << r << " between refeeds at t = "
           << state.time;
        result.diverged = true;
        result.divergenceNote = os.str();
      }
      result.refeedTimes.push_back(state.time);
      result.refeedResiduals.push_back(r);
      Eigen::VectorXd sum = Eigen::VectorXd::Zero(mesh.nodes());
      double power = 1.0;
      for (const auto& c : state.coeffs) {
        sum += power * c;
        power *= delta;
      }
      for (auto& c : state.coeffs) c.setZero();
      state.coeffs[0] = sum;
    }
  }
  return result;
}

}  // namespace serilin
