#include "serilin/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace serilin {

std::string to_string(HomotopyKind kind) {
  switch (kind) {
    case HomotopyKind::BurgersLinear: return "burgers-linear";
    case HomotopyKind::PLapOrdinary: return "ordinary";
    case HomotopyKind::PLapDual: return "dual";
  }
  return "unknown";
}

HomotopyKind homotopy_kind_from_string(const std::string& name) {
  if (name == "burgers-linear") return HomotopyKind::BurgersLinear;
  if (name == "ordinary") return HomotopyKind::PLapOrdinary;
  if (name == "dual") return HomotopyKind::PLapDual;
  throw ArgumentError("unknown series kind '" + name + "'");
}

HomotopySpec HomotopySpec::burgers_linear(double advectionSpeed, double reynolds) {
  HomotopySpec s;
  s.kind = HomotopyKind::BurgersLinear;
  s.advectionSpeed = advectionSpeed;
  s.reynolds = reynolds;
  s.targetDelta = 1.0;
  s.validate();
  return s;
}

HomotopySpec HomotopySpec::plap_ordinary(double p, int maxOrder) {
  if (!(p > 1.0)) throw DomainError("p-Laplacian exponent must exceed 1");
  HomotopySpec s;
  s.kind = HomotopyKind::PLapOrdinary;
  s.targetDelta = p - 2.0;
  s.homotopyDerivs.assign(std::max(maxOrder, 1), 0.0);
  s.homotopyDerivs[0] = 1.0;
  return s;
}

HomotopySpec HomotopySpec::plap_dual(double p, int maxOrder) {
  if (!(p > 1.0)) throw DomainError("p-Laplacian exponent must exceed 1");
  HomotopySpec s;
  s.kind = HomotopyKind::PLapDual;
  s.targetDelta = (2.0 - p) / (p - 1.0);
  s.homotopyDerivs.resize(std::max(maxOrder, 1));
  // h(d) = -d/(1+d) = sum_{j>=1} (-1)^j d^j, so h^(j)(0) = (-1)^j j!
  double factorial = 1.0;
  for (int j = 1; j <= static_cast<int>(s.homotopyDerivs.size()); ++j) {
    factorial *= j;
    s.homotopyDerivs[j - 1] = (j % 2 == 0 ? 1.0 : -1.0) * factorial;
  }
  return s;
}

double HomotopySpec::derivative(int j) const {
  if (j < 1) throw ArgumentError("homotopy derivative index starts at 1");
  return j <= static_cast<int>(homotopyDerivs.size()) ? homotopyDerivs[j - 1] : 0.0;
}

double HomotopySpec::exponent() const {
  switch (kind) {
    case HomotopyKind::PLapOrdinary: return targetDelta + 2.0;
    case HomotopyKind::PLapDual: return (targetDelta + 2.0) / (targetDelta + 1.0);
    case HomotopyKind::BurgersLinear: break;
  }
  throw ArgumentError("exponent() is only defined for p-Laplacian homotopies");
}

void HomotopySpec::validate() const {
  if (kind == HomotopyKind::BurgersLinear) {
    if (!(reynolds > 0.0) || !std::isfinite(reynolds)) throw ArgumentError("Reynolds number must be positive");
    if (!std::isfinite(advectionSpeed)) throw ArgumentError("advection speed must be finite");
  } else if (homotopyDerivs.empty()) {
    throw ArgumentError("p-Laplacian homotopy needs derivative data h^(j)(0)");
  }
}

HierarchyState HierarchyState::initial(const GridField& u0, int order, double time) {
  if (order < 0) throw ArgumentError("hierarchy order must be non-negative");
  HierarchyState s;
  s.time = time;
  s.coeffs.reserve(order + 1);
  s.coeffs.push_back(u0);
  for (int n = 1; n <= order; ++n) s.coeffs.emplace_back(u0.grid);
  return s;
}

void HierarchyState::validate() const {
  if (coeffs.empty()) throw StructuralError("hierarchy state has no coefficients");
  for (const auto& c : coeffs) {
    require_same_grid(coeffs.front().grid, c.grid, "hierarchy state");
    if (c.values.size() != c.grid.size()) throw StructuralError("hierarchy coefficient size does not match its grid");
  }
}

HierarchyState refeed(const HierarchyState& state, double delta) {
  auto sum = partial_sum(state, delta);
  return HierarchyState::initial(sum.values, state.order(), state.time);
}

HierarchyState step_hierarchy(const HierarchyState& state, double dt, const ForcingBuilder& forcing,
                              const LinearStepper& stepper, ForcingUse use) {
  if (!(dt > 0.0)) throw ArgumentError("step_hierarchy: dt must be positive");
  state.validate();
  const bool needStart = use != ForcingUse::End;
  const bool needEnd = use != ForcingUse::Start;
  const GridField empty;
  const std::span<const GridField> before(state.coeffs);

  HierarchyState next;
  next.time = state.time + dt;
  next.coeffs.reserve(state.coeffs.size());
  for (int n = 0; n <= state.order(); ++n) {
    try {
      GridField fStart = needStart ? forcing(n, before.first(n), state.time) : empty;
      GridField fEnd = needEnd ? forcing(n, std::span<const GridField>(next.coeffs), next.time) : empty;
      LinearStepRequest req{n, state.time, dt, state.coeffs[n], fStart, fEnd};
      next.coeffs.push_back(stepper(req));
    } catch (const SolverError& e) {
      throw SolverError(e.what(), n, e.step());
    } catch (const SingularForcingError&) {
      throw;
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "order " << n << ": " << e.what();
      throw SolverError(os.str(), n, -1);
    }
    require_same_grid(state.grid(), next.coeffs.back().grid, "step_hierarchy");
  }
  return next;
}

namespace {

void check_finite(const HierarchyState& state, long step, double bound) {
  for (int n = 0; n <= state.order(); ++n) {
    const auto& v = state.coeffs[n].values;
    if (!v.allFinite()) {
      std::ostringstream os;
      os << "non-finite coefficient at order " << n << ", step " << step;
      throw SolverError(os.str(), n, step);
    }
    if (v.size() > 0 && v.cwiseAbs().maxCoeff() > bound) {
      std::ostringstream os;
      os << "coefficient growth beyond " << bound << " at order " << n << ", step " << step;
      throw SolverError(os.str(), n, step);
    }
  }
}

}  // namespace

std::vector<HierarchyState> run_hierarchy(HierarchyState state, const DriverOptions& options,
                                          const ForcingBuilder& forcing, const LinearStepper& stepper) {
  if (!(options.dt > 0.0)) throw ArgumentError("driver dt must be positive");
  if (options.steps < 0) throw ArgumentError("driver step count must be non-negative");
  if (options.refeedEvery < 0) throw ArgumentError("refeed cadence must be non-negative");

  std::vector<long> samples = options.sampleSteps;
  std::sort(samples.begin(), samples.end());
  std::vector<HierarchyState> out;
  auto next_sample = samples.begin();
  auto record = [&](long step) {
    while (next_sample != samples.end() && *next_sample == step) {
      out.push_back(state);
      ++next_sample;
    }
  };

  const double t0 = state.time;
  record(0);
  for (long step = 1; step <= options.steps; ++step) {
    try {
      state = step_hierarchy(state, options.dt, forcing, stepper, options.forcingUse);
    } catch (const SolverError& e) {
      throw SolverError(e.what(), e.order(), step);
    }
    // Re-anchor the clock to avoid drift from repeated addition.
    state.time = t0 + step * options.dt;
    check_finite(state, step, options.blowupBound);
    record(step);
    if (options.refeedEvery > 0 && step % options.refeedEvery == 0) state = refeed(state, options.refeedDelta);
  }
  return out;
}

}  // namespace serilin
