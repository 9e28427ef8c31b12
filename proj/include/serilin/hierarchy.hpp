#pragma once

#include "serilin/errors.hpp"
#include "serilin/grid.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace serilin {

enum class HomotopyKind { BurgersLinear, PLapOrdinary, PLapDual };

std::string to_string(HomotopyKind kind);
HomotopyKind homotopy_kind_from_string(const std::string& name);

/// Deformation family together with the data the hierarchy needs at delta = 0.
///
/// BurgersLinear uses advectionSpeed and reynolds. The p-Laplacian kinds carry the
/// derivative sequence h^(j)(0), j >= 1, of the exponent deformation h(delta).
struct HomotopySpec {
  HomotopyKind kind = HomotopyKind::BurgersLinear;
  double advectionSpeed = 0.0;
  double reynolds = 1.0;
  double targetDelta = 1.0;
  std::vector<double> homotopyDerivs;

  static HomotopySpec burgers_linear(double advectionSpeed, double reynolds);
  /// h(delta) = delta, evaluated at delta_p = p - 2.
  static HomotopySpec plap_ordinary(double p, int maxOrder = 24);
  /// h(delta) = -delta / (1 + delta), evaluated at delta_p = (2 - p) / (p - 1).
  static HomotopySpec plap_dual(double p, int maxOrder = 24);

  /// h^(j)(0); zero past the stored sequence.
  double derivative(int j) const;
  /// Exponent p recovered from targetDelta (p-Laplacian kinds only).
  double exponent() const;
  void validate() const;
};

/// Coefficients u_0..u_N of the delta-expansion at a common time.
struct HierarchyState {
  std::vector<GridField> coeffs;
  double time = 0.0;

  /// u_0 = initial, u_n = 0 for n >= 1.
  static HierarchyState initial(const GridField& u0, int order, double time = 0.0);

  int order() const { return static_cast<int>(coeffs.size()) - 1; }
  const UniformGrid& grid() const { return coeffs.front().grid; }
  void validate() const;
};

template <typename Scalar>
struct BasicPartialSum {
  Scalar evaluationDelta{};
  BasicGridField<Scalar> values;
};

using PartialSum = BasicPartialSum<double>;

/// S_N(delta) = sum_n delta^n u_n, evaluated by Horner's rule.
template <typename Scalar>
BasicPartialSum<Scalar> partial_sum(const HierarchyState& state, Scalar delta) {
  state.validate();
  using Vector = typename BasicGridField<Scalar>::Vector;
  Vector acc = state.coeffs.back().values.template cast<Scalar>();
  for (int n = state.order() - 1; n >= 0; --n) {
    acc = (acc * delta).eval();
    acc += state.coeffs[n].values.template cast<Scalar>();
  }
  return {delta, BasicGridField<Scalar>(state.grid(), std::move(acc))};
}

/// Linear-homotopy Burgers inhomogeneity F_k(u_0, ..., u_{k-1}).
///
/// F_1 = u_0^2/2 - v u_0; for k >= 2,
/// F_k = (u_0 - v) u_{k-1} + sum_{m=1}^{k-2} u_m u_{k-1-m} / 2
/// which is the parity-split form with the middle term u_{(k-1)/2}^2 / 2 for odd k.
template <typename Scalar>
BasicGridField<Scalar> burgers_forcing(int k, std::span<const BasicGridField<Scalar>> coeffs, Scalar v) {
  if (k < 1) throw ArgumentError("burgers_forcing: order k must be >= 1");
  if (static_cast<int>(coeffs.size()) < k) throw ArgumentError("burgers_forcing: coefficients incomplete");
  for (int j = 1; j < k; ++j) require_same_grid(coeffs[0].grid, coeffs[j].grid, "burgers_forcing");

  const auto u0 = coeffs[0].values.array();
  BasicGridField<Scalar> out(coeffs[0].grid);
  auto f = out.values.array();
  if (k == 1) {
    f = Scalar(0.5) * u0 * u0 - v * u0;
    return out;
  }
  f = (u0 - v) * coeffs[k - 1].values.array();
  for (int m = 1; 2 * m < k - 1; ++m) f += coeffs[m].values.array() * coeffs[k - 1 - m].values.array();
  if ((k - 1) % 2 == 0) {
    const auto mid = coeffs[(k - 1) / 2].values.array();
    f += Scalar(0.5) * mid * mid;
  }
  return out;
}

inline GridField burgers_forcing(int k, std::span<const GridField> coeffs, double v) {
  return burgers_forcing<double>(k, coeffs, v);
}

/// Restarts the hierarchy from its partial sum: u_0 <- S_N(delta), u_n <- 0.
HierarchyState refeed(const HierarchyState& state, double delta);

/// Which end of the step the linear stepper reads its forcing from.
enum class ForcingUse { Start, End, Both };

struct LinearStepRequest {
  int order;
  double time;
  double dt;
  const GridField& current;
  const GridField& forcingStart;  // empty field unless requested
  const GridField& forcingEnd;    // empty field unless requested
};

/// Forcing of the order-n equation from u_0..u_{n-1} at `time`. Order 0 returns the
/// external source (or zeros).
using ForcingBuilder = std::function<GridField(int order, std::span<const GridField> lower, double time)>;
/// Advances one linear forced equation over a step.
using LinearStepper = std::function<GridField(const LinearStepRequest&)>;

/// Advances u_0, u_1, ..., u_N over dt in increasing order. The end-of-step forcing
/// of order n is built from the already advanced orders 0..n-1.
HierarchyState step_hierarchy(const HierarchyState& state, double dt, const ForcingBuilder& forcing,
                              const LinearStepper& stepper, ForcingUse use = ForcingUse::Both);

struct DriverOptions {
  double dt = 1e-4;
  long steps = 0;
  /// Refeed after every `refeedEvery` steps; 0 disables refeeding.
  int refeedEvery = 1;
  double refeedDelta = 1.0;
  ForcingUse forcingUse = ForcingUse::Both;
  /// Steps (1-based, after the step completes) at which the state is recorded
  /// before any refeed. Step 0 records the initial state.
  std::vector<long> sampleSteps;
  /// Abort when max |u_n| exceeds this bound.
  double blowupBound = 1e6;
};

/// Fixed-step driver with optional refeeding. Non-finite or runaway coefficients raise
/// SolverError carrying (order, step).
std::vector<HierarchyState> run_hierarchy(HierarchyState state, const DriverOptions& options,
                                          const ForcingBuilder& forcing, const LinearStepper& stepper);

}  // namespace serilin
