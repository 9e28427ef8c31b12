#pragma once

#include "serilin/grid.hpp"
#include "serilin/hierarchy.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace serilin {

using Complex = std::complex<double>;

/// Fourier coefficients of a periodic field on [0, 1) sampled at M = 2K points.
///
/// Normalization: uhat(k) = (1/M) sum_j u_j exp(-2 pi i k x_j), so that
/// u(x_j) = sum_k uhat(k) exp(2 pi i k x_j). Modes are stored in FFT order
/// (0, 1, ..., K-1, -K, ..., -1); use at(k) for signed access.
struct SpectralField {
  Eigen::VectorXcd modes;

  int grid_size() const { return static_cast<int>(modes.size()); }
  int half() const { return grid_size() / 2; }
  /// Storage slot of signed wavenumber k in [-K, K-1].
  int slot(int k) const;
  Complex& at(int k) { return modes[slot(k)]; }
  const Complex& at(int k) const { return modes[slot(k)]; }
  /// Signed wavenumber stored in slot j.
  int wavenumber(int j) const { return j < half() ? j : j - grid_size(); }
};

bool is_power_of_two(int n);

SpectralField fft_forward(const GridField& field);
/// Complex samples of the inverse transform; imaginary parts carry the reality residue.
Eigen::VectorXcd fft_inverse_complex(const SpectralField& spectrum);
/// Real part of the inverse transform on the matching periodic unit grid.
GridField fft_inverse(const SpectralField& spectrum);

/// Spectral derivative d/dx on [0,1); the Nyquist mode is dropped.
GridField spectral_derivative(const GridField& field);
/// Shifts a periodic field to zero mean.
GridField remove_mean(const GridField& field);

/// Random sinusoidal forcing f(x) = sum_{k=kMin..kMax} A_k sin(2 pi k x + phi_k).
struct ForcingSpec {
  int kMin = 1;
  int kMax = 1;
  std::vector<double> amplitudes;  // A_k, k = kMin..kMax
  std::vector<double> phases;      // phi_k
  std::uint64_t seed = 0;

  /// Stream layout: mt19937_64(seed), one draw u in [0,1) as (x >> 11) * 2^-53;
  /// per k in increasing order draw A_k = 2u - 1 then phi_k = 2 pi u.
  static ForcingSpec random(int kMin, int kMax, std::uint64_t seed);
  void validate() const;
};

GridField forcing_field(const ForcingSpec& spec, const UniformGrid& grid);

/// Duhamel weights for lambda * dt = z:
/// phi1 = dt (1 - e^{-z}) / z and psi = dt (z - 1 + e^{-z}) / z^2,
/// with series limits near z = 0.
Complex duhamel_phi1(Complex z, double dt);
Complex duhamel_psi(Complex z, double dt);

/// One exponential step of d/dt u + lambda u = factor * F for a single mode:
/// u(t+dt) = e^{-lambda dt} u + factor * (phi1 F0 + psi (F1 - F0)).
/// Passing F1 == F0 gives the frozen-forcing (exponential Euler) update.
Complex advance_mode_duhamel(Complex current, Complex forcingStart, Complex forcingEnd, Complex lambda,
                             Complex factor, double dt);

/// Quadrature of the forcing inside one exponential step.
///   Frozen: step-start forcing held constant (exponential Euler).
///   Trapezoidal: forcing linearly interpolated between step start and end, integrated exactly.
///   IntegratingFactor: trapezoid rule on the whole integrand, (dt/2)(e^{-z} F0 + F1).
///   EndPoint: step-end forcing held constant.
enum class ForcingQuadrature { Frozen, Trapezoidal, IntegratingFactor, EndPoint };
std::string to_string(ForcingQuadrature q);
ForcingQuadrature forcing_quadrature_from_string(const std::string& name);

struct PeriodicSolverConfig {
  int gridSize = 512;
  double dt = 1e-4;
  double tFinal = 1.0;
  int order = 8;
  /// 0 disables refeeding.
  int refeedEvery = 1;
  ForcingQuadrature quadrature = ForcingQuadrature::IntegratingFactor;
  bool dealias = false;
  /// Times at which states are recorded (rounded to the step grid).
  std::vector<double> sampleTimes;

  void validate() const;
};

struct PeriodicTrajectory {
  std::vector<double> times;
  std::vector<HierarchyState> states;
  double evaluationDelta = 1.0;
};

/// Linear-homotopy Burgers hierarchy on the periodic unit interval. External
/// forcing enters the order-0 equation only.
PeriodicTrajectory solve_periodic_hierarchy(const GridField& initial, const HomotopySpec& spec,
                                            const std::optional<ForcingSpec>& forcing,
                                            const PeriodicSolverConfig& config);

struct DnsTrajectory {
  std::vector<double> times;
  std::vector<GridField> fields;
  std::vector<std::string> warnings;
};

/// Centered differences with forward Euler for u_t + (u^2/2)_x = u_xx / Re + f.
DnsTrajectory dns_burgers(const GridField& initial, const std::optional<ForcingSpec>& forcing, double dt,
                          double tFinal, double reynolds, const std::vector<double>& sampleTimes);

/// Convert sample times to step indices, rejecting times off the step grid.
std::vector<long> sample_steps(const std::vector<double>& times, double dt, double tFinal);

}  // namespace serilin
