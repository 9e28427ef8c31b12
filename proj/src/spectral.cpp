#include "serilin/spectral.hpp"

#include "serilin/errors.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace serilin {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::FFT<double>& fft_engine() {
  thread_local Eigen::FFT<double> engine;
  return engine;
}

void require_periodic_pow2(const UniformGrid& grid, const char* context) {
  if (grid.dimension != 1 || !grid.periodic)
    throw ArgumentError(std::string(context) + ": expected a 1D periodic grid");
  if (!is_power_of_two(grid.count[0]))
    throw ArgumentError(std::string(context) + ": grid size must be a power of two, got " +
                        std::to_string(grid.count[0]));
}

}  // namespace

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int SpectralField::slot(int k) const {
  const int m = grid_size();
  if (k < -half() || k >= half()) throw ArgumentError("wavenumber out of range: " + std::to_string(k));
  return k >= 0 ? k : k + m;
}

SpectralField fft_forward(const GridField& field) {
  require_periodic_pow2(field.grid, "fft_forward");
  const int m = field.grid.count[0];
  SpectralField out;
  out.modes.resize(m);
  Eigen::VectorXd in = field.values;
  fft_engine().fwd(out.modes, in);
  out.modes /= static_cast<double>(m);
  return out;
}

Eigen::VectorXcd fft_inverse_complex(const SpectralField& spectrum) {
  const int m = spectrum.grid_size();
  if (!is_power_of_two(m)) throw ArgumentError("fft_inverse: size must be a power of two");
  Eigen::VectorXcd out(m);
  Eigen::VectorXcd in = spectrum.modes;
  fft_engine().inv(out, in);
  out *= static_cast<double>(m);
  return out;
}

GridField fft_inverse(const SpectralField& spectrum) {
  GridField out(UniformGrid::periodic_unit(spectrum.grid_size()));
  out.values = fft_inverse_complex(spectrum).real();
  return out;
}

GridField spectral_derivative(const GridField& field) {
  SpectralField s = fft_forward(field);
  const int m = s.grid_size();
  for (int j = 0; j < m; ++j) {
    const int k = s.wavenumber(j);
    s.modes[j] *= (k == -s.half()) ? Complex(0.0) : Complex(0.0, 2.0 * kPi * k);
  }
  return fft_inverse(s);
}

GridField remove_mean(const GridField& field) {
  GridField out = field;
  if (out.size() > 0) out.values.array() -= out.values.mean();
  return out;
}

ForcingSpec ForcingSpec::random(int kMin, int kMax, std::uint64_t seed) {
  ForcingSpec spec;
  spec.kMin = kMin;
  spec.kMax = kMax;
  spec.seed = seed;
  if (kMin < 1 || kMax < kMin) throw ArgumentError("forcing band requires 1 <= kMin <= kMax");
  std::mt19937_64 gen(seed);
  auto uniform = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  for (int k = kMin; k <= kMax; ++k) {
    spec.amplitudes.push_back(2.0 * uniform() - 1.0);
    spec.phases.push_back(2.0 * kPi * uniform());
  }
  return spec;
}

void ForcingSpec::validate() const {
  if (kMin < 1 || kMax < kMin) throw ArgumentError("forcing band requires 1 <= kMin <= kMax");
  const auto n = static_cast<std::size_t>(kMax - kMin + 1);
  if (amplitudes.size() != n || phases.size() != n) throw ArgumentError("forcing amplitude/phase count mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(std::abs(amplitudes[i]) <= 1.0)) throw ArgumentError("forcing amplitude outside [-1, 1]");
    if (!(phases[i] >= 0.0 && phases[i] < 2.0 * kPi)) throw ArgumentError("forcing phase outside [0, 2 pi)");
  }
}

GridField forcing_field(const ForcingSpec& spec, const UniformGrid& grid) {
  spec.validate();
  return sample(grid, [&](double x) {
    double f = 0.0;
    for (int k = spec.kMin; k <= spec.kMax; ++k)
      f += spec.amplitudes[k - spec.kMin] * std::sin(2.0 * kPi * k * x + spec.phases[k - spec.kMin]);
    return f;
  });
}

Complex duhamel_phi1(Complex z, double dt) {
  if (std::abs(z) < 0.05) {
    // 1 - z/2 + z^2/6 - ...
    Complex term(1.0), sum(0.0);
    for (int j = 1; j <= 12; ++j) {
      sum += term;
      term *= -z / static_cast<double>(j + 1);
    }
    return dt * sum;
  }
  return dt * (1.0 - std::exp(-z)) / z;
}

Complex duhamel_psi(Complex z, double dt) {
  if (std::abs(z) < 0.05) {
    // sum_{j>=0} (-z)^j / (j+2)!
    Complex term(0.5), sum(0.0);
    for (int j = 0; j < 12; ++j) {
      sum += term;
      term *= -z / static_cast<double>(j + 3);
    }
    return dt * sum;
  }
  return dt * (z - 1.0 + std::exp(-z)) / (z * z);
}

Complex advance_mode_duhamel(Complex current, Complex forcingStart, Complex forcingEnd, Complex lambda,
                             Complex factor, double dt) {
  const Complex z = lambda * dt;
  return std::exp(-z) * current +
         factor * (duhamel_phi1(z, dt) * forcingStart + duhamel_psi(z, dt) * (forcingEnd - forcingStart));
}

std::string to_string(ForcingQuadrature q) {
  switch (q) {
    case ForcingQuadrature::Frozen: return "frozen";
    case ForcingQuadrature::Trapezoidal: return "trapezoidal";
    case ForcingQuadrature::IntegratingFactor: return "integrating-factor";
    case ForcingQuadrature::EndPoint: return "end-point";
  }
  return "unknown";
}

ForcingQuadrature forcing_quadrature_from_string(const std::string& name) {
  if (name == "frozen") return ForcingQuadrature::Frozen;
  if (name == "trapezoidal") return ForcingQuadrature::Trapezoidal;
  if (name == "integrating-factor") return ForcingQuadrature::IntegratingFactor;
  if (name == "end-point") return ForcingQuadrature::EndPoint;
  throw ArgumentError("unknown forcing quadrature '" + name + "'");
}

void PeriodicSolverConfig::validate() const {
  if (!is_power_of_two(gridSize) || gridSize < 4) throw ArgumentError("gridSize must be a power of two >= 4");
  if (!(dt > 0.0)) throw ArgumentError("dt must be positive");
  if (!(tFinal >= 0.0)) throw ArgumentError("tFinal must be non-negative");
  if (order < 0) throw ArgumentError("order must be non-negative");
  if (refeedEvery < 0) throw ArgumentError("refeedEvery must be non-negative");
}

std::vector<long> sample_steps(const std::vector<double>& times, double dt, double tFinal) {
  std::vector<long> steps;
  for (double t : times) {
    if (t < 0.0 || t > tFinal * (1.0 + 1e-12) + 1e-15) {
      std::ostringstream os;
      os << "sample time " << t << " outside [0, " << tFinal << "]";
      throw ArgumentError(os.str());
    }
    const long s = std::lround(t / dt);
    if (std::abs(s * dt - t) > 1e-9 * std::max(1.0, t)) {
      std::ostringstream os;
      os << "sample time " << t << " is not a multiple of dt = " << dt;
      throw ArgumentError(os.str());
    }
    steps.push_back(s);
  }
  return steps;
}

PeriodicTrajectory solve_periodic_hierarchy(const GridField& initial, const HomotopySpec& spec,
                                            const std::optional<ForcingSpec>& forcing,
                                            const PeriodicSolverConfig& config) {
  config.validate();
  spec.validate();
  if (spec.kind != HomotopyKind::BurgersLinear) throw ArgumentError("periodic solver needs a Burgers homotopy");
  require_periodic_pow2(initial.grid, "solve_periodic_hierarchy");
  if (initial.grid.count[0] != config.gridSize) throw ArgumentError("initial data does not match gridSize");
  if (!initial.values.allFinite()) throw ArgumentError("initial data contains non-finite values");

  const int m = config.gridSize;
  const int half = m / 2;
  const double dt = config.dt;
  const double v = spec.advectionSpeed;
  const double re = spec.reynolds;

  std::optional<SpectralField> forcingHat;
  if (forcing) {
    if (forcing->kMax >= half) throw ArgumentError("forcing kMax must be below the Nyquist wavenumber");
    forcingHat = fft_forward(forcing_field(*forcing, initial.grid));
  }

  // Per-slot propagator data.
  Eigen::VectorXcd decay(m), phi1(m), psi(m), derivFactor(m);
  Eigen::VectorXd mask = Eigen::VectorXd::Ones(m);
  for (int j = 0; j < m; ++j) {
    const int k = j < half ? j : j - m;
    const Complex lambda(4.0 * kPi * kPi * k * k / re, 2.0 * kPi * k * v);
    const Complex z = lambda * dt;
    decay[j] = std::exp(-z);
    phi1[j] = duhamel_phi1(z, dt);
    psi[j] = duhamel_psi(z, dt);
    derivFactor[j] = (k == -half) ? Complex(0.0) : Complex(0.0, -2.0 * kPi * k);
    if (config.dealias && 3 * std::abs(k) > m) mask[j] = 0.0;
  }

  const UniformGrid grid = initial.grid;
  const GridField zero(grid);

  ForcingBuilder builder = [&](int order, std::span<const GridField> lower, double) -> GridField {
    if (order == 0) return zero;  // external forcing handled spectrally below
    return burgers_forcing(order, lower, v);
  };

  LinearStepper stepper = [&](const LinearStepRequest& req) -> GridField {
    SpectralField u = fft_forward(req.current);
    if (req.order == 0) {
      u.modes = u.modes.cwiseProduct(decay);
      if (forcingHat) u.modes += phi1.cwiseProduct(forcingHat->modes);
    } else {
      Eigen::VectorXcd incr;
      switch (config.quadrature) {
        case ForcingQuadrature::Frozen:
          incr = phi1.cwiseProduct(fft_forward(req.forcingStart).modes.cwiseProduct(mask));
          break;
        case ForcingQuadrature::EndPoint:
          incr = phi1.cwiseProduct(fft_forward(req.forcingEnd).modes.cwiseProduct(mask));
          break;
        case ForcingQuadrature::Trapezoidal: {
          const Eigen::VectorXcd f0 = fft_forward(req.forcingStart).modes.cwiseProduct(mask);
          const Eigen::VectorXcd f1 = fft_forward(req.forcingEnd).modes.cwiseProduct(mask);
          incr = phi1.cwiseProduct(f0) + psi.cwiseProduct(f1 - f0);
          break;
        }
        case ForcingQuadrature::IntegratingFactor: {
          const Eigen::VectorXcd f0 = fft_forward(req.forcingStart).modes.cwiseProduct(mask);
          const Eigen::VectorXcd f1 = fft_forward(req.forcingEnd).modes.cwiseProduct(mask);
          incr = 0.5 * dt * (decay.cwiseProduct(f0) + f1);
          break;
        }
      }
      u.modes = u.modes.cwiseProduct(decay) + derivFactor.cwiseProduct(incr);
    }
    return fft_inverse(u);
  };

  DriverOptions opts;
  opts.dt = dt;
  opts.steps = std::lround(config.tFinal / dt);
  opts.refeedEvery = config.refeedEvery;
  opts.refeedDelta = spec.targetDelta;
  switch (config.quadrature) {
    case ForcingQuadrature::Frozen: opts.forcingUse = ForcingUse::Start; break;
    case ForcingQuadrature::EndPoint: opts.forcingUse = ForcingUse::End; break;
    default: opts.forcingUse = ForcingUse::Both; break;
  }
  opts.sampleSteps = sample_steps(config.sampleTimes, dt, config.tFinal);

  PeriodicTrajectory out;
  out.evaluationDelta = spec.targetDelta;
  out.states = run_hierarchy(HierarchyState::initial(initial, config.order, 0.0), opts, builder, stepper);
  for (const auto& s : out.states) out.times.push_back(s.time);
  return out;
}

DnsTrajectory dns_burgers(const GridField& initial, const std::optional<ForcingSpec>& forcing, double dt,
                          double tFinal, double reynolds, const std::vector<double>& sampleTimes) {
  if (!(dt > 0.0)) throw ArgumentError("dns_burgers: dt must be positive");
  if (!(reynolds > 0.0)) throw ArgumentError("dns_burgers: Reynolds number must be positive");
  const UniformGrid& grid = initial.grid;
  if (grid.dimension != 1 || !grid.periodic) throw ArgumentError("dns_burgers: expected a 1D periodic grid");
  const int m = grid.count[0];
  const double h = grid.spacing();

  DnsTrajectory out;
  if (dt > h * h * reynolds / 2.0) {
    std::ostringstream os;
    os << "dt = " << dt << " exceeds the diffusive limit h^2 Re / 2 = " << h * h * reynolds / 2.0;
    out.warnings.push_back(os.str());
  }

  Eigen::VectorXd f = Eigen::VectorXd::Zero(m);
  if (forcing) f = forcing_field(*forcing, grid).values;

  std::vector<long> samples = sample_steps(sampleTimes, dt, tFinal);
  const long steps = std::lround(tFinal / dt);
  Eigen::VectorXd u = initial.values, next(m);
  auto record = [&](long step) {
    for (long s : samples)
      if (s == step) {
        out.times.push_back(step * dt);
        out.fields.emplace_back(grid, u);
      }
  };
  record(0);
  const double nu = 1.0 / reynolds;
  for (long step = 1; step <= steps; ++step) {
    for (int i = 0; i < m; ++i) {
      const double ul = u[(i + m - 1) % m], uc = u[i], ur = u[(i + 1) % m];
      const double flux = (ur * ur - ul * ul) / (4.0 * h);
      const double diff = nu * (ur - 2.0 * uc + ul) / (h * h);
      next[i] = uc + dt * (diff - flux + f[i]);
    }
    u.swap(next);
    if (!u.allFinite() || u.cwiseAbs().maxCoeff() > 1e6) {
      std::ostringstream os;
      os << "DNS instability at step " << step;
      throw SolverError(os.str(), 0, step);
    }
    record(step);
  }
  return out;
}

}  // namespace serilin
