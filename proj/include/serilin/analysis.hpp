#pragma once

#include "serilin/grid.hpp"
#include "serilin/hierarchy.hpp"

#include <optional>
#include <string>
#include <vector>

namespace serilin {

/// q = 1 or 2 uses trapezoid weights (uniform on periodic grids); q = 0 means max norm.
enum class NormKind { L1, L2, Max };

std::string to_string(NormKind q);
NormKind norm_kind_from_string(const std::string& name);

/// Discrete L^q norm of approx - exact on a shared grid.
double error_metric(const GridField& approx, const GridField& exact, NormKind q);
/// Norm of a single field.
double field_norm(const GridField& f, NormKind q);

/// Mean log-slope of M over the first nPlateau entries.
double convergence_rate(const std::vector<double>& metric, int nPlateau);
/// First order n with M[n+1] > 0.9 M[n] and M[n+2] > 0.9 M[n+1]; the last order if
/// the curve never flattens.
int detect_plateau(const std::vector<double>& metric);

struct ConvergenceReport {
  std::vector<double> metric;
  double rate = 0.0;
  int plateau = 0;      // order where the curve flattens
  int rateEntries = 0;  // leading entries used for the rate
  NormKind norm = NormKind::L1;
  std::string series;
  double p = 0.0;
  std::string grid;
};

/// Builds M[n] = ||S_n - exact|| for n = 0..order and the rate over M[0..plateau],
/// where the plateau order is detected unless `plateauOrder` is given.
ConvergenceReport convergence_report(const HierarchyState& state, double delta, const GridField& exact,
                                     NormKind q, std::optional<int> plateauOrder = std::nullopt);

struct Spectrum {
  std::vector<double> energy;  // E[k], k = 0..M/2-1
  double time = 0.0;
  double total = 0.0;          // half the sum of |u_k|^2 over all signed k
};

Spectrum energy_spectrum(const GridField& field, double time = 0.0);
/// Average of several snapshot spectra.
Spectrum average_spectra(const std::vector<Spectrum>& spectra);
/// Least-squares slope of ln E against ln k over kLo <= k <= kHi (zero entries skipped).
double spectrum_slope(const Spectrum& spectrum, int kLo, int kHi);

}  // namespace serilin
