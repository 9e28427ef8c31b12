#include "serilin/analysis.hpp"

#include "serilin/errors.hpp"
#include "serilin/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace serilin {

std::string to_string(NormKind q) {
  switch (q) {
    case NormKind::L1: return "l1";
    case NormKind::L2: return "l2";
    case NormKind::Max: return "max";
  }
  throw InternalError("unknown norm kind");
}

NormKind norm_kind_from_string(const std::string& name) {
  if (name == "l1" || name == "1") return NormKind::L1;
  if (name == "l2" || name == "2") return NormKind::L2;
  if (name == "max" || name == "inf") return NormKind::Max;
  throw ArgumentError("unknown norm '" + name + "'");
}

namespace {

Eigen::VectorXd trapezoid_weights(const UniformGrid& g) {
  auto axis = [&](int a) {
    const int n = g.count[a];
    Eigen::VectorXd w = Eigen::VectorXd::Constant(n, g.spacing(a));
    if (!g.periodic) {
      w[0] *= 0.5;
      w[n - 1] *= 0.5;
    }
    return w;
  };
  const Eigen::VectorXd wx = axis(0);
  if (g.dimension == 1) return wx;
  const Eigen::VectorXd wy = axis(1);
  Eigen::VectorXd w(g.size());
  for (int j = 0; j < g.count[1]; ++j)
    for (int i = 0; i < g.count[0]; ++i) w[g.index(i, j)] = wx[i] * wy[j];
  return w;
}

double norm_of(const UniformGrid& g, const Eigen::VectorXd& d, NormKind q) {
  if (q == NormKind::Max) return d.size() ? d.cwiseAbs().maxCoeff() : 0.0;
  const Eigen::VectorXd w = trapezoid_weights(g);
  if (q == NormKind::L1) return w.dot(d.cwiseAbs());
  return std::sqrt(w.dot(d.cwiseAbs2()));
}

}  // namespace

double field_norm(const GridField& f, NormKind q) { return norm_of(f.grid, f.values, q); }

double error_metric(const GridField& approx, const GridField& exact, NormKind q) {
  require_same_grid(approx.grid, exact.grid, "error_metric");
  return norm_of(approx.grid, approx.values - exact.values, q);
}

double convergence_rate(const std::vector<double>& metric, int nPlateau) {
  if (nPlateau < 2) throw ArgumentError("convergence_rate: plateau index must be >= 2");
  if (nPlateau > static_cast<int>(metric.size())) throw ArgumentError("convergence_rate: plateau beyond data");
  double sum = 0.0;
  for (int n = 0; n < nPlateau; ++n)
    if (!(metric[n] > 0.0)) throw ArgumentError("convergence_rate: metric entries must be positive");
  for (int n = 0; n + 1 < nPlateau; ++n) sum += std::log(metric[n + 1] / metric[n]);
  return sum / (nPlateau - 1);
}

int detect_plateau(const std::vector<double>& metric) {
  const int size = static_cast<int>(metric.size());
  for (int n = 0; n + 2 < size; ++n)
    if (metric[n + 1] > 0.9 * metric[n] && metric[n + 2] > 0.9 * metric[n + 1]) return n;
  return std::max(size - 1, 0);
}

ConvergenceReport convergence_report(const HierarchyState& state, double delta, const GridField& exact, NormKind q,
                                     std::optional<int> plateauOrder) {
  state.validate();
  ConvergenceReport rep;
  rep.norm = q;
  rep.grid = describe(state.grid());
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(state.grid().size());
  double power = 1.0;
  for (int n = 0; n <= state.order(); ++n) {
    acc += power * state.coeffs[n].values;
    power *= delta;
    rep.metric.push_back(norm_of(state.grid(), acc - exact.values, q));
  }
  rep.plateau = plateauOrder ? *plateauOrder : detect_plateau(rep.metric);
  rep.rateEntries = std::max(rep.plateau + 1, 2);
  rep.rateEntries = std::min(rep.rateEntries, static_cast<int>(rep.metric.size()));
  if (rep.rateEntries >= 2) rep.rate = convergence_rate(rep.metric, rep.rateEntries);
  return rep;
}

Spectrum energy_spectrum(const GridField& field, double time) {
  if (!field.grid.periodic || field.grid.dimension != 1)
    throw ArgumentError("energy_spectrum: needs a 1D periodic field");
  const SpectralField hat = fft_forward(field);
  const int M = hat.grid_size();
  Spectrum s;
  s.time = time;
  s.energy.resize(M / 2);
  double total = 0.0;
  for (int k = 0; k < M / 2; ++k) s.energy[k] = std::norm(hat.at(k));
  for (int slot = 0; slot < M; ++slot) total += std::norm(hat.modes[slot]);
  s.total = 0.5 * total;
  return s;
}

Spectrum average_spectra(const std::vector<Spectrum>& spectra) {
  if (spectra.empty()) throw ArgumentError("average_spectra: nothing to average");
  Spectrum out = spectra.front();
  for (std::size_t i = 1; i < spectra.size(); ++i) {
    if (spectra[i].energy.size() != out.energy.size()) throw StructuralError("average_spectra: size mismatch");
    for (std::size_t k = 0; k < out.energy.size(); ++k) out.energy[k] += spectra[i].energy[k];
    out.total += spectra[i].total;
    out.time = std::max(out.time, spectra[i].time);
  }
  for (double& e : out.energy) e /= static_cast<double>(spectra.size());
  out.total /= static_cast<double>(spectra.size());
  return out;
}

double spectrum_slope(const Spectrum& spectrum, int kLo, int kHi) {
  if (kLo < 1 || kHi <= kLo) throw ArgumentError("spectrum_slope: need 1 <= kLo < kHi");
  const int top = std::min<int>(kHi, static_cast<int>(spectrum.energy.size()) - 1);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (int k = kLo; k <= top; ++k) {
    if (!(spectrum.energy[k] > 0.0)) continue;
    const double x = std::log(static_cast<double>(k)), y = std::log(spectrum.energy[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) throw ArgumentError("spectrum_slope: empty fit range");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace serilin
