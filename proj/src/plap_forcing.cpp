#include "serilin/plap_forcing.hpp"

#include "serilin/errors.hpp"
#include "serilin/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace serilin {

int Partition::n() const {
  int s = 0;
  for (std::size_t j = 0; j < mult.size(); ++j) s += static_cast<int>(j + 1) * mult[j];
  return s;
}

int Partition::norm() const { return std::accumulate(mult.begin(), mult.end(), 0); }

namespace {

void partitions_rec(int remaining, int maxPart, std::vector<int>& mult, std::vector<Partition>& out) {
  if (remaining == 0) {
    out.push_back(Partition{mult});
    return;
  }
  for (int part = std::min(remaining, maxPart); part >= 1; --part) {
    ++mult[part - 1];
    partitions_rec(remaining - part, part, mult, out);
    --mult[part - 1];
  }
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Partitions of 0..n; S_0 holds the empty partition.
std::vector<std::vector<Partition>> partition_sets(int n) {
  std::vector<std::vector<Partition>> sets(n + 1);
  sets[0].push_back(Partition{});
  for (int k = 1; k <= n; ++k) sets[k] = enumerate_partitions(k);
  return sets;
}

}  // namespace

std::vector<Partition> enumerate_partitions(int n) {
  if (n < 1 || n > 24) throw ArgumentError("enumerate_partitions: n must lie in [1, 24]");
  std::vector<Partition> out;
  std::vector<int> mult(n, 0);
  partitions_rec(n, n, mult, out);
  return out;
}

double partition_alpha(int m, const Partition& p) {
  const int norm = p.norm();
  double num = 1.0;
  for (int i = 0; i < norm; ++i) num *= (m - i);
  double den = 1.0;
  for (int pj : p.mult) den *= factorial(pj);
  return num / den;
}

double partition_beta(const Partition& r) {
  const int norm = r.norm();
  if (norm == 0) throw ArgumentError("partition_beta: empty partition");
  double den = 1.0;
  for (int ri : r.mult) den *= factorial(ri);
  return ((norm - 1) % 2 == 0 ? 1.0 : -1.0) * factorial(norm - 1) / den;
}

GradientTable::GradientTable(std::vector<Eigen::MatrixXd> gradients) : grads_(std::move(gradients)) {
  if (grads_.empty()) throw ArgumentError("GradientTable: no gradients");
  for (const auto& g : grads_)
    if (g.rows() != grads_.front().rows() || g.cols() != grads_.front().cols())
      throw StructuralError("GradientTable: gradient shapes differ between orders");
}

const Eigen::VectorXd& GradientTable::pair(int a, int b) const {
  if (a > b) std::swap(a, b);
  if (a < 0 || b >= orders()) throw StructuralError("GradientTable: order index out of range");
  auto key = std::make_pair(a, b);
  auto it = pairs_.find(key);
  if (it != pairs_.end()) return it->second;
  Eigen::VectorXd v = grads_[a].cwiseProduct(grads_[b]).rowwise().sum();
  return pairs_.emplace(key, std::move(v)).first->second;
}

std::vector<std::vector<double>> homotopy_power_table(const HomotopySpec& spec, int n) {
  if (spec.kind == HomotopyKind::BurgersLinear) throw ArgumentError("p-Laplacian forcing needs a p-Laplacian homotopy");
  const auto sets = partition_sets(n);
  std::vector<double> hj(n + 1, 0.0);  // h^(j)(0) / j!
  for (int j = 1; j <= n; ++j) hj[j] = spec.derivative(j) / factorial(j);
  std::vector<std::vector<double>> table(n + 1, std::vector<double>(n + 1, 0.0));
  for (int l = 1; l <= n; ++l)
    for (const Partition& p : sets[l]) {
      double prod = 1.0;
      for (std::size_t j = 0; j < p.mult.size(); ++j)
        if (p.mult[j] > 0) prod *= std::pow(hj[j + 1], p.mult[j]) / factorial(p.mult[j]);
      table[l][p.norm()] += prod;
    }
  return table;
}

Eigen::MatrixXd plap_forcing(int n, const GradientTable& table, const HomotopySpec& spec) {
  if (n < 1) throw ArgumentError("plap_forcing: order must be >= 1");
  if (n > 24) throw ArgumentError("plap_forcing: order above 24 unsupported");
  if (table.orders() < n) throw StructuralError("plap_forcing: gradient table incomplete below order n");
  const int pts = table.points();
  using Arr = Eigen::ArrayXd;

  const auto sets = partition_sets(n);
  const auto H = homotopy_power_table(spec, n);

  const Arr s0raw = table.pair(0, 0).array();
  const Arr s0 = (s0raw == 0.0).select(Arr::Ones(pts), s0raw);
  const Arr L0 = 0.5 * s0.log();

  // s_q = sum_a <grad u_{q-a}, grad u_a>, q = 1..n-1
  std::vector<Arr> sq(n, Arr::Zero(pts));
  for (int q = 1; q < n; ++q)
    for (int a = 0; a <= q; ++a) sq[q] += table.pair(q - a, a).array();

  // L_j = [delta^j] ln|grad u|, j = 1..n-1
  std::vector<Arr> L(n, Arr::Zero(pts));
  for (int j = 1; j < n; ++j)
    for (const Partition& r : sets[j]) {
      Arr prod = Arr::Constant(pts, partition_beta(r));
      for (std::size_t q = 0; q < r.mult.size(); ++q)
        for (int e = 0; e < r.mult[q]; ++e) prod *= sq[q + 1];
      for (int e = 0; e < r.norm(); ++e) prod /= s0;
      L[j] += 0.5 * prod;
    }

  // P[k][m] = [delta^k] (ln|grad u|)^m with the delta^0 part L0 separated.
  std::vector<std::vector<Arr>> P(n, std::vector<Arr>(n + 1, Arr::Zero(pts)));
  for (int k = 0; k < n; ++k)
    for (int m = 1; m <= n; ++m)
      for (const Partition& p : sets[k]) {
        if (p.norm() > m) continue;
        Arr prod = Arr::Constant(pts, partition_alpha(m, p)) * L0.pow(m - p.norm());
        for (std::size_t j = 0; j < p.mult.size(); ++j)
          for (int e = 0; e < p.mult[j]; ++e) prod *= L[j + 1];
        P[k][m] += prod;
      }

  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(pts, table.dimension());
  for (int k = 1; k <= n; ++k) {
    Arr ck = Arr::Zero(pts);
    for (int l = 1; l <= k; ++l)
      for (int m = 1; m <= l; ++m)
        if (H[l][m] != 0.0) ck += H[l][m] * P[k - l][m];
    F += (table.gradient(n - k).array().colwise() * ck).matrix();
  }

  // Degenerate points: grad u_0 = 0.
  std::vector<double> scale(n, 0.0);
  for (int j = 1; j < n; ++j) scale[j] = table.gradient(j).cwiseAbs().maxCoeff();
  for (int i = 0; i < pts; ++i) {
    if (s0raw[i] != 0.0) continue;
    bool vanish = true;
    for (int j = 1; j < n && vanish; ++j)
      if (table.gradient(j).row(i).cwiseAbs().maxCoeff() > 1e-13 * scale[j]) vanish = false;
    if (!vanish) {
      std::ostringstream os;
      os << "order-" << n << " forcing is singular at point " << i
         << ": grad u_0 vanishes while a higher-order gradient does not";
      throw SingularForcingError(os.str(), n, i);
    }
    F.row(i).setZero();
  }
  return F;
}

double duhamel_reference(const DuhamelSource& source, double t0, double t, double x, const DuhamelOptions& options) {
  if (!source.F) throw ArgumentError("duhamel_reference: missing forcing");
  if (!(t > t0) || t0 < 0.0) throw DomainError("duhamel_reference: need 0 <= t0 < t");
  if (options.timePanels < 1 || options.points < 2) throw ArgumentError("duhamel_reference: bad options");
  const GaussRule& rule = gauss_legendre(options.points);
  const double D = options.decayWidths;

  auto inner = [&](double s) {
    const double tau = t - s;
    const double c = source.center(s), w = source.width(s);
    if (!(w > 0.0)) throw DomainError("duhamel_reference: forcing width must be positive");
    // decay check on the declared extent
    double peak = 0.0;
    for (int q = 0; q <= 8; ++q) peak = std::max(peak, std::abs(source.F(s, c - D * w + q * D * w / 4.0)));
    const double edge = std::max(std::abs(source.F(s, c - D * w)), std::abs(source.F(s, c + D * w)));
    if (peak > 0.0 && edge > 1e-8 * peak) {
      std::ostringstream os;
      os << "forcing has not decayed at its declared extent (s = " << s << ")";
      throw DomainError(os.str());
    }
    const double kw = std::sqrt(4.0 * tau);
    const double lo = std::max(c - D * w, x - D * kw), hi = std::min(c + D * w, x + D * kw);
    if (!(hi > lo)) return 0.0;
    const double panel = options.spatialPanel * std::min(w, kw);
    const double cuts[2] = {c, x};
    auto integrand = [&](double y) {
      const double z = x - y;
      return -z / (2.0 * tau) * std::exp(-z * z / (4.0 * tau)) / std::sqrt(4.0 * std::numbers::pi * tau) * source.F(s, y);
    };
    return integrate(integrand, lo, hi, panel, cuts, options.points);
  };

  const double tm = 0.5 * (t0 + t);
  double total = 0.0;
  for (int half = 0; half < 2; ++half) {
    const double len = half == 0 ? tm - t0 : t - tm;
    for (int p = 0; p < options.timePanels; ++p) {
      const double a = static_cast<double>(p) / options.timePanels, b = static_cast<double>(p + 1) / options.timePanels;
      for (int q = 0; q < options.points; ++q) {
        const double u = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[q];
        const double s = half == 0 ? t0 + len * u * u : t - len * u * u;
        total += 0.5 * (b - a) * rule.weights[q] * 2.0 * len * u * inner(s);
      }
    }
  }
  return total;
}

}  // namespace serilin
