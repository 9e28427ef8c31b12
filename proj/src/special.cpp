#include "serilin/special.hpp"

#include "serilin/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace serilin {

const GaussRule& gauss_legendre(int points) {
  if (points < 1 || points > 512) throw ArgumentError("gauss_legendre: point count out of range");
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(points);
  if (it != cache.end()) return it->second;

  GaussRule rule;
  rule.nodes.resize(points);
  rule.weights.resize(points);
  const int n = points;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = rule.weights[n - 1 - i] = w;
  }
  return cache.emplace(points, std::move(rule)).first->second;
}

double integrate(const std::function<double(double)>& f, double a, double b, double maxPanel,
                 std::span<const double> breakpoints, int points) {
  if (!(b > a)) return 0.0;
  if (!(maxPanel > 0.0)) throw ArgumentError("integrate: panel width must be positive");
  std::vector<double> cuts{a};
  for (double c : breakpoints)
    if (c > a && c < b) cuts.push_back(c);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());

  const GaussRule& rule = gauss_legendre(points);
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double lo = cuts[s], hi = cuts[s + 1];
    if (hi <= lo) continue;
    const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / maxPanel)));
    const double width = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = lo + (p + 0.5) * width;
      double acc = 0.0;
      for (int q = 0; q < points; ++q) acc += rule.weights[q] * f(mid + 0.5 * width * rule.nodes[q]);
      total += 0.5 * width * acc;
    }
  }
  return total;
}

namespace series {

Coeffs multiply(const Coeffs& a, const Coeffs& b) {
  const std::size_t n = std::min(a.size(), b.size());
  Coeffs c(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; i + j < n; ++j) c[i + j] += a[i] * b[j];
  return c;
}

Coeffs divide(const Coeffs& num, const Coeffs& den) {
  const std::size_t n = std::min(num.size(), den.size());
  if (n == 0) return {};
  if (den[0] == 0.0) throw ArgumentError("series::divide: zero constant term");
  Coeffs q(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double s = num[k];
    for (std::size_t j = 1; j <= k; ++j) s -= den[j] * q[k - j];
    q[k] = s / den[0];
  }
  return q;
}

Coeffs exp(const Coeffs& a) {
  const std::size_t n = a.size();
  if (n == 0) return {};
  Coeffs y(n, 0.0);
  y[0] = std::exp(a[0]);
  for (std::size_t k = 1; k < n; ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * a[j] * y[k - j];
    y[k] = s / static_cast<double>(k);
  }
  return y;
}

Coeffs log(const Coeffs& a) {
  const std::size_t n = a.size();
  if (n == 0) return {};
  if (!(a[0] > 0.0)) throw ArgumentError("series::log: constant term must be positive");
  Coeffs y(n, 0.0);
  y[0] = std::log(a[0]);
  // a y' = a'
  for (std::size_t k = 1; k < n; ++k) {
    double s = static_cast<double>(k) * a[k];
    for (std::size_t j = 1; j < k; ++j) s -= static_cast<double>(j) * y[j] * a[k - j];
    y[k] = s / (static_cast<double>(k) * a[0]);
  }
  return y;
}

Coeffs scale(Coeffs a, double s) {
  for (double& c : a) c *= s;
  return a;
}

double evaluate(const Coeffs& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

}  // namespace series

std::vector<double> hermite_table(int n, double z) {
  if (n < 0) throw ArgumentError("hermite_table: negative degree");
  std::vector<double> h(n + 1);
  h[0] = 1.0;
  if (n >= 1) h[1] = 2.0 * z;
  for (int k = 1; k < n; ++k) h[k + 1] = 2.0 * z * h[k] - 2.0 * k * h[k - 1];
  return h;
}

double sphere_area(int d) {
  if (d < 1) throw ArgumentError("sphere_area: dimension must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

}  // namespace serilin
