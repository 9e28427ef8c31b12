#pragma once

#include <functional>
#include <span>
#include <vector>

namespace serilin {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached per point count; Newton iteration on P_n to machine precision.
const GaussRule& gauss_legendre(int points);

/// Composite Gauss-Legendre over [a, b] split at the given breakpoints, with panels no
/// wider than maxPanel.
double integrate(const std::function<double(double)>& f, double a, double b, double maxPanel,
                 std::span<const double> breakpoints = {}, int points = 20);

/// Truncated power series sum_n c[n] x^n. All operations keep the length of the
/// shortest operand.
namespace series {

using Coeffs = std::vector<double>;

Coeffs multiply(const Coeffs& a, const Coeffs& b);
Coeffs divide(const Coeffs& num, const Coeffs& den);  // den[0] != 0
/// exp(a(x)) via y' = a' y.
Coeffs exp(const Coeffs& a);
/// log(a(x)) for a[0] > 0.
Coeffs log(const Coeffs& a);
Coeffs scale(Coeffs a, double s);
double evaluate(const Coeffs& c, double x);

}  // namespace series

/// Physicists' Hermite polynomials H_0..H_n at z.
std::vector<double> hermite_table(int n, double z);

/// Unit-sphere surface area |S^{d-1}| = 2 pi^{d/2} / Gamma(d/2).
double sphere_area(int d);

}  // namespace serilin
