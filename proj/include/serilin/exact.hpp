#pragma once

#include <functional>
#include <vector>

namespace serilin {

// ---- Burgers, infinite line -------------------------------------------------

/// Linear-homotopy Burgers solution from a unit Dirac mass at x = 0 (f = 0).
/// delta = 0 returns the advected Gaussian limit.
double burgers_delta_exact(double t, double x, double delta, double v, double reynolds);

/// First delta-Taylor coefficient of burgers_delta_exact.
double burgers_delta_u1(double t, double x, double v, double reynolds);

/// Taylor coefficients u_0..u_order in delta at (t, x), by exact truncated power
/// series arithmetic on the closed form.
std::vector<double> burgers_delta_taylor(double t, double x, double v, double reynolds, int order);

// ---- Burgers, periodic cosine-squared data ----------------------------------

/// Solution for g(x) = cos^2(2 pi x) - 1/2 on [0, 1). besselTerms = 0 picks the
/// truncation automatically (terms below 1e-17 relative).
double cosine_squared_exact(double t, double x, double delta, double v, double reynolds, int besselTerms = 0);

// ---- Cole-Hopf line oracle ----------------------------------------------------

struct PointMass {
  double position = 0.0;
  double mass = 1.0;
};

/// Data for the Cole-Hopf quadrature ratio on the real line.
struct LineOracleSpec {
  std::function<double(double)> g;               // absolutely continuous part (may be empty)
  std::function<double(double)> antiderivative;  // int_0^y g, optional
  std::vector<PointMass> masses;
  std::vector<double> breakpoints;  // discontinuities of g
  double delta = 1.0;
  double advectionSpeed = 0.0;
  double reynolds = 1.0;
  /// Half-width of the window in units of sqrt(4t/Re); 6.5 keeps the kernel tail below 1e-18.
  double windowWidths = 6.5;
  int pointsPerPanel = 20;
  /// Panel width in units of sqrt(4t/Re).
  double panelWidth = 0.25;

  void validate() const;
};

/// Ratio of Gaussian-kernel quadratures; SingularEvaluationError when the
/// denominator magnitude drops below 1e-12.
double cole_hopf_line_oracle(const LineOracleSpec& spec, double t, double x);

// ---- p-Laplacian --------------------------------------------------------------

/// Gaussian heat kernel in d dimensions at radius r.
double heat_kernel(double t, double r, int d = 1);

/// Weak solution of Delta_p u = -1 on the unit ball with zero boundary data, at radius r.
double plap_ball_exact(double p, int d, double r);
/// Same radial profile without the |x| <= 1 restriction; solves Delta_p u = -1 on any
/// domain containing the origin (used for the square problem's boundary data).
double plap_radial_profile(double p, int d, double r);
/// First ordinary Taylor coefficient in p - 2 of plap_ball_exact.
double plap_ball_u1(int d, double r);
/// n-th Taylor coefficient (d = 1) in p' - 2 of plap_ball_exact, p' the Holder conjugate.
double plap_ball_dual_un(int n, double x);

struct BarenblattConstants {
  double kp;
  double qp;
  double cp;
  double lambdap;
};

BarenblattConstants barenblatt_constants(double p, int d);
/// Fundamental solution of the p-Laplacian evolution at radius r; p = 2 is the heat kernel.
double barenblatt(double p, int d, double t, double r);
/// Support radius for p > 2, +infinity otherwise.
double barenblatt_support_radius(double p, int d, double t);
/// d/dp of the d = 1 fundamental solution at p = 2.
double barenblatt_u1(double t, double x);

}  // namespace serilin
