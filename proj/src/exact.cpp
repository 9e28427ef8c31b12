#include "serilin/exact.hpp"

#include "serilin/errors.hpp"
#include "serilin/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace serilin {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive_time(double t, const char* who) {
  if (!(t > 0.0)) throw DomainError(std::string(who) + ": t must be positive");
}

// (e^{delta Re} - 1) / delta with its delta -> 0 limit.
double growth_factor(double delta, double re) {
  if (delta == 0.0) return re;
  return std::expm1(delta * re) / delta;
}

// I_k(z) for real z of either sign.
double bessel_i(int k, double z) {
  const double v = std::cyl_bessel_i(static_cast<double>(k), std::abs(z));
  return (z < 0.0 && (k % 2 != 0)) ? -v : v;
}

}  // namespace

double burgers_delta_exact(double t, double x, double delta, double v, double re) {
  require_positive_time(t, "burgers_delta_exact");
  if (!(re > 0.0)) throw DomainError("burgers_delta_exact: Reynolds number must be positive");
  const double s = x - (1.0 - delta) * v * t;
  const double gauss = std::exp(-re * s * s / (4.0 * t));
  const double a = growth_factor(delta, re);
  const double den = std::sqrt(kPi * re * t) * (2.0 + delta * a * std::erfc(s / (2.0 * std::sqrt(t / re))));
  return 2.0 * a * gauss / den;
}

double burgers_delta_u1(double t, double x, double v, double re) {
  require_positive_time(t, "burgers_delta_u1");
  const double y = x - v * t;
  return std::sqrt(re * re * re / (4.0 * kPi * t)) * std::exp(-re * y * y / (4.0 * t)) *
         (std::erf(y / (2.0 * std::sqrt(t / re))) - v * y);
}

std::vector<double> burgers_delta_taylor(double t, double x, double v, double re, int order) {
  require_positive_time(t, "burgers_delta_taylor");
  if (order < 0) throw ArgumentError("burgers_delta_taylor: negative order");
  const int n = order + 1;
  const double y = x - v * t;

  // a(delta) = sum Re^{j+1} delta^j / (j+1)!
  series::Coeffs a(n);
  double term = re;
  for (int j = 0; j < n; ++j) {
    a[j] = term;
    term *= re / (j + 2);
  }

  // Gaussian exp(-Re (y + v t delta)^2 / (4t))
  series::Coeffs quad(n, 0.0);
  quad[0] = -re * y * y / (4.0 * t);
  if (n > 1) quad[1] = -re * y * v / 2.0;
  if (n > 2) quad[2] = -re * v * v * t / 4.0;
  const series::Coeffs gauss = series::exp(quad);

  // erfc(z0 + c delta), derivatives through Hermite polynomials.
  const double sc = 2.0 * std::sqrt(t / re);
  const double z0 = y / sc, c = v * t / sc;
  const std::vector<double> herm = hermite_table(std::max(n - 1, 0), z0);
  series::Coeffs erfcs(n);
  erfcs[0] = std::erfc(z0);
  const double e0 = 2.0 / std::sqrt(kPi) * std::exp(-z0 * z0);
  double cpow = 1.0, fact = 1.0;
  for (int j = 1; j < n; ++j) {
    cpow *= c;
    fact *= j;
    erfcs[j] = (j % 2 == 0 ? 1.0 : -1.0) * e0 * herm[j - 1] * cpow / fact;
  }

  // den = 2 + delta * a * erfc
  const series::Coeffs ae = series::multiply(a, erfcs);
  series::Coeffs den(n, 0.0);
  den[0] = 2.0;
  for (int j = 1; j < n; ++j) den[j] = ae[j - 1];

  series::Coeffs num = series::scale(series::multiply(a, gauss), 2.0 / std::sqrt(kPi * re * t));
  return series::divide(num, den);
}

double cosine_squared_exact(double t, double x, double delta, double v, double re, int besselTerms) {
  require_positive_time(t, "cosine_squared_exact");
  if (!(re > 0.0)) throw DomainError("cosine_squared_exact: Reynolds number must be positive");
  if (besselTerms < 0) throw ArgumentError("cosine_squared_exact: negative term count");
  const double xs = x - (1.0 - delta) * v * t;
  if (delta == 0.0) return 0.5 * std::cos(4.0 * kPi * xs) * std::exp(-16.0 * kPi * kPi * t / re);

  const double z = delta * re / (16.0 * kPi);
  const double i0 = bessel_i(0, z);
  double w = i0, dw = 0.0;
  const int cap = besselTerms > 0 ? besselTerms : 100000;
  for (int k = 1; k <= cap; ++k) {
    const double ik = bessel_i(k, z);
    const double damp = std::exp(-16.0 * kPi * kPi * k * k * t / re);
    const double phase = 4.0 * kPi * k * (xs + 0.125);
    w += 2.0 * ik * std::cos(phase) * damp;
    dw -= 2.0 * ik * 4.0 * kPi * k * std::sin(phase) * damp;
    if (besselTerms == 0 && k > std::abs(z) && std::abs(ik) * damp * 4.0 * kPi * k < 1e-17 * std::abs(i0)) break;
  }
  return -2.0 / (delta * re) * dw / w;
}

void LineOracleSpec::validate() const {
  if (!g && masses.empty()) throw ArgumentError("line oracle needs a density or point masses");
  if (!(reynolds > 0.0)) throw ArgumentError("line oracle: Reynolds number must be positive");
  if (!(windowWidths > 0.0) || !(panelWidth > 0.0) || pointsPerPanel < 2)
    throw ArgumentError("line oracle: invalid quadrature parameters");
  if (!std::isfinite(delta)) throw ArgumentError("line oracle: delta must be finite");
}

double cole_hopf_line_oracle(const LineOracleSpec& spec, double t, double x) {
  require_positive_time(t, "cole_hopf_line_oracle");
  spec.validate();
  const double re = spec.reynolds, delta = spec.delta;
  const double width = std::sqrt(4.0 * t / re);
  const double center = x - (1.0 - delta) * spec.advectionSpeed * t;
  const double lo = center - spec.windowWidths * width, hi = center + spec.windowWidths * width;
  auto kernel = [&](double y) {
    const double s = center - y;
    return std::exp(-s * s / (width * width)) / std::sqrt(kPi) / width;
  };
  auto heaviside = [](double s) { return s > 0.0 ? 1.0 : 0.0; };
  auto mass_part = [&](double y) {
    double tm = 0.0;
    for (const auto& pm : spec.masses) tm += pm.mass * (heaviside(y - pm.position) - heaviside(-pm.position));
    return tm;
  };
  // exp(-delta Re T / 2), and (2/(delta Re)) (W(T) - W(T + m)) for a jump m.
  auto weight = [&](double tg) { return std::exp(-0.5 * delta * re * tg); };
  auto jump = [&](double tg, double m) {
    if (delta == 0.0) return m;
    return weight(tg) * (-std::expm1(-0.5 * delta * re * m)) * 2.0 / (delta * re);
  };

  std::vector<double> cuts = spec.breakpoints;
  for (const auto& pm : spec.masses) cuts.push_back(pm.position);
  cuts.push_back(0.0);

  const GaussRule& rule = gauss_legendre(spec.pointsPerPanel);
  const double maxPanel = spec.panelWidth * width;
  // Continuous antiderivative T_c(y) = int_0^y g.
  auto integrate_g = [&](double a, double b) {
    if (!spec.g || a == b) return 0.0;
    const double sign = b > a ? 1.0 : -1.0;
    return sign * integrate(spec.g, std::min(a, b), std::max(a, b), maxPanel, cuts, spec.pointsPerPanel);
  };

  double num = 0.0, den = 0.0;
  if (spec.g) {
    std::vector<double> seg{lo};
    for (double c : cuts)
      if (c > lo && c < hi) seg.push_back(c);
    seg.push_back(hi);
    std::sort(seg.begin(), seg.end());
    double tcLeft = spec.antiderivative ? 0.0 : integrate_g(0.0, lo);
    for (std::size_t s = 0; s + 1 < seg.size(); ++s) {
      const double a = seg[s], b = seg[s + 1];
      if (b <= a) continue;
      const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / maxPanel)));
      const double pw = (b - a) / panels;
      for (int p = 0; p < panels; ++p) {
        const double pa = a + p * pw;
        for (int q = 0; q < spec.pointsPerPanel; ++q) {
          const double y = pa + 0.5 * pw * (1.0 + rule.nodes[q]);
          double tc;
          if (spec.antiderivative) {
            tc = spec.antiderivative(y);
          } else {
            // Sub-panel rule from the panel start to y.
            double acc = 0.0;
            const double hw = 0.5 * (y - pa);
            for (int r = 0; r < spec.pointsPerPanel; ++r)
              acc += rule.weights[r] * spec.g(pa + hw * (1.0 + rule.nodes[r]));
            tc = tcLeft + hw * acc;
          }
          const double wq = 0.5 * pw * rule.weights[q] * kernel(y) * weight(tc + mass_part(y));
          num += wq * spec.g(y);
          den += wq;
        }
        if (!spec.antiderivative) {
          double acc = 0.0;
          for (int r = 0; r < spec.pointsPerPanel; ++r) acc += rule.weights[r] * spec.g(pa + 0.5 * pw * (1.0 + rule.nodes[r]));
          tcLeft += 0.5 * pw * acc;
        }
      }
    }
  } else {
    // Pure point masses: the weight is piecewise constant between masses.
    std::vector<double> seg{lo};
    for (const auto& pm : spec.masses)
      if (pm.position > lo && pm.position < hi) seg.push_back(pm.position);
    seg.push_back(hi);
    std::sort(seg.begin(), seg.end());
    for (std::size_t s = 0; s + 1 < seg.size(); ++s) {
      const double a = seg[s], b = seg[s + 1];
      if (b <= a) continue;
      const double tg = mass_part(0.5 * (a + b));
      // Exact Gaussian mass of [a, b].
      const double kmass = 0.5 * (std::erf((center - a) / width) - std::erf((center - b) / width));
      den += kmass * weight(tg);
    }
    // Kernel mass outside the window, weights taken at the ends.
    den += 0.5 * std::erfc((hi - center) / width) * weight(mass_part(hi + 1.0 + std::abs(hi)));
    den += 0.5 * std::erfc((center - lo) / width) * weight(mass_part(lo - 1.0 - std::abs(lo)));
  }

  auto continuous_t = [&](double y) {
    if (!spec.g) return 0.0;
    return spec.antiderivative ? spec.antiderivative(y) : integrate_g(0.0, y);
  };
  for (const auto& pm : spec.masses) {
    const double left = continuous_t(pm.position) + mass_part(pm.position);
    num += kernel(pm.position) * jump(left, pm.mass);
  }

  if (!(std::abs(den) >= 1e-12)) {
    std::ostringstream os;
    os << "Cole-Hopf denominator vanishes at t = " << t << ", x = " << x;
    throw SingularEvaluationError(os.str());
  }
  return num / den;
}

double heat_kernel(double t, double r, int d) {
  require_positive_time(t, "heat_kernel");
  if (d < 1) throw ArgumentError("heat_kernel: dimension must be >= 1");
  return std::exp(-r * r / (4.0 * t)) / std::pow(4.0 * kPi * t, 0.5 * d);
}

double plap_ball_exact(double p, int d, double r) {
  if (!(p > 1.0)) throw DomainError("plap_ball_exact: p must exceed 1");
  if (d < 1) throw ArgumentError("plap_ball_exact: dimension must be >= 1");
  r = std::abs(r);
  if (r > 1.0 + 1e-14) throw DomainError("plap_ball_exact: |x| > 1");
  r = std::min(r, 1.0);
  return (p - 1.0) / (p * std::pow(static_cast<double>(d), 1.0 / (p - 1.0))) * (1.0 - std::pow(r, p / (p - 1.0)));
}

double plap_radial_profile(double p, int d, double r) {
  if (!(p > 1.0)) throw DomainError("plap_radial_profile: p must exceed 1");
  if (d < 1) throw ArgumentError("plap_radial_profile: dimension must be >= 1");
  return (p - 1.0) / (p * std::pow(static_cast<double>(d), 1.0 / (p - 1.0))) *
         (1.0 - std::pow(std::abs(r), p / (p - 1.0)));
}

double plap_ball_u1(int d, double r) {
  if (d < 1) throw ArgumentError("plap_ball_u1: dimension must be >= 1");
  r = std::abs(r);
  if (r > 1.0 + 1e-14) throw DomainError("plap_ball_u1: |x| > 1");
  const double r2 = r * r;
  const double r2log = r == 0.0 ? 0.0 : 2.0 * r2 * std::log(r);
  const double dd = static_cast<double>(d);
  return ((1.0 + std::log(dd * dd)) * (1.0 - r2) + r2log) / (4.0 * dd);
}

double plap_ball_dual_un(int n, double x) {
  if (n < 0) throw ArgumentError("plap_ball_dual_un: n must be non-negative");
  const double r = std::abs(x);
  if (r > 1.0 + 1e-14) throw DomainError("plap_ball_dual_un: |x| > 1");
  const double sign_n = n % 2 == 0 ? 1.0 : -1.0;
  double out = sign_n / std::ldexp(1.0, n + 1);
  if (r == 0.0) return out;
  const double lg = std::log(r);
  double sum = 0.0, lpow = 1.0, fact = 1.0;
  for (int k = 0; k <= n; ++k) {
    if (k > 0) {
      lpow *= lg;
      fact *= k;
    }
    const double sgn = (n - k) % 2 == 0 ? 1.0 : -1.0;
    sum += sgn * lpow / (std::ldexp(1.0, n - k) * fact);
  }
  return out - 0.5 * r * r * sum;
}

BarenblattConstants barenblatt_constants(double p, int d) {
  if (d < 1) throw ArgumentError("barenblatt: dimension must be >= 1");
  const double dd = static_cast<double>(d);
  if (!(p > 2.0 * dd / (1.0 + dd))) throw DomainError("barenblatt: p must exceed 2d/(1+d)");
  BarenblattConstants c{};
  c.kp = 1.0 / (p - 2.0 + p / dd);
  if (p == 2.0) {
    c.qp = 0.0;
    c.cp = 0.0;
    c.lambdap = 0.0;
    return c;
  }
  c.qp = (p - 2.0) / p * std::pow(c.kp / dd, 1.0 / (p - 1.0));
  c.lambdap = p * (p - 2.0) * c.kp / (dd * (p - 1.0));
  const double pc = p / (p - 1.0);  // Holder conjugate
  const double area = sphere_area(d);
  if (p > 2.0) {
    const double b = std::beta(dd / pc, 1.0 + 1.0 / (2.0 - pc));
    c.cp = std::pow(c.qp, (p - 2.0) * c.kp) * std::pow(pc / (area * b), c.lambdap);
  } else {
    const double second = 1.0 / (pc - 2.0) - dd / pc;
    if (!(second > 0.0)) throw DomainError("barenblatt: Beta argument non-positive");
    const double b = std::beta(dd / pc, second);
    c.cp = std::pow(std::abs(c.qp), (p - 2.0) * c.kp) * std::pow(pc / (area * b), c.lambdap);
  }
  return c;
}

double barenblatt(double p, int d, double t, double r) {
  require_positive_time(t, "barenblatt");
  const BarenblattConstants c = barenblatt_constants(p, d);
  if (p == 2.0) return heat_kernel(t, r, d);
  const double dd = static_cast<double>(d);
  const double xi = std::abs(r) * std::pow(t, -c.kp / dd);
  const double base = c.cp - c.qp * std::pow(xi, p / (p - 1.0));
  if (!(base > 0.0)) return 0.0;
  return std::pow(t, -c.kp) * std::pow(base, (p - 1.0) / (p - 2.0));
}

double barenblatt_support_radius(double p, int d, double t) {
  require_positive_time(t, "barenblatt_support_radius");
  const BarenblattConstants c = barenblatt_constants(p, d);
  if (p <= 2.0) return std::numeric_limits<double>::infinity();
  return std::pow(c.cp / c.qp, (p - 1.0) / p) * std::pow(t, c.kp / static_cast<double>(d));
}

double barenblatt_u1(double t, double x) {
  require_positive_time(t, "barenblatt_u1");
  constexpr double gamma = 0.57721566490153286;
  const double x2 = x * x;
  const double logterm = x == 0.0 ? 0.0 : x2 * std::log(16.0 * kPi * t * t * t / x2);
  const double poly = x2 * x2 + 4.0 * t * (logterm - x2) - 4.0 * t * t * (std::log(256.0 * kPi * kPi) + 2.0 * gamma - 3.0);
  return (std::log(std::sqrt(t)) - poly / (32.0 * t * t)) * std::exp(-x2 / (4.0 * t)) / std::sqrt(4.0 * kPi * t);
}

}  // namespace serilin
