#include "serilin/exact.hpp"
#include "serilin/errors.hpp"
#include "serilin/special.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#ifdef SERILIN_HAVE_BOOST_QUADRATURE
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#endif

using namespace serilin;

namespace {

constexpr double kPi = std::numbers::pi;

// Integral over the real line of an even or general function, adaptive.
double line_integral(const std::function<double(double)>& f) {
#ifdef SERILIN_HAVE_BOOST_QUADRATURE
  boost::math::quadrature::exp_sinh<double> rule;
  auto pos = [&](double x) { return f(x); };
  auto neg = [&](double x) { return f(-x); };
  return rule.integrate(pos, 0.0, std::numeric_limits<double>::infinity()) +
         rule.integrate(neg, 0.0, std::numeric_limits<double>::infinity());
#else
  auto mapped = [&](double th) {
    const double c = std::cos(th);
    return f(std::tan(th)) / (c * c);
  };
  return integrate(mapped, -0.5 * kPi, 0.5 * kPi, kPi / 512.0);
#endif
}

double finite_integral(const std::function<double(double)>& f, double a, double b) {
#ifdef SERILIN_HAVE_BOOST_QUADRATURE
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
#else
  return integrate(f, a, b, (b - a) / 64.0);
#endif
}

}  // namespace

TEST_SUITE("exact") {
  TEST_CASE("point-mass Burgers limits") {
    const double re = 2.0, v = 0.5;
    CHECK(burgers_delta_exact(1.0, v, 0.0, v, re) == doctest::Approx(std::sqrt(2.0 / kPi)).epsilon(1e-14));
    CHECK(burgers_delta_exact(1.0, v, 1e-9, v, re) == doctest::Approx(std::sqrt(2.0 / kPi)).epsilon(1e-8));
    CHECK(burgers_delta_exact(1.0, 60.0, 1.0, v, re) < 1e-100);
    CHECK(burgers_delta_exact(1.0, -60.0, 1.0, v, re) < 1e-100);
    CHECK_THROWS_AS(burgers_delta_exact(0.0, 0.0, 1.0, v, re), DomainError);
    CHECK(burgers_delta_u1(1.3, v * 1.3, v, re) == doctest::Approx(0.0));
    CHECK_THROWS_AS(burgers_delta_u1(-1.0, 0.0, v, re), DomainError);
  }

  TEST_CASE("point-mass Burgers mass is independent of delta") {
    for (double delta : {0.0, 0.5, 1.0})
      for (double t : {0.5, 2.0}) {
        const double m = line_integral([&](double x) { return burgers_delta_exact(t, x, delta, 1.0, 2.0); });
        CHECK(m == doctest::Approx(2.0).epsilon(1e-9));
      }
  }

  TEST_CASE("point-mass Burgers solves the homotopy equation") {
    // u_t + (1 - d) v u_x + d u u_x = u_xx / Re, checked by centered differences.
    const double re = 2.0, v = 1.0, h = 1e-3;
    for (double delta : {0.3, 1.0})
      for (double x : {-1.0, 0.4, 2.0}) {
        const double t = 1.5;
        auto u = [&](double tt, double xx) { return burgers_delta_exact(tt, xx, delta, v, re); };
        const double ut = (u(t + h, x) - u(t - h, x)) / (2 * h);
        const double ux = (u(t, x + h) - u(t, x - h)) / (2 * h);
        const double uxx = (u(t, x + h) - 2 * u(t, x) + u(t, x - h)) / (h * h);
        const double res = ut + (1 - delta) * v * ux + delta * u(t, x) * ux - uxx / re;
        CHECK(std::abs(res) < 1e-5);
      }
  }

  TEST_CASE("first coefficient against finite differences in delta") {
    const double re = 2.0;
    for (double v : {0.5, 1.0})
      for (double x : {-1.5, 0.0, 0.8, 3.0}) {
        const double t = 1.0;
        auto fd = [&](double d) { return (burgers_delta_exact(t, x, d, v, re) - burgers_delta_exact(t, x, -d, v, re)) / (2 * d); };
        const double rich = (4.0 * fd(5e-3) - fd(1e-2)) / 3.0;
        CHECK(burgers_delta_u1(t, x, v, re) == doctest::Approx(rich).epsilon(1e-6).scale(1.0));
      }
  }

  TEST_CASE("first coefficient solves the order-one equation") {
    const double re = 2.0, v = 0.5, h = 1e-3, t = 1.0;
    auto u0 = [&](double tt, double xx) { return std::sqrt(re / (kPi * tt)) * std::exp(-re * (xx - v * tt) * (xx - v * tt) / (4 * tt)); };
    auto u1 = [&](double tt, double xx) { return burgers_delta_u1(tt, xx, v, re); };
    for (double x = -3.0; x <= 4.0; x += 0.5) {
      const double ut = (u1(t + h, x) - u1(t - h, x)) / (2 * h);
      const double ux = (u1(t, x + h) - u1(t, x - h)) / (2 * h);
      const double uxx = (u1(t, x + h) - 2 * u1(t, x) + u1(t, x - h)) / (h * h);
      const double u0x = (u0(t, x + h) - u0(t, x - h)) / (2 * h);
      CHECK(std::abs(ut + v * ux - uxx / re - (v - u0(t, x)) * u0x) < 1e-4);
    }
  }

  TEST_CASE("Taylor coefficients") {
    const double re = 2.0, v = 0.5;
    for (double x : {-1.0, 0.25, 1.7}) {
      const auto c = burgers_delta_taylor(1.0, x, v, re, 6);
      REQUIRE(c.size() == 7);
      CHECK(c[0] == doctest::Approx(burgers_delta_exact(1.0, x, 0.0, v, re)).epsilon(1e-14));
      CHECK(c[1] == doctest::Approx(burgers_delta_u1(1.0, x, v, re)).epsilon(1e-12));
      // Second and third coefficients from central differences with one Richardson step.
      auto f = [&](double d) { return burgers_delta_exact(1.0, x, d, v, re); };
      auto d2 = [&](double h) { return (f(h) - 2 * f(0) + f(-h)) / (h * h); };
      auto d3 = [&](double h) { return (f(1.5 * h) - 3 * f(0.5 * h) + 3 * f(-0.5 * h) - f(-1.5 * h)) / (h * h * h); };
      CHECK(c[2] == doctest::Approx((4 * d2(0.01) - d2(0.02)) / 3 / 2).epsilon(1e-6).scale(1.0));
      CHECK(c[3] == doctest::Approx((4 * d3(0.01) - d3(0.02)) / 3 / 6).epsilon(1e-5).scale(1.0));
      // The truncated sum converges to the solution at delta = 0.3.
      double s = 0.0, pw = 1.0;
      for (double a : c) {
        s += pw * a;
        pw *= 0.3;
      }
      CHECK(s == doctest::Approx(f(0.3)).epsilon(1e-6));
    }
    CHECK_THROWS_AS(burgers_delta_taylor(1.0, 0.0, v, re, -1), ArgumentError);
  }

  TEST_CASE("line oracle") {
    const double re = 2.0;
    LineOracleSpec pm;
    pm.masses = {{0.0, 2.0}};
    pm.delta = 1.0;
    pm.advectionSpeed = 1.0;
    pm.reynolds = re;
    CHECK(cole_hopf_line_oracle(pm, 1.0, 0.5) == doctest::Approx(burgers_delta_exact(1.0, 0.5, 1.0, 1.0, re)).epsilon(1e-8));
    pm.delta = 0.4;
    CHECK(cole_hopf_line_oracle(pm, 2.0, -0.3) == doctest::Approx(burgers_delta_exact(2.0, -0.3, 0.4, 1.0, re)).epsilon(1e-8));

    // delta = 0: heat-advection of a Gaussian.
    LineOracleSpec gs;
    gs.g = [](double y) { return std::exp(-y * y); };
    gs.delta = 0.0;
    gs.advectionSpeed = 0.7;
    gs.reynolds = 5.0;
    for (double x : {-1.0, 0.0, 2.0}) {
      const double t = 0.8, s = 1.0 + 4.0 * t / 5.0;
      const double expected = std::exp(-(x - 0.7 * t) * (x - 0.7 * t) / s) / std::sqrt(s);
      CHECK(cole_hopf_line_oracle(gs, t, x) == doctest::Approx(expected).epsilon(1e-10));
    }

    // Non-negative data stays finite.
    LineOracleSpec box;
    box.g = [](double y) { return (y > -0.5 && y < 0.5) ? 1.0 : 0.0; };
    box.breakpoints = {-0.5, 0.5};
    box.reynolds = 50.0;
    for (double x = -2.0; x <= 2.0; x += 0.25) CHECK(std::isfinite(cole_hopf_line_oracle(box, 0.3, x)));

    LineOracleSpec empty;
    CHECK_THROWS_AS(cole_hopf_line_oracle(empty, 1.0, 0.0), ArgumentError);
    CHECK_THROWS_AS(cole_hopf_line_oracle(pm, 0.0, 0.0), DomainError);
  }

  TEST_CASE("cosine-squared solution") {
    const double re = 500.0, v = 1.0 / re;
    for (double x : {0.0, 0.1, 0.3, 0.77}) {
      const double g = std::pow(std::cos(2.0 * kPi * x), 2) - 0.5;
      CHECK(cosine_squared_exact(1e-9, x, 1.0, v, re) == doctest::Approx(g).epsilon(1e-6).scale(1.0));
      for (double t : {0.1, 0.5}) {
        const double lin = 0.5 * std::exp(-16.0 * kPi * kPi * t / re) * std::cos(4.0 * kPi * (x - v * t));
        CHECK(cosine_squared_exact(t, x, 1e-7, v, re) == doctest::Approx(lin).epsilon(1e-6).scale(1.0));
      }
      CHECK(std::abs(cosine_squared_exact(2000.0, x, 1.0, v, re)) < 1e-12);
    }
    CHECK_THROWS_AS(cosine_squared_exact(0.0, 0.1, 1.0, v, re), DomainError);
  }

  TEST_CASE("cosine-squared solution solves viscous Burgers") {
    const double re = 50.0, h = 1e-4, t = 0.2;
    for (double delta : {0.5, 1.0})
      for (double x : {0.05, 0.4, 0.81}) {
        auto u = [&](double tt, double xx) { return cosine_squared_exact(tt, xx, delta, 0.3, re); };
        const double ut = (u(t + h, x) - u(t - h, x)) / (2 * h);
        const double ux = (u(t, x + h) - u(t, x - h)) / (2 * h);
        const double uxx = (u(t, x + h) - 2 * u(t, x) + u(t, x - h)) / (h * h);
        CHECK(std::abs(ut + (1 - delta) * 0.3 * ux + delta * u(t, x) * ux - uxx / re) < 1e-4);
      }
  }

  TEST_CASE("heat kernel") {
    CHECK(heat_kernel(1.0, 0.0) == doctest::Approx(1.0 / std::sqrt(4.0 * kPi)));
    CHECK(heat_kernel(0.5, 0.0, 2) == doctest::Approx(1.0 / (2.0 * kPi)));
    CHECK(line_integral([](double x) { return heat_kernel(0.3, x); }) == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("ball solution") {
    CHECK(plap_ball_exact(2.0, 1, 0.0) == doctest::Approx(0.5));
    CHECK(plap_ball_exact(3.0, 1, 0.0) == doctest::Approx(2.0 / 3.0));
    CHECK(plap_ball_exact(3.0, 1, 1.0) == 0.0);
    CHECK(plap_ball_exact(2.0, 1, 0.3) == doctest::Approx(0.5 * (1 - 0.09)));
    CHECK_THROWS_AS(plap_ball_exact(1.0, 1, 0.0), DomainError);
    CHECK_THROWS_AS(plap_ball_exact(3.0, 1, 1.1), DomainError);
    CHECK(plap_radial_profile(3.0, 2, 1.2) < 0.0);
    CHECK(plap_radial_profile(3.0, 2, 0.4) == doctest::Approx(plap_ball_exact(3.0, 2, 0.4)));

    // Delta_p u = -1: the flux |u'|^{p-2} u' equals -r/d radially.
    for (double p : {1.5, 3.0})
      for (int d : {1, 2})
        for (double r : {0.2, 0.6, 0.9}) {
          const double h = 1e-6;
          const double du = (plap_ball_exact(p, d, r + h) - plap_ball_exact(p, d, r - h)) / (2 * h);
          CHECK(std::pow(std::abs(du), p - 2) * du == doctest::Approx(-r / d).epsilon(1e-7));
        }
  }

  TEST_CASE("ball coefficients") {
    CHECK(plap_ball_u1(1, 1.0) == doctest::Approx(0.0).scale(1.0));
    CHECK(plap_ball_u1(1, -1.0) == doctest::Approx(0.0).scale(1.0));
    for (int d : {1, 2})
      for (double r : {0.0, 0.3, 0.8}) {
        const double e = 1e-3;
        auto fd = [&](double s) { return (plap_ball_exact(2 + s, d, r) - plap_ball_exact(2 - s, d, r)) / (2 * s); };
        CHECK(plap_ball_u1(d, r) == doctest::Approx((4 * fd(e / 2) - fd(e)) / 3).epsilon(1e-8).scale(1.0));
      }

    // Dual coefficients: Taylor coefficients in q = p' - 2 of Phi_p, p = (q + 2)/(q + 1).
    for (double x : {0.0, 0.2, 0.55, 0.9}) {
      auto phi = [&](double q) { return plap_ball_exact((q + 2) / (q + 1), 1, x); };
      const double h = 0.01;
      CHECK(plap_ball_dual_un(0, x) == doctest::Approx(phi(0.0)).epsilon(1e-14));
      auto d1 = [&](double s) { return (phi(s) - phi(-s)) / (2 * s); };
      auto d2 = [&](double s) { return (phi(s) - 2 * phi(0) + phi(-s)) / (s * s); };
      CHECK(plap_ball_dual_un(1, x) == doctest::Approx((4 * d1(h / 2) - d1(h)) / 3).epsilon(1e-7).scale(1.0));
      CHECK(plap_ball_dual_un(2, x) == doctest::Approx((4 * d2(h / 2) - d2(h)) / 6).epsilon(1e-6).scale(1.0));
    }
    double worst = 0.0;
    for (int i = 0; i <= 200; ++i) {
      const double x = -1.0 + i / 100.0;
      double s = 0.0, pw = 1.0;
      for (int n = 0; n <= 12; ++n, pw *= -0.5) s += pw * plap_ball_dual_un(n, x);
      worst = std::max(worst, std::abs(s - plap_ball_exact(3.0, 1, x)));
    }
    CHECK(worst < 1e-4);
    // Converges inside |delta| < 2: terms at delta = 1.5 shrink.
    CHECK(std::abs(std::pow(1.5, 30) * plap_ball_dual_un(30, 0.5)) < std::abs(std::pow(1.5, 10) * plap_ball_dual_un(10, 0.5)));
    CHECK_THROWS_AS(plap_ball_dual_un(-1, 0.0), ArgumentError);
    CHECK_THROWS_AS(plap_ball_dual_un(1, 1.5), DomainError);
  }

  TEST_CASE("Barenblatt constants and values") {
    const auto c3 = barenblatt_constants(3.0, 1);
    CHECK(c3.kp == doctest::Approx(0.25));
    CHECK(c3.qp == doctest::Approx(1.0 / 6.0));
    CHECK(barenblatt(2.0, 1, 1.0, 0.0) == doctest::Approx(1.0 / std::sqrt(4.0 * kPi)));
    CHECK(barenblatt(2.0, 1, 0.7, 1.1) == doctest::Approx(heat_kernel(0.7, 1.1)));
    CHECK_THROWS_AS(barenblatt_constants(1.0, 1), DomainError);
    CHECK_THROWS_AS(barenblatt_constants(1.3, 2), DomainError);
    CHECK(std::isinf(barenblatt_support_radius(1.7, 1, 1.0)));
  }

  TEST_CASE("Barenblatt mass and support") {
    for (double p : {1.7, 2.5, 3.0})
      for (double t : {0.5, 1.0}) {
        const double r = barenblatt_support_radius(p, 1, t);
        const double mass = std::isfinite(r)
                                ? 2.0 * finite_integral([&](double x) { return barenblatt(p, 1, t, x); }, 0.0, r)
                                : line_integral([&](double x) { return barenblatt(p, 1, t, x); });
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
        if (std::isfinite(r)) {
          CHECK(barenblatt(p, 1, t, r * 1.0001) == 0.0);
          CHECK(barenblatt(p, 1, t, r * 0.999) > 0.0);
          const auto c = barenblatt_constants(p, 1);
          CHECK(r == doctest::Approx(std::pow(c.cp / c.qp, (p - 1) / p) * std::pow(t, c.kp)));
        } else {
          CHECK(barenblatt(p, 1, t, 50.0) > 0.0);
        }
      }
    // Two dimensions: radial mass.
    const double m2 = finite_integral(
        [](double r) { return 2.0 * kPi * r * barenblatt(3.0, 2, 1.0, r); }, 0.0, barenblatt_support_radius(3.0, 2, 1.0));
    CHECK(m2 == doctest::Approx(1.0).epsilon(1e-6));
  }

  TEST_CASE("Barenblatt solves the evolution equation") {
    // u_t = (|u_x|^{p-2} u_x)_x inside the support, by nested central differences.
    for (double p : {1.7, 3.0})
      for (double x : {0.3, 0.9}) {
        const double t = 1.0, h = 1e-4;
        auto u = [&](double tt, double xx) { return barenblatt(p, 1, tt, std::abs(xx)); };
        auto flux = [&](double xx) {
          const double ux = (u(t, xx + h) - u(t, xx - h)) / (2 * h);
          return std::pow(std::abs(ux), p - 2) * ux;
        };
        const double lhs = (u(t + h, x) - u(t - h, x)) / (2 * h);
        const double rhs = (flux(x + h) - flux(x - h)) / (2 * h);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-4).scale(1.0));
      }
  }

  TEST_CASE("Barenblatt first coefficient") {
    for (double x : {0.0, 0.4, 1.5, 3.0})
      for (double t : {0.5, 1.0}) {
        auto fd = [&](double e) { return (barenblatt(2 + e, 1, t, x) - barenblatt(2, 1, t, x)) / e; };
        const double rich = 2.0 * fd(5e-4) - fd(1e-3);
        CHECK(barenblatt_u1(t, x) == doctest::Approx(rich).epsilon(1e-5).scale(1.0));
        auto fdm = [&](double e) { return (barenblatt(2, 1, t, x) - barenblatt(2 - e, 1, t, x)) / e; };
        CHECK(barenblatt_u1(t, x) == doctest::Approx(2.0 * fdm(5e-4) - fdm(1e-3)).epsilon(1e-5).scale(1.0));
      }
    CHECK(std::abs(barenblatt_u1(1.0, 40.0)) < 1e-100);

    // u1_t - u1_xx = (ln|u0_x| u0_x)_x away from the origin.
    const double t = 1.0, h = 1e-3;
    for (double x : {0.5, 1.2, 2.5}) {
      auto u1 = [&](double tt, double xx) { return barenblatt_u1(tt, xx); };
      auto g = [&](double xx) {
        const double d = -xx / (2 * t) * heat_kernel(t, xx);
        return std::log(std::abs(d)) * d;
      };
      const double lhs = (u1(t + h, x) - u1(t - h, x)) / (2 * h) -
                         (u1(t, x + h) - 2 * u1(t, x) + u1(t, x - h)) / (h * h);
      CHECK(std::abs(lhs - (g(x + h) - g(x - h)) / (2 * h)) < 1e-3);
    }
  }
}
