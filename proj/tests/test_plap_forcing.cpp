#include "oracles.hpp"

#include "serilin/exact.hpp"
#include "serilin/plap_forcing.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace serilin;

namespace {

std::vector<Eigen::MatrixXd> random_gradients(int orders, int points, int dim, std::uint64_t seed) {
  std::vector<Eigen::MatrixXd> g;
  for (int k = 0; k < orders; ++k) g.push_back(oracle::random_matrix(points, dim, seed + 13 * k, -2.0, 2.0));
  return g;
}

double factorial(int k) { return std::tgamma(k + 1.0); }

}  // namespace

TEST_SUITE("plap-forcing") {
  TEST_CASE("partition examples") {
    const auto p3 = enumerate_partitions(3);
    std::set<std::vector<int>> got;
    for (const auto& p : p3) got.insert(p.mult);
    CHECK(got == std::set<std::vector<int>>{{3, 0, 0}, {1, 1, 0}, {0, 0, 1}});
    CHECK(enumerate_partitions(1).size() == 1);
    CHECK(enumerate_partitions(1)[0].mult == std::vector<int>{1});
    CHECK(enumerate_partitions(4).size() == 5);
    CHECK(enumerate_partitions(24).size() == 1575);
    CHECK_THROWS_AS(enumerate_partitions(0), ArgumentError);
    CHECK_THROWS_AS(enumerate_partitions(25), ArgumentError);
  }

  TEST_CASE("partitions match exhaustive search") {
    for (int n = 1; n <= 8; ++n) {
      const auto list = enumerate_partitions(n);
      std::set<std::vector<int>> got;
      for (const auto& p : list) {
        CHECK(p.n() == n);
        std::vector<int> m = p.mult;
        m.resize(n, 0);
        got.insert(m);
      }
      CHECK(got.size() == list.size());
      CHECK(got == oracle::brute_partitions(n));
    }
  }

  TEST_CASE("partition coefficients") {
    const Partition p{{1, 1, 0}};
    CHECK(p.norm() == 2);
    CHECK(partition_alpha(3, p) == 6.0);
    CHECK(partition_alpha(1, p) == 0.0);
    CHECK(partition_alpha(5, Partition{{3, 0, 0}}) == doctest::Approx(60.0 / 6.0));
    CHECK(partition_beta(Partition{{2, 0}}) == -0.5);
    CHECK(partition_beta(Partition{{0, 0, 1}}) == 1.0);
    CHECK(partition_beta(Partition{{1, 1, 0}}) == -1.0);
    CHECK_THROWS_AS(partition_beta(Partition{}), ArgumentError);
  }

  TEST_CASE("homotopy power table") {
    const int n = 7;
    for (bool dual : {false, true}) {
      const HomotopySpec spec = dual ? HomotopySpec::plap_dual(3.0, n) : HomotopySpec::plap_ordinary(3.0, n);
      const auto H = homotopy_power_table(spec, n);
      const oracle::Series h = dual ? oracle::dual_h(n) : oracle::ordinary_h(n);
      oracle::Series power(n + 1, 0.0);
      power[0] = 1.0;
      for (int m = 1; m <= n; ++m) {
        power = oracle::mul(power, h);
        for (int l = m; l <= n; ++l) CHECK(H[l][m] == doctest::Approx(power[l] / factorial(m)).epsilon(1e-14).scale(1.0));
      }
    }
    CHECK_THROWS_AS(homotopy_power_table(HomotopySpec::burgers_linear(0.0, 1.0), 3), ArgumentError);
  }

  TEST_CASE("order one and two displays") {
    const auto g = random_gradients(2, 50, 2, 5);
    const GradientTable t(g);
    const auto ord = HomotopySpec::plap_ordinary(3.0), dual = HomotopySpec::plap_dual(3.0);
    const Eigen::MatrixXd f1o = plap_forcing(1, t, ord), f1d = plap_forcing(1, t, dual);
    for (int i = 0; i < 50; ++i) {
      const double l = std::log(g[0].row(i).norm());
      CHECK((f1o.row(i) - g[0].row(i) * l).norm() < 1e-14);
    }
    CHECK((f1d + f1o).cwiseAbs().maxCoeff() < 1e-15);

    // Constant gradient with u_1 = 0: ordinary F_2 = (1/2) grad u_0 ln^2|grad u_0|.
    Eigen::MatrixXd c0(3, 2), c1 = Eigen::MatrixXd::Zero(3, 2);
    c0 << 0.3, -1.2, 2.0, 0.5, -0.7, 0.1;
    const Eigen::MatrixXd f2 = plap_forcing(2, GradientTable({c0, c1}), ord);
    for (int i = 0; i < 3; ++i) {
      const double l = std::log(c0.row(i).norm());
      CHECK((f2.row(i) - 0.5 * c0.row(i) * l * l).norm() < 1e-14);
    }
  }

  TEST_CASE("low orders match explicit expansions on random fields") {
    for (int dim : {1, 2})
      for (bool dual : {false, true}) {
        const auto g = random_gradients(3, 300, dim, 100 + dim + (dual ? 7 : 0));
        const GradientTable t(g);
        const HomotopySpec spec = dual ? HomotopySpec::plap_dual(2.5, 6) : HomotopySpec::plap_ordinary(2.5, 6);
        const double h1 = spec.derivative(1), h2 = spec.derivative(2), h3 = spec.derivative(3);
        CHECK((plap_forcing(1, t, spec) - oracle::plap_display1(g[0], h1)).cwiseAbs().maxCoeff() < 1e-13);
        CHECK((plap_forcing(2, t, spec) - oracle::plap_display2(g[0], g[1], h1, h2)).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((plap_forcing(3, t, spec) - oracle::plap_display3(g[0], g[1], g[2], h1, h2, h3)).cwiseAbs().maxCoeff() <
              1e-11);
      }
  }

  TEST_CASE("higher orders match the power-series expansion") {
    for (int dim : {1, 2})
      for (bool dual : {false, true}) {
        const int nmax = 8;
        const auto g = random_gradients(nmax, 40, dim, 200 + dim + (dual ? 3 : 0));
        const GradientTable t(g);
        const HomotopySpec spec = dual ? HomotopySpec::plap_dual(3.0, nmax) : HomotopySpec::plap_ordinary(3.0, nmax);
        const oracle::Series h = dual ? oracle::dual_h(nmax) : oracle::ordinary_h(nmax);
        for (int n = 1; n <= nmax; ++n) {
          const Eigen::MatrixXd ref = oracle::plap_forcing(n, g, h);
          const double scale = std::max(1.0, ref.cwiseAbs().maxCoeff());
          CHECK((plap_forcing(n, t, spec) - ref).cwiseAbs().maxCoeff() < 1e-10 * scale);
        }
      }
  }

  TEST_CASE("forcing uses only lower orders") {
    auto g = random_gradients(4, 20, 2, 9);
    const auto spec = HomotopySpec::plap_dual(3.0);
    const Eigen::MatrixXd a = plap_forcing(3, GradientTable(g), spec);
    g[3] = oracle::random_matrix(20, 2, 1234);
    const Eigen::MatrixXd b = plap_forcing(3, GradientTable(g), spec);
    CHECK((a - b).norm() == 0.0);
    g.resize(2);
    CHECK_THROWS_AS(plap_forcing(3, GradientTable(g), spec), StructuralError);
    CHECK_THROWS_AS(plap_forcing(0, GradientTable(g), spec), ArgumentError);
  }

  TEST_CASE("scaling of the first order") {
    const auto g = random_gradients(1, 30, 2, 77);
    const auto spec = HomotopySpec::plap_ordinary(3.0);
    const double lambda = 2.7;
    const Eigen::MatrixXd f = plap_forcing(1, GradientTable(g), spec);
    const Eigen::MatrixXd fs = plap_forcing(1, GradientTable({Eigen::MatrixXd(lambda * g[0])}), spec);
    CHECK((fs - (lambda * std::log(lambda) * g[0] + lambda * f)).cwiseAbs().maxCoeff() < 1e-13);
  }

  TEST_CASE("degenerate points") {
    Eigen::MatrixXd g0(3, 1), g1(3, 1), g2(3, 1);
    g0 << 0.0, 1.0, -0.5;
    g1 << 0.0, 0.2, 0.3;
    g2 << 0.0, 0.0, 0.0;
    const auto spec = HomotopySpec::plap_dual(3.0);
    const GradientTable t({g0, g1, g2});
    CHECK(t.degenerate(0));
    CHECK_FALSE(t.degenerate(1));
    CHECK(plap_forcing(1, t, spec)(0, 0) == 0.0);
    // All lower gradients vanish at the point: the limit is zero.
    CHECK(plap_forcing(3, t, spec)(0, 0) == 0.0);

    Eigen::MatrixXd h1 = g1;
    h1(0, 0) = 0.4;
    try {
      plap_forcing(2, GradientTable({g0, h1}), spec);
      FAIL("expected a SingularForcingError");
    } catch (const SingularForcingError& e) {
      CHECK(e.order() == 2);
      CHECK(e.point() == 0);
    }
  }

  TEST_CASE("gradient table") {
    const auto g = random_gradients(3, 10, 2, 1);
    const GradientTable t(g);
    CHECK(t.orders() == 3);
    CHECK(t.points() == 10);
    CHECK(t.dimension() == 2);
    CHECK((t.pair(2, 1) - t.pair(1, 2)).norm() == 0.0);
    CHECK(t.pair(0, 1)[4] == doctest::Approx(g[0].row(4).dot(g[1].row(4))));
    CHECK_THROWS_AS(t.pair(0, 3), StructuralError);
    CHECK_THROWS_AS(GradientTable({Eigen::MatrixXd(2, 1), Eigen::MatrixXd(3, 1)}), StructuralError);
  }

  TEST_CASE("Duhamel reference") {
    DuhamelSource zero;
    zero.F = [](double, double) { return 0.0; };
    CHECK(duhamel_reference(zero, 0.0, 1.0, 0.3) == 0.0);

    // F(s, y) = H(s + 1, y): each slice propagates to d/dx H(t + 1, x).
    DuhamelSource heat;
    heat.F = [](double s, double y) { return heat_kernel(s + 1.0, y); };
    heat.width = [](double s) { return std::sqrt(4.0 * (s + 1.0)); };
    for (double x : {-1.0, 0.5, 2.0})
      for (double t0 : {0.0, 0.4}) {
        const double t = 1.0;
        const double dH = -x / (2.0 * (t + 1.0)) * heat_kernel(t + 1.0, x);
        CHECK(duhamel_reference(heat, t0, t, x) == doctest::Approx((t - t0) * dH).epsilon(1e-9).scale(1.0));
      }

    // First ordinary coefficient of the point-mass evolution.
    DuhamelSource first;
    first.F = [](double s, double y) {
      const double d = -y / (2.0 * s) * heat_kernel(s, y);
      return d == 0.0 ? 0.0 : d * std::log(std::abs(d));
    };
    for (double x : {0.7, 1.5, 2.5})
      CHECK(duhamel_reference(first, 0.0, 1.0, x) == doctest::Approx(barenblatt_u1(1.0, x)).epsilon(1e-3).scale(1.0));

    DuhamelSource flat;
    flat.F = [](double, double) { return 1.0; };
    CHECK_THROWS_AS(duhamel_reference(flat, 0.0, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(duhamel_reference(heat, 1.0, 0.5, 0.0), DomainError);
    CHECK_THROWS_AS(duhamel_reference(DuhamelSource{}, 0.0, 1.0, 0.0), ArgumentError);
  }
}
