#include <doctest.h>

#include <cmath>

#include "carleman/quadrature.hpp"
#include "carleman/rng.hpp"
#include "carleman/test_function.hpp"

using namespace carleman;

namespace {
constexpr double kPi = 3.141592653589793238462643383279503;
}

TEST_CASE("constant over the annulus: area/volume formulas") {
  SUBCASE("d = 2, r0 = 0.2, r1 = 0.8 gives 0.6 pi") {
    const AnnulusGrid g = annulus_grid(2, 0.2, 0.8, 16, 64);
    const double got = integrate(g, [](const Vec&) { return 1.0; });
    CHECK(got == doctest::Approx(0.6 * kPi).epsilon(1e-13));
  }
  SUBCASE("d = 1 and d = 3") {
    const AnnulusGrid g1 = annulus_grid(1, 0.3, 0.7, 8, 1);
    CHECK(integrate(g1, [](const Vec&) { return 1.0; }) == doctest::Approx(0.8).epsilon(1e-13));
    const AnnulusGrid g3 = annulus_grid(3, 0.3, 0.7, 16, 16);
    CHECK(integrate(g3, [](const Vec&) { return 1.0; }) ==
          doctest::Approx(annulus_volume(3, 0.3, 0.7)).epsilon(1e-13));
  }
}

TEST_CASE("|x|^2 over a d = 3 annulus has the closed form 4 pi (r1^5 - r0^5)/5") {
  const AnnulusGrid g = annulus_grid(3, 0.2, 0.9, 24, 24);
  const double got = integrate(g, [](const Vec& x) { return x.squaredNorm(); });
  const double expect = 4.0 * kPi * (std::pow(0.9, 5) - std::pow(0.2, 5)) / 5.0;
  CHECK(got == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("anisotropic smoke test: x1^2 over a d = 2 annulus") {
  const AnnulusGrid g = annulus_grid(2, 0.2, 0.8, 16, 64);
  const double got = integrate(g, [](const Vec& x) { return x[0] * x[0]; });
  // int r^3 dr * int cos^2 = (0.8^4 - 0.2^4)/4 * pi
  CHECK(got == doctest::Approx((std::pow(0.8, 4) - std::pow(0.2, 4)) / 4.0 * kPi).epsilon(1e-13));
}

TEST_CASE("node radii stay inside the annulus and weights are positive") {
  const AnnulusGrid g = annulus_grid(2, 0.25, 0.75, 12, 32);
  for (std::size_t i = 0; i < g.n_nodes(); ++i) {
    const double r = g.node(i).norm();
    CHECK(r >= 0.25);
    CHECK(r <= 0.75);
    CHECK(g.node_weight(i) > 0.0);
  }
}

TEST_CASE("bump integral is stable under order doubling") {
  for (int d : {1, 2, 3}) {
    const TestFunction u = TestFunction::radial_bump(d, 0.3, 0.7);
    const AnnulusGrid g = annulus_grid(d, 0.3, 0.7, 32, 32);
    const AnnulusGrid g2 = g.refined();
    auto f = [&u](const Vec& x) { return std::norm(u.jet(x).val); };
    const double a = integrate(g, f);
    const double b = integrate(g2, f);
    CHECK(std::fabs(a - b) < 1e-8 * std::fabs(b));
    CHECK(b > 0.0);
  }
}

TEST_CASE("graded grid still integrates exactly") {
  // a moderately peaked profile; panels must partition [r0, r1] exactly
  std::vector<std::function<double(double)>> profiles = {
      [](double t) { return -300.0 * (t - 0.35) * (t - 0.35); }};
  const AnnulusGrid g = annulus_grid_graded(2, 0.3, 0.7, 12, 64, profiles);
  CHECK(g.panels.size() > 1);
  double span = 0.0;
  for (const auto& [a, b] : g.panels) span += b - a;
  CHECK(span == doctest::Approx(0.4).epsilon(1e-13));
  const double got = integrate(g, [](const Vec&) { return 1.0; });
  CHECK(got == doctest::Approx(kPi * (0.49 - 0.09)).epsilon(1e-12));
}

TEST_CASE("bump support and smoothness") {
  const TestFunction u = TestFunction::radial_bump(2, 0.3, 0.7);
  SUBCASE("u and grad u vanish exactly at the support radii") {
    for (double r : {0.3, 0.7, 0.25, 0.75}) {
      Vec x(2);
      x << r, 0.0;
      const CJet j = u.jet(x);
      CHECK(j.val == complexd{0.0, 0.0});
      CHECK(j.grad.norm() == 0.0);
      CHECK(j.hess.norm() == 0.0);
    }
  }
  SUBCASE("gradient matches finite differences at mid-support") {
    CounterRng rng(3, 1);
    for (int trial = 0; trial < 50; ++trial) {
      const Vec x = rng.annulus_point(2, 0.4, 0.6);
      const CJet j = u.jet(x);
      for (int k = 0; k < 2; ++k) {
        Vec e = Vec::Zero(2);
        e[k] = 1e-6;
        const double fd = (u.jet(x + e).val.real() - u.jet(x - e).val.real()) / 2e-6;
        CHECK(j.grad[k].real() == doctest::Approx(fd).epsilon(1e-6));
      }
    }
  }
  SUBCASE("hessian matches finite differences of the gradient") {
    CounterRng rng(9, 2);
    for (int trial = 0; trial < 25; ++trial) {
      const Vec x = rng.annulus_point(2, 0.35, 0.65);
      const CJet j = u.jet(x);
      for (int k = 0; k < 2; ++k) {
        Vec e = Vec::Zero(2);
        e[k] = 1e-6;
        const CVec fd = (u.jet(x + e).grad - u.jet(x - e).grad) / 2e-6;
        for (int i = 0; i < 2; ++i)
          CHECK(j.hess(i, k).real() == doctest::Approx(fd[i].real()).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("plane-wave modulation: |u| equals the radial profile") {
  Vec k(2);
  k << 3, 4;
  const TestFunction u = TestFunction::plane_wave_bump(2, 0.3, 0.7, k);
  const TestFunction r = TestFunction::radial_bump(2, 0.3, 0.7);
  CounterRng rng(13, 3);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec x = rng.annulus_point(2, 0.31, 0.69);
    CHECK(std::abs(u.jet(x).val) == doctest::Approx(r.jet(x).val.real()).epsilon(1e-13));
  }
}

TEST_CASE("modulated jets differentiate correctly") {
  Vec k(2);
  k << 2, -1;
  Vec a(2);
  a << 0.5, -0.25;
  CounterRng rng(17, 4);
  for (const TestFunction& u :
       {TestFunction::plane_wave_bump(2, 0.3, 0.7, k), TestFunction::cosine_bump(2, 0.3, 0.7, k),
        TestFunction::sine_bump(2, 0.3, 0.7, k), TestFunction::linear_bump(2, 0.3, 0.7, 1.0, a)}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Vec x = rng.annulus_point(2, 0.35, 0.65);
      const CJet j = u.jet(x);
      for (int kk = 0; kk < 2; ++kk) {
        Vec e = Vec::Zero(2);
        e[kk] = 1e-6;
        const complexd fd = (u.jet(x + e).val - u.jet(x - e).val) / 2e-6;
        CHECK(std::abs(j.grad[kk] - fd) < 1e-6 * (1.0 + std::abs(fd)));
      }
    }
  }
}

TEST_CASE("real/imag parts of a plane-wave bump") {
  Vec k(2);
  k << 3, 0;
  const TestFunction u = TestFunction::plane_wave_bump(2, 0.3, 0.7, k);
  const TestFunction re = u.real_part();
  const TestFunction im = u.imag_part();
  CounterRng rng(21, 5);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec x = rng.annulus_point(2, 0.31, 0.69);
    const complexd v = u.jet(x).val;
    CHECK(re.jet(x).val.real() == doctest::Approx(v.real()).epsilon(1e-14));
    CHECK(im.jet(x).val.real() == doctest::Approx(v.imag()).epsilon(1e-14));
  }
}

TEST_CASE("positivity of the harness integrands") {
  const TestFunction u = TestFunction::plane_wave_bump(2, 0.3, 0.7, Vec(Vec::Ones(2)));
  const AnnulusGrid g = annulus_grid(2, 0.3, 0.7, 24, 48);
  const double I = integrate(g, [&u](const Vec& x) { return std::norm(u.jet(x).val); });
  CHECK(I >= 0.0);
  CHECK(I > 0.0);
}

TEST_CASE("invalid radii are rejected") {
  CHECK_THROWS_AS(annulus_grid(2, 0.7, 0.3, 16, 32), std::invalid_argument);
  CHECK_THROWS_AS(annulus_grid(2, 0.0, 0.5, 16, 32), std::invalid_argument);
  CHECK_THROWS_AS(TestFunction::radial_bump(2, 0.5, 0.4), std::invalid_argument);
  CHECK_THROWS_AS(TestFunction::radial_bump(2, 0.0, 0.4), std::invalid_argument);
  CHECK_THROWS_AS(annulus_grid(4, 0.3, 0.7, 16, 32), std::invalid_argument);
}

TEST_CASE("pairwise summation is independent of the jobs count") {
  const AnnulusGrid g = annulus_grid(2, 0.3, 0.7, 32, 128);
  auto f = [](const Vec& x) { return std::sin(17.0 * x[0]) * std::cos(13.0 * x[1]); };
  const double s1 = integrate(g, f, 1);
  const double s4 = integrate(g, f, 4);
  CHECK(s1 == s4);  // bitwise
}
