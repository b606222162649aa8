#include <doctest.h>

#include <cmath>

#include "carleman/constants.hpp"

using namespace carleman;

namespace {

constexpr double kE = 2.718281828459045235360287471353;

// independent re-implementation, kept deliberately flat
struct FlatConstants {
  double CFp, CF, CM, Cpsi, Cmu, m1, K, t1, a1, p, q, r, a2, K1, K5, hatC;
};

FlatConstants flat(int d, double t1v, double t2v, double mu) {
  FlatConstants c{};
  const double s = std::sqrt(t1v);
  c.CFp = 3 * d * std::pow(t1v, 3.5) * t2v;
  c.CF = std::exp(mu * s) * (s * (c.CFp + mu) + std::fabs(d - 2.0));
  c.CM = 11 * d * std::pow(t1v, 5.5) * t2v;
  c.Cpsi = mu * std::exp(mu * s) * t1v * t1v * (s * (c.CFp + mu) + d - 1);
  c.Cmu = mu - 3 * c.CM;
  c.m1 = s * mu <= 1 ? std::exp(s * mu) : kE * s * mu;
  c.K = std::max(d * c.Cpsi, 6 * mu * c.m1 * std::exp(mu * s) * t1v * t1v);
  c.t1 = c.K * std::pow(t1v, 2.5) * c.m1 * c.m1 * std::exp(2 * mu * s) / 8;
  c.a1 = c.K * std::pow(t1v, 4.5) * c.m1 * c.m1 * std::exp(2 * mu * s);
  const double c0 = std::exp(-2 * mu * s) / (t1v * c.m1 * t1v * c.m1);
  c.p = c.Cmu * c0;
  c.q = c.Cmu * c.CF * c0 + c.K * (c.t1 + s / 2);
  c.r = c.K * (1 + c.CF * c.CF * t1v * t1v / 2);
  c.a2 = c.q / c.p + std::sqrt(c.q * c.q / (c.p * c.p) + 2 * c.r / c.p);
  c.K1 = c.K / 2 + t1v * c.m1 * t1v * c.m1 * std::exp(2 * mu * s);
  c.K5 = c.Cmu * c0 / 2;
  c.hatC = c.K1 / c.K5;
  return c;
}

ProblemParams make(int d, double rho, double t1, double t2, double mu, double b = 0,
                   double c = 0) {
  ProblemParams p;
  p.d = d;
  p.rho = rho;
  p.theta1 = t1;
  p.theta2 = t2;
  p.mu = mu;
  p.b_inf = b;
  p.c_inf = c;
  return p;
}

} // namespace

TEST_CASE("prop constants, plug-in values") {
  SUBCASE("d = 3, theta1 = 1, theta2 = 0, mu = 1") {
    const PropConstants c = prop_constants(3, 1.0, 0.0, 1.0);
    CHECK(c.C_F_prime == 0.0);
    CHECK(c.C_M == 0.0);
    CHECK(c.C_F == doctest::Approx(2 * kE).epsilon(1e-14));
    CHECK(c.C_psi == doctest::Approx(3 * kE).epsilon(1e-14));  // (1*(0+1) + 3-1) = 3
    CHECK(c.C_mu == 1.0);
  }
  SUBCASE("d = 2, theta2 = 0 drops the |d-2| term") {
    for (double t1 : {1.0, 2.0}) {
      for (double mu : {0.5, 1.0}) {
        const PropConstants c = prop_constants(2, t1, 0.0, mu);
        CHECK(c.C_F ==
              doctest::Approx(std::exp(mu * std::sqrt(t1)) * std::sqrt(t1) * mu).epsilon(1e-14));
      }
    }
  }
  SUBCASE("dual-implementation oracle, d = 2, theta1 = 2, theta2 = 0.01, mu = 2") {
    const PropConstants c = prop_constants(2, 2.0, 0.01, 2.0);
    const FlatConstants f = flat(2, 2.0, 0.01, 2.0);
    CHECK(c.C_F_prime == doctest::Approx(f.CFp).epsilon(1e-15));
    CHECK(c.C_F == doctest::Approx(f.CF).epsilon(1e-15));
    CHECK(c.C_M == doctest::Approx(f.CM).epsilon(1e-15));
    CHECK(c.C_psi == doctest::Approx(f.Cpsi).epsilon(1e-15));
    CHECK(c.C_mu == doctest::Approx(f.Cmu).epsilon(1e-15));
  }
}

TEST_CASE("chain constants against the flat re-implementation") {
  for (const auto& [d, t1v, t2v, mu] :
       {std::tuple{2, 1.0, 0.0, 1.0}, std::tuple{3, 1.5, 1e-4, 0.5},
        std::tuple{1, 1.0, 1e-3, 0.7}, std::tuple{3, 2.0, 1e-5, 2.0}}) {
    const ChainConstants ch = hat_chain(d, t1v, t2v, mu);
    const FlatConstants f = flat(d, t1v, t2v, mu);
    CHECK(ch.K == doctest::Approx(f.K).epsilon(1e-14));
    CHECK(ch.t1 == doctest::Approx(f.t1).epsilon(1e-14));
    CHECK(ch.alpha1 == doctest::Approx(f.a1).epsilon(1e-14));
    CHECK(ch.alpha2 == doctest::Approx(f.a2).epsilon(1e-13));
    CHECK(ch.K1 == doctest::Approx(f.K1).epsilon(1e-14));
    CHECK(ch.K5 == doctest::Approx(f.K5).epsilon(1e-14));
    CHECK(ch.hatC == doctest::Approx(f.hatC).epsilon(1e-13));
  }
}

TEST_CASE("K2/K3 polynomial facts") {
  const ChainConstants ch = hat_chain(2, 1.5, 1e-4, 0.5);
  // K3(alpha1) = 0 and K3 >= 0 for alpha >= alpha1 (t = t1)
  CHECK(std::fabs(ch.K3(ch.alpha1)) < 1e-9 * ch.K3(2 * ch.alpha1));
  for (double f : {1.0, 1.5, 4.0, 32.0}) CHECK(ch.K3(f * ch.alpha1) >= -1e-12);
  // K2(alpha) >= K5 alpha^3 for alpha >= alpha2
  for (double f : {1.0, 1.01, 2.0, 8.0}) {
    const double a = f * ch.alpha2;
    CHECK(ch.K2(a) >= ch.K5 * a * a * a * (1.0 - 1e-12));
  }
  // and strictly below just under alpha2
  CHECK(ch.K2(0.9 * ch.alpha2) < ch.K5 * std::pow(0.9 * ch.alpha2, 3));
  CHECK(ch.K4(3.0) == doctest::Approx(3.0 * ch.prop.C_mu).epsilon(1e-15));
}

TEST_CASE("alpha1 <= alpha2 and monotonicity on an admissible sweep") {
  double prevC = 0.0, prevA = 0.0;
  int idx = 0;
  for (int d : {1, 2, 3}) {
    for (double t1v : {1.0, 1.7, 3.0, 4.0}) {
      for (double mu : {0.4, 1.0, 2.2}) {
        prevC = prevA = 0.0;
        for (double frac : {0.0, 0.2, 0.5, 0.8}) {
          const double t2v = frac * mu / (33.0 * d * std::pow(t1v, 5.5));
          const ChainConstants ch = hat_chain(d, t1v, t2v, mu);
          ++idx;
          CHECK(ch.alpha1_le_alpha2);
          // non-decreasing in theta2 at fixed admissible mu
          CHECK(ch.hatC >= prevC);
          CHECK(ch.hat_alpha0 >= prevA);
          prevC = ch.hatC;
          prevA = ch.hat_alpha0;
        }
      }
    }
  }
  CHECK(idx == 144);
}

TEST_CASE("scaling identity: constants at (rho, theta2) match (1, rho theta2)") {
  const ProblemParams a = make(2, 2.5, 1.5, 1e-4, 0.9);
  const ProblemParams b = make(2, 1.0, 1.5, 2.5 * 1e-4, 0.9);
  const ConstantsReport ra = carleman_constants(a);
  const ConstantsReport rb = carleman_constants(b);
  CHECK(ra.tilde->hatC == rb.tilde->hatC);
  CHECK(ra.tilde->hat_alpha0 == rb.tilde->hat_alpha0);
}

TEST_CASE("theta2 = 0: rho enters only through the b, c terms of alpha0") {
  const ConstantsReport r1 = carleman_constants(make(2, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0));
  const ConstantsReport r2 = carleman_constants(make(2, 3.0, 1.0, 0.0, 1.0, 1.0, 1.0));
  CHECK(r1.tilde->hatC == r2.tilde->hatC);
  CHECK(r1.tilde->hat_alpha0 == r2.tilde->hat_alpha0);
  CHECK(*r1.C_final == *r2.C_final);
  const double C = *r2.C_final;
  const double expect = std::max({r2.tilde->hat_alpha0, C * 9.0, std::cbrt(C) * std::pow(3.0, 4.0 / 3.0)});
  CHECK(*r2.alpha0_final == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("remark closed-form bounds") {
  SUBCASE("plug-in: theta2 = 0, theta1 = 1, mu = 1, d = 2 gives 56 e^8") {
    const RemarkBounds rb = remark_upper_bounds(make(2, 1.0, 1.0, 0.0, 1.0));
    CHECK(rb.tildeC_upper == doctest::Approx(56.0 * std::exp(8.0)).epsilon(1e-13));
  }
  SUBCASE("computed tildeC below the bound on a 100-point admissible sweep") {
    int n = 0;
    for (int d : {1, 2, 3}) {
      for (double t1v : {1.0, 2.0, 4.0}) {
        for (double mu : {0.5, 1.0, 2.0}) {
          for (double frac : {0.0, 0.4, 0.8}) {
            for (double rho : {0.5, 1.0}) {
              if (n >= 100) break;
              const double t2v = frac * mu / (33.0 * d * std::pow(t1v, 5.5) * rho);
              const ProblemParams p = make(d, rho, t1v, t2v, mu);
              const ConstantsReport rep = carleman_constants(p);
              REQUIRE(rep.admissible);
              CHECK(rep.tilde->hatC <= rep.remark->tildeC_upper);
              CHECK(rep.tilde->hat_alpha0 <= rep.remark->tilde_alpha0_upper);
              ++n;
            }
          }
        }
      }
    }
    CHECK(n == 100);
  }
  SUBCASE("bounds diverge monotonically as mu falls to the threshold") {
    const int d = 2;
    const double t1v = 1.5, t2v = 1e-3, rho = 1.0;
    const double thr = 33.0 * d * std::pow(t1v, 5.5) * t2v * rho;
    // close to the threshold the 1/C_mu factor dominates the mu-dependence
    // of the exponential factors, so the growth becomes monotone
    double prevC = 0.0, prevA = 0.0;
    for (double eps : {1e-2, 3e-3, 1e-3, 3e-4, 1e-4}) {
      const RemarkBounds rb = remark_upper_bounds(make(d, rho, t1v, t2v, thr + eps));
      CHECK(rb.tildeC_upper > prevC);
      CHECK(rb.tilde_alpha0_upper > prevA);
      prevC = rb.tildeC_upper;
      prevA = rb.tilde_alpha0_upper;
    }
    const double near = remark_upper_bounds(make(d, rho, t1v, t2v, thr + 1e-8)).tildeC_upper;
    const double far = remark_upper_bounds(make(d, rho, t1v, t2v, thr + 1e-2)).tildeC_upper;
    CHECK(near > 1e4 * far);
  }
  SUBCASE("inadmissible mu is rejected") {
    CHECK_THROWS_AS(remark_upper_bounds(make(2, 1.0, 1.0, 0.1, 1.0)), std::domain_error);
  }
}

TEST_CASE("epsilon1") {
  CHECK(epsilon1(3, 2.0, 0.0) == 1.0);
  // d = 1, theta1 = 1: feasible iff theta2 < 1/(99(e+1))
  const double thr = 1.0 / (99.0 * (kE + 1.0));
  CHECK(epsilon1(1, 1.0, thr) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(epsilon1(1, 1.0, 0.99 * thr) > 0.0);
  CHECK(epsilon1(1, 1.0, 1.01 * thr) < 0.0);
  // dual implementation at d = 3, theta1 = 2, theta2 = 1e-6
  const double direct =
      1.0 - 33.0 * 3 * (std::sqrt(3.0) + 2.0) * std::pow(2.0, 5.5) * (kE * std::pow(2.0, 1.5) + 1.0) * 1e-6;
  CHECK(epsilon1(3, 2.0, 1e-6) == doctest::Approx(direct).epsilon(1e-14));
}

TEST_CASE("inadmissible mu reports absent constants with the margin") {
  const ConstantsReport rep = carleman_constants(make(2, 1.0, 1.0, 0.1, 1.0));
  CHECK_FALSE(rep.admissible);
  CHECK(rep.admissibility_margin < 0.0);
  CHECK_FALSE(rep.tilde.has_value());
  CHECK_FALSE(rep.C_final.has_value());
  CHECK_FALSE(rep.alpha0_final.has_value());
  // prop constants still present (they do not need admissibility)
  CHECK(rep.prop_scaled.C_mu < 0.0);
}

TEST_CASE("K never exceeds its closed-form upper estimate") {
  for (int d : {1, 2, 3, 4, 6}) {
    for (double t1v : {1.0, 2.0, 4.0}) {
      for (double mu : {0.3, 1.0, 3.0}) {
        const ChainConstants ch = hat_chain(d, t1v, 0.0, mu);
        CHECK(ch.K <= ch.K_upper_estimate * (1 + 1e-14));
      }
    }
  }
}

TEST_CASE("directed-rounding audit brackets the double evaluation") {
  for (const ProblemParams& p :
       {make(2, 1.0, 1.0, 0.0, 1.0), make(3, 1.0, 1.5, 1e-4, 0.5), make(1, 2.0, 2.0, 1e-5, 1.2)}) {
    const ConstantsReport rep = carleman_constants(p);
    const ConstantsAudit audit = constants_audit(p);
    CHECK(audit.tildeC_upper >= rep.tilde->hatC);
    CHECK(audit.tilde_alpha0_upper >= rep.tilde->hat_alpha0);
    // the interval is tight: a few ulps, not orders of magnitude
    CHECK(audit.tildeC_upper <= rep.tilde->hatC * (1 + 1e-10));
    CHECK(audit.tilde_alpha0_upper <= rep.tilde->hat_alpha0 * (1 + 1e-10));
  }
}

TEST_CASE("theorem constants switch on lower-order terms") {
  const ConstantsReport off = carleman_constants(make(2, 1.0, 1.0, 0.0, 1.0));
  CHECK(*off.C_theorem == off.tilde->hatC);
  CHECK(*off.alpha0_theorem == off.tilde->hat_alpha0);
  const ConstantsReport on = carleman_constants(make(2, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0));
  CHECK(*on.C_theorem == *on.C_final);
  CHECK(*on.C_final == doctest::Approx(6.0 * on.tilde->hatC).epsilon(1e-15));
}
