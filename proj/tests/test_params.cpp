#include <doctest.h>

#include <cmath>

#include "carleman/params.hpp"
#include "carleman/rng.hpp"

using namespace carleman;

namespace {

double row_sum_norm(const Mat& M) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < M.rows(); ++i) best = std::max(best, M.row(i).cwiseAbs().sum());
  return best;
}

} // namespace

TEST_CASE("params validation") {
  ProblemParams p;
  CHECK_NOTHROW(p.validate());
  p.theta1 = 0.5;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.theta1 = 1.0;
  p.mu = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("admissibility") {
  ProblemParams p;
  p.d = 2;
  p.theta1 = 1.0;
  p.theta2 = 0.0;
  p.mu = 1.0;
  CHECK(p.admissible());
  p.theta2 = 0.02;
  // threshold 33 * 2 * 0.02 = 1.32 > mu = 1
  CHECK_FALSE(p.admissible());
  CHECK(p.admissibility_margin() == doctest::Approx(1.0 - 1.32).epsilon(1e-12));
}

TEST_CASE("constant field certificates are exact") {
  const CoefficientField id3 = make_constant_field(Mat::Identity(3, 3), 1.0);
  CHECK(id3.certified_theta1() == 1.0);
  CHECK(id3.certified_theta2() == 0.0);

  Mat A0(2, 2);
  A0 << 2, 0, 0, 0.5;
  const CoefficientField f = make_constant_field(A0, 1.0);
  CHECK(f.certified_theta1() == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("affine field with zero slopes reduces to the constant certificate") {
  std::vector<Mat> G(3, Mat::Zero(3, 3));
  const CoefficientField f = make_affine_field(Mat::Identity(3, 3), G, 1.0);
  CHECK(f.certified_theta1() == 1.0);
  CHECK(f.certified_theta2() == 0.0);
}

TEST_CASE("affine field theta2 certificate vs brute-force pairwise quotients") {
  std::vector<Mat> G(2, Mat::Zero(2, 2));
  G[0] = 0.1 * Mat::Identity(2, 2);
  const CoefficientField f = make_affine_field(Mat::Identity(2, 2), G, 1.0);
  // directional derivative sup is 0.1, certificate rounds outward
  CHECK(f.certified_theta2() >= 0.1);
  CHECK(f.certified_theta2() <= 0.1 * 1.01);

  CounterRng rng(3, 9);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Vec x = rng.ball_point(2, 1.0);
    const Vec y = rng.ball_point(2, 1.0);
    const double dist = (x - y).norm();
    if (dist < 1e-12) continue;
    worst = std::max(worst, row_sum_norm(f.A(x) - f.A(y)) / dist);
  }
  CHECK(worst <= f.certified_theta2());
}

TEST_CASE("affine field rejects loss of positive definiteness") {
  std::vector<Mat> G(2, Mat::Zero(2, 2));
  G[0] = 2.0 * Mat::Identity(2, 2);  // A(x) = (1 + 2 x_1) I dips below 0 on B_1
  CHECK_THROWS_AS(make_affine_field(Mat::Identity(2, 2), G, 1.0), std::invalid_argument);
}

TEST_CASE("field eigenvalues stay inside the certified band") {
  std::vector<Mat> G(2, Mat::Zero(2, 2));
  G[0] << 0.06, 0.02, 0.02, -0.03;
  G[1] << 0.01, 0.04, 0.04, 0.02;
  const CoefficientField f = make_affine_field(Mat::Identity(2, 2), G, 1.0);
  CounterRng rng(17, 5);
  for (int i = 0; i < 2000; ++i) {
    const Vec x = rng.ball_point(2, 1.0);
    Eigen::SelfAdjointEigenSolver<Mat> es(f.A(x), Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() >= 1.0 / f.certified_theta1() - 1e-12);
    CHECK(es.eigenvalues().maxCoeff() <= f.certified_theta1() + 1e-12);
  }
}

TEST_CASE("A(0) equals A0 exactly") {
  Mat A0(2, 2);
  A0 << 1.7, 0.2, 0.2, 0.9;
  std::vector<Mat> G(2, Mat::Zero(2, 2));
  G[0] = 0.05 * Mat::Identity(2, 2);
  const CoefficientField f = make_affine_field(A0, G, 1.0);
  CHECK((f.A(Vec::Zero(2)) - A0).norm() == 0.0);
}

TEST_CASE("trig field derivative is exact") {
  Mat S(2, 2);
  S << 0.05, 0.01, 0.01, 0.03;
  Vec q(2);
  q << 1.0, 2.0;
  const CoefficientField f = make_trig_field(Mat::Identity(2, 2), S, q, 1.0);
  CounterRng rng(23, 6);
  for (int i = 0; i < 50; ++i) {
    const Vec x = rng.ball_point(2, 0.9);
    for (int k = 0; k < 2; ++k) {
      Vec e = Vec::Zero(2);
      e[k] = 1e-6;
      const Mat fd = (f.A(x + e) - f.A(x - e)) / 2e-6;
      CHECK((f.dA(x, k) - fd).norm() < 1e-8);
    }
  }
}

TEST_CASE("verify_assumption") {
  const CoefficientField id = make_constant_field(Mat::Identity(2, 2), 1.0);
  ProblemParams p;
  p.d = 2;

  SUBCASE("identity field passes with theta1 = 1, theta2 = 0") {
    p.theta1 = 1.0;
    p.theta2 = 0.0;
    CHECK(verify_assumption(id, p, 1000).pass);
  }
  SUBCASE("theta1 < 1 can never pass") {
    p.theta1 = 0.5;
    CHECK_FALSE(verify_assumption(id, p, 100).pass);
  }
  SUBCASE("affine field with certified constants passes on 1e4 samples") {
    std::vector<Mat> G(2, Mat::Zero(2, 2));
    G[0] = 0.1 * Mat::Identity(2, 2);
    const CoefficientField f = make_affine_field(Mat::Identity(2, 2), G, 1.0);
    p.theta1 = f.certified_theta1();
    p.theta2 = f.certified_theta2();
    CHECK(verify_assumption(f, p, 10000).pass);
  }
  SUBCASE("n_samples must be positive") {
    CHECK_THROWS_AS(verify_assumption(id, p, 0), std::invalid_argument);
  }
}

TEST_CASE("lower-order coefficients") {
  CoefficientField f = make_constant_field(Mat::Identity(2, 2), 1.0);
  Vec bv(2);
  bv << 0.6, 0.8;
  f = with_lower_order(std::move(f), LowerOrderKind::Constant, bv, 0.0,
                       LowerOrderKind::Constant, -2.0, 0.0);
  CHECK(f.b_inf() == doctest::Approx(1.0).epsilon(1e-15));  // |b| certificate
  CHECK(f.c_inf() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK((f.b(Vec::Zero(2)) - bv).norm() == 0.0);
  CHECK(f.c(Vec::Zero(2)) == -2.0);

  CoefficientField g = with_lower_order(make_constant_field(Mat::Identity(2, 2), 1.0),
                                        LowerOrderKind::Trig, Vec(), 1.0,
                                        LowerOrderKind::Trig, 0.0, 1.0);
  CounterRng rng(31, 7);
  for (int i = 0; i < 2000; ++i) {
    const Vec x = rng.ball_point(2, 1.0);
    CHECK(g.b(x).norm() <= 1.0 + 1e-12);
    CHECK(std::fabs(g.c(x)) <= 1.0 + 1e-12);
  }
  // principal part drops b, c
  const CoefficientField pp = g.principal_part();
  CHECK(pp.lower_order_zero());
  CHECK(pp.b(Vec::Zero(2)).norm() == 0.0);
}
