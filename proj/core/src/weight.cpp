#include "carleman/weight.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "carleman/rng.hpp"

namespace carleman {

namespace {

double integrand(double s) {
  // (1 - e^{-s})/s, continuous at 0
  if (s == 0.0) return 1.0;
  return -std::expm1(-s) / s;
}

// 15-point Kronrod extension of 7-point Gauss on [-1, 1] (QUADPACK qk15).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

void gk15(double a, double b, double& result, double& err) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double fc = integrand(c);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const double f1 = integrand(c - x), f2 = integrand(c + x);
    resk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  result = resk * h;
  err = std::fabs((resk - resg) * h);
}

double adaptive_gk(double a, double b, double abs_tol, int depth = 0) {
  double r, e;
  gk15(a, b, r, e);
  if (e <= abs_tol || depth >= 48) return r;
  const double m = 0.5 * (a + b);
  return adaptive_gk(a, m, 0.5 * abs_tol, depth + 1) +
         adaptive_gk(m, b, 0.5 * abs_tol, depth + 1);
}

double series(double z) {
  // sum_{k>=1} (-1)^{k+1} z^k / (k k!), terms alternate and shrink for z <= 1/2
  double term = z, sum = z;
  for (int k = 2; k <= 40; ++k) {
    term *= -z * (k - 1) / (static_cast<double>(k) * k);
    sum += term;
    if (std::fabs(term) < 1e-18) break;
  }
  return sum;
}

} // namespace

double phi_integral(double z, double abs_tol) {
  if (z < 0.0) throw std::invalid_argument("phi_integral: negative argument");
  if (z == 0.0) return 0.0;
  if (z <= 0.5) return series(z);
  return series(0.5) + adaptive_gk(0.5, z, abs_tol);
}

double phi(double r, double mu, double abs_tol) {
  if (r < 0.0) throw std::invalid_argument("phi: negative radius");
  if (r == 0.0) return 0.0;
  return r * std::exp(-phi_integral(mu * r, abs_tol));
}

double phi_log(double r, double mu) {
  return std::log(r) - phi_integral(mu * r);
}

double phi_prime(double r, double mu) {
  return std::exp(-phi_integral(mu * r) - mu * r);
}

double phi_second(double r, double mu) {
  if (r <= 0.0) return -2.0 * mu;  // continuous extension
  return -phi_prime(r, mu) * (-std::expm1(-mu * r) / r + mu);
}

double mu1(double theta1, double mu) {
  const double s = std::sqrt(theta1) * mu;
  const double e = 2.718281828459045235360287471353;
  return s <= 1.0 ? std::exp(s) : e * s;
}

WeightFunction::WeightFunction(Mat A0, double rho, double mu, double theta1)
    : A0_(std::move(A0)), rho_(rho), mu_(mu), theta1_(theta1),
      mu1_(carleman::mu1(theta1, mu)) {
  if (rho_ <= 0 || mu_ <= 0) throw std::invalid_argument("WeightFunction: rho, mu must be positive");
  if (theta1_ < 1.0) throw std::invalid_argument("WeightFunction: theta1 must be >= 1");
  if (!A0_.isApprox(A0_.transpose(), 1e-14)) throw std::invalid_argument("WeightFunction: A0 not symmetric");
  Eigen::LLT<Mat> llt(A0_);
  if (llt.info() != Eigen::Success) throw std::invalid_argument("WeightFunction: A0 not positive definite");
  A0_inv_ = llt.solve(Mat::Identity(A0_.rows(), A0_.cols()));
}

double WeightFunction::sigma(const Vec& x) const {
  return std::sqrt(std::max(0.0, x.dot(A0_inv_ * x)));
}

Vec WeightFunction::grad_sigma(const Vec& x) const {
  const double s = sigma(x);
  return (A0_inv_ * x) / s;
}

Mat WeightFunction::hess_sigma(const Vec& x) const {
  const double s = sigma(x);
  const Vec y = A0_inv_ * x;
  return A0_inv_ / s - (y * y.transpose()) / (s * s * s);
}

double WeightFunction::w(const Vec& x) const {
  return phi(scaled_sigma(x), mu_);
}

double WeightFunction::log_w(const Vec& x) const {
  const double s = scaled_sigma(x);
  if (s <= 0.0) return -std::numeric_limits<double>::infinity();
  return phi_log(s, mu_);
}

Vec WeightFunction::grad_w(const Vec& x) const {
  const double s = scaled_sigma(x);
  // grad of s(x) = sigma(x)/rho is A0^{-1} x / (rho^2 s)
  return phi_prime(s, mu_) * (A0_inv_ * x) / (rho_ * rho_ * s);
}

Mat WeightFunction::hess_w(const Vec& x) const {
  const double s = scaled_sigma(x);
  const Vec gs = (A0_inv_ * x) / (rho_ * rho_ * s);
  const Mat hs = A0_inv_ / (rho_ * rho_ * s) -
                 (A0_inv_ * x) * (x.transpose() * A0_inv_) / (std::pow(rho_, 4) * s * s * s);
  return phi_second(s, mu_) * (gs * gs.transpose()) + phi_prime(s, mu_) * hs;
}

SandwichReport check_sandwich(const WeightFunction& weight, int n_samples,
                              std::uint64_t seed, double mu1_claim) {
  SandwichReport rep;
  rep.n_samples = n_samples;
  const double m1 = mu1_claim > 0 ? mu1_claim : weight.mu1();
  const double rho = weight.rho();
  const double st1 = std::sqrt(weight.theta1());
  const double guard = 1e-12;
  rep.worst_lower_norm = rep.worst_lower = rep.worst_upper = rep.worst_upper_norm =
      std::numeric_limits<double>::infinity();
  CounterRng rng(seed, 0x5a5d);
  for (int i = 0; i < n_samples; ++i) {
    const Vec x = rng.ball_point(weight.dim(), rho * (1.0 - 1e-12));
    const double r = x.norm();
    if (r == 0.0) continue;
    const double sg = weight.sigma(x);
    const double wv = weight.w(x);
    const double m_ln = sg / (rho * m1) - r / (st1 * rho * m1);
    const double m_lo = wv - sg / (rho * m1);
    const double m_up = sg / rho - wv;
    const double m_un = st1 * r / rho - sg / rho;
    rep.worst_lower_norm = std::min(rep.worst_lower_norm, m_ln);
    rep.worst_lower = std::min(rep.worst_lower, m_lo);
    rep.worst_upper = std::min(rep.worst_upper, m_up);
    rep.worst_upper_norm = std::min(rep.worst_upper_norm, m_un);
    const double scale = std::max(wv, r / rho);
    if (m_ln < -guard * scale || m_lo < -guard * scale || m_up < -guard * scale ||
        m_un < -guard * scale)
      ++rep.violations;
  }
  rep.pass = rep.violations == 0;
  return rep;
}

} // namespace carleman
