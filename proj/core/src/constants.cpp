#include "carleman/constants.hpp"

#include <cmath>
#include <stdexcept>

#include "carleman/weight.hpp"

namespace carleman {

namespace {

constexpr double kE = 2.718281828459045235360287471353;

// Closed intervals with outward rounding; enough for the constant chain,
// where everything is positive except the C_mu subtraction.
struct Ival {
  double lo, hi;

  static Ival exact(double v) { return {v, v}; }

  Ival operator+(const Ival& o) const { return out(lo + o.lo, hi + o.hi); }
  Ival operator-(const Ival& o) const { return out(lo - o.hi, hi - o.lo); }

  Ival operator*(const Ival& o) const {
    const double c[4] = {lo * o.lo, lo * o.hi, hi * o.lo, hi * o.hi};
    double mn = c[0], mx = c[0];
    for (double v : c) { mn = std::min(mn, v); mx = std::max(mx, v); }
    return out(mn, mx);
  }

  Ival operator/(const Ival& o) const {
    if (o.lo <= 0.0 && o.hi >= 0.0) throw std::domain_error("interval division by zero");
    const double c[4] = {lo / o.lo, lo / o.hi, hi / o.lo, hi / o.hi};
    double mn = c[0], mx = c[0];
    for (double v : c) { mn = std::min(mn, v); mx = std::max(mx, v); }
    return out(mn, mx);
  }

  static Ival out(double a, double b) {
    return {std::nextafter(a, -1.0 / 0.0), std::nextafter(b, 1.0 / 0.0)};
  }
};

Ival iexp(const Ival& x) { return Ival::out(std::exp(x.lo), std::exp(x.hi)); }
Ival isqrt(const Ival& x) { return Ival::out(std::sqrt(x.lo), std::sqrt(x.hi)); }
Ival imax(const Ival& a, const Ival& b) { return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)}; }
Ival ipow(const Ival& x, double e) {  // x > 0, e >= 0
  return Ival::out(std::pow(x.lo, e), std::pow(x.hi, e));
}

struct ChainIval {
  Ival hatC, hat_alpha0;
};

// Mirrors hat_chain in interval arithmetic.
ChainIval hat_chain_ival(int d, double theta1v, double theta2v, double muv) {
  const Ival dd = Ival::exact(static_cast<double>(d));
  const Ival t1 = Ival::exact(theta1v);
  const Ival t2 = Ival::exact(theta2v);
  const Ival mu = Ival::exact(muv);
  const Ival one = Ival::exact(1.0);
  const Ival st1 = isqrt(t1);
  const Ival e_mu_st1 = iexp(mu * st1);
  const Ival e_2mu_st1 = iexp(Ival::exact(2.0) * mu * st1);

  const Ival CFp = Ival::exact(3.0) * dd * ipow(t1, 3.5) * t2;
  const Ival CF = e_mu_st1 * (st1 * (CFp + mu) + Ival::exact(std::fabs(static_cast<double>(d) - 2.0)));
  const Ival CM = Ival::exact(11.0) * dd * ipow(t1, 5.5) * t2;
  const Ival Cpsi = mu * e_mu_st1 * t1 * t1 * (st1 * (CFp + mu) + dd - one);
  const Ival Cmu = mu - Ival::exact(3.0) * CM;
  if (Cmu.lo <= 0.0) throw std::domain_error("constants_audit: inadmissible mu");

  const Ival s = st1 * mu;
  Ival m1;
  if (s.hi <= 1.0) m1 = iexp(s);
  else if (s.lo >= 1.0) m1 = Ival::out(kE, kE) * s;
  else m1 = imax(iexp(s), Ival::out(kE, kE) * s);

  const Ival c0 = (one / e_2mu_st1) / (t1 * m1 * t1 * m1);
  const Ival K = imax(dd * Cpsi, Ival::exact(6.0) * mu * m1 * e_mu_st1 * t1 * t1);
  const Ival t1c = K * ipow(t1, 2.5) * m1 * m1 * e_2mu_st1 / Ival::exact(8.0);
  const Ival alpha1 = K * ipow(t1, 4.5) * m1 * m1 * e_2mu_st1;
  const Ival p = Cmu * c0;
  const Ival q = Cmu * CF * c0 + K * (t1c + st1 / Ival::exact(2.0));
  const Ival r = K * (one + CF * CF * t1 * t1 / Ival::exact(2.0));
  const Ival qp = q / p;
  const Ival alpha2 = qp + isqrt(qp * qp + Ival::exact(2.0) * r / p);
  const Ival K1 = K / Ival::exact(2.0) + t1 * m1 * t1 * m1 * e_2mu_st1;
  const Ival K5 = Cmu * c0 / Ival::exact(2.0);
  return {K1 / K5, imax(alpha1, alpha2)};
}

} // namespace

PropConstants prop_constants(int d, double theta1, double theta2, double mu) {
  PropConstants c;
  const double st1 = std::sqrt(theta1);
  const double e_mu_st1 = std::exp(mu * st1);
  c.C_F_prime = 3.0 * d * std::pow(theta1, 3.5) * theta2;
  c.C_F = e_mu_st1 * (st1 * (c.C_F_prime + mu) + std::fabs(static_cast<double>(d) - 2.0));
  c.C_M = 11.0 * d * std::pow(theta1, 5.5) * theta2;
  c.C_psi = mu * e_mu_st1 * theta1 * theta1 * (st1 * (c.C_F_prime + mu) + d - 1.0);
  c.C_mu = mu - 3.0 * c.C_M;
  return c;
}

ChainConstants hat_chain(int d, double theta1, double theta2_eff, double mu) {
  ChainConstants ch;
  ch.theta1 = theta1;
  ch.theta2_eff = theta2_eff;
  ch.mu = mu;
  ch.prop = prop_constants(d, theta1, theta2_eff, mu);
  if (ch.prop.C_mu <= 0.0) throw std::domain_error("hat_chain: inadmissible mu (C_mu <= 0)");
  ch.mu1_val = mu1(theta1, mu);

  const double st1 = std::sqrt(theta1);
  const double e_mu = std::exp(mu * st1);
  const double e_2mu = std::exp(2.0 * mu * st1);
  ch.c0 = std::exp(-2.0 * mu * st1) / ((theta1 * ch.mu1_val) * (theta1 * ch.mu1_val));
  ch.K = std::max(d * ch.prop.C_psi, 6.0 * mu * ch.mu1_val * e_mu * theta1 * theta1);
  ch.K_upper_estimate =
      6.0 * d * mu * ch.mu1_val * e_mu * theta1 * theta1 * (st1 * (ch.prop.C_F_prime + mu) + d);
  ch.t1 = 0.125 * ch.K * std::pow(theta1, 2.5) * ch.mu1_val * ch.mu1_val * e_2mu;
  ch.alpha1 = ch.K * std::pow(theta1, 4.5) * ch.mu1_val * ch.mu1_val * e_2mu;
  ch.p = ch.prop.C_mu * ch.c0;
  ch.q = ch.prop.C_mu * ch.prop.C_F * ch.c0 + ch.K * (ch.t1 + 0.5 * st1);
  ch.r = ch.K * (1.0 + 0.5 * ch.prop.C_F * ch.prop.C_F * theta1 * theta1);
  const double qp = ch.q / ch.p;
  ch.alpha2 = qp + std::sqrt(qp * qp + 2.0 * ch.r / ch.p);
  ch.K1 = 0.5 * ch.K + (theta1 * ch.mu1_val) * (theta1 * ch.mu1_val) * e_2mu;
  ch.K5 = 0.5 * ch.prop.C_mu * ch.c0;
  ch.hatC = ch.K1 / ch.K5;
  ch.alpha1_le_alpha2 = ch.alpha1 <= ch.alpha2;
  ch.hat_alpha0 = std::max(ch.alpha1, ch.alpha2);
  return ch;
}

RemarkBounds remark_upper_bounds(const ProblemParams& params) {
  params.validate();
  if (!params.admissible()) throw std::domain_error("remark_upper_bounds: inadmissible mu");
  const double d = params.d, t1 = params.theta1, mu = params.mu;
  const double rt2 = params.rho * params.theta2;
  const double st1 = std::sqrt(t1);
  const double m1 = mu1(t1, mu);
  const double C_mu = mu - 33.0 * d * std::pow(t1, 5.5) * rt2;
  RemarkBounds rb;
  rb.tildeC_upper = 2.0 * d * d * std::pow(t1, 8.0) * std::exp(4.0 * mu * st1) *
                    std::pow(m1, 4.0) * (3.0 * mu * mu + (9.0 * rt2 + 3.0) * mu + 1.0) / C_mu;
  rb.tilde_alpha0_upper = 11.0 * std::pow(d, 4.0) * std::pow(t1, 16.5) *
                          std::exp(6.0 * mu * st1) * std::pow(m1, 6.0) *
                          std::pow(3.0 * rt2 + mu + 1.0, 2.0) *
                          (1.0 + mu * (mu + 1.0) / C_mu);
  return rb;
}

double epsilon1(int d, double theta1, double theta2) {
  return 1.0 - 33.0 * d * (std::sqrt(static_cast<double>(d)) + 2.0) *
                   std::pow(theta1, 5.5) * (kE * std::pow(theta1, 1.5) + 1.0) * theta2;
}

ConstantsReport carleman_constants(const ProblemParams& params) {
  params.validate();
  ConstantsReport rep;
  rep.params = params;
  const double theta2_eff = params.rho * params.theta2;
  rep.prop_scaled = prop_constants(params.d, params.theta1, theta2_eff, params.mu);
  rep.mu1_val = mu1(params.theta1, params.mu);
  rep.admissibility_margin = params.admissibility_margin();
  rep.admissible = params.admissible();
  rep.epsilon1_val = epsilon1(params.d, params.theta1, params.theta2);
  rep.epsilon1_feasible = rep.epsilon1_val > 0.0;
  if (!rep.admissible) return rep;

  // hat constants at the raw theta2, when that reading is itself admissible
  if (params.mu - 33.0 * params.d * std::pow(params.theta1, 5.5) * params.theta2 > 0.0)
    rep.hat = hat_chain(params.d, params.theta1, params.theta2, params.mu);
  rep.tilde = hat_chain(params.d, params.theta1, theta2_eff, params.mu);

  const double C = 6.0 * rep.tilde->hatC;
  rep.C_final = C;
  rep.alpha0_final = std::max({rep.tilde->hat_alpha0,
                               C * params.rho * params.rho * params.b_inf * params.b_inf *
                                   std::pow(params.theta1, 1.5),
                               std::cbrt(C) * std::pow(params.rho, 4.0 / 3.0) *
                                   std::pow(params.c_inf, 2.0 / 3.0) * std::sqrt(params.theta1)});
  rep.remark = remark_upper_bounds(params);

  if (params.b_inf == 0.0 && params.c_inf == 0.0) {
    rep.C_theorem = rep.tilde->hatC;
    rep.alpha0_theorem = rep.tilde->hat_alpha0;
  } else {
    rep.C_theorem = rep.C_final;
    rep.alpha0_theorem = rep.alpha0_final;
  }
  return rep;
}

ConstantsAudit constants_audit(const ProblemParams& params) {
  params.validate();
  if (!params.admissible()) throw std::domain_error("constants_audit: inadmissible mu");
  ConstantsAudit a;
  const auto tilde = hat_chain_ival(params.d, params.theta1, params.rho * params.theta2, params.mu);
  a.tildeC_upper = tilde.hatC.hi;
  a.tilde_alpha0_upper = tilde.hat_alpha0.hi;
  if (params.mu - 33.0 * params.d * std::pow(params.theta1, 5.5) * params.theta2 > 0.0) {
    const auto hat = hat_chain_ival(params.d, params.theta1, params.theta2, params.mu);
    a.hat_present = true;
    a.hatC_upper = hat.hatC.hi;
    a.hat_alpha0_upper = hat.hat_alpha0.hi;
  }
  return a;
}

} // namespace carleman
