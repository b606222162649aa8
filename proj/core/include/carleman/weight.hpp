#ifndef CARLEMAN_WEIGHT_HPP
#define CARLEMAN_WEIGHT_HPP

#include <cstdint>
#include <string>

#include "carleman/linalg.hpp"

namespace carleman {

/// integral 0..z of (1 - e^{-s})/s ds. Alternating series for z <= 1/2,
/// adaptive Gauss-Kronrod refinement beyond; the integrand is extended by
/// continuity (value 1) at s = 0.
double phi_integral(double z, double abs_tol = 1e-14);

/// phi(r) = r * exp(-phi_integral(mu r)); strictly increasing, phi(r) <= r.
double phi(double r, double mu, double abs_tol = 1e-14);

/// log phi(r) for r > 0, evaluated without cancellation.
double phi_log(double r, double mu);

/// phi'(r) = phi(r) e^{-mu r} / r = exp(-phi_integral(mu r) - mu r).
double phi_prime(double r, double mu);

/// phi''(r) = -phi'(r) [ (1 - e^{-mu r})/r + mu ].
double phi_second(double r, double mu);

/// mu_1 = e^{sqrt(theta1) mu} if sqrt(theta1) mu <= 1, else e sqrt(theta1) mu.
double mu1(double theta1, double mu);

/// Carleman weight w(x) = phi(sigma(x / rho)) with sigma the A0-anisotropic
/// norm. Evaluation is pure; objects are cheap to copy.
class WeightFunction {
 public:
  WeightFunction(Mat A0, double rho, double mu, double theta1);

  int dim() const { return static_cast<int>(A0_.rows()); }
  double rho() const { return rho_; }
  double mu() const { return mu_; }
  double theta1() const { return theta1_; }
  double mu1() const { return mu1_; }
  const Mat& A0() const { return A0_; }
  const Mat& A0_inv() const { return A0_inv_; }

  /// sigma(x) = (x^T A0^{-1} x)^{1/2} at the *unscaled* point.
  double sigma(const Vec& x) const;
  Vec grad_sigma(const Vec& x) const;
  Mat hess_sigma(const Vec& x) const;

  /// s(x) = sigma(x / rho), the argument fed to phi.
  double scaled_sigma(const Vec& x) const { return sigma(x) / rho_; }

  double w(const Vec& x) const;
  double log_w(const Vec& x) const;   // -inf at x = 0
  Vec grad_w(const Vec& x) const;
  Mat hess_w(const Vec& x) const;

 private:
  Mat A0_, A0_inv_;
  double rho_, mu_, theta1_, mu1_;
};

struct SandwichReport {
  int n_samples = 0;
  int violations = 0;
  // worst signed margins (>= 0 means the inequality held), one per link of
  //   theta1^{-1/2}|x|/(rho mu1) <= sigma/(rho mu1) <= w <= sigma/rho <= theta1^{1/2}|x|/rho
  double worst_lower_norm = 0, worst_lower = 0, worst_upper = 0, worst_upper_norm = 0;
  bool pass = false;
};

/// Samples n points uniformly in B_rho and checks the two-sided weight bounds.
/// `mu1_claim` overrides the computed mu1 (fault injection in tests).
SandwichReport check_sandwich(const WeightFunction& weight, int n_samples,
                              std::uint64_t seed = 1, double mu1_claim = 0.0);

} // namespace carleman

#endif
