#ifndef CARLEMAN_CONSTANTS_HPP
#define CARLEMAN_CONSTANTS_HPP

#include <optional>

#include "carleman/params.hpp"

namespace carleman {

/// The four quantitative bounds' constants plus C_mu = mu - 3 C_M.
struct PropConstants {
  double C_F_prime = 0;  // 3 d theta1^{7/2} theta2
  double C_F = 0;        // e^{mu sqrt(theta1)} ( sqrt(theta1)(C'_F + mu) + |d-2| )
  double C_M = 0;        // 11 d theta1^{11/2} theta2
  double C_psi = 0;      // mu e^{mu sqrt(theta1)} theta1^2 ( sqrt(theta1)(C'_F + mu) + d-1 )
  double C_mu = 0;       // mu - 3 C_M
};

PropConstants prop_constants(int d, double theta1, double theta2, double mu);

/// The alpha-polynomial coefficients and derived constants of the unit-scale
/// estimate, for one effective Lipschitz constant.
struct ChainConstants {
  double theta1 = 1, theta2_eff = 0, mu = 1;
  PropConstants prop;
  double mu1_val = 0;
  double c0 = 0;          // e^{-2 mu sqrt(theta1)} / (theta1 mu1)^2
  double K = 0;           // max{ d C_psi, 6 mu mu1 e^{mu sqrt(theta1)} theta1^2 }
  double K_upper_estimate = 0;
  double t1 = 0;          // K theta1^{5/2} mu1^2 e^{2 mu sqrt(theta1)} / 8
  double alpha1 = 0;      // K theta1^{9/2} mu1^2 e^{2 mu sqrt(theta1)}
  double p = 0, q = 0, r = 0;
  double alpha2 = 0;      // q/p + sqrt(q^2/p^2 + 2r/p)
  double K1 = 0;          // K/2 + (theta1 mu1)^2 e^{2 mu sqrt(theta1)}
  double K5 = 0;          // C_mu c0 / 2
  double hatC = 0;        // K1 / K5
  double hat_alpha0 = 0;  // max{alpha1, alpha2}
  bool alpha1_le_alpha2 = false;

  double K2(double alpha) const { return p * alpha * alpha * alpha - q * alpha * alpha - r * alpha; }
  double K3(double alpha) const { return 2.0 * c0 * alpha * alpha - 2.0 * K * std::pow(theta1, 2.5) * alpha; }
  double K4(double alpha) const { return prop.C_mu * alpha; }
};

/// Computed with C_mu > 0; throws std::domain_error otherwise.
ChainConstants hat_chain(int d, double theta1, double theta2_eff, double mu);

struct RemarkBounds {
  double tildeC_upper = 0;
  double tilde_alpha0_upper = 0;
};

/// Closed-form upper bounds for tildeC / tilde_alpha0; throws on inadmissible mu.
RemarkBounds remark_upper_bounds(const ProblemParams& params);

/// epsilon_1 = 1 - 33 d (sqrt(d)+2) theta1^{11/2} (e theta1^{3/2} + 1) theta2.
double epsilon1(int d, double theta1, double theta2);

/// Everything derived from one parameter tuple. Downstream constants are
/// absent (not infinite) when mu is inadmissible.
struct ConstantsReport {
  ProblemParams params;
  PropConstants prop_scaled;  // at the effective Lipschitz constant rho*theta2
  double mu1_val = 0;
  bool admissible = false;
  double admissibility_margin = 0;

  std::optional<ChainConstants> hat;    // at theta2 (unit radius reading)
  std::optional<ChainConstants> tilde;  // at rho*theta2; the theorem's constants
  std::optional<double> C_final;        // 6 tildeC
  std::optional<double> alpha0_final;   // max{tilde_alpha0, C rho^2 |b|^2 t1^{3/2}, C^{1/3} rho^{4/3} |c|^{2/3} sqrt(t1)}
  std::optional<RemarkBounds> remark;

  // constants the inequality is checked with: (tildeC, tilde_alpha0) when
  // b = c = 0, else (C_final, alpha0_final)
  std::optional<double> C_theorem, alpha0_theorem;

  double epsilon1_val = 0;
  bool epsilon1_feasible = false;
};

ConstantsReport carleman_constants(const ProblemParams& params);

/// Directed-rounding replay: upper bounds on the computed constants, every
/// elementary step rounded outward. Comparing these against the closed-form
/// bounds cannot falsely pass.
struct ConstantsAudit {
  bool hat_present = false;  // the unit-radius reading may be inadmissible
  double hatC_upper = 0;
  double hat_alpha0_upper = 0;
  double tildeC_upper = 0;
  double tilde_alpha0_upper = 0;
};

ConstantsAudit constants_audit(const ProblemParams& params);

} // namespace carleman

#endif
