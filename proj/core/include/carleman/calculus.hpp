#ifndef CARLEMAN_CALCULUS_HPP
#define CARLEMAN_CALCULUS_HPP

#include <cstdint>
#include <vector>

#include "carleman/params.hpp"
#include "carleman/test_function.hpp"
#include "carleman/weight.hpp"

namespace carleman {

enum class GKind { Sigma, W };

/// Pointwise objects built from a scalar g in {sigma, w} and the field:
///   F_g = -g L0 g / (grad g . A grad g) - 1
///   h_g = g A grad g / (grad g . A grad g)
///   D(h_g)_{ij} = d_i (h_g)_j
///   M_g = -F_g A / 2 + div(h_g o A) / 2 - (A D(h_g) + [A D(h_g)]^T) / 2
struct DiffObjects {
  double g_val = 0;
  Vec grad_g;
  double quad_g = 0;   // grad g . A grad g
  double L0_g = 0;
  double F_g = 0;
  Vec h_g;
  Mat Dh_g;
  Mat div_hA;          // entrywise div of (h_g o A)
  Mat M_g;

  double F_sigma = 0;      // F for g = sigma under the full field
  double F_sigma_0 = 0;    // same with A frozen at A0 (equals d-2 analytically)
  double F_w = 0;
  double B_sigma = 0;      // F_sigma - F_sigma_0
  double L0_psi_sigma = 0; // L0 applied to psi(sigma) = e^{mu sigma}
};

/// -div(A grad u) at x from the (plain) jet of u.
complexd apply_L0(const CoefficientField& field, const CJet& u, const Vec& x);
complexd apply_L0(const CoefficientField& field, const TestFunction& u, const Vec& x);

/// L u = L0 u + b . grad u + c u
complexd apply_L(const CoefficientField& field, const CJet& u, const Vec& x);
complexd apply_L(const CoefficientField& field, const TestFunction& u, const Vec& x);

/// All objects at x for the requested g. Throws on the degenerate point
/// (grad g . A grad g below 1e-14, only possible at x = 0). Derivatives are
/// analytic for every supported family.
DiffObjects diff_objects(const CoefficientField& field, const WeightFunction& weight,
                         const Vec& x, GKind g);

/// D_f = w grad f . A grad w / (grad w . A grad w) + f F_w / 2 at x.
double D_f_value(const CoefficientField& field, const WeightFunction& weight,
                 const TestFunction& f, const Vec& x);

/// grad f minus its A-projection onto grad w:
/// tilde_grad = grad f - (grad w grad w^T / (grad w . A grad w)) A grad f.
Vec tilde_grad(const Vec& grad_f, const Vec& grad_w, const Mat& A);

struct IdentityReport {
  int n_points = 0;
  // max relative residuals of the five relations
  double res_Mw_decomposition = 0;  // M_w = psi M_sigma + sigma psi' [A - A P A]
  double res_Msigma0 = 0;           // M_sigma^{A0} = 0
  double res_Msigma_grad = 0;       // M_sigma grad sigma = 0
  double res_Fw_decomposition = 0;  // F_w = psi F_sigma - sigma psi'
  double res_Fsigma0 = 0;           // F_sigma^{A0} = d - 2
  double max_residual = 0;
  double symmetry_residual = 0;     // worst M_g asymmetry, scale-relative
  double tolerance = 1e-7;
  bool pass = false;
};

/// Residuals of the five relations at every point; pass iff max < tol.
/// `psi_scale` perturbs psi (fault injection: 1.01 must break the identity).
IdentityReport check_lemma31(const CoefficientField& field, const WeightFunction& weight,
                             const std::vector<Vec>& points, double tolerance = 1e-7,
                             double psi_scale = 1.0);

struct BoundReport {
  int n_points = 0;
  int n_directions = 0;
  int violations = 0;
  // worst slack (bound - |quantity|, >= 0 when the bound holds) per estimate
  double slack_F_sigma = 0;   // |F_sigma - F_sigma_0| <= sigma C'_F
  double slack_M_sigma = 0;   // |xi^T M_sigma xi| <= sigma C_M xi^T A xi
  double slack_F_w = 0;       // |F_w| <= C_F
  double slack_L0_psi = 0;    // |L0 psi(sigma)| <= C_psi / sigma
  bool pass = false;
};

/// The four quantitative bounds at every point, 16 random directions per
/// point plus the extremal eigendirections of M_sigma at 1% of points.
/// Stated at rho = 1; the weight is rebuilt internally at unit radius.
BoundReport check_prop32(const CoefficientField& field, double mu,
                         const std::vector<Vec>& points, int n_directions,
                         double theta1, double theta2, std::uint64_t seed = 1);

/// Points uniform in the annulus 0.05 <= |x| <= 0.95 (unit-scale checks).
std::vector<Vec> sample_annulus_points(int d, int n, std::uint64_t seed,
                                       double r_in = 0.05, double r_out = 0.95);

/// Scaled jet of f = w^{-alpha} u with the factor w^{-alpha} e^{log_scale}
/// pulled out; exact chain-rule transform of the scaled jet of u.
CJet conjugated_jet_scaled(const CJet& u, const WeightFunction& weight, const Vec& x,
                           double alpha);

} // namespace carleman

#endif
