#ifndef CARLEMAN_PARAMS_HPP
#define CARLEMAN_PARAMS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "carleman/linalg.hpp"

namespace carleman {

/// The tuple every constant is computed from.
struct ProblemParams {
  int d = 2;
  double rho = 1.0;
  double theta1 = 1.0;   // ellipticity constant, >= 1
  double theta2 = 0.0;   // Lipschitz constant, >= 0
  double mu = 1.0;
  double b_inf = 0.0;
  double c_inf = 0.0;

  void validate() const;  // throws std::invalid_argument naming the field

  /// mu > 33 d theta1^{11/2} theta2 rho
  bool admissible() const;
  /// admissibility margin mu - 33 d theta1^{11/2} theta2 rho (may be <= 0)
  double admissibility_margin() const;
};

enum class FieldKind { Constant, Affine, Trig };
enum class LowerOrderKind { Zero, Constant, Trig };

/// Analytic symmetric matrix field A(x) on B_rho with certified ellipticity
/// and Lipschitz constants, plus lower-order coefficients b, c.
///
/// Families:
///   Constant  A(x) = A0
///   Affine    A(x) = A0 + sum_k x_k G_k           (G_k symmetric)
///   Trig      A(x) = A0 + sin(q.x) S              (S symmetric)
class CoefficientField {
 public:
  int dim() const { return dim_; }
  FieldKind kind() const { return kind_; }
  double rho() const { return rho_; }
  const Mat& A0() const { return A0_; }
  const Mat& A0_inv() const { return A0_inv_; }
  double certified_theta1() const { return certified_theta1_; }
  double certified_theta2() const { return certified_theta2_; }
  double b_inf() const { return b_inf_; }
  double c_inf() const { return c_inf_; }
  bool lower_order_zero() const {
    return b_kind_ == LowerOrderKind::Zero && c_kind_ == LowerOrderKind::Zero;
  }

  Mat A(const Vec& x) const;
  /// dA(x, k) = (d/dx_k) A(x), exact for all families.
  Mat dA(const Vec& x, int k) const;
  Vec b(const Vec& x) const;
  double c(const Vec& x) const;

  /// Same field with b = c = 0 (the pure second-order part).
  CoefficientField principal_part() const;

  friend CoefficientField make_constant_field(Mat A0, double rho);
  friend CoefficientField make_affine_field(Mat A0, std::vector<Mat> G, double rho);
  friend CoefficientField make_trig_field(Mat A0, Mat S, Vec q, double rho);
  friend CoefficientField with_lower_order(CoefficientField f,
                                           LowerOrderKind b_kind, Vec b_const, double b_inf,
                                           LowerOrderKind c_kind, double c_const, double c_inf);

 private:
  int dim_ = 0;
  FieldKind kind_ = FieldKind::Constant;
  double rho_ = 1.0;
  Mat A0_, A0_inv_;
  std::vector<Mat> G_;
  Mat S_;
  Vec q_;
  LowerOrderKind b_kind_ = LowerOrderKind::Zero;
  LowerOrderKind c_kind_ = LowerOrderKind::Zero;
  Vec b_const_;
  double c_const_ = 0.0;
  double b_inf_ = 0.0, c_inf_ = 0.0;
  double certified_theta1_ = 1.0, certified_theta2_ = 0.0;
};

/// Constant field; certificates computed exactly from the spectrum of A0.
CoefficientField make_constant_field(Mat A0, double rho);

/// Affine field A(x) = A0 + sum x_k G_k. Certificates come from dense
/// deterministic sampling of B_rho (grid of >= 32^d points plus sphere
/// directions) with a 1.001 outward rounding. Throws if A(x) loses positive
/// definiteness anywhere on the sample.
CoefficientField make_affine_field(Mat A0, std::vector<Mat> G, double rho);

/// Trig field A(x) = A0 + sin(q.x) S, same certification scheme.
CoefficientField make_trig_field(Mat A0, Mat S, Vec q, double rho);

/// Attach analytic lower-order coefficients with user-supplied sup-norm
/// certificates. Trig b: b_i(x) = b_inf sin(pi x_{(i+1) mod d}) / sqrt(d);
/// trig c: c(x) = c_inf cos(pi sum_i x_i).
CoefficientField with_lower_order(CoefficientField f,
                                  LowerOrderKind b_kind, Vec b_const, double b_inf,
                                  LowerOrderKind c_kind, double c_const, double c_inf);

struct AssumptionReport {
  int n_samples = 0;
  double worst_ellipticity = 0.0;   // max over samples of max(lam_max, 1/lam_min)
  double worst_lipschitz = 0.0;     // max over pairs of ||A(x)-A(y)||_inf / |x-y|
  bool ellipticity_ok = false;
  bool lipschitz_ok = false;
  bool pass = false;
};

/// Random-sample audit of Assumption (rho, theta1, theta2) against the
/// claimed constants in `params`. theta1 < 1 can never pass.
AssumptionReport verify_assumption(const CoefficientField& field,
                                   const ProblemParams& params,
                                   int n_samples, std::uint64_t seed = 1);

} // namespace carleman

#endif
