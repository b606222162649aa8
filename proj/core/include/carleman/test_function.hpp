#ifndef CARLEMAN_TEST_FUNCTION_HPP
#define CARLEMAN_TEST_FUNCTION_HPP

#include <limits>
#include <string>

#include "carleman/linalg.hpp"

namespace carleman {

/// Second-order jet with the common factor exp(log_scale) pulled out, so the
/// bump's double-exponential tails never underflow. The actual values are
/// e^{log_scale} * (val, grad, hess); log_scale = -inf outside the support.
struct CJet {
  complexd val{0.0, 0.0};
  CVec grad;
  CMat hess;
  double log_scale = 0.0;

  static CJet zero(int d) {
    CJet j;
    j.grad = CVec::Zero(d);
    j.hess = CMat::Zero(d, d);
    j.log_scale = -std::numeric_limits<double>::infinity();
    return j;
  }

  bool outside() const { return log_scale == -std::numeric_limits<double>::infinity(); }

  complexd value() const { return outside() ? complexd{0, 0} : std::exp(log_scale) * val; }
  CVec gradient() const { return outside() ? CVec(CVec::Zero(grad.size())) : CVec(std::exp(log_scale) * grad); }
  CMat hessian() const { return outside() ? CMat(CMat::Zero(hess.rows(), hess.cols())) : CMat(std::exp(log_scale) * hess); }
};

enum class Modulation { None, PlaneWave, Cosine, Sine, Linear };

/// Smooth compactly supported function on the annulus r0 <= |x| <= r1:
///   u(x) = beta(|x|) * m(x)
/// with beta the exp(-1/(1-s^2)) profile rescaled to (r0, r1) and m one of
///   1, e^{i k.x}, cos(k.x), sin(k.x), a0 + a.x.
/// u and all derivatives vanish identically outside (r0, r1).
class TestFunction {
 public:
  TestFunction(int dim, double r0, double r1);

  static TestFunction radial_bump(int dim, double r0, double r1);
  static TestFunction plane_wave_bump(int dim, double r0, double r1, Vec k);
  static TestFunction cosine_bump(int dim, double r0, double r1, Vec k);
  static TestFunction sine_bump(int dim, double r0, double r1, Vec k);
  static TestFunction linear_bump(int dim, double r0, double r1, double a0, Vec a);

  int dim() const { return dim_; }
  double r0() const { return r0_; }
  double r1() const { return r1_; }
  Modulation modulation() const { return mod_; }
  bool is_real() const { return mod_ != Modulation::PlaneWave; }
  /// modulation factor identically one (k = 0 plane wave / cosine, plain
  /// radial, constant-1 linear); such functions take the same evaluation
  /// path as the unmodulated bump bit for bit
  bool trivially_modulated() const;

  /// real part / imaginary part as test functions of their own
  TestFunction real_part() const;
  TestFunction imag_part() const;

  /// log of the radial profile beta(t); -inf outside (r0, r1)
  double log_profile(double t) const;

  /// scaled jet at x (log_scale carries log beta)
  CJet jet_scaled(const Vec& x) const;

  /// plain jet; tails underflow gracefully to zero
  CJet jet(const Vec& x) const;

 private:
  int dim_;
  double r0_, r1_;
  Modulation mod_ = Modulation::None;
  Vec k_;       // wave vector for PlaneWave/Cosine/Sine
  double a0_ = 0.0;
  Vec a_;       // linear modulation
};

} // namespace carleman

#endif
