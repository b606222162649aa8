#ifndef CARLEMAN_LOGSUM_HPP
#define CARLEMAN_LOGSUM_HPP

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

namespace carleman {

// Pairwise (tree) summation. Fixed association order, so the result depends
// only on the buffer contents, never on how work was distributed.
inline double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    // Kahan at the leaves.
    double s = 0.0, c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double y = v[i] - c;
      const double t = s + y;
      c = (t - s) - y;
      s = t;
    }
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

inline double pairwise_sum(const std::vector<double>& v) {
  return v.empty() ? 0.0 : pairwise_sum(v.data(), v.size());
}

// A possibly huge signed value, stored as sign * exp(log_abs). The integrals
// in the main inequality reach exp(1e6) and beyond, far outside double range.
struct LogValue {
  double log_abs = -std::numeric_limits<double>::infinity();
  double sign = 0.0;  // -1, 0, +1

  static LogValue zero() { return {}; }

  static LogValue from_value(double v) {
    if (v == 0.0) return {};
    return {std::log(std::fabs(v)), v > 0 ? 1.0 : -1.0};
  }

  static LogValue from_log(double lg, double sgn = 1.0) { return {lg, sgn}; }

  bool is_zero() const { return sign == 0.0; }

  // value if representable, +-inf/0 otherwise
  double value() const { return sign * std::exp(log_abs); }

  double log10_abs() const { return log_abs / 2.302585092994045684; }

  LogValue operator*(const LogValue& o) const {
    if (is_zero() || o.is_zero()) return {};
    return {log_abs + o.log_abs, sign * o.sign};
  }

  LogValue operator/(const LogValue& o) const {
    return {log_abs - o.log_abs, sign * o.sign};
  }

  LogValue operator+(const LogValue& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    const LogValue& a = (log_abs >= o.log_abs) ? *this : o;
    const LogValue& b = (log_abs >= o.log_abs) ? o : *this;
    const double m = a.sign + b.sign * std::exp(b.log_abs - a.log_abs);
    if (m == 0.0) return {};
    return {a.log_abs + std::log(std::fabs(m)), m > 0 ? 1.0 : -1.0};
  }

  LogValue operator-(const LogValue& o) const {
    LogValue n = o;
    n.sign = -n.sign;
    return *this + n;
  }

  LogValue scaled(double factor) const {  // multiply by a plain double
    if (factor == 0.0 || is_zero()) return {};
    return {log_abs + std::log(std::fabs(factor)), sign * (factor > 0 ? 1.0 : -1.0)};
  }

  LogValue pow(double e) const {
    if (is_zero()) return {};
    return {log_abs * e, 1.0};  // caller ensures sign > 0 for fractional powers
  }

  // mantissa in [1,10) plus unbounded decimal exponent, e.g. "3.14159e+4200000".
  std::string to_sci_string(int digits = 12) const {
    if (is_zero()) return "0";
    const double l10 = log10_abs();
    double e = std::floor(l10);
    double mant = std::pow(10.0, l10 - e);
    // guard against pow rounding to 10.0
    if (mant >= 10.0) { mant /= 10.0; e += 1.0; }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%.*fe%+.0f", sign < 0 ? "-" : "", digits, mant, e);
    return buf;
  }
};

// Accumulates sum of v_i * exp(s_i) with a running rescale. Addition order is
// the call order, so determinism reduces to feeding terms in a fixed order.
class ScaledAccumulator {
 public:
  void add(double log_scale, double v) {
    if (v == 0.0 || log_scale == -std::numeric_limits<double>::infinity()) return;
    if (!(log_scale <= m_)) {  // also catches the first term (m_ = -inf)
      sum_ *= std::exp(m_ - log_scale);
      m_ = log_scale;
      sum_ += v;
    } else {
      sum_ += v * std::exp(log_scale - m_);
    }
  }

  void merge(const ScaledAccumulator& o) {
    if (o.empty()) return;
    add(o.m_, o.sum_);
  }

  bool empty() const { return m_ == -std::numeric_limits<double>::infinity(); }

  LogValue result() const {
    if (empty() || sum_ == 0.0) return LogValue::zero();
    return LogValue{m_ + std::log(std::fabs(sum_)), sum_ > 0 ? 1.0 : -1.0};
  }

 private:
  double m_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
};

} // namespace carleman

#endif
