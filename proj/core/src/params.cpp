#include "carleman/params.hpp"

#include <cmath>
#include <stdexcept>

#include "carleman/rng.hpp"

namespace carleman {

namespace {

constexpr double kPi = 3.141592653589793238462643383279503;

double row_sum_norm(const Mat& M) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < M.rows(); ++i) best = std::max(best, M.row(i).cwiseAbs().sum());
  return best;
}

Mat inverse_spd(const Mat& A, const char* what) {
  Eigen::LLT<Mat> llt(A);
  if (llt.info() != Eigen::Success) throw std::invalid_argument(std::string(what) + ": matrix not positive definite");
  return llt.solve(Mat::Identity(A.rows(), A.cols()));
}

void require_symmetric(const Mat& M, const char* what) {
  if (M.rows() != M.cols() || !M.isApprox(M.transpose(), 1e-13))
    throw std::invalid_argument(std::string(what) + ": matrix not symmetric");
}

// Deterministic direction set: axes plus a low-discrepancy sphere sample.
std::vector<Vec> direction_sample(int d, int n) {
  std::vector<Vec> dirs;
  for (int i = 0; i < d; ++i) {
    Vec e = Vec::Zero(d);
    e[i] = 1.0;
    dirs.push_back(e);
    dirs.push_back(-e);
  }
  CounterRng rng(0x8d1f, 0x11);
  for (int i = 0; i < n; ++i) dirs.push_back(rng.unit_vector(d));
  return dirs;
}

// Grid of >= 32^d points on B_rho plus boundary directions.
std::vector<Vec> certification_points(int d, double rho) {
  std::vector<Vec> pts;
  const int n = 32;
  std::vector<int> idx(d, 0);
  for (;;) {
    Vec x(d);
    for (int i = 0; i < d; ++i) x[i] = -rho + 2.0 * rho * (idx[i] + 0.5) / n;
    if (x.norm() <= rho) pts.push_back(x);
    int i = 0;
    while (i < d && ++idx[i] == n) idx[i++] = 0;
    if (i == d) break;
  }
  for (const Vec& v : direction_sample(d, 256)) pts.push_back(rho * v);
  return pts;
}

struct EllipticityExtrema {
  double lam_min, lam_max;
};

template <class FieldEval>
EllipticityExtrema scan_ellipticity(int d, double rho, FieldEval&& eval_A) {
  EllipticityExtrema ex{std::numeric_limits<double>::infinity(), 0.0};
  for (const Vec& x : certification_points(d, rho)) {
    Eigen::SelfAdjointEigenSolver<Mat> es(eval_A(x), Eigen::EigenvaluesOnly);
    ex.lam_min = std::min(ex.lam_min, es.eigenvalues().minCoeff());
    ex.lam_max = std::max(ex.lam_max, es.eigenvalues().maxCoeff());
    if (ex.lam_min <= 1e-12)
      throw std::invalid_argument("field loses positive definiteness on B_rho");
  }
  return ex;
}

} // namespace

void ProblemParams::validate() const {
  if (d < 1) throw std::invalid_argument("params.d must be >= 1");
  if (!(rho > 0)) throw std::invalid_argument("params.rho must be > 0");
  if (!(theta1 >= 1)) throw std::invalid_argument("params.theta1 must be >= 1");
  if (!(theta2 >= 0)) throw std::invalid_argument("params.theta2 must be >= 0");
  if (!(mu > 0)) throw std::invalid_argument("params.mu must be > 0");
  if (!(b_inf >= 0)) throw std::invalid_argument("params.b_inf must be >= 0");
  if (!(c_inf >= 0)) throw std::invalid_argument("params.c_inf must be >= 0");
}

double ProblemParams::admissibility_margin() const {
  return mu - 33.0 * d * std::pow(theta1, 5.5) * theta2 * rho;
}

bool ProblemParams::admissible() const { return admissibility_margin() > 0.0; }

Mat CoefficientField::A(const Vec& x) const {
  switch (kind_) {
    case FieldKind::Constant: return A0_;
    case FieldKind::Affine: {
      Mat M = A0_;
      for (int k = 0; k < dim_; ++k) M += x[k] * G_[k];
      return M;
    }
    case FieldKind::Trig: return A0_ + std::sin(q_.dot(x)) * S_;
  }
  return A0_;
}

Mat CoefficientField::dA(const Vec& x, int k) const {
  switch (kind_) {
    case FieldKind::Constant: return Mat::Zero(dim_, dim_);
    case FieldKind::Affine: return G_[k];
    case FieldKind::Trig: return q_[k] * std::cos(q_.dot(x)) * S_;
  }
  return Mat::Zero(dim_, dim_);
}

Vec CoefficientField::b(const Vec& x) const {
  switch (b_kind_) {
    case LowerOrderKind::Zero: return Vec::Zero(dim_);
    case LowerOrderKind::Constant: return b_const_;
    case LowerOrderKind::Trig: {
      Vec v(dim_);
      const double s = b_inf_ / std::sqrt(static_cast<double>(dim_));
      for (int i = 0; i < dim_; ++i) v[i] = s * std::sin(kPi * x[(i + 1) % dim_]);
      return v;
    }
  }
  return Vec::Zero(dim_);
}

double CoefficientField::c(const Vec& x) const {
  switch (c_kind_) {
    case LowerOrderKind::Zero: return 0.0;
    case LowerOrderKind::Constant: return c_const_;
    case LowerOrderKind::Trig: return c_inf_ * std::cos(kPi * x.sum());
  }
  return 0.0;
}

CoefficientField CoefficientField::principal_part() const {
  CoefficientField f = *this;
  f.b_kind_ = LowerOrderKind::Zero;
  f.c_kind_ = LowerOrderKind::Zero;
  f.b_const_ = Vec::Zero(dim_);
  f.c_const_ = 0.0;
  f.b_inf_ = f.c_inf_ = 0.0;
  return f;
}

CoefficientField make_constant_field(Mat A0, double rho) {
  require_symmetric(A0, "make_constant_field A0");
  CoefficientField f;
  f.dim_ = static_cast<int>(A0.rows());
  f.kind_ = FieldKind::Constant;
  f.rho_ = rho;
  f.A0_ = std::move(A0);
  f.A0_inv_ = inverse_spd(f.A0_, "make_constant_field A0");
  f.b_const_ = Vec::Zero(f.dim_);
  Eigen::SelfAdjointEigenSolver<Mat> es(f.A0_, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff(), lmax = es.eigenvalues().maxCoeff();
  if (lmin <= 0) throw std::invalid_argument("make_constant_field: A0 not positive definite");
  f.certified_theta1_ = std::max(1.0, std::max(lmax, 1.0 / lmin));
  f.certified_theta2_ = 0.0;
  return f;
}

CoefficientField make_affine_field(Mat A0, std::vector<Mat> G, double rho) {
  require_symmetric(A0, "make_affine_field A0");
  const int d = static_cast<int>(A0.rows());
  if (static_cast<int>(G.size()) != d)
    throw std::invalid_argument("make_affine_field: need one slope matrix per coordinate");
  for (const Mat& Gk : G) require_symmetric(Gk, "make_affine_field G_k");

  CoefficientField f;
  f.dim_ = d;
  f.kind_ = FieldKind::Affine;
  f.rho_ = rho;
  f.A0_ = std::move(A0);
  f.A0_inv_ = inverse_spd(f.A0_, "make_affine_field A0");
  f.G_ = std::move(G);
  f.b_const_ = Vec::Zero(d);

  bool trivial = true;
  for (const Mat& Gk : f.G_) trivial = trivial && Gk.isZero(0.0);
  if (trivial) {
    CoefficientField c = make_constant_field(f.A0_, rho);
    f.certified_theta1_ = c.certified_theta1_;
    f.certified_theta2_ = 0.0;
    return f;
  }

  const auto ex = scan_ellipticity(d, rho, [&](const Vec& x) { return f.A(x); });
  f.certified_theta1_ = std::max(1.0, 1.001 * std::max(ex.lam_max, 1.0 / ex.lam_min));

  // Lipschitz: ||A(x)-A(y)||_inf = ||sum (x-y)_k G_k||_inf <= max over unit v.
  double worst = 0.0;
  for (const Vec& v : direction_sample(d, 4096)) {
    Mat M = Mat::Zero(d, d);
    for (int k = 0; k < d; ++k) M += v[k] * f.G_[k];
    worst = std::max(worst, row_sum_norm(M));
  }
  f.certified_theta2_ = 1.001 * worst;
  return f;
}

CoefficientField make_trig_field(Mat A0, Mat S, Vec q, double rho) {
  require_symmetric(A0, "make_trig_field A0");
  require_symmetric(S, "make_trig_field S");
  const int d = static_cast<int>(A0.rows());
  CoefficientField f;
  f.dim_ = d;
  f.kind_ = FieldKind::Trig;
  f.rho_ = rho;
  f.A0_ = std::move(A0);
  f.A0_inv_ = inverse_spd(f.A0_, "make_trig_field A0");
  f.S_ = std::move(S);
  f.q_ = std::move(q);
  f.b_const_ = Vec::Zero(d);

  const auto ex = scan_ellipticity(d, rho, [&](const Vec& x) { return f.A(x); });
  f.certified_theta1_ = std::max(1.0, 1.001 * std::max(ex.lam_max, 1.0 / ex.lam_min));
  // |d/dv A| = |v.q||cos(q.x)| ||S||, sup over unit v and x is |q| ||S||_inf
  f.certified_theta2_ = f.q_.norm() * row_sum_norm(f.S_);
  return f;
}

CoefficientField with_lower_order(CoefficientField f,
                                  LowerOrderKind b_kind, Vec b_const, double b_inf,
                                  LowerOrderKind c_kind, double c_const, double c_inf) {
  if (b_kind == LowerOrderKind::Constant) {
    if (b_const.size() != f.dim_) throw std::invalid_argument("with_lower_order: b size mismatch");
    b_inf = std::max(b_inf, b_const.norm());
  }
  if (c_kind == LowerOrderKind::Constant) c_inf = std::max(c_inf, std::fabs(c_const));
  f.b_kind_ = b_kind;
  f.c_kind_ = c_kind;
  f.b_const_ = b_kind == LowerOrderKind::Constant ? std::move(b_const) : Vec::Zero(f.dim_);
  f.c_const_ = c_const;
  f.b_inf_ = b_kind == LowerOrderKind::Zero ? 0.0 : b_inf;
  f.c_inf_ = c_kind == LowerOrderKind::Zero ? 0.0 : c_inf;
  return f;
}

AssumptionReport verify_assumption(const CoefficientField& field,
                                   const ProblemParams& params,
                                   int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("verify_assumption: n_samples must be >= 1");
  AssumptionReport rep;
  rep.n_samples = n_samples;
  CounterRng rng(seed, 0xa55e);
  const int d = field.dim();
  for (int i = 0; i < n_samples; ++i) {
    const Vec x = rng.ball_point(d, field.rho());
    const Vec y = rng.ball_point(d, field.rho());
    Eigen::SelfAdjointEigenSolver<Mat> es(field.A(x), Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff(), lmax = es.eigenvalues().maxCoeff();
    rep.worst_ellipticity = std::max(rep.worst_ellipticity, std::max(lmax, 1.0 / lmin));
    const double dist = (x - y).norm();
    if (dist > 1e-12)
      rep.worst_lipschitz = std::max(rep.worst_lipschitz, row_sum_norm(field.A(x) - field.A(y)) / dist);
  }
  rep.ellipticity_ok = params.theta1 >= 1.0 && rep.worst_ellipticity <= params.theta1;
  rep.lipschitz_ok = rep.worst_lipschitz <= params.theta2;
  rep.pass = rep.ellipticity_ok && rep.lipschitz_ok;
  return rep;
}

} // namespace carleman
