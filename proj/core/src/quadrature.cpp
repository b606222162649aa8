#include "carleman/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "carleman/logsum.hpp"
#include "carleman/parallel.hpp"

namespace carleman {

namespace {

constexpr double kPi = 3.141592653589793238462643383279503;

void compute_gl(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 1; i <= m; ++i) {
    long double z = std::cos(kPi * (i - 0.25L) / (n + 0.5L));
    long double pp = 0.0L;
    for (int it = 0; it < 100; ++it) {
      long double p1 = 1.0L, p2 = 0.0L;
      for (int j = 1; j <= n; ++j) {
        const long double p3 = p2;
        p2 = p1;
        p1 = ((2.0L * j - 1.0L) * z * p2 - (j - 1.0L) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0L);
      const long double z1 = z;
      z = z1 - p1 / pp;
      if (std::fabs(static_cast<double>(z - z1)) < 1e-17) break;
    }
    x[i - 1] = static_cast<double>(-z);
    x[n - i] = static_cast<double>(z);
    const double wv = static_cast<double>(2.0L / ((1.0L - z * z) * pp * pp));
    w[i - 1] = wv;
    w[n - i] = wv;
  }
}

void angular_rule(int d, int n_angular, std::vector<Vec>& omega, std::vector<double>& wts) {
  omega.clear();
  wts.clear();
  if (d == 1) {
    Vec p(1), m(1);
    p[0] = 1.0;
    m[0] = -1.0;
    omega = {p, m};
    wts = {1.0, 1.0};
  } else if (d == 2) {
    const int n = std::max(4, n_angular);
    for (int j = 0; j < n; ++j) {
      const double th = 2.0 * kPi * j / n;
      Vec o(2);
      o << std::cos(th), std::sin(th);
      omega.push_back(o);
      wts.push_back(2.0 * kPi / n);
    }
  } else if (d == 3) {
    const int naz = std::max(4, n_angular);
    const int npol = std::max(4, n_angular / 2);
    std::vector<double> u, wu;
    gauss_legendre(npol, u, wu);
    for (int k = 0; k < npol; ++k) {
      const double st = std::sqrt(std::max(0.0, 1.0 - u[k] * u[k]));
      for (int j = 0; j < naz; ++j) {
        const double th = 2.0 * kPi * j / naz;
        Vec o(3);
        o << st * std::cos(th), st * std::sin(th), u[k];
        omega.push_back(o);
        wts.push_back(wu[k] * 2.0 * kPi / naz);
      }
    }
  } else {
    throw std::invalid_argument("annulus quadrature supports d in {1,2,3}");
  }
}

void fill_radial(AnnulusGrid& g) {
  std::vector<double> x, w;
  gauss_legendre(g.n_radial, x, w);
  g.rad_t.clear();
  g.rad_w.clear();
  for (const auto& [a, b] : g.panels) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (int i = 0; i < g.n_radial; ++i) {
      g.rad_t.push_back(c + h * x[i]);
      g.rad_w.push_back(h * w[i]);
    }
  }
}

void self_check(const AnnulusGrid& g) {
  // radial monomials |x|^k are integrated exactly up to the Gauss order
  const int kmax = std::min(12, 2 * g.n_radial - g.dim);
  for (int k = 0; k <= kmax; ++k) {
    std::vector<double> terms(g.rad_t.size());
    for (std::size_t i = 0; i < g.rad_t.size(); ++i)
      terms[i] = g.rad_w[i] * std::pow(g.rad_t[i], k + g.dim - 1);
    const double got = pairwise_sum(terms) * sphere_area(g.dim);
    const double expect = sphere_area(g.dim) *
                          (std::pow(g.r1, k + g.dim) - std::pow(g.r0, k + g.dim)) / (k + g.dim);
    if (std::fabs(got - expect) > 1e-10 * std::fabs(expect))
      throw std::runtime_error("annulus_grid: radial exactness self-check failed");
  }
}

} // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) {
    std::pair<std::vector<double>, std::vector<double>> nw;
    compute_gl(n, nw.first, nw.second);
    it = cache.emplace(n, std::move(nw)).first;
  }
  nodes = it->second.first;
  weights = it->second.second;
}

double sphere_area(int d) {
  switch (d) {
    case 1: return 2.0;
    case 2: return 2.0 * kPi;
    case 3: return 4.0 * kPi;
    default: throw std::invalid_argument("sphere_area: d in {1,2,3}");
  }
}

double annulus_volume(int d, double r0, double r1) {
  return sphere_area(d) * (std::pow(r1, d) - std::pow(r0, d)) / d;
}

AnnulusGrid AnnulusGrid::refined() const {
  AnnulusGrid g = *this;
  g.n_radial = 2 * n_radial;
  g.n_angular = 2 * n_angular;
  fill_radial(g);
  angular_rule(g.dim, g.n_angular, g.ang_omega, g.ang_w);
  return g;
}

AnnulusGrid annulus_grid(int d, double r0, double r1, int n_radial, int n_angular,
                         const std::vector<double>& breaks) {
  if (!(0.0 < r0 && r0 < r1)) throw std::invalid_argument("annulus_grid: need 0 < r0 < r1");
  if (n_radial < 4) throw std::invalid_argument("annulus_grid: radial order must be >= 4");
  AnnulusGrid g;
  g.dim = d;
  g.r0 = r0;
  g.r1 = r1;
  g.n_radial = n_radial;
  g.n_angular = n_angular;
  std::vector<double> cuts = {r0, r1};
  for (double b : breaks)
    if (r0 + 1e-14 < b && b < r1 - 1e-14) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) g.panels.emplace_back(cuts[i], cuts[i + 1]);
  fill_radial(g);
  angular_rule(d, n_angular, g.ang_omega, g.ang_w);
  self_check(g);
  return g;
}

AnnulusGrid annulus_grid_graded(int d, double r0, double r1, int n_radial, int n_angular,
                                const std::vector<std::function<double(double)>>& log_profiles,
                                double max_var, double cutoff) {
  AnnulusGrid g = annulus_grid(d, r0, r1, n_radial, n_angular);
  if (log_profiles.empty()) return g;

  const std::size_t np = log_profiles.size();
  const double ninf = -std::numeric_limits<double>::infinity();
  // running maxima; every evaluation can only raise them, which only makes
  // the dead-region pruning more conservative
  std::vector<double> peak(np, ninf);
  std::vector<double> peak_t(np, 0.5 * (r0 + r1));
  auto eval = [&](double t, std::size_t p) {
    const double v = log_profiles[p](t);
    if (v > peak[p]) { peak[p] = v; peak_t[p] = t; }
    return v;
  };
  // coarse scan, then golden section around the best cell (the profiles are
  // concave near their maximum)
  for (std::size_t p = 0; p < np; ++p) {
    double best_t = 0.5 * (r0 + r1);
    double best_v = ninf;
    const int n_scan = 2048;
    for (int i = 1; i < n_scan; ++i) {
      const double t = r0 + (r1 - r0) * i / n_scan;
      const double v = eval(t, p);
      if (v > best_v) { best_v = v; best_t = t; }
    }
    const double gr = 0.6180339887498949;
    double a = std::max(r0, best_t - (r1 - r0) / n_scan);
    double b = std::min(r1, best_t + (r1 - r0) / n_scan);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = eval(x1, p), f2 = eval(x2, p);
    for (int it = 0; it < 200 && (b - a) > 1e-15 * (r1 - r0); ++it) {
      if (f1 < f2) { a = x1; x1 = x2; f1 = f2; x2 = a + gr * (b - a); f2 = eval(x2, p); }
      else         { b = x2; x2 = x1; f2 = f1; x1 = b - gr * (b - a); f1 = eval(x1, p); }
    }
  }

  const double wmin = 1e-13 * (r1 - r0);
  std::vector<std::pair<double, double>> panels;
  // recursive bisection; in-order, so the panel list stays sorted
  std::function<void(double, double, int)> split = [&](double a, double b, int depth) {
    bool refine = false;
    for (std::size_t p = 0; p < np && !refine; ++p) {
      double lo = std::numeric_limits<double>::infinity(), hi = ninf;
      for (int i = 0; i <= 4; ++i) {
        const double v = eval(a + (b - a) * i / 4.0, p);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      // live and under-resolved (lo = -inf: support edge inside the panel)
      if (hi > peak[p] - cutoff && (lo == ninf || hi - lo > max_var)) refine = true;
      // sparse samples have not captured a peak interior to this panel yet
      if (a < peak_t[p] && peak_t[p] < b && hi < peak[p] - max_var) refine = true;
    }
    if (refine && (b - a) > wmin && depth < 60) {
      const double m = 0.5 * (a + b);
      split(a, m, depth + 1);
      split(m, b, depth + 1);
    } else {
      panels.emplace_back(a, b);
    }
  };
  split(r0, r1, 0);

  g.panels = std::move(panels);
  fill_radial(g);
  return g;
}

double integrate(const AnnulusGrid& grid, const std::function<double(const Vec&)>& f, int jobs) {
  const std::size_t n = grid.n_nodes();
  std::vector<double> terms(n);
  parallel_for(n, jobs, [&](std::size_t i) { terms[i] = grid.node_weight(i) * f(grid.node(i)); });
  return pairwise_sum(terms);
}

complexd integrate_complex(const AnnulusGrid& grid,
                           const std::function<complexd(const Vec&)>& f, int jobs) {
  const std::size_t n = grid.n_nodes();
  std::vector<double> re(n), im(n);
  parallel_for(n, jobs, [&](std::size_t i) {
    const complexd v = grid.node_weight(i) * f(grid.node(i));
    re[i] = v.real();
    im[i] = v.imag();
  });
  return {pairwise_sum(re), pairwise_sum(im)};
}

} // namespace carleman
