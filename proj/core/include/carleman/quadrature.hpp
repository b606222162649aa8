#ifndef CARLEMAN_QUADRATURE_HPP
#define CARLEMAN_QUADRATURE_HPP

#include <functional>
#include <utility>
#include <vector>

#include "carleman/linalg.hpp"

namespace carleman {

/// Gauss-Legendre nodes/weights on [-1, 1]; cached per order.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Tensor quadrature on the annulus r0 <= |x| <= r1, d in {1,2,3}:
/// composite Gauss-Legendre panels in radius against the Jacobian r^{d-1},
/// trapezoid in angle (d=2), Gauss-Legendre x trapezoid on the sphere (d=3).
struct AnnulusGrid {
  int dim = 0;
  double r0 = 0, r1 = 0;
  int n_radial = 0;   // Gauss order per radial panel
  int n_angular = 0;  // azimuthal count (d=3 also uses n_angular/2 polar nodes)
  std::vector<std::pair<double, double>> panels;

  std::vector<double> rad_t, rad_w;   // radial nodes/weights (Jacobian not included)
  std::vector<Vec> ang_omega;         // unit directions
  std::vector<double> ang_w;          // weights summing to |S^{d-1}|

  std::size_t n_nodes() const { return rad_t.size() * ang_omega.size(); }
  Vec node(std::size_t i) const { return rad_t[i / ang_omega.size()] * ang_omega[i % ang_omega.size()]; }
  double node_weight(std::size_t i) const {
    const std::size_t ri = i / ang_omega.size();
    return rad_w[ri] * std::pow(rad_t[ri], dim - 1) * ang_w[i % ang_omega.size()];
  }

  /// same panels, doubled Gauss order and angular counts (the convergence gate)
  AnnulusGrid refined() const;
};

/// Verifies exactness on radial monomials at construction and throws if the
/// rule fails its own self-check. `breaks` inserts radial panel boundaries
/// (integrands that are only piecewise-smooth converge per panel).
AnnulusGrid annulus_grid(int d, double r0, double r1, int n_radial, int n_angular,
                         const std::vector<double>& breaks = {});

/// Grid whose radial panels are refined wherever any of the given radial
/// log-profiles varies faster than `max_var` per panel, ignoring regions
/// more than `cutoff` below a profile's maximum. Profiles must be concave in
/// the live region (the Carleman integrands are).
AnnulusGrid annulus_grid_graded(int d, double r0, double r1, int n_radial, int n_angular,
                                const std::vector<std::function<double(double)>>& log_profiles,
                                double max_var = 4.0, double cutoff = 90.0);

/// Weighted sum with deterministic pairwise (compensated) summation.
double integrate(const AnnulusGrid& grid, const std::function<double(const Vec&)>& f,
                 int jobs = 1);
complexd integrate_complex(const AnnulusGrid& grid,
                           const std::function<complexd(const Vec&)>& f, int jobs = 1);

/// |S^{d-1}| (2, 2*pi, 4*pi for d = 1, 2, 3)
double sphere_area(int d);

/// Volume of the annulus r0 <= |x| <= r1.
double annulus_volume(int d, double r0, double r1);

} // namespace carleman

#endif
