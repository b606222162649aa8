#ifndef CARLEMAN_CONFIG_HPP
#define CARLEMAN_CONFIG_HPP

#include <optional>
#include <stdexcept>
#include <string>

#include "carleman/params.hpp"
#include "carleman/test_function.hpp"

namespace carleman {

struct ConfigError : std::runtime_error {
  ConfigError(int line, const std::string& msg)
      : std::runtime_error("config line " + std::to_string(line) + ": " + msg), line(line) {}
  int line;
};

struct FieldSpec {
  FieldKind kind = FieldKind::Constant;
  Mat A0;                 // identity when left empty
  std::vector<Mat> G;     // affine slopes, one per coordinate
  Mat S;                  // trig amplitude
  Vec q;                  // trig wave vector
  LowerOrderKind b_kind = LowerOrderKind::Zero;
  Vec b_value;
  LowerOrderKind c_kind = LowerOrderKind::Zero;
  double c_value = 0.0;
};

struct TestFunctionSpec {
  Modulation mod = Modulation::None;
  double r0 = 0.3, r1 = 0.7;  // fractions of rho
  Vec k;                      // wave vector (plane_wave / cosine / sine)
  double a0 = 1.0;
  Vec a;                      // linear modulation
};

struct GridSpec {
  int n_radial = 64;     // Gauss order of plain grids
  int n_angular = 128;   // d=2 azimuth; d=3 uses n_angular/2 x n_angular sphere
  int graded_order = 16; // per-panel order for alpha-graded grids
};

struct SweepSpec {
  int count = 8;
  double min_factor = 1.0;  // sweep spans [min_factor, max_factor] * alpha0
  double max_factor = 8.0;
};

struct Tolerances {
  double lemma31 = 1e-7;
  double conjugation = 1e-6;
  double green = 1e-7;
  double rellich = 1e-5;
  double lemma41 = 1e-6;  // slack >= -lemma41 * |I1|
  double gate = 1e-6;     // relative change allowed under grid doubling
  double c_scale = 1.0;   // fault injection: scales the Carleman constant
  double psi_scale = 1.0; // fault injection: perturbs psi in the identity check
};

struct CheckSizes {
  int sandwich_samples = 10000;
  int lemma31_points = 200;
  int prop32_points = 10000;
  int prop32_directions = 16;
  int conjugation_points = 100;
  int assumption_samples = 10000;
};

struct ExperimentConfig {
  ProblemParams params;
  FieldSpec field;
  TestFunctionSpec u;
  std::optional<TestFunctionSpec> v;  // second function for Green/Rellich
  GridSpec grid;
  SweepSpec sweep;
  Tolerances tol;
  CheckSizes sizes;

  CoefficientField build_field() const;
  TestFunction build_u() const;  // radii scaled by params.rho
  TestFunction build_v() const;  // derived from u if not configured
};

/// Parses the plain-text format (sections, key = value, matrices as
/// ';'-separated row lists). Unknown keys/sections and semantic errors
/// (non-symmetric A0, bad radii) raise ConfigError with the line number.
ExperimentConfig parse_config(const std::string& text);

ExperimentConfig parse_config_file(const std::string& path);

/// Canonical emission: parse(canonical_text(c)) reproduces c exactly.
std::string canonical_text(const ExperimentConfig& config);

/// Built-in default: Laplacian, d = 2, mu = 1, radial bump on [0.3, 0.7].
ExperimentConfig default_config();

} // namespace carleman

#endif
