#include "carleman/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace carleman {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  std::size_t b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

std::vector<double> parse_numbers(const std::string& s, int line) {
  std::vector<double> out;
  std::istringstream iss(s);
  std::string tok;
  while (iss >> tok) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError(line, "not a number: '" + tok + "'");
    }
  }
  return out;
}

Vec parse_vector(const std::string& s, int line) {
  const auto nums = parse_numbers(s, line);
  Vec v(static_cast<int>(nums.size()));
  for (std::size_t i = 0; i < nums.size(); ++i) v[static_cast<int>(i)] = nums[i];
  return v;
}

Mat parse_matrix(const std::string& s, int line, const std::string& key) {
  std::vector<std::vector<double>> rows;
  std::string part;
  std::istringstream iss(s);
  while (std::getline(iss, part, ';')) rows.push_back(parse_numbers(part, line));
  if (rows.empty()) throw ConfigError(line, key + ": empty matrix");
  const std::size_t cols = rows[0].size();
  for (const auto& r : rows)
    if (r.size() != cols) throw ConfigError(line, key + ": ragged matrix rows");
  Mat M(static_cast<int>(rows.size()), static_cast<int>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j)
      M(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
  return M;
}

double parse_double(const std::string& s, int line, const std::string& key) {
  const auto nums = parse_numbers(s, line);
  if (nums.size() != 1) throw ConfigError(line, key + ": expected one number");
  return nums[0];
}

int parse_int(const std::string& s, int line, const std::string& key) {
  const double v = parse_double(s, line, key);
  if (v != std::floor(v)) throw ConfigError(line, key + ": expected an integer");
  return static_cast<int>(v);
}

Modulation parse_modulation(const std::string& s, int line) {
  if (s == "radial") return Modulation::None;
  if (s == "plane_wave") return Modulation::PlaneWave;
  if (s == "cosine") return Modulation::Cosine;
  if (s == "sine") return Modulation::Sine;
  if (s == "linear") return Modulation::Linear;
  throw ConfigError(line, "unknown test function kind '" + s + "'");
}

const char* modulation_name(Modulation m) {
  switch (m) {
    case Modulation::None: return "radial";
    case Modulation::PlaneWave: return "plane_wave";
    case Modulation::Cosine: return "cosine";
    case Modulation::Sine: return "sine";
    case Modulation::Linear: return "linear";
  }
  return "radial";
}

LowerOrderKind parse_lower(const std::string& s, int line) {
  if (s == "zero") return LowerOrderKind::Zero;
  if (s == "constant") return LowerOrderKind::Constant;
  if (s == "trig") return LowerOrderKind::Trig;
  throw ConfigError(line, "unknown lower-order kind '" + s + "'");
}

const char* lower_name(LowerOrderKind k) {
  switch (k) {
    case LowerOrderKind::Zero: return "zero";
    case LowerOrderKind::Constant: return "constant";
    case LowerOrderKind::Trig: return "trig";
  }
  return "zero";
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const Vec& v) {
  std::string s;
  for (int i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(v[i]);
  return s;
}

std::string fmt(const Mat& M) {
  std::string s;
  for (int i = 0; i < M.rows(); ++i) {
    if (i) s += " ; ";
    for (int j = 0; j < M.cols(); ++j) s += (j ? " " : "") + fmt(M(i, j));
  }
  return s;
}

void apply_tf_key(TestFunctionSpec& tf, const std::string& key, const std::string& val,
                  int line) {
  if (key == "kind") tf.mod = parse_modulation(val, line);
  else if (key == "r0") tf.r0 = parse_double(val, line, key);
  else if (key == "r1") tf.r1 = parse_double(val, line, key);
  else if (key == "k") tf.k = parse_vector(val, line);
  else if (key == "a0") tf.a0 = parse_double(val, line, key);
  else if (key == "a") tf.a = parse_vector(val, line);
  else throw ConfigError(line, "unknown key '" + key + "' in test function section");
}

} // namespace

CoefficientField ExperimentConfig::build_field() const {
  const int d = params.d;
  Mat A0 = field.A0.size() == 0 ? Mat(Mat::Identity(d, d)) : field.A0;
  CoefficientField f = [&] {
    switch (field.kind) {
      case FieldKind::Constant: return make_constant_field(A0, params.rho);
      case FieldKind::Affine: {
        std::vector<Mat> G = field.G;
        if (static_cast<int>(G.size()) != d)
          throw std::invalid_argument("field: affine kind needs G1..G" + std::to_string(d));
        return make_affine_field(A0, G, params.rho);
      }
      case FieldKind::Trig: return make_trig_field(A0, field.S, field.q, params.rho);
    }
    return make_constant_field(A0, params.rho);
  }();
  return with_lower_order(std::move(f), field.b_kind, field.b_value, params.b_inf,
                          field.c_kind, field.c_value, params.c_inf);
}

namespace {

TestFunction build_tf(const TestFunctionSpec& tf, int d, double rho) {
  const double r0 = tf.r0 * rho, r1 = tf.r1 * rho;
  switch (tf.mod) {
    case Modulation::None: return TestFunction::radial_bump(d, r0, r1);
    case Modulation::PlaneWave:
      return TestFunction::plane_wave_bump(d, r0, r1, tf.k.size() ? tf.k : Vec(Vec::Ones(d)));
    case Modulation::Cosine:
      return TestFunction::cosine_bump(d, r0, r1, tf.k.size() ? tf.k : Vec(Vec::Ones(d)));
    case Modulation::Sine:
      return TestFunction::sine_bump(d, r0, r1, tf.k.size() ? tf.k : Vec(Vec::Ones(d)));
    case Modulation::Linear:
      return TestFunction::linear_bump(d, r0, r1, tf.a0, tf.a.size() ? tf.a : Vec(Vec::Zero(d)));
  }
  return TestFunction::radial_bump(d, r0, r1);
}

} // namespace

TestFunction ExperimentConfig::build_u() const { return build_tf(u, params.d, params.rho); }

TestFunction ExperimentConfig::build_v() const {
  if (v) return build_tf(*v, params.d, params.rho);
  TestFunctionSpec inner = u;
  inner.mod = Modulation::None;
  inner.r0 = u.r0 + 0.1 * (u.r1 - u.r0);
  inner.r1 = u.r1 - 0.1 * (u.r1 - u.r0);
  return build_tf(inner, params.d, params.rho);
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream iss(text);
  std::string raw;
  std::string section;
  int line = 0;
  std::map<int, Mat> G_entries;

  while (std::getline(iss, raw)) {
    ++line;
    std::string s = raw;
    const std::size_t hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;

    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section != "params" && section != "field" && section != "test_function" &&
          section != "test_function_b" && section != "grid" && section != "sweep" &&
          section != "checks")
        throw ConfigError(line, "unknown section '" + section + "'");
      if (section == "test_function_b" && !cfg.v) cfg.v = TestFunctionSpec{};
      continue;
    }

    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError(line, "empty key");
    if (section.empty()) throw ConfigError(line, "key '" + key + "' outside any section");

    if (section == "params") {
      if (key == "d") cfg.params.d = parse_int(val, line, key);
      else if (key == "rho") cfg.params.rho = parse_double(val, line, key);
      else if (key == "theta1") cfg.params.theta1 = parse_double(val, line, key);
      else if (key == "theta2") cfg.params.theta2 = parse_double(val, line, key);
      else if (key == "mu") cfg.params.mu = parse_double(val, line, key);
      else if (key == "b_inf") cfg.params.b_inf = parse_double(val, line, key);
      else if (key == "c_inf") cfg.params.c_inf = parse_double(val, line, key);
      else throw ConfigError(line, "unknown key '" + key + "' in [params]");
    } else if (section == "field") {
      if (key == "kind") {
        if (val == "identity") { cfg.field.kind = FieldKind::Constant; cfg.field.A0 = Mat(); }
        else if (val == "constant") cfg.field.kind = FieldKind::Constant;
        else if (val == "affine") cfg.field.kind = FieldKind::Affine;
        else if (val == "trig") cfg.field.kind = FieldKind::Trig;
        else throw ConfigError(line, "unknown field kind '" + val + "'");
      } else if (key == "A0") {
        cfg.field.A0 = parse_matrix(val, line, key);
        if (!cfg.field.A0.isApprox(cfg.field.A0.transpose(), 1e-13))
          throw ConfigError(line, "A0 is not symmetric");
      } else if (key.size() > 1 && key[0] == 'G') {
        int idx = 0;
        try { idx = std::stoi(key.substr(1)); } catch (...) {
          throw ConfigError(line, "unknown key '" + key + "' in [field]");
        }
        if (idx < 1 || idx > kMaxDim) throw ConfigError(line, key + ": index out of range");
        Mat Gk = parse_matrix(val, line, key);
        if (!Gk.isApprox(Gk.transpose(), 1e-13))
          throw ConfigError(line, key + " is not symmetric");
        G_entries[idx] = std::move(Gk);
      } else if (key == "S") {
        cfg.field.S = parse_matrix(val, line, key);
        if (!cfg.field.S.isApprox(cfg.field.S.transpose(), 1e-13))
          throw ConfigError(line, "S is not symmetric");
      } else if (key == "q") cfg.field.q = parse_vector(val, line);
      else if (key == "b") cfg.field.b_kind = parse_lower(val, line);
      else if (key == "b_value") cfg.field.b_value = parse_vector(val, line);
      else if (key == "c") cfg.field.c_kind = parse_lower(val, line);
      else if (key == "c_value") cfg.field.c_value = parse_double(val, line, key);
      else throw ConfigError(line, "unknown key '" + key + "' in [field]");
    } else if (section == "test_function") {
      apply_tf_key(cfg.u, key, val, line);
    } else if (section == "test_function_b") {
      apply_tf_key(*cfg.v, key, val, line);
    } else if (section == "grid") {
      if (key == "n_radial") cfg.grid.n_radial = parse_int(val, line, key);
      else if (key == "n_angular") cfg.grid.n_angular = parse_int(val, line, key);
      else if (key == "graded_order") cfg.grid.graded_order = parse_int(val, line, key);
      else throw ConfigError(line, "unknown key '" + key + "' in [grid]");
    } else if (section == "sweep") {
      if (key == "count") cfg.sweep.count = parse_int(val, line, key);
      else if (key == "min_factor") cfg.sweep.min_factor = parse_double(val, line, key);
      else if (key == "max_factor") cfg.sweep.max_factor = parse_double(val, line, key);
      else throw ConfigError(line, "unknown key '" + key + "' in [sweep]");
    } else if (section == "checks") {
      if (key == "sandwich_samples") cfg.sizes.sandwich_samples = parse_int(val, line, key);
      else if (key == "lemma31_points") cfg.sizes.lemma31_points = parse_int(val, line, key);
      else if (key == "prop32_points") cfg.sizes.prop32_points = parse_int(val, line, key);
      else if (key == "prop32_directions") cfg.sizes.prop32_directions = parse_int(val, line, key);
      else if (key == "conjugation_points") cfg.sizes.conjugation_points = parse_int(val, line, key);
      else if (key == "assumption_samples") cfg.sizes.assumption_samples = parse_int(val, line, key);
      else if (key == "tol_lemma31") cfg.tol.lemma31 = parse_double(val, line, key);
      else if (key == "tol_conjugation") cfg.tol.conjugation = parse_double(val, line, key);
      else if (key == "tol_green") cfg.tol.green = parse_double(val, line, key);
      else if (key == "tol_rellich") cfg.tol.rellich = parse_double(val, line, key);
      else if (key == "tol_lemma41") cfg.tol.lemma41 = parse_double(val, line, key);
      else if (key == "tol_gate") cfg.tol.gate = parse_double(val, line, key);
      else if (key == "c_scale") cfg.tol.c_scale = parse_double(val, line, key);
      else if (key == "psi_scale") cfg.tol.psi_scale = parse_double(val, line, key);
      else throw ConfigError(line, "unknown key '" + key + "' in [checks]");
    }
  }

  if (!G_entries.empty()) {
    cfg.field.G.assign(cfg.params.d, Mat::Zero(cfg.params.d, cfg.params.d));
    for (const auto& [idx, Gk] : G_entries) {
      if (idx > cfg.params.d)
        throw ConfigError(0, "G" + std::to_string(idx) + " exceeds dimension d");
      cfg.field.G[idx - 1] = Gk;
    }
  }

  cfg.params.validate();
  if (!(0.0 < cfg.u.r0 && cfg.u.r0 < cfg.u.r1 && cfg.u.r1 < 1.0))
    throw ConfigError(0, "test_function: need 0 < r0 < r1 < 1 (fractions of rho)");
  if (cfg.v && !(0.0 < cfg.v->r0 && cfg.v->r0 < cfg.v->r1 && cfg.v->r1 < 1.0))
    throw ConfigError(0, "test_function_b: need 0 < r0 < r1 < 1 (fractions of rho)");
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string canonical_text(const ExperimentConfig& c) {
  std::ostringstream o;
  o << "[params]\n";
  o << "d = " << c.params.d << "\n";
  o << "rho = " << fmt(c.params.rho) << "\n";
  o << "theta1 = " << fmt(c.params.theta1) << "\n";
  o << "theta2 = " << fmt(c.params.theta2) << "\n";
  o << "mu = " << fmt(c.params.mu) << "\n";
  o << "b_inf = " << fmt(c.params.b_inf) << "\n";
  o << "c_inf = " << fmt(c.params.c_inf) << "\n";
  o << "\n[field]\n";
  switch (c.field.kind) {
    case FieldKind::Constant: o << "kind = constant\n"; break;
    case FieldKind::Affine: o << "kind = affine\n"; break;
    case FieldKind::Trig: o << "kind = trig\n"; break;
  }
  const int d = c.params.d;
  const Mat A0 = c.field.A0.size() == 0 ? Mat(Mat::Identity(d, d)) : c.field.A0;
  o << "A0 = " << fmt(A0) << "\n";
  for (std::size_t k = 0; k < c.field.G.size(); ++k)
    o << "G" << (k + 1) << " = " << fmt(c.field.G[k]) << "\n";
  if (c.field.S.size()) o << "S = " << fmt(c.field.S) << "\n";
  if (c.field.q.size()) o << "q = " << fmt(c.field.q) << "\n";
  o << "b = " << lower_name(c.field.b_kind) << "\n";
  if (c.field.b_value.size()) o << "b_value = " << fmt(c.field.b_value) << "\n";
  o << "c = " << lower_name(c.field.c_kind) << "\n";
  o << "c_value = " << fmt(c.field.c_value) << "\n";

  auto emit_tf = [&](const char* name, const TestFunctionSpec& tf) {
    o << "\n[" << name << "]\n";
    o << "kind = " << modulation_name(tf.mod) << "\n";
    o << "r0 = " << fmt(tf.r0) << "\n";
    o << "r1 = " << fmt(tf.r1) << "\n";
    if (tf.k.size()) o << "k = " << fmt(tf.k) << "\n";
    o << "a0 = " << fmt(tf.a0) << "\n";
    if (tf.a.size()) o << "a = " << fmt(tf.a) << "\n";
  };
  emit_tf("test_function", c.u);
  if (c.v) emit_tf("test_function_b", *c.v);

  o << "\n[grid]\n";
  o << "n_radial = " << c.grid.n_radial << "\n";
  o << "n_angular = " << c.grid.n_angular << "\n";
  o << "graded_order = " << c.grid.graded_order << "\n";
  o << "\n[sweep]\n";
  o << "count = " << c.sweep.count << "\n";
  o << "min_factor = " << fmt(c.sweep.min_factor) << "\n";
  o << "max_factor = " << fmt(c.sweep.max_factor) << "\n";
  o << "\n[checks]\n";
  o << "sandwich_samples = " << c.sizes.sandwich_samples << "\n";
  o << "lemma31_points = " << c.sizes.lemma31_points << "\n";
  o << "prop32_points = " << c.sizes.prop32_points << "\n";
  o << "prop32_directions = " << c.sizes.prop32_directions << "\n";
  o << "conjugation_points = " << c.sizes.conjugation_points << "\n";
  o << "assumption_samples = " << c.sizes.assumption_samples << "\n";
  o << "tol_lemma31 = " << fmt(c.tol.lemma31) << "\n";
  o << "tol_conjugation = " << fmt(c.tol.conjugation) << "\n";
  o << "tol_green = " << fmt(c.tol.green) << "\n";
  o << "tol_rellich = " << fmt(c.tol.rellich) << "\n";
  o << "tol_lemma41 = " << fmt(c.tol.lemma41) << "\n";
  o << "tol_gate = " << fmt(c.tol.gate) << "\n";
  o << "c_scale = " << fmt(c.tol.c_scale) << "\n";
  o << "psi_scale = " << fmt(c.tol.psi_scale) << "\n";
  return o.str();
}

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  cfg.params.d = 2;
  return cfg;
}

} // namespace carleman
