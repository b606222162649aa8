#include "carleman/report.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace carleman {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void put(std::ostringstream& o, const char* k, double v) {
  char line[96];
  std::snprintf(line, sizeof line, "  %-22s %s\n", k, format_double(v).c_str());
  o << line;
}

void emit_chain_json(ordered_json& j, const ChainConstants& ch) {
  j["mu1"] = ch.mu1_val;
  j["C_F_prime"] = ch.prop.C_F_prime;
  j["C_F"] = ch.prop.C_F;
  j["C_M"] = ch.prop.C_M;
  j["C_psi"] = ch.prop.C_psi;
  j["C_mu"] = ch.prop.C_mu;
  j["K"] = ch.K;
  j["K_upper_estimate"] = ch.K_upper_estimate;
  j["t1"] = ch.t1;
  j["alpha1"] = ch.alpha1;
  j["p"] = ch.p;
  j["q"] = ch.q;
  j["r"] = ch.r;
  j["alpha2"] = ch.alpha2;
  j["K1"] = ch.K1;
  j["K5"] = ch.K5;
  j["hatC"] = ch.hatC;
  j["hat_alpha0"] = ch.hat_alpha0;
  j["alpha1_le_alpha2"] = ch.alpha1_le_alpha2;
}

void emit_chain_csv(std::ostringstream& o, const std::string& prefix, const ChainConstants& ch) {
  auto row = [&](const char* k, double v) { o << prefix << k << "," << format_double(v) << "\n"; };
  row("K", ch.K);
  row("K_upper_estimate", ch.K_upper_estimate);
  row("t1", ch.t1);
  row("alpha1", ch.alpha1);
  row("p", ch.p);
  row("q", ch.q);
  row("r", ch.r);
  row("alpha2", ch.alpha2);
  row("K1", ch.K1);
  row("K5", ch.K5);
  row("hatC", ch.hatC);
  row("hat_alpha0", ch.hat_alpha0);
}

std::string logvalue_sci(const LogValue& v) { return v.to_sci_string(); }

} // namespace

std::string constants_text(const ConstantsReport& rep) {
  std::ostringstream o;
  o << "parameters\n";
  put(o, "d", rep.params.d);
  put(o, "rho", rep.params.rho);
  put(o, "theta1", rep.params.theta1);
  put(o, "theta2", rep.params.theta2);
  put(o, "mu", rep.params.mu);
  put(o, "b_inf", rep.params.b_inf);
  put(o, "c_inf", rep.params.c_inf);
  o << "derived\n";
  put(o, "mu1", rep.mu1_val);
  put(o, "C_F_prime", rep.prop_scaled.C_F_prime);
  put(o, "C_F", rep.prop_scaled.C_F);
  put(o, "C_M", rep.prop_scaled.C_M);
  put(o, "C_psi", rep.prop_scaled.C_psi);
  put(o, "C_mu", rep.prop_scaled.C_mu);
  put(o, "epsilon1", rep.epsilon1_val);
  o << "  epsilon1_feasible      " << (rep.epsilon1_feasible ? "yes" : "no") << "\n";
  o << "  admissible             " << (rep.admissible ? "yes" : "no") << "\n";
  put(o, "admissibility_margin", rep.admissibility_margin);
  if (!rep.admissible) {
    o << "  (downstream constants absent: mu <= 33 d theta1^{11/2} theta2 rho)\n";
    return o.str();
  }
  o << "chain at effective Lipschitz constant rho*theta2\n";
  put(o, "K", rep.tilde->K);
  put(o, "K_upper_estimate", rep.tilde->K_upper_estimate);
  put(o, "t1", rep.tilde->t1);
  put(o, "alpha1", rep.tilde->alpha1);
  put(o, "p", rep.tilde->p);
  put(o, "q", rep.tilde->q);
  put(o, "r", rep.tilde->r);
  put(o, "alpha2", rep.tilde->alpha2);
  put(o, "K1", rep.tilde->K1);
  put(o, "K5", rep.tilde->K5);
  put(o, "tildeC", rep.tilde->hatC);
  put(o, "tilde_alpha0", rep.tilde->hat_alpha0);
  o << "final\n";
  put(o, "C", *rep.C_final);
  put(o, "alpha0", *rep.alpha0_final);
  put(o, "C_theorem", *rep.C_theorem);
  put(o, "alpha0_theorem", *rep.alpha0_theorem);
  o << "closed-form upper bounds\n";
  put(o, "tildeC_upper", rep.remark->tildeC_upper);
  put(o, "tilde_alpha0_upper", rep.remark->tilde_alpha0_upper);
  return o.str();
}

std::string constants_json(const ConstantsReport& rep) {
  ordered_json j;
  j["params"] = {{"d", rep.params.d},       {"rho", rep.params.rho},
                 {"theta1", rep.params.theta1}, {"theta2", rep.params.theta2},
                 {"mu", rep.params.mu},     {"b_inf", rep.params.b_inf},
                 {"c_inf", rep.params.c_inf}};
  j["mu1"] = rep.mu1_val;
  j["prop"] = {{"C_F_prime", rep.prop_scaled.C_F_prime}, {"C_F", rep.prop_scaled.C_F},
               {"C_M", rep.prop_scaled.C_M},             {"C_psi", rep.prop_scaled.C_psi},
               {"C_mu", rep.prop_scaled.C_mu}};
  j["admissible"] = rep.admissible;
  j["admissibility_margin"] = rep.admissibility_margin;
  j["epsilon1"] = rep.epsilon1_val;
  j["epsilon1_feasible"] = rep.epsilon1_feasible;
  if (rep.admissible) {
    emit_chain_json(j["tilde"], *rep.tilde);
    if (rep.hat) emit_chain_json(j["hat"], *rep.hat);
    j["C"] = *rep.C_final;
    j["alpha0"] = *rep.alpha0_final;
    j["C_theorem"] = *rep.C_theorem;
    j["alpha0_theorem"] = *rep.alpha0_theorem;
    j["remark_bounds"] = {{"tildeC_upper", rep.remark->tildeC_upper},
                          {"tilde_alpha0_upper", rep.remark->tilde_alpha0_upper}};
  }
  return j.dump(2) + "\n";
}

std::string constants_csv(const ConstantsReport& rep) {
  std::ostringstream o;
  o << "key,value\n";
  auto row = [&](const char* k, double v) { o << k << "," << format_double(v) << "\n"; };
  row("d", rep.params.d);
  row("rho", rep.params.rho);
  row("theta1", rep.params.theta1);
  row("theta2", rep.params.theta2);
  row("mu", rep.params.mu);
  row("b_inf", rep.params.b_inf);
  row("c_inf", rep.params.c_inf);
  row("mu1", rep.mu1_val);
  row("C_F_prime", rep.prop_scaled.C_F_prime);
  row("C_F", rep.prop_scaled.C_F);
  row("C_M", rep.prop_scaled.C_M);
  row("C_psi", rep.prop_scaled.C_psi);
  row("C_mu", rep.prop_scaled.C_mu);
  row("epsilon1", rep.epsilon1_val);
  o << "admissible," << (rep.admissible ? 1 : 0) << "\n";
  row("admissibility_margin", rep.admissibility_margin);
  if (rep.admissible) {
    emit_chain_csv(o, "tilde.", *rep.tilde);
    row("tildeC", rep.tilde->hatC);
    row("tilde_alpha0", rep.tilde->hat_alpha0);
    row("C", *rep.C_final);
    row("alpha0", *rep.alpha0_final);
    row("C_theorem", *rep.C_theorem);
    row("alpha0_theorem", *rep.alpha0_theorem);
    row("tildeC_upper", rep.remark->tildeC_upper);
    row("tilde_alpha0_upper", rep.remark->tilde_alpha0_upper);
  }
  return o.str();
}

std::string report_text(const VerificationReport& rep) {
  std::ostringstream o;
  for (const auto& c : rep.checks) {
    char line[256];
    if (c.skipped) {
      std::snprintf(line, sizeof line, "[skip] %-28s %s\n", c.name.c_str(), c.note.c_str());
    } else {
      std::snprintf(line, sizeof line, "[%s] %-28s metric=%s %s tol=%s%s%s\n",
                    c.pass ? "pass" : "FAIL", c.name.c_str(),
                    format_double(c.metric).c_str(), c.cmp.c_str(),
                    format_double(c.tolerance).c_str(), c.note.empty() ? "" : "  ",
                    c.note.c_str());
    }
    o << line;
  }
  if (!rep.sweep.empty()) {
    o << "alpha sweep (ratio = rhs / lhs, must stay >= 1):\n";
    for (const auto& s : rep.sweep) {
      char line[256];
      std::snprintf(line, sizeof line, "  alpha=%-14s log10(ratio)=%-10.4f %s%s\n",
                    format_double(s.alpha).c_str(), s.ratio.log10_abs(),
                    s.pass ? "ok" : "VIOLATION", s.converged ? "" : " (not converged)");
      o << line;
    }
  }
  o << (rep.pass() ? "overall: pass\n" : "overall: FAIL\n");
  return o.str();
}

std::string report_json(const VerificationReport& rep) {
  ordered_json j;
  j["seed"] = rep.seed;
  j["overall_pass"] = rep.pass();
  j["checks"] = ordered_json::array();
  for (const auto& c : rep.checks) {
    ordered_json e;
    e["name"] = c.name;
    e["skipped"] = c.skipped;
    if (!c.skipped) {
      e["metric"] = c.metric;
      e["comparator"] = c.cmp;
      e["tolerance"] = c.tolerance;
      e["pass"] = c.pass;
    }
    if (!c.note.empty()) e["note"] = c.note;
    j["checks"].push_back(e);
  }
  if (!rep.sweep.empty()) {
    j["sweep"] = ordered_json::array();
    for (const auto& s : rep.sweep) {
      ordered_json e;
      e["alpha"] = s.alpha;
      e["log10_lhs_grad"] = s.lhs_grad.log10_abs();
      e["log10_lhs_u"] = s.lhs_u.log10_abs();
      e["log10_rhs"] = s.rhs.log10_abs();
      e["log10_ratio"] = s.ratio.log10_abs();
      e["lhs_grad"] = logvalue_sci(s.lhs_grad);
      e["lhs_u"] = logvalue_sci(s.lhs_u);
      e["rhs"] = logvalue_sci(s.rhs);
      e["ratio"] = logvalue_sci(s.ratio);
      e["converged"] = s.converged;
      e["pass"] = s.pass;
      j["sweep"].push_back(e);
    }
  }
  j["config"] = rep.config_text;
  return j.dump(2) + "\n";
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream o;
  o << "alpha,lhs_grad,lhs_u,rhs,ratio\n";
  for (const auto& s : rows) {
    o << format_double(s.alpha) << "," << logvalue_sci(s.lhs_grad) << ","
      << logvalue_sci(s.lhs_u) << "," << logvalue_sci(s.rhs) << "," << logvalue_sci(s.ratio)
      << "\n";
  }
  return o.str();
}

} // namespace carleman
