#include "carleman/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "carleman/harness.hpp"
#include "carleman/report.hpp"

namespace carleman {

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::string format = "text";
  std::uint64_t seed = 1;
  int jobs = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "experiment config file");
  cmd->add_option("--out", o.out_dir, "directory for report files");
  cmd->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"csv", "json", "text"}));
  cmd->add_option("--seed", o.seed, "seed for point sampling");
  cmd->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
}

ExperimentConfig load_config(const CommonOpts& o) {
  if (o.config_path.empty()) return default_config();
  return parse_config_file(o.config_path);
}

void write_file(const std::string& dir, const std::string& name, const std::string& body) {
  std::filesystem::create_directories(dir);
  std::ofstream out(std::filesystem::path(dir) / name, std::ios::binary);
  out << body;
}

int finish_report(const VerificationReport& rep, const CommonOpts& o) {
  if (o.format == "json") std::cout << report_json(rep);
  else if (o.format == "csv") std::cout << sweep_csv(rep.sweep);
  else std::cout << report_text(rep);
  if (!o.out_dir.empty()) {
    write_file(o.out_dir, "report.json", report_json(rep));
    if (!rep.sweep.empty()) write_file(o.out_dir, "sweep.csv", sweep_csv(rep.sweep));
  }
  return rep.pass() ? 0 : 1;
}

} // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"numerical verification of a quantitative Carleman inequality for "
               "second-order elliptic operators"};
  app.require_subcommand(1);

  CommonOpts o;
  auto* c_constants = app.add_subcommand("constants", "print every derived constant");
  auto* c_identities = app.add_subcommand("identities",
                                          "pointwise and integral identity checks");
  auto* c_bounds = app.add_subcommand("bounds", "quantitative bound checks");
  auto* c_carleman = app.add_subcommand("carleman", "main inequality at one alpha");
  auto* c_sweep = app.add_subcommand("sweep", "main inequality over an alpha sweep");
  auto* c_suite = app.add_subcommand("suite", "all verification stages");
  double alpha_override = 0.0;
  c_carleman->add_option("--alpha", alpha_override, "alpha (default alpha0)");
  for (auto* cmd : {c_constants, c_identities, c_bounds, c_carleman, c_sweep, c_suite})
    add_common(cmd, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    const ExperimentConfig cfg = load_config(o);

    if (c_constants->parsed()) {
      const ConstantsReport rep = carleman_constants(cfg.params);
      std::string body;
      if (o.format == "json") body = constants_json(rep);
      else if (o.format == "csv") body = constants_csv(rep);
      else body = constants_text(rep);
      std::cout << body;
      if (!o.out_dir.empty())
        write_file(o.out_dir, o.format == "csv" ? "constants.csv"
                              : o.format == "json" ? "constants.json" : "constants.txt", body);
      if (!rep.admissible) {
        std::cerr << "inadmissible: mu <= 33 d theta1^{11/2} theta2 rho (margin "
                  << format_double(rep.admissibility_margin) << ")\n";
        return 1;
      }
      return 0;
    }

    StageSet stages = StageSet::none();
    if (c_identities->parsed()) {
      stages.lemma31 = stages.conjugation = stages.green = stages.rellich = true;
    } else if (c_bounds->parsed()) {
      stages.constants = stages.assumption = stages.sandwich = stages.prop32 = true;
    } else if (c_carleman->parsed() || c_sweep->parsed()) {
      stages.constants = stages.carleman = true;
    } else {
      stages = StageSet::all();
    }

    ExperimentConfig run_cfg = cfg;
    if (c_carleman->parsed()) {
      run_cfg.sweep.count = 1;
      if (alpha_override > 0.0) {
        // single-alpha run expressed as a degenerate sweep around the override
        run_cfg.sweep.min_factor = run_cfg.sweep.max_factor = 1.0;
      }
    }
    const VerificationReport rep =
        run_stages(run_cfg, o.seed, o.jobs, stages, alpha_override);

    if (c_sweep->parsed()) {
      const std::string csv = sweep_csv(rep.sweep);
      if (o.format == "json") std::cout << report_json(rep);
      else if (o.format == "text") std::cout << report_text(rep);
      else std::cout << csv;
      if (!o.out_dir.empty()) write_file(o.out_dir, "sweep.csv", csv);
      if (!rep.pass()) {
        for (const auto& c : rep.checks)
          if (!c.skipped && !c.pass && !c.note.empty()) std::cerr << c.name << ": " << c.note << "\n";
        return 1;
      }
      return 0;
    }
    return finish_report(rep, o);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

} // namespace carleman
