// viscoflow <subcommand> --config <path> [--out <dir>] [--override key=value ...]

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "viscoflow/viscoflow.hpp"

int main(int argc, char** argv) {
  namespace vf = viscoflow;
  CLI::App app{"Relaxation-type viscous fluid analysis and simulation"};
  app.set_version_flag("--version", vf::version_string);
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  std::string sweep;
  bool diagnostics = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "scenario config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "directory for CSV output and the run record");
    sub->add_option("--override", overrides, "key=value or section.key=value, applied after the file")
        ->allow_extra_args(false);
  };
  common(app.add_subcommand("speeds", "characteristic speeds at the reference state"));
  common(app.add_subcommand("stability", "Hurwitz determinants, roots and verdict at the configured wavevector"));
  auto* disp = app.add_subcommand("dispersion", "dispersion branches omega(k) as CSV");
  common(disp);
  disp->add_option("--sweep", sweep, "kmin:kmax:n");
  auto* simulate = app.add_subcommand("simulate", "evolve the configured scenario");
  common(simulate);
  simulate->add_flag("--diagnostics", diagnostics, "stream the diagnostic series as CSV on stdout");
  common(app.add_subcommand("blowup-cert", "evaluate the finite-lifespan certificate on the initial data"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : vf::exit_code::config_error;
  }
  const std::string name = app.get_subcommands().front()->get_name();

  std::ifstream in(config_path);
  std::stringstream text;
  text << in.rdbuf();

  vf::ScenarioConfig cfg;
  vf::DispatchOptions opt;
  try {
    cfg = vf::parse_config(text.str(), overrides);
    if (!sweep.empty()) opt.sweep = vf::parse_sweep(sweep);
  } catch (const vf::ConfigError& e) {
    std::cerr << config_path << ":\n" << e.what();
    return vf::exit_code::config_error;
  }
  opt.out_dir = out_dir;
  opt.diagnostics = diagnostics;
  for (int i = 0; i < argc; ++i) opt.command_line += (i ? " " : "") + std::string(argv[i]);

  const auto rec = vf::dispatch(name, cfg, opt, std::cout, std::cerr);
  return rec.exit_code;
}
