// Command-line front end: designs a scenario, sweeps it, compares all of
// them, or prints the design tables.
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "dmnkit/scenarios.hpp"
#include "json.hpp"

using namespace dmnkit;

namespace {

struct cli_opts {
  std::string config_path;
  std::optional<std::string> scenario, loss, zat, out;
  std::optional<double> fr, spacing, fmin, fmax;
  std::optional<int> points;
};

void add_common(CLI::App* cmd, cli_opts& o) {
  cmd->add_option("--config", o.config_path, "JSON config file (flags override it)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--scenario", o.scenario,
                  "baseline | dmn-le | dmn-rh | dmn-rh-stub | ndm | compare");
  cmd->add_option("--fr", o.fr, "design frequency in Hz");
  cmd->add_option("--spacing", o.spacing, "element spacing in wavelengths");
  cmd->add_option("--points", o.points, "sweep point count");
  cmd->add_option("--fmin", o.fmin, "sweep start in Hz");
  cmd->add_option("--fmax", o.fmax, "sweep stop in Hz");
  cmd->add_option("--loss", o.loss, "component loss model: ideal | q-factor");
  cmd->add_option("--zat", o.zat, "design impedance source: model | reference");
  cmd->add_option("--out", o.out, "output directory");
}

// Builds the run configuration; z_set reports whether the impedance source
// was chosen explicitly (file or flag) so `tables` can pick its own default.
run_config build_config(const cli_opts& o, bool& z_set) {
  run_config cfg;
  z_set = false;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + o.config_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    cfg = config_from_json(ss.str());
    z_set = nlohmann::ordered_json::parse(ss.str()).contains("z_source");
  }
  if (o.scenario) cfg.scenario = parse_scenario(*o.scenario);
  if (o.fr) cfg.f_r = *o.fr;
  if (o.spacing) cfg.spacing_wl = *o.spacing;
  if (o.points) cfg.points = *o.points;
  if (o.fmin) cfg.f_min = *o.fmin;
  if (o.fmax) cfg.f_max = *o.fmax;
  if (o.loss) {
    if (*o.loss == "ideal")
      cfg.loss.use_q = false;
    else if (*o.loss == "q-factor")
      cfg.loss.use_q = true;
    else
      throw std::invalid_argument("unknown loss mode: " + *o.loss);
  }
  if (o.zat) {
    if (*o.zat == "model")
      cfg.z_source = z_source_kind::model;
    else if (*o.zat == "reference")
      cfg.z_source = z_source_kind::reference;
    else
      throw std::invalid_argument("unknown z source: " + *o.zat);
    z_set = true;
  }
  if (o.out) cfg.out_dir = *o.out;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decoupling and matching network designer for compact dipole arrays"};
  app.require_subcommand(1);
  cli_opts o;
  auto* design = app.add_subcommand("design", "write design_report.json and netlist.json");
  auto* sweep = app.add_subcommand("sweep", "design plus S-parameter sweep and bandwidth report");
  auto* compare =
      app.add_subcommand("compare", "sweep every scenario and write a combined compare.csv");
  auto* tables =
      app.add_subcommand("tables", "print design tables with the reference comparison");
  for (auto* c : {design, sweep, compare, tables}) add_common(c, o);
  CLI11_PARSE(app, argc, argv);

  try {
    bool z_set = false;
    run_config cfg = build_config(o, z_set);
    if (design->parsed()) return run(cfg, /*with_sweep=*/false);
    if (sweep->parsed()) return run(cfg, /*with_sweep=*/true);
    if (compare->parsed()) {
      cfg.scenario = scenario_kind::compare;
      return run(cfg, /*with_sweep=*/true);
    }
    // tables compare against the published values, so default to the
    // reference impedance matrix unless the user picked a source
    if (!z_set) cfg.z_source = z_source_kind::reference;
    std::cout << tables_text(cfg);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
