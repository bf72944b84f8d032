#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "optocool/commands.hpp"
#include "optocool/config.hpp"
#include "optocool/errors.hpp"
#include "optocool/parallel.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::string format;
  std::vector<std::string> sets;
  std::string figure;
  int threads = 0;
  bool serial = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw optocool::ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(optocool::Command command, const Flags& f) {
  using namespace optocool;
  ConfigDocument doc = f.config.empty() ? ConfigDocument{} : ConfigDocument::parse(read_file(f.config));
  for (const auto& s : f.sets) doc.apply_override(s);
  if (!f.out.empty()) doc.set("output", "path", f.out);
  if (!f.format.empty()) doc.set("output", "format", f.format);

  std::optional<FigureId> figure;
  if (command == Command::figure) figure = figure_id_from_string(f.figure);
  const RunSpec spec = parse_config(doc, command, figure);

  if (f.threads > 0) set_num_threads(f.threads);
  const Table table = execute(spec, f.serial ? Execution::serial : Execution::parallel);
  const std::string bytes = emit_table(table, spec.output.format, run_meta(spec));

  if (spec.output.path.empty()) {
    std::fwrite(bytes.data(), 1, bytes.size(), stdout);
  } else {
    std::ofstream out(spec.output.path, std::ios::binary);
    out << bytes;
    if (!out) throw ConfigError("cannot write '" + spec.output.path + "'");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  using optocool::Command;
  CLI::App app{"Semiclassical cooling of a mechanical mode by a nonlinearly driven cavity"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(optocool::kToolVersion));

  Flags flags;
  Command chosen = Command::fixed_points;
  const std::vector<std::pair<Command, std::string>> commands = {
      {Command::fixed_points, "Classical fixed points with stability and branch labels"},
      {Command::spectrum, "Photon-number spectrum S_nn(omega) per stable fixed point"},
      {Command::damping, "Optomechanical damping Gamma_opt(omega) per stable fixed point"},
      {Command::phonons, "Residual and minimum phonon numbers at omega_m"},
      {Command::sweep, "Parameter sweep over one or two axes"},
      {Command::optimize, "Detuning that maximizes Gamma_opt(omega_m)"},
      {Command::design, "Cooling design: drive below threshold, tuned detuning"},
      {Command::figure, "Dataset for one figure panel"},
  };
  for (const auto& [cmd, help] : commands) {
    CLI::App* sub = app.add_subcommand(std::string(optocool::to_string(cmd)), help);
    sub->add_option("--config", flags.config, "Configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", flags.out, "Output file (default stdout)");
    sub->add_option("--format", flags.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--set", flags.sets, "Override, section.key=value")->take_all();
    sub->add_option("--threads", flags.threads, "OpenMP threads (0 = runtime default)")
        ->check(CLI::NonNegativeNumber);
    sub->add_flag("--serial", flags.serial, "Use the serial kernels");
    if (cmd == Command::figure) {
      sub->add_option("id", flags.figure, "Figure id (1b 1c 1d 1e 2a 2b 3a 3b 3c 3d 4a 4b 4c 4d)")
          ->required();
    }
    sub->callback([&chosen, c = cmd] { chosen = c; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : optocool::kExitConfig;
  }

  try {
    return run(chosen, flags);
  } catch (const optocool::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return optocool::exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return optocool::exit_code_for(e);
  }
}
