#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "errors.hpp"
#include "ramanpulse.h"

namespace {

struct SubArgs {
  std::string config;
  std::string output;
  std::string report;
  std::vector<std::string> sets;
};

void wire_common(CLI::App* sub, SubArgs& a, bool with_report) {
  sub->fallthrough();  // lets global flags (--threads) follow the subcommand
  sub->add_option("-c,--config", a.config, "key = value configuration file");
  sub->add_option("--set", a.sets,
                  "supply or override one key=value entry (repeatable)");
  sub->add_option("-o,--output", a.output, "output file")->required();
  if (with_report)
    sub->add_option("--report", a.report,
                    "optimization report file (default: <output>.report)");
}

cli::CommonArgs to_common(const CLI::App* sub, const SubArgs& a,
                          bool with_report = false) {
  cli::CommonArgs c;
  if (sub->count("--config") > 0) c.config = a.config;
  c.overrides = a.sets;
  c.output = a.output;
  if (with_report && sub->count("--report") > 0) c.report = a.report;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "phase-modulated Raman pulse design and atom-interferometer simulation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", rp_version());
  unsigned threads = 0;
  app.add_option("--threads", threads,
                 "cap worker threads (0 = hardware default)");

  SubArgs a_opt, a_exp, a_fri, a_spe, a_tem, a_con;
  std::string verify_path;

  CLI::App* c_opt = app.add_subcommand(
      "optimize", "design a pulse by ensemble-robust gradient ascent");
  wire_common(c_opt, a_opt, true);
  CLI::App* c_exp = app.add_subcommand(
      "export-waveform", "write a reference or derived waveform file");
  wire_common(c_exp, a_exp, false);
  CLI::App* c_fri = app.add_subcommand(
      "fringe-scan", "interferometer fringe versus final-pulse phase offset");
  wire_common(c_fri, a_fri, false);
  CLI::App* c_spe = app.add_subcommand(
      "spectral-scan", "thermal-averaged transfer versus laser detuning");
  wire_common(c_spe, a_spe, false);
  CLI::App* c_tem = app.add_subcommand(
      "temporal-scan",
      "thermal-averaged excited population versus truncation time");
  wire_common(c_tem, a_tem, false);
  CLI::App* c_con = app.add_subcommand(
      "contrast-map",
      "single-atom fringe contrast over a detuning/coupling grid");
  wire_common(c_con, a_con, false);
  CLI::App* c_ver =
      app.add_subcommand("verify", "check a waveform file's invariants");
  c_ver->fallthrough();
  c_ver->add_option("file", verify_path, "waveform file to verify")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitConfig;
  }

  rp_set_max_threads(threads);

  try {
    if (c_opt->parsed())
      cli::cmd_optimize(to_common(c_opt, a_opt, true));
    else if (c_exp->parsed())
      cli::cmd_export_waveform(to_common(c_exp, a_exp));
    else if (c_fri->parsed())
      cli::cmd_fringe_scan(to_common(c_fri, a_fri));
    else if (c_spe->parsed())
      cli::cmd_spectral_scan(to_common(c_spe, a_spe));
    else if (c_tem->parsed())
      cli::cmd_temporal_scan(to_common(c_tem, a_tem));
    else if (c_con->parsed())
      cli::cmd_contrast_map(to_common(c_con, a_con));
    else if (c_ver->parsed())
      cli::cmd_verify(verify_path);
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return cli::kExitConfig;
  } catch (const cli::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return cli::kExitIo;
  } catch (const cli::RunError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitRuntime;
  }
  return 0;
}
