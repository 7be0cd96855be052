#include <CLI11.hpp>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "spinwalk/commands.hpp"
#include "spinwalk/config.hpp"
#include "spinwalk/errors.hpp"
#include "spinwalk/version.hpp"

namespace {

struct SubArgs {
  std::string config_path;
  std::vector<std::string> sets;
  std::string outdir;
};

void attach_options(CLI::App* sub, SubArgs& args) {
  sub->add_option("-c,--config", args.config_path, "key = value configuration file");
  sub->add_option("-s,--set", args.sets, "override, e.g. --set j=3")->allow_extra_args(false);
  sub->add_option("-o,--outdir", args.outdir, "output directory")->required();
}

spinwalk::RunConfig load_config(const SubArgs& args) {
  std::string text, name = "<none>";
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path);
    if (!in)
      throw spinwalk::config_error("cannot open config file " + args.config_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
    name = args.config_path;
  }
  return spinwalk::make_run_config(text, name, args.sets);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"discrete-time quantum walks with a magnetic impurity"};
  app.set_version_flag("--version", std::string("spinwalk ") + spinwalk::kVersion);
  app.require_subcommand(1);

  SubArgs a_matrices, a_spectrum, a_bound, a_evolve, a_negativity;
  CLI::App* s_matrices =
      app.add_subcommand("matrices", "dump coin and impurity matrices with oracle deviations");
  attach_options(s_matrices, a_matrices);
  CLI::App* s_spectrum =
      app.add_subcommand("spectrum", "one-walker eigensystem with band classification");
  attach_options(s_spectrum, a_spectrum);
  CLI::App* s_bound =
      app.add_subcommand("bound", "analytic XX bound states with residual checks");
  attach_options(s_bound, a_bound);
  CLI::App* s_evolve =
      app.add_subcommand("evolve", "two-walker evolution with observable series");
  attach_options(s_evolve, a_evolve);
  CLI::App* s_negativity =
      app.add_subcommand("negativity", "walker-walker negativity over time");
  attach_options(s_negativity, a_negativity);

  CLI11_PARSE(app, argc, argv);

  try {
    if (s_matrices->parsed())
      spinwalk::cmd_matrices(load_config(a_matrices), a_matrices.outdir);
    else if (s_spectrum->parsed())
      spinwalk::cmd_spectrum(load_config(a_spectrum), a_spectrum.outdir);
    else if (s_bound->parsed())
      spinwalk::cmd_bound(load_config(a_bound), a_bound.outdir);
    else if (s_evolve->parsed())
      spinwalk::cmd_evolve(load_config(a_evolve), a_evolve.outdir);
    else if (s_negativity->parsed())
      spinwalk::cmd_negativity(load_config(a_negativity), a_negativity.outdir);
  } catch (const spinwalk::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const spinwalk::regime_error& e) {
    std::cerr << "regime error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
