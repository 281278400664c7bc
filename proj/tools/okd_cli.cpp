// okd: command-line driver for sessions, figure sweeps, attack experiments
// and the network demo. Tables go to stdout, or to --out DIR with a manifest
// that can be fed back through --config to reproduce the run.

#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "okd/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Addressable optical key distribution simulator"};
  app.set_version_flag("--version", std::string(okd::kVersion));

  std::string config_path;
  app.add_option("--config", config_path, "key=value configuration file (flags override it)");

  // flag name -> config key
  const std::vector<std::pair<std::string, std::string>> keyed = {
      {"--command", "command"},
      {"--slots", "slots"},
      {"--variant", "variant"},
      {"--phi2", "phi2"},
      {"--psi2", "psi2"},
      {"--alice-knows", "alice_knows"},
      {"--epsilon", "epsilon"},
      {"--seed", "seed"},
      {"--noise-sigma", "noise_sigma"},
      {"--detector-sigma", "detector_sigma"},
      {"--lock-interval", "lock_interval"},
      {"--sample-fraction", "sample_fraction"},
      {"--step", "step"},
      {"--epoch-length", "epoch_length"},
      {"--network-size", "network_size"},
      {"--out", "out"},
  };
  std::vector<std::string> values(keyed.size());
  std::vector<CLI::Option*> options;
  for (std::size_t i = 0; i < keyed.size(); ++i) {
    options.push_back(app.add_option(keyed[i].first, values[i]));
  }
  options[0]->description(
      "session|sweep-fig2|sweep-fig3|sweep-fig4|table1|tableS1|attack|network-demo|capacity");
  options[2]->description("dual|identity");
  options[5]->description("yes|no");
  options[15]->description("output directory (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  okd::ExperimentConfig cfg;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw okd::IoError("cannot read config file '" + config_path + "'");
      okd::apply_config_text(cfg, in);
    }
    for (std::size_t i = 0; i < keyed.size(); ++i) {
      if (options[i]->count() > 0) okd::set_field(cfg, keyed[i].second, values[i]);
    }
    okd::run(cfg, std::cout);
  } catch (const okd::IoError& e) {
    std::cerr << "okd: I/O error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "okd: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
