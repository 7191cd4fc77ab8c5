#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "barely/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Finite almost chains: generate, check, adjust, and extension-operator analysis"};
  app.require_subcommand(1);

  barely::cli::RunConfig config;

  const std::map<std::string, std::string> command_help = {
      {"generate", "write a family from a generator config or flags"},
      {"check", "run the chain, barely-alternating and almost-chain checks"},
      {"adjust", "insert indices one at a time into a barely alternating family"},
      {"compat", "decide whether two conditions have a common extension"},
      {"gap", "interpolate a gap tower and list the exception sets"},
      {"triples", "print the entry/exit/re-entry table of a family"},
      {"operator", "evaluate the extension operator, its norm and a limit schedule"},
      {"sweep", "run generate, adjust and analyse over a parameter grid"},
  };
  const std::map<std::string, std::string> flag_help = {
      {"budget", "defect budget"},
      {"order", "insertion order: sorted, given or random"},
      {"depth", "dyadic depth (sweep: comma-separated list)"},
      {"ground-size", "ground set size N (sweep: comma-separated list)"},
      {"count", "number of indices (sweep: comma-separated list)"},
      {"flips", "toggled bits per set for perturbed chains (sweep: list)"},
      {"kind", "generator kind: initial_segment, marciszewski, perturbed"},
      {"config", "generator config document"},
      {"report", "where to write the adjustment report"},
      {"model", "line model document"},
      {"top", "extra carrier point above every index, as p/q"},
      {"function", "function document"},
      {"schedule", "schedule document"},
      {"repeats", "sweep instances per grid cell"},
      {"jobs", "sweep worker count"},
  };

  // "command:flag" -> raw value; only flags actually given are forwarded
  std::map<std::string, std::string> values;
  for (const auto& [command, allowed] : barely::cli::detail::allowed_parameters()) {
    CLI::App* sub = app.add_subcommand(command, command_help.at(command));
    sub->add_option("--input,-i", config.inputs, command == "compat" ? "the two condition files" : "input file");
    sub->add_option("--output,-o", config.output, "output file (default: stdout)");
    sub->add_option("--seed", config.seed, "seed for random choices")->default_val(0);
    for (const auto& name : allowed) {
      sub->add_option("--" + name, values[command + ":" + name], flag_help.at(name));
    }
    sub->callback([&config, &values, sub, &allowed, command] {
      config.command = command;
      for (const auto& name : allowed) {
        if (sub->count("--" + name) > 0) config.parameters[name] = values[command + ":" + name];
      }
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error[input]: " << e.what() << '\n';
    return barely::cli::kInputError;
  }
  return barely::cli::run(config, std::cout, std::cerr);
}
