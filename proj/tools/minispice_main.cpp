#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "minispice/runner.hpp"

int main(int argc, char** argv) {
  using namespace minispice;

  CLI::App app{"minispice: SPICE-subset circuit simulator"};
  app.require_subcommand(1);

  std::string deck;
  std::string out_dir = ".";
  std::string method = "tr";
  auto* run = app.add_subcommand("run", "run every analysis in a deck");
  run->add_option("deck", deck, "netlist file")->required();
  run->add_option("-o,--output-dir", out_dir, "directory for CSV output");
  run->add_option("--method", method, "transient integration: be or tr")
      ->check(CLI::IsMember({"be", "tr"}));

  auto* check = app.add_subcommand("check", "parse and run DRC only");
  check->add_option("deck", deck, "netlist file")->required();

  LatticeSpec spec;
  std::string lattice_out;
  auto* lattice = app.add_subcommand("lattice", "emit a rectangular resistor lattice deck");
  lattice->add_option("rows", spec.rows)->required()->check(CLI::PositiveNumber);
  lattice->add_option("cols", spec.cols)->required()->check(CLI::PositiveNumber);
  std::string r_text;
  lattice->add_option("r", r_text, "link resistance, SPICE suffixes allowed")->required();
  lattice->add_flag("--grounded", spec.grounded_periphery,
                    "tie boundary nodes to ground through r");
  lattice->add_option("-o,--output", lattice_out, "write to a file instead of stdout");

  bool html = false;
  auto* matrix = app.add_subcommand("matrix", "dump the assembled DC MNA system");
  matrix->add_option("deck", deck, "netlist file")->required();
  matrix->add_flag("--html", html, "emit an HTML table");

  std::string node_a;
  std::string node_b;
  auto* thevenin = app.add_subcommand("thevenin", "Thevenin equivalent seen between two nodes");
  thevenin->add_option("deck", deck, "netlist file")->required();
  thevenin->add_option("node_a", node_a)->required();
  thevenin->add_option("node_b", node_b)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitParse;
  }

  if (*run) {
    RunOptions options;
    options.output_dir = out_dir;
    options.method = method == "be" ? Integration::BackwardEuler : Integration::Trapezoidal;
    return run_deck(deck, options, std::cout, std::cerr).exit_code;
  }
  if (*check) return check_deck(deck, std::cout, std::cerr);
  if (*lattice) {
    std::optional<std::filesystem::path> file;
    if (!lattice_out.empty()) file = lattice_out;
    try {
      spec.r_link = parse_value(r_text);
    } catch (const std::exception& e) {
      std::cerr << "lattice: bad resistance '" << r_text << "': " << e.what() << "\n";
      return kExitParse;
    }
    return lattice_command(spec, file, std::cout, std::cerr);
  }
  if (*matrix) return dump_matrix(deck, html, std::cout, std::cerr);
  if (*thevenin) return thevenin_command(deck, node_a, node_b, std::cout, std::cerr);
  return kExitParse;
}
