#pragma once

// Test-only utilities: random resistive decks, CLI invocation, file helpers.

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "minispice/analysis.hpp"
#include "minispice/netlist.hpp"

namespace testsupport {

using namespace minispice;

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::path(MINISPICE_TEST_TMP) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs the minispice binary with `args` (already shell-quoted as needed).
inline CliResult run_cli(const std::string& args, const std::filesystem::path& work) {
  const auto out = work / "cli.stdout";
  const auto err = work / "cli.stderr";
  const std::string cmd = std::string("\"") + MINISPICE_CLI_PATH + "\" " + args + " > \"" +
                          out.string() + "\" 2> \"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

inline Element make_resistor(std::string name, std::string a, std::string b, double ohms) {
  Resistor r;
  r.name = std::move(name);
  r.n1 = std::move(a);
  r.n2 = std::move(b);
  r.ohms = ohms;
  return {r, {}};
}

inline Element make_vsource(std::string name, std::string p, std::string m, double v) {
  VSource s;
  s.name = std::move(name);
  s.npos = std::move(p);
  s.nneg = std::move(m);
  s.waveform = DcWave{v};
  return {s, {}};
}

inline Element make_isource(std::string name, std::string p, std::string m, double a) {
  ISource s;
  s.name = std::move(name);
  s.npos = std::move(p);
  s.nneg = std::move(m);
  s.waveform = DcWave{a};
  return {s, {}};
}

// Connected resistor network on nodes n1..nN plus ground: a random spanning
// tree, extra random links, a few grounded voltage sources (each through its
// own series resistor so no source loop can form) and floating current
// sources between tree nodes.
struct RandomResistive {
  Netlist deck;
  std::vector<std::string> nodes;  // n1..nN
  std::vector<std::string> sources;
};

inline RandomResistive random_resistive_deck(std::mt19937_64& rng, int n_nodes, int n_vsrc,
                                             int n_isrc) {
  std::uniform_real_distribution<double> logr(1.0, 5.0);
  std::uniform_real_distribution<double> val(-10.0, 10.0);
  RandomResistive out;
  out.deck.title = "random resistive deck";
  std::vector<std::string> all{"0"};
  for (int k = 1; k <= n_nodes; ++k) {
    out.nodes.push_back("n" + std::to_string(k));
    all.push_back(out.nodes.back());
  }
  int rcount = 0;
  auto resistor = [&](const std::string& a, const std::string& b) {
    out.deck.elements.push_back(
        make_resistor("R" + std::to_string(++rcount), a, b, std::pow(10.0, logr(rng))));
  };
  for (std::size_t k = 1; k < all.size(); ++k) {
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    resistor(all[k], all[pick(rng)]);
  }
  std::uniform_int_distribution<std::size_t> any(0, all.size() - 1);
  for (int k = 0; k < n_nodes; ++k) {
    const auto a = any(rng);
    const auto b = any(rng);
    if (a != b) resistor(all[a], all[b]);
  }
  std::uniform_int_distribution<std::size_t> node(0, out.nodes.size() - 1);
  for (int k = 1; k <= n_vsrc; ++k) {
    const std::string inner = "v" + std::to_string(k);
    const std::string name = "V" + std::to_string(k);
    out.deck.elements.push_back(make_vsource(name, inner, "0", val(rng)));
    resistor(inner, out.nodes[node(rng)]);
    out.sources.push_back(name);
  }
  for (int k = 1; k <= n_isrc; ++k) {
    const std::string name = "I" + std::to_string(k);
    out.deck.elements.push_back(
        make_isource(name, all[any(rng)], out.nodes[node(rng)], val(rng) * 1e-3));
    out.sources.push_back(name);
  }
  return out;
}

// Copy of `deck` with every independent source except `keep` set to zero.
inline Netlist only_source(const Netlist& deck, const std::string& keep) {
  Netlist out = deck;
  for (auto& e : out.elements) {
    if (auto* s = std::get_if<VSource>(&e.body); s && s->name != keep) s->waveform = DcWave{0.0};
    if (auto* s = std::get_if<ISource>(&e.body); s && s->name != keep) s->waveform = DcWave{0.0};
  }
  return out;
}

inline double rel_diff(double a, double b, double scale) {
  return std::abs(a - b) / std::max(scale, 1e-300);
}

}  // namespace testsupport
