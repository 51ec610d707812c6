#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "minispice/analysis.hpp"

namespace minispice {

enum class Provenance { Trivial, Derived };

std::string_view to_string(Provenance p);

// What is read off the analysis named by the deck.
enum class Metric {
  OpValue,        // probe at the operating point
  DcValue,        // probe at sweep point `at`
  TranValue,      // probe at time `at` (linear interpolation)
  AcMagnitudeDb,  // 20 log10 |probe| at frequency `at`
  AcPhaseDeg,     // arg(probe) in degrees at frequency `at`
  RiseTime,       // 10%-90% rise of probe for a step of amplitude `at`
  TransferCrossing,  // sweep value where probe equals the swept voltage
};

struct GoldenCase {
  std::string name;
  std::filesystem::path deck;
  AnalysisKind analysis = AnalysisKind::Op;
  Probe probe;
  Metric metric = Metric::OpValue;
  double at = 0.0;
  double expected = 0.0;
  // Absolute tolerances; transient cases carry one per integration rule.
  double tolerance = 0.0;
  double tolerance_be = 0.0;
  Provenance provenance = Provenance::Trivial;
  std::string oracle;

  double tolerance_for(Integration method) const {
    return analysis == AnalysisKind::Tran && method == Integration::BackwardEuler ? tolerance_be
                                                                                  : tolerance;
  }
};

std::filesystem::path deck_dir();

// Every checked-in deck outside decks/malformed, sorted by name.
std::vector<std::filesystem::path> corpus_deck_files();
std::vector<std::filesystem::path> malformed_deck_files();

std::vector<GoldenCase> corpus_decks();

Netlist load_deck(const std::filesystem::path& path);

// Runs the case's analysis (using the deck's own directive parameters) and
// reads off the metric.
double measure(const GoldenCase& c, Integration method = Integration::Trapezoidal);

// Time at which `values` first crosses `level`, linearly interpolated;
// negative when it never does.
double first_crossing(const std::vector<double>& axis, const std::vector<double>& values,
                      double level);

}  // namespace minispice
