#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "minispice/analysis.hpp"
#include "minispice/lattice.hpp"

namespace minispice {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDrc = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitNumeric = 3;

struct RunOptions {
  std::filesystem::path output_dir = ".";
  Integration method = Integration::Trapezoidal;
  NewtonOptions newton;
};

struct DirectiveStatus {
  AnalysisKind analysis = AnalysisKind::Op;
  bool ok = false;
  std::string message;  // empty on success
};

struct RunReport {
  std::vector<DirectiveStatus> directives;
  std::vector<std::filesystem::path> outputs;
  std::vector<std::string> violations;
  double wall_seconds = 0.0;
  int exit_code = kExitOk;
};

// DRC, then every analysis directive in deck order. Each applicable .PRINT
// writes <stem>.<analysis>.csv into output_dir; a repeated analysis kind gets
// <stem>.<analysis>.<k>.csv for k = 2, 3, ... OP values also go to `out`.
RunReport run_deck(const std::filesystem::path& deck, const RunOptions& options, std::ostream& out,
                   std::ostream& err);

// Parse and DRC only.
int check_deck(const std::filesystem::path& deck, std::ostream& out, std::ostream& err);

// Assembled linear DC system (devices absent), as text or an HTML table.
int dump_matrix(const std::filesystem::path& deck, bool html, std::ostream& out, std::ostream& err);

int thevenin_command(const std::filesystem::path& deck, const std::string& node_a,
                     const std::string& node_b, std::ostream& out, std::ostream& err);

// Writes the generated deck to `file` or, when empty, to `out`.
int lattice_command(const LatticeSpec& spec, const std::optional<std::filesystem::path>& file,
                    std::ostream& out, std::ostream& err);

}  // namespace minispice
