#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "minispice/analysis.hpp"
#include "minispice/mna.hpp"

namespace minispice {

// Header row plus data rows; "." decimal point, shortest round-trip numbers,
// every row newline-terminated.
void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// Table of the assembled system with legend labels on the first row and
// column and the right-hand side as the last column.
std::string matrix_html(const RealSystem& system, const std::string& title);
std::string matrix_text(const RealSystem& system);

std::string html_escape(const std::string& s);

// Column blocks for .PRINT probes.
std::vector<std::string> probe_headers(const std::vector<Probe>& probes, AnalysisKind analysis);

std::vector<std::vector<double>> op_rows(const OpResult& r, const std::vector<Probe>& probes);
std::vector<std::vector<double>> sweep_rows(const SweepResult& r, const std::vector<Probe>& probes);
std::vector<std::vector<double>> tran_rows(const TranResult& r, const std::vector<Probe>& probes);
// Magnitude and phase (degrees) per probe.
std::vector<std::vector<double>> ac_rows(const AcResult& r, const std::vector<Probe>& probes);

}  // namespace minispice
