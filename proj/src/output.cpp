#include "minispice/output.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace minispice {

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) os << ',';
    os << header[i];
  }
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << format_value(row[i]);
    }
    os << '\n';
  }
}

std::string html_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string matrix_html(const RealSystem& system, const std::string& title) {
  const auto& labels = system.legend.labels;
  std::ostringstream os;
  os << "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>"
     << html_escape(title) << "</title>\n</head>\n<body>\n<table border=\"1\">\n";
  os << "<tr><th></th>";
  for (const auto& l : labels) os << "<th>" << html_escape(l) << "</th>";
  os << "<th>RHS</th></tr>\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    os << "<tr><th>" << html_escape(labels[i]) << "</th>";
    for (std::size_t j = 0; j < labels.size(); ++j) {
      os << "<td>" << format_value(system.matrix(i, j)) << "</td>";
    }
    os << "<td>" << format_value(system.rhs[i]) << "</td></tr>\n";
  }
  os << "</table>\n</body>\n</html>\n";
  return os.str();
}

std::string matrix_text(const RealSystem& system) {
  const auto& labels = system.legend.labels;
  std::ostringstream os;
  os << "unknown";
  for (const auto& l : labels) os << '\t' << l;
  os << "\tRHS\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    os << labels[i];
    for (std::size_t j = 0; j < labels.size(); ++j) os << '\t' << format_value(system.matrix(i, j));
    os << '\t' << format_value(system.rhs[i]) << '\n';
  }
  return os.str();
}

std::vector<std::string> probe_headers(const std::vector<Probe>& probes, AnalysisKind analysis) {
  std::vector<std::string> out;
  for (const auto& p : probes) {
    if (analysis == AnalysisKind::Ac) {
      const char kind = p.kind == Probe::Kind::Voltage ? 'V' : 'I';
      out.push_back(std::string(1, kind) + "M(" + p.target + ")");
      out.push_back(std::string(1, kind) + "P(" + p.target + ")");
    } else {
      out.push_back(p.label());
    }
  }
  return out;
}

std::vector<std::vector<double>> op_rows(const OpResult& r, const std::vector<Probe>& probes) {
  std::vector<double> row;
  for (const auto& p : probes) row.push_back(r.value(p));
  return {row};
}

std::vector<std::vector<double>> sweep_rows(const SweepResult& r,
                                            const std::vector<Probe>& probes) {
  std::vector<std::vector<double>> out;
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    std::vector<double> row{r.axis[k]};
    for (const auto& p : probes) row.push_back(r.value(k, p));
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<std::vector<double>> tran_rows(const TranResult& r, const std::vector<Probe>& probes) {
  std::vector<std::vector<double>> out;
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    std::vector<double> row{r.time[k]};
    for (const auto& p : probes) row.push_back(r.value(k, p));
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<std::vector<double>> ac_rows(const AcResult& r, const std::vector<Probe>& probes) {
  std::vector<std::vector<double>> out;
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    std::vector<double> row{r.frequency[k]};
    for (const auto& p : probes) {
      const auto v = r.value(k, p);
      row.push_back(std::abs(v));
      row.push_back(std::arg(v) * 180.0 / std::numbers::pi);
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace minispice
