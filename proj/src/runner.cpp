#include "minispice/runner.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <sstream>

#include "minispice/output.hpp"
#include "minispice/topology.hpp"

namespace minispice {

namespace {

namespace fs = std::filesystem;

std::optional<std::string> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Parse step shared by every subcommand. Returns an exit code on failure.
std::optional<int> load(const fs::path& path, Netlist& deck, std::ostream& err) {
  const auto text = read_file(path);
  if (!text) {
    err << "error: cannot read '" << path.string() << "'\n";
    return kExitParse;
  }
  try {
    deck = parse_netlist(*text);
  } catch (const ParseError& e) {
    for (const auto& d : e.diagnostics()) {
      err << path.string() << ": " << format_diagnostic(d) << '\n';
    }
    return kExitParse;
  }
  return std::nullopt;
}

std::vector<std::string> drc_lines(const Netlist& deck) {
  std::vector<std::string> out;
  for (const auto& v : check_drc(deck)) out.push_back(format_violation(v));
  return out;
}

std::string describe(const SolverError& e) {
  std::string s = std::string(to_string(e.kind()));
  if (e.column > 0) s += " at column " + std::to_string(e.column);
  if (e.time >= 0.0) s += " at t=" + format_value(e.time);
  return s + ": " + e.what();
}

std::vector<const PrintDirective*> prints_for(const Netlist& deck, AnalysisKind kind) {
  std::vector<const PrintDirective*> out;
  for (const auto& d : deck.directives) {
    const auto* p = std::get_if<PrintDirective>(&d);
    if (p && (!p->analysis || *p->analysis == kind)) out.push_back(p);
  }
  return out;
}

std::vector<Probe> merged_probes(const std::vector<const PrintDirective*>& prints) {
  std::vector<Probe> out;
  for (const auto* p : prints) {
    for (const auto& probe : p->probes) {
      if (std::find(out.begin(), out.end(), probe) == out.end()) out.push_back(probe);
    }
  }
  return out;
}

class CsvSink {
 public:
  CsvSink(const fs::path& deck, const RunOptions& options, RunReport& report)
      : stem_(deck.stem().string()), dir_(options.output_dir), report_(report) {}

  void write(AnalysisKind kind, std::vector<std::string> header,
             const std::vector<std::vector<double>>& rows) {
    const std::string name(to_string(kind));
    const int k = ++count_[name];
    std::string file = stem_ + "." + name;
    if (k > 1) file += "." + std::to_string(k);
    file += ".csv";
    fs::create_directories(dir_);
    const fs::path path = dir_ / file;
    std::ofstream os(path, std::ios::binary);
    write_csv(os, header, rows);
    report_.outputs.push_back(path);
  }

 private:
  std::string stem_;
  fs::path dir_;
  RunReport& report_;
  std::map<std::string, int> count_;
};

}  // namespace

RunReport run_deck(const fs::path& path, const RunOptions& options, std::ostream& out,
                   std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  RunReport report;
  auto finish = [&] {
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
  };

  Netlist deck;
  if (auto code = load(path, deck, err)) {
    report.exit_code = *code;
    return finish();
  }
  report.violations = drc_lines(deck);
  if (!report.violations.empty()) {
    for (const auto& line : report.violations) out << line << '\n';
    report.exit_code = kExitDrc;
    return finish();
  }

  CsvSink sink(path, options, report);
  std::optional<OpResult> op;  // reused by AC
  auto ensure_op = [&]() -> const OpResult& {
    if (!op) op = solve_op(deck, options.newton);
    return *op;
  };

  for (const auto& d : deck.directives) {
    DirectiveStatus status;
    try {
      if (std::holds_alternative<OpDirective>(d)) {
        status.analysis = AnalysisKind::Op;
        const OpResult& r = ensure_op();
        for (std::size_t i = 0; i < r.legend.labels.size(); ++i) {
          out << r.legend.labels[i] << " = " << format_value(r.solution[i]) << '\n';
        }
        const auto probes = merged_probes(prints_for(deck, AnalysisKind::Op));
        if (!probes.empty()) {
          sink.write(AnalysisKind::Op, probe_headers(probes, AnalysisKind::Op), op_rows(r, probes));
        }
      } else if (const auto* dc = std::get_if<DcDirective>(&d)) {
        status.analysis = AnalysisKind::Dc;
        const auto probes = merged_probes(prints_for(deck, AnalysisKind::Dc));
        auto emit = [&](const SweepResult& r) {
          if (probes.empty()) return;
          auto header = probe_headers(probes, AnalysisKind::Dc);
          header.insert(header.begin(), r.source);
          sink.write(AnalysisKind::Dc, header, sweep_rows(r, probes));
        };
        try {
          emit(dc_sweep(deck, dc->source, dc->start, dc->stop, dc->step, options.newton));
        } catch (const SweepAborted& e) {
          emit(e.partial);
          throw;
        }
      } else if (const auto* tr = std::get_if<TranDirective>(&d)) {
        status.analysis = AnalysisKind::Tran;
        const auto r =
            transient(deck, tr->tstep, tr->tstop, options.method, options.newton, tr->uic);
        const auto probes = merged_probes(prints_for(deck, AnalysisKind::Tran));
        if (!probes.empty()) {
          auto header = probe_headers(probes, AnalysisKind::Tran);
          header.insert(header.begin(), "time");
          sink.write(AnalysisKind::Tran, header, tran_rows(r, probes));
        }
      } else if (const auto* ac = std::get_if<AcDirective>(&d)) {
        status.analysis = AnalysisKind::Ac;
        const auto r = ac_analysis(deck, *ac, ensure_op());
        const auto probes = merged_probes(prints_for(deck, AnalysisKind::Ac));
        if (!probes.empty()) {
          auto header = probe_headers(probes, AnalysisKind::Ac);
          header.insert(header.begin(), "frequency");
          sink.write(AnalysisKind::Ac, header, ac_rows(r, probes));
        }
      } else {
        continue;  // .IC and .PRINT are not analyses
      }
      status.ok = true;
    } catch (const SolverError& e) {
      status.message = describe(e);
      err << "error: " << to_string(status.analysis) << ": " << status.message << '\n';
      report.exit_code = kExitNumeric;
    }
    report.directives.push_back(std::move(status));
  }
  return finish();
}

int check_deck(const fs::path& path, std::ostream& out, std::ostream& err) {
  Netlist deck;
  if (auto code = load(path, deck, err)) return *code;
  const auto lines = drc_lines(deck);
  for (const auto& line : lines) out << line << '\n';
  if (!lines.empty()) return kExitDrc;
  out << "DRC clean\n";
  return kExitOk;
}

int dump_matrix(const fs::path& path, bool html, std::ostream& out, std::ostream& err) {
  Netlist deck;
  if (auto code = load(path, deck, err)) return *code;
  const auto lines = drc_lines(deck);
  if (!lines.empty()) {
    for (const auto& line : lines) out << line << '\n';
    return kExitDrc;
  }
  const NodeMap nodes = build_node_map(deck);
  const RealSystem sys = assemble_linear_dc(deck, nodes);
  out << (html ? matrix_html(sys, deck.title) : matrix_text(sys));
  return kExitOk;
}

int thevenin_command(const fs::path& path, const std::string& node_a, const std::string& node_b,
                     std::ostream& out, std::ostream& err) {
  Netlist deck;
  if (auto code = load(path, deck, err)) return *code;
  const auto lines = drc_lines(deck);
  if (!lines.empty()) {
    for (const auto& line : lines) out << line << '\n';
    return kExitDrc;
  }
  try {
    const auto t = thevenin_port(deck, node_a, node_b);
    out << "v_th = " << format_value(t.v_th) << '\n';
    out << "r_th = " << format_value(t.r_th) << '\n';
  } catch (const SolverError& e) {
    err << "error: thevenin: " << describe(e) << '\n';
    return kExitNumeric;
  }
  return kExitOk;
}

int lattice_command(const LatticeSpec& spec, const std::optional<fs::path>& file,
                    std::ostream& out, std::ostream& err) {
  std::string text;
  try {
    text = write_netlist(gen_lattice(spec));
  } catch (const SolverError& e) {
    err << "error: lattice: " << e.what() << '\n';
    return kExitParse;
  }
  if (!file) {
    out << text;
    return kExitOk;
  }
  std::ofstream os(*file, std::ios::binary);
  if (!os) {
    err << "error: cannot write '" << file->string() << "'\n";
    return kExitParse;
  }
  os << text;
  return kExitOk;
}

}  // namespace minispice
