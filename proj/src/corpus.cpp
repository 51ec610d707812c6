#include "minispice/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace minispice {

namespace fs = std::filesystem;

std::string_view to_string(Provenance p) {
  return p == Provenance::Trivial ? "TRIVIAL" : "DERIVED";
}

fs::path deck_dir() { return fs::path(MINISPICE_DECK_DIR); }

namespace {

std::vector<fs::path> cir_files(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".cir") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

Probe v(const char* node) { return {Probe::Kind::Voltage, node}; }

template <typename T>
const T& directive(const Netlist& deck, const fs::path& path) {
  for (const auto& d : deck.directives) {
    if (const auto* x = std::get_if<T>(&d)) return *x;
  }
  throw SolverError(SolverErrorKind::InvalidArgument,
                    path.filename().string() + " lacks the directive this case needs");
}

double interpolate(const std::vector<double>& axis, const std::vector<double>& values, double at) {
  if (at <= axis.front()) return values.front();
  for (std::size_t k = 1; k < axis.size(); ++k) {
    if (at <= axis[k]) {
      const double f = (at - axis[k - 1]) / (axis[k] - axis[k - 1]);
      return values[k - 1] + f * (values[k] - values[k - 1]);
    }
  }
  return values.back();
}

Netlist with_source_value(Netlist deck, const std::string& source, double value) {
  for (auto& e : deck.elements) {
    if (element_name(e) != source) continue;
    if (auto* vs = std::get_if<VSource>(&e.body)) vs->waveform = DcWave{value};
    if (auto* is = std::get_if<ISource>(&e.body)) is->waveform = DcWave{value};
  }
  return deck;
}

// Bracket Vout - Vin from the sweep, then bisect with full OP solves.
double transfer_crossing(const Netlist& deck, const DcDirective& dc, const Probe& probe) {
  const SweepResult sweep = dc_sweep(deck, dc.source, dc.start, dc.stop, dc.step);
  for (std::size_t k = 1; k < sweep.axis.size(); ++k) {
    const double f0 = sweep.value(k - 1, probe) - sweep.axis[k - 1];
    const double f1 = sweep.value(k, probe) - sweep.axis[k];
    if ((f0 > 0.0) == (f1 > 0.0)) continue;
    double lo = sweep.axis[k - 1];
    double hi = sweep.axis[k];
    std::vector<double> guess = sweep.rows[k - 1];
    for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
      const double mid = 0.5 * (lo + hi);
      const OpResult op = solve_op(with_source_value(deck, dc.source, mid), {}, guess);
      guess = op.solution;
      if ((op.value(probe) - mid > 0.0) == (f0 > 0.0)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }
  throw SolverError(SolverErrorKind::InvalidArgument, "transfer curve never crosses Vout = Vin");
}

}  // namespace

std::vector<fs::path> corpus_deck_files() { return cir_files(deck_dir()); }

std::vector<fs::path> malformed_deck_files() { return cir_files(deck_dir() / "malformed"); }

Netlist load_deck(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_netlist(ss.str());
}

double first_crossing(const std::vector<double>& axis, const std::vector<double>& values,
                      double level) {
  for (std::size_t k = 1; k < values.size(); ++k) {
    const double a = values[k - 1] - level;
    const double b = values[k] - level;
    if (a < 0.0 && b >= 0.0) return axis[k - 1] + (axis[k] - axis[k - 1]) * (-a) / (b - a);
    if (a > 0.0 && b <= 0.0) return axis[k - 1] + (axis[k] - axis[k - 1]) * a / (a - b);
  }
  return -1.0;
}

std::vector<GoldenCase> corpus_decks() {
  const fs::path d = deck_dir();
  using enum Metric;
  const auto T = Provenance::Trivial;
  const auto D = Provenance::Derived;
  const auto Op = AnalysisKind::Op;
  const auto Dc = AnalysisKind::Dc;
  const auto Tran = AnalysisKind::Tran;
  const auto Ac = AnalysisKind::Ac;

  const char* closed = "decks/oracles/closed_forms.py";
  const char* lattice = "decks/oracles/lattice_fd.py";
  const char* rc_line = "decks/oracles/rc_line_expm.py";
  const char* bisect = "decks/oracles/rectifier_bisection.py";

  std::vector<GoldenCase> out{
      {"divider3 upper tap", d / "divider3.cir", Op, v("a"), OpValue, 0, 2.0, 1e-9, 0, T,
       "equal division"},
      {"divider3 lower tap", d / "divider3.cir", Op, v("b"), OpValue, 0, 1.0, 1e-9, 0, T,
       "equal division"},
      {"divider midpoint", d / "divider_mid.cir", Op, v("mid"), OpValue, 0, 5.0, 1e-9, 0, T,
       "equal division"},
      {"wheatstone left arm", d / "wheatstone.cir", Op, v("a"), OpValue, 0, 20.0 / 3.0, 1e-9, 0,
       T, "divider 2k/3k of 10 V"},
      {"wheatstone right arm", d / "wheatstone.cir", Op, v("b"), OpValue, 0, 20.0 / 3.0, 1e-9,
       0, T, "divider 3k/4.5k of 10 V"},
      {"wheatstone sweep at 5 V", d / "wheatstone.cir", Dc, v("a"), DcValue, 5.0, 10.0 / 3.0,
       1e-9, 0, T, "bridge arm is linear in VS"},
      {"ladder stage 1", d / "ladder.cir", Op, v("n1"), OpValue, 0, 4.0, 1e-9, 0, T,
       "R-2R halving"},
      {"ladder stage 2", d / "ladder.cir", Op, v("n2"), OpValue, 0, 2.0, 1e-9, 0, T,
       "R-2R halving"},
      {"ladder stage 3", d / "ladder.cir", Op, v("n3"), OpValue, 0, 1.0, 1e-9, 0, T,
       "R-2R halving"},
      {"lattice 2x2 adjacent", d / "lattice_2x2_adj.cir", Op, v("n0_0"), OpValue, 0, 0.75,
       1e-12, 0, T, "1 ohm parallel 3 ohm"},
      {"lattice 2x2 diagonal", d / "lattice_2x2_diag.cir", Op, v("n0_0"), OpValue, 0, 1.0,
       1e-12, 0, T, "two 2 ohm paths in parallel"},
      {"lattice 3x3 centre-corner", d / "lattice_3x3.cir", Op, v("n1_1"), OpValue, 0, 0.875,
       1e-9, 0, D, lattice},
      {"lattice 5x5 centre-edge", d / "lattice_5x5.cir", Op, v("n2_2"), OpValue, 0,
       0.86090909090909051, 1e-9, 0, D, lattice},
      {"rectifier junction", d / "rectifier.cir", Op, v("a"), OpValue, 0, 0.69254363318053067,
       1e-6, 0, D, bisect},
      {"cs amp drain bias", d / "cs_amp.cir", Op, v("d"), OpValue, 0, 2.380952380952381, 1e-6,
       0, D, closed},
      {"cs amp midband gain", d / "cs_amp.cir", Ac, v("d"), AcMagnitudeDb, 1e3,
       19.980281740366978, 1e-3, 0, D, closed},
      {"ltp drain 1", d / "ltp.cir", Op, v("d1"), OpValue, 0, 4.0, 1e-6, 0, T,
       "symmetric split of the tail current"},
      {"ltp drain 2", d / "ltp.cir", Op, v("d2"), OpValue, 0, 4.0, 1e-6, 0, T,
       "symmetric split of the tail current"},
      {"inverter Wp/Wn=0.5 threshold", d / "inv_wp05.cir", Dc, v("out"), TransferCrossing, 0,
       0.91519378398188815, 1e-6, 0, D, closed},
      {"inverter Wp/Wn=1 threshold", d / "inv_wp1.cir", Dc, v("out"), TransferCrossing, 0, 1.0,
       1e-6, 0, T, "matched devices, VDD/2"},
      {"inverter Wp/Wn=2 threshold", d / "inv_wp2.cir", Dc, v("out"), TransferCrossing, 0,
       1.0848062160181119, 1e-6, 0, D, closed},
      {"rc step at t=RC", d / "rc_step.cir", Tran, v("out"), TranValue, 1e-3,
       0.63212055882855767, 6.3e-3, 6.3e-3, D, closed},
      {"rc lowpass corner magnitude", d / "rc_lowpass.cir", Ac, v("out"), AcMagnitudeDb,
       999.99964243596094, -3.0102999566398125, 0.05, 0, D, closed},
      {"rc lowpass corner phase", d / "rc_lowpass.cir", Ac, v("out"), AcPhaseDeg,
       999.99964243596094, -45.0, 0.1, 0, D, closed},
      {"rc lowpass decade above", d / "rc_lowpass.cir", Ac, v("out"), AcMagnitudeDb,
       9999.9964243596096, -20.043213737826427, 0.2, 0, D, closed},
      {"rlc capacitor near first peak", d / "rlc.cir", Tran, v("b"), TranValue, 1e-4,
       1.9513388135360836, 2e-3, 0.1, D, closed},
      {"rlc capacitor at 250 us", d / "rlc.cir", Tran, v("b"), TranValue, 2.5e-4,
       1.030807497314101, 5e-3, 0.15, D, closed},
  };
  const double rise[] = {1.557215537100674e-05, 2.3072619435498051e-05, 2.6279811136552101e-05,
                         2.7354984780751458e-05, 2.7499877407457147e-05};
  const char* stage[] = {"s1", "s2", "s3", "s4", "s5"};
  for (int k = 0; k < 5; ++k) {
    out.push_back({std::string("rc line rise ") + stage[k], d / "rc_line.cir", Tran, v(stage[k]),
                   RiseTime, 1.0, rise[k], 0.01 * rise[k], 0.03 * rise[k], D, rc_line});
  }
  return out;
}

double measure(const GoldenCase& c, Integration method) {
  const Netlist deck = load_deck(c.deck);
  switch (c.metric) {
    case Metric::OpValue:
      return solve_op(deck).value(c.probe);
    case Metric::DcValue: {
      const auto& dc = directive<DcDirective>(deck, c.deck);
      const SweepResult r = dc_sweep(deck, dc.source, dc.start, dc.stop, dc.step);
      std::vector<double> values;
      for (std::size_t k = 0; k < r.rows.size(); ++k) values.push_back(r.value(k, c.probe));
      return interpolate(r.axis, values, c.at);
    }
    case Metric::TranValue:
    case Metric::RiseTime: {
      const auto& tr = directive<TranDirective>(deck, c.deck);
      const TranResult r = transient(deck, tr.tstep, tr.tstop, method, {}, tr.uic);
      std::vector<double> values;
      for (std::size_t k = 0; k < r.rows.size(); ++k) values.push_back(r.value(k, c.probe));
      if (c.metric == Metric::TranValue) return interpolate(r.time, values, c.at);
      const double start = values.front();
      const double span = c.at;  // step amplitude
      const double t10 = first_crossing(r.time, values, start + 0.1 * span);
      const double t90 = first_crossing(r.time, values, start + 0.9 * span);
      return t90 - t10;
    }
    case Metric::AcMagnitudeDb:
    case Metric::AcPhaseDeg: {
      const AcDirective one{AcScale::Lin, 1, c.at, c.at};
      const AcResult r = ac_analysis(deck, one);
      const auto h = r.value(0, c.probe);
      if (c.metric == Metric::AcMagnitudeDb) return 20.0 * std::log10(std::abs(h));
      return std::arg(h) * 180.0 / std::numbers::pi;
    }
    case Metric::TransferCrossing:
      return transfer_crossing(deck, directive<DcDirective>(deck, c.deck), c.probe);
  }
  return 0.0;
}

}  // namespace minispice
