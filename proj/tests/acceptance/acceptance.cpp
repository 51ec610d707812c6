// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "minispice/corpus.hpp"
#include "minispice/devices.hpp"
#include "minispice/lattice.hpp"
#include "minispice/runner.hpp"
#include "minispice/topology.hpp"
#include "support/helpers.hpp"

using namespace minispice;
using namespace testsupport;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Lattice oracle equivalence
// ---------------------------------------------------------------------------

// Rename every node satisfying `to_ground` to "0".
Netlist tie_to_ground(Netlist deck, const std::function<bool(const std::string&)>& to_ground) {
  for (auto& e : deck.elements) {
    auto& r = std::get<Resistor>(e.body);
    if (to_ground(r.n1)) r.n1 = "0";
    if (to_ground(r.n2)) r.n2 = "0";
  }
  return deck;
}

Outcome lattice_equivalence() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> amps(-1.0, 1.0);
  std::uniform_real_distribution<double> ohms(0.5, 5.0);
  double worst = 0.0;
  int grids = 0;
  for (int n = 2; n <= 20; ++n) {
    for (auto boundary : {Boundary::Neumann, Boundary::Dirichlet}) {
      const double r = ohms(rng);
      const LatticeSpec spec{n, n, r, false};
      Netlist deck;
      FdProblem fd;
      fd.rows = fd.cols = n;
      fd.link_conductance = 1.0 / r;
      fd.boundary = boundary;
      std::function<bool(const std::string&)> grounded;
      if (boundary == Boundary::Neumann) {
        fd.reference = {0, 0};
        const std::string ref = lattice_node(fd.reference);
        grounded = [ref](const std::string& s) { return s == ref; };
      } else {
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) {
            if (i == 0 || j == 0 || i == n - 1 || j == n - 1) fd.fixed.push_back({{i, j}, 0.0});
          }
        }
        grounded = [n](const std::string& s) {
          int i = 0;
          int j = 0;
          std::sscanf(s.c_str(), "n%d_%d", &i, &j);
          return i == 0 || j == 0 || i == n - 1 || j == n - 1;
        };
      }
      deck = tie_to_ground(gen_lattice(spec), grounded);

      // Balanced injections into interior-or-any unpinned nodes.
      double total = 0.0;
      std::vector<Injection> inj;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (grounded(lattice_node({i, j}))) continue;
          inj.push_back({{i, j}, amps(rng)});
          total += inj.back().amps;
        }
      }
      if (inj.empty()) continue;
      if (boundary == Boundary::Neumann) {
        inj.back().amps -= total;
      }
      fd.injections = inj;
      int k = 0;
      for (const auto& q : inj) {
        deck.elements.push_back(
            make_isource("IJ" + std::to_string(++k), "0", lattice_node(q.at), q.amps));
      }

      const FdSolution ref = poisson_fd_solve(fd);
      const OpResult op = solve_op(deck);
      double scale = 0.0;
      for (double v : ref.potential) scale = std::max(scale, std::abs(v));
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const std::string name = lattice_node({i, j});
          const double mna = grounded(name) ? 0.0 : op.voltage(name);
          worst = std::max(worst, rel_diff(mna, ref.at({i, j}), scale));
        }
      }
      ++grids;
    }
  }
  const double adj = effective_resistance(LatticeSpec{2, 2, 1.0, false}, {0, 0}, {0, 1});
  const double diag = effective_resistance(LatticeSpec{2, 2, 1.0, false}, {0, 0}, {1, 1});
  const bool anchors = std::abs(adj - 0.75) <= 1e-12 && std::abs(diag - 1.0) <= 1e-12;
  return {worst <= 1e-9 && anchors,
          std::to_string(grids) + " grids 2x2..20x20, worst rel " + num(worst) +
              "; 2x2 adjacent " + num(adj) + ", diagonal " + num(diag)};
}

// ---------------------------------------------------------------------------
// 2. KCL certificate over the corpus
// ---------------------------------------------------------------------------

Netlist with_value(Netlist deck, const std::string& source, double value) {
  for (auto& e : deck.elements) {
    if (element_name(e) != source) continue;
    if (auto* v = std::get_if<VSource>(&e.body)) v->waveform = DcWave{value};
    if (auto* i = std::get_if<ISource>(&e.body)) i->waveform = DcWave{value};
  }
  return deck;
}

Outcome kcl_certificate_corpus() {
  double worst = 0.0;
  std::string worst_where;
  int analyses = 0;
  auto note = [&](double ratio, const std::string& where) {
    ++analyses;
    if (ratio > worst) {
      worst = ratio;
      worst_where = where;
    }
  };
  const NewtonOptions opts;
  for (const auto& path : corpus_deck_files()) {
    const Netlist deck = load_deck(path);
    const std::string stem = path.stem().string();
    const NodeMap nodes = build_node_map(deck);
    for (const auto& d : deck.directives) {
      if (std::holds_alternative<OpDirective>(d)) {
        const OpResult op = solve_op(deck, opts);
        note(kcl_certificate(deck, nodes, op.solution, opts, dc_kcl_context(deck, nodes))
                 .worst_ratio,
             stem + " op");
      } else if (const auto* dc = std::get_if<DcDirective>(&d)) {
        const SweepResult s = dc_sweep(deck, dc->source, dc->start, dc->stop, dc->step, opts);
        double w = 0.0;
        for (std::size_t k = 0; k < s.rows.size(); ++k) {
          const Netlist point = with_value(deck, dc->source, s.axis[k]);
          w = std::max(w, kcl_certificate(point, nodes, s.rows[k], opts,
                                          dc_kcl_context(point, nodes))
                              .worst_ratio);
        }
        note(w, stem + " dc");
      } else if (const auto* tr = std::get_if<TranDirective>(&d)) {
        for (auto m : {Integration::Trapezoidal, Integration::BackwardEuler}) {
          const TranResult r = transient(deck, tr->tstep, tr->tstop, m, opts, tr->uic);
          note(transient_kcl_audit(deck, r, opts), stem + " tran " + std::string(to_string(m)));
        }
      } else if (const auto* ac = std::get_if<AcDirective>(&d)) {
        const OpResult op = solve_op(deck, opts);
        const AcResult r = ac_analysis(deck, *ac, op);
        double w = 0.0;
        for (std::size_t k = 0; k < r.rows.size(); ++k) {
          w = std::max(w, ac_kcl_certificate(deck, r, k, op, opts).worst_ratio);
        }
        note(w, stem + " ac");
      }
    }
  }
  return {worst <= 1.0, std::to_string(analyses) + " analyses, worst |sum i|/bound " + num(worst) +
                            " (" + worst_where + ")"};
}

// ---------------------------------------------------------------------------
// 3. Superposition and source transformation
// ---------------------------------------------------------------------------

Outcome linear_theory() {
  std::mt19937_64 rng(1729);
  std::uniform_int_distribution<int> size(3, 12);
  std::uniform_real_distribution<double> logr(1.0, 4.0);
  std::uniform_real_distribution<double> volts(-10.0, 10.0);
  double worst_super = 0.0;
  double worst_norton = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    auto base = random_resistive_deck(rng, size(rng), 2, 2);

    // Superposition over every independent source.
    const OpResult full = solve_op(base.deck);
    std::vector<double> summed(base.nodes.size(), 0.0);
    for (const auto& s : base.sources) {
      const OpResult part = solve_op(only_source(base.deck, s));
      for (std::size_t k = 0; k < base.nodes.size(); ++k) summed[k] += part.voltage(base.nodes[k]);
    }
    double scale = 0.0;
    for (const auto& n : base.nodes) scale = std::max(scale, std::abs(full.voltage(n)));
    for (std::size_t k = 0; k < base.nodes.size(); ++k) {
      worst_super =
          std::max(worst_super, rel_diff(full.voltage(base.nodes[k]), summed[k], scale));
    }

    // Thevenin branch between two nodes against its Norton transform.
    std::uniform_int_distribution<std::size_t> pick(0, base.nodes.size() - 1);
    const std::string p = base.nodes[pick(rng)];
    std::string q = base.nodes[pick(rng)];
    if (q == p) q = "0";
    const double vt = volts(rng);
    const double rt = std::pow(10.0, logr(rng));
    Netlist thev = base.deck;
    thev.elements.push_back(make_vsource("VT", "ti", q, vt));
    thev.elements.push_back(make_resistor("RT", "ti", p, rt));
    Netlist norton = base.deck;
    norton.elements.push_back(make_isource("IN", q, p, vt / rt));
    norton.elements.push_back(make_resistor("RN", p, q, rt));
    const OpResult a = solve_op(thev);
    const OpResult b = solve_op(norton);
    double s2 = 0.0;
    for (const auto& n : base.nodes) s2 = std::max(s2, std::abs(a.voltage(n)));
    for (const auto& n : base.nodes) {
      worst_norton = std::max(worst_norton, rel_diff(a.voltage(n), b.voltage(n), s2));
    }
  }
  return {worst_super <= 1e-9 && worst_norton <= 1e-9,
          "50 random decks, superposition worst rel " + num(worst_super) +
              ", Norton/Thevenin worst rel " + num(worst_norton)};
}

// ---------------------------------------------------------------------------
// 4. Nonlinear DC
// ---------------------------------------------------------------------------

const GoldenCase& golden(const std::string& name) {
  static const auto cases = corpus_decks();
  for (const auto& c : cases) {
    if (c.name == name) return c;
  }
  throw std::runtime_error("no golden case " + name);
}

Outcome nonlinear_dc() {
  // Frozen scalar-bisection value for rectifier.cir.
  const double vd = measure(golden("rectifier junction"));
  const double vd_err = std::abs(vd - 0.69254363318053067);
  const double vm05 = measure(golden("inverter Wp/Wn=0.5 threshold"));
  const double vm1 = measure(golden("inverter Wp/Wn=1 threshold"));
  const double vm2 = measure(golden("inverter Wp/Wn=2 threshold"));
  const bool ok = vd_err <= 1e-6 && std::abs(vm1 - 1.0) <= 1e-3 && vm05 < vm1 && vm1 < vm2;
  return {ok, "diode error " + num(vd_err) + " V; VM(Wp/Wn=0.5,1,2) = " + num(vm05) + ", " +
                  num(vm1) + ", " + num(vm2)};
}

// ---------------------------------------------------------------------------
// 5. Transient accuracy and order
// ---------------------------------------------------------------------------

const TranDirective& tran_of(const Netlist& deck) {
  for (const auto& d : deck.directives) {
    if (const auto* t = std::get_if<TranDirective>(&d)) return *t;
  }
  throw std::runtime_error("deck has no .TRAN");
}

double rc_max_error(Integration method, double dt) {
  Netlist deck = load_deck(deck_dir() / "rc_step.cir");
  const double tau = 1e-3;
  const TranResult r = transient(deck, dt, 5 * tau, method, {}, true);
  double worst = 0.0;
  const Probe out{Probe::Kind::Voltage, "out"};
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    worst = std::max(worst, std::abs(r.value(k, out) - (1.0 - std::exp(-r.time[k] / tau))));
  }
  return worst;
}

double ringing_frequency(Integration method) {
  const Netlist deck = load_deck(deck_dir() / "rlc.cir");
  const auto& tr = tran_of(deck);
  const TranResult r = transient(deck, tr.tstep, tr.tstop, method, {}, tr.uic);
  const Probe vb{Probe::Kind::Voltage, "b"};
  std::vector<double> crossings;
  for (std::size_t k = 1; k < r.rows.size(); ++k) {
    const double a = r.value(k - 1, vb) - 1.0;
    const double b = r.value(k, vb) - 1.0;
    if ((a < 0.0) != (b < 0.0)) {
      crossings.push_back(r.time[k - 1] + r.tstep * a / (a - b));
    }
  }
  if (crossings.size() < 3) return 0.0;
  const double half_periods = static_cast<double>(crossings.size() - 1);
  return half_periods / (2.0 * (crossings.back() - crossings.front()));
}

Outcome transient_accuracy() {
  const double tau = 1e-3;
  const double at_rc = measure(golden("rc step at t=RC"), Integration::Trapezoidal);
  const double rc_rel = std::abs(at_rc - (1.0 - std::exp(-1.0))) / (1.0 - std::exp(-1.0));
  const double be_ratio = rc_max_error(Integration::BackwardEuler, tau / 100) /
                          rc_max_error(Integration::BackwardEuler, tau / 200);
  const double tr_ratio = rc_max_error(Integration::Trapezoidal, tau / 100) /
                          rc_max_error(Integration::Trapezoidal, tau / 200);
  const double f0 = 1.0 / (2.0 * std::numbers::pi * std::sqrt(1e-3 * 1e-6));
  const double zeta = 0.5 * std::sqrt(1e-6 / 1e-3);
  const double fr = ringing_frequency(Integration::Trapezoidal);
  const double f_rel = std::abs(fr - f0) / f0;
  const bool ok = rc_rel <= 0.01 && be_ratio >= 1.5 && be_ratio <= 2.5 && tr_ratio >= 3.0 &&
                  tr_ratio <= 5.0 && f_rel <= 0.02 && zeta <= 0.05;
  return {ok, "v(RC) rel err " + num(rc_rel) + "; halving dt: BE x" + num(be_ratio) + ", TR x" +
                  num(tr_ratio) + "; ringing " + num(fr) + " Hz vs f0 " + num(f0) +
                  " Hz (zeta " + num(zeta) + ")"};
}

// ---------------------------------------------------------------------------
// 6. AC accuracy
// ---------------------------------------------------------------------------

Outcome ac_accuracy() {
  const Netlist lp = load_deck(deck_dir() / "rc_lowpass.cir");
  const double fc = 1.0 / (2.0 * std::numbers::pi * 1e3 * 159.155e-9);
  const Probe out{Probe::Kind::Voltage, "out"};
  auto point = [&](double f) {
    return ac_analysis(lp, AcDirective{AcScale::Lin, 1, f, f}).value(0, out);
  };
  const auto hc = point(fc);
  const auto h10 = point(10 * fc);
  const auto h100 = point(100 * fc);
  auto db = [](std::complex<double> h) { return 20.0 * std::log10(std::abs(h)); };
  const double mag = db(hc);
  const double phase = std::arg(hc) * 180.0 / std::numbers::pi;
  const double decade = db(h10);
  const double slope = db(h100) - db(h10);

  // Near-zero frequency against the derivative of the DC solution.
  const Netlist cs = load_deck(deck_dir() / "cs_amp.cir");
  NewtonOptions tight;
  tight.reltol = 1e-12;
  tight.vntol = 1e-14;
  tight.abstol = 1e-18;
  const Probe d{Probe::Kind::Voltage, "d"};
  const double h = 1e-5;
  const double vg = 1.5;
  const double up = solve_op(with_value(cs, "VG", vg + h), tight).value(d);
  const double dn = solve_op(with_value(cs, "VG", vg - h), tight).value(d);
  const double dc_gain = (up - dn) / (2.0 * h);
  const double ac_gain =
      ac_analysis(cs, AcDirective{AcScale::Lin, 1, 1e-6, 1e-6}, tight).value(0, d).real();
  const double gain_rel = std::abs(ac_gain - dc_gain) / std::abs(dc_gain);

  const bool ok = std::abs(mag + 3.0103) <= 0.05 && std::abs(phase + 45.0) <= 0.1 &&
                  std::abs(decade + 20.0) <= 0.2 && std::abs(slope + 20.0) <= 0.2 &&
                  gain_rel <= 1e-6;
  return {ok, "corner " + num(mag) + " dB / " + num(phase) + " deg; decade above " + num(decade) +
                  " dB, next decade " + num(slope) + " dB; near-DC gain rel err " +
                  num(gain_rel)};
}

// ---------------------------------------------------------------------------
// 7. Metastability
// ---------------------------------------------------------------------------

double resolution_time(double eps) {
  Netlist deck = load_deck(deck_dir() / "latch.cir");
  for (auto& d : deck.directives) {
    if (auto* ic = std::get_if<IcDirective>(&d)) {
      for (auto& [node, v] : ic->voltages) {
        if (node == "q") v = 1.0 + 0.5 * eps;
        if (node == "qb") v = 1.0 - 0.5 * eps;
      }
    }
  }
  const auto& tr = tran_of(deck);
  const TranResult r = transient(deck, tr.tstep, tr.tstop, Integration::BackwardEuler, {}, true);
  std::vector<double> diff;
  const Probe q{Probe::Kind::Voltage, "q"};
  const Probe qb{Probe::Kind::Voltage, "qb"};
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    diff.push_back(std::abs(r.value(k, q) - r.value(k, qb)));
  }
  return first_crossing(r.time, diff, 1.0);
}

Outcome metastability() {
  std::vector<double> t;
  for (double eps = 1e-1; eps > 0.5e-6; eps /= 10) t.push_back(resolution_time(eps));
  bool increasing = t.front() > 0.0;
  std::vector<double> inc;
  for (std::size_t k = 1; k < t.size(); ++k) {
    increasing = increasing && t[k] > t[k - 1];
    inc.push_back(t[k] - t[k - 1]);
  }
  const auto [lo, hi] = std::minmax_element(inc.begin(), inc.end());
  const double spread = *hi / *lo;
  std::string detail = "t_res(ns) =";
  for (double v : t) detail += " " + num(v * 1e9);
  detail += "; per-decade increments max/min " + num(spread);
  return {increasing && *lo > 0.0 && spread <= 1.25, detail};
}

// ---------------------------------------------------------------------------
// 8. DRC and CLI contracts
// ---------------------------------------------------------------------------

Outcome drc_and_cli() {
  const auto work = scratch_dir("acceptance_cli");
  const auto m = deck_dir() / "malformed";
  struct Expect {
    const char* file;
    int code;
    const char* needle;
  };
  const Expect expected[] = {
      {"no_ground.cir", kExitDrc, "DRC NO_GROUND"},
      {"floating_island.cir", kExitDrc, "DRC FLOATING_ISLAND: x,y"},
      {"vsource_loop.cir", kExitDrc, "DRC VSOURCE_LOOP: V1,V2\n"},
      {"isource_cutset.cir", kExitDrc, "DRC ISOURCE_CUTSET: I1"},
      {"parse_unknown_card.cir", kExitParse, "unknown element 'X' at line 4"},
      {"parse_arity.cir", kExitParse, "at line 3"},
      {"parse_duplicate.cir", kExitParse, "duplicate element name 'R1'"},
      {"parse_unresolved_model.cir", kExitParse, "unresolved model 'DMISSING'"},
      {"parse_bad_number.cir", kExitParse, "malformed number"},
      {"parse_multi.cir", kExitParse, "at line 5"},
  };
  int ok = 0;
  std::string failures;
  for (const auto& e : expected) {
    const auto r = run_cli("run \"" + (m / e.file).string() + "\" -o \"" + work.string() + "\"",
                           work);
    const auto c = run_cli("check \"" + (m / e.file).string() + "\"", work);
    const bool hit = (r.out + r.err).find(e.needle) != std::string::npos;
    if (r.exit_code == e.code && c.exit_code == e.code && hit) {
      ++ok;
    } else {
      failures += std::string(" ") + e.file + "(exit " + std::to_string(r.exit_code) + ")";
    }
  }
  const int cases = static_cast<int>(std::size(expected));
  if (static_cast<int>(malformed_deck_files().size()) != cases) {
    failures += " malformed corpus size mismatch";
  }

  // Byte determinism of CSV and HTML across repeated invocations.
  bool deterministic = true;
  std::size_t compared = 0;
  for (const auto& deck : corpus_deck_files()) {
    const auto a = work / "a";
    const auto b = work / "b";
    std::filesystem::remove_all(a);
    std::filesystem::remove_all(b);
    const auto ra = run_cli("run \"" + deck.string() + "\" -o \"" + a.string() + "\"", work);
    const auto rb = run_cli("run \"" + deck.string() + "\" -o \"" + b.string() + "\"", work);
    deterministic = deterministic && ra.exit_code == 0 && rb.exit_code == 0 && ra.out == rb.out;
    for (const auto& f : std::filesystem::directory_iterator(a)) {
      deterministic = deterministic && slurp(f.path()) == slurp(b / f.path().filename());
      ++compared;
    }
    const auto ha = run_cli("matrix \"" + deck.string() + "\" --html", work).out;
    const auto hb = run_cli("matrix \"" + deck.string() + "\" --html", work).out;
    deterministic = deterministic && !ha.empty() && ha == hb;
  }
  const bool pass = ok == cases && failures.empty() && deterministic && compared > 0;
  return {pass, std::to_string(ok) + "/" + std::to_string(cases) +
                    " malformed decks gave the expected kind and exit code" + failures + "; " +
                    std::to_string(compared) + " CSV files and every HTML dump " +
                    (deterministic ? "byte-identical" : "DIFFERED") + " across runs"};
}

// ---------------------------------------------------------------------------
// 9. Device derivatives
// ---------------------------------------------------------------------------

Outcome device_derivatives() {
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int points = 0;
  auto check = [&](double analytic, double numeric) {
    const double err = std::abs(analytic - numeric);
    const double rel = analytic == 0.0 ? (numeric == 0.0 ? 0.0 : 1.0) : err / std::abs(analytic);
    worst = std::max(worst, rel);
  };
  // Five-point stencil: exact on the cubic MOSFET pieces.
  auto deriv = [](const auto& f, double x, double h) {
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
  };
  const double h = 1e-3;
  while (points < 1000) {
    const int kind = points % 3;
    if (kind == 0) {
      DiodeParams p;
      p.is_sat = std::pow(10.0, -16.0 + 4.0 * u(rng));
      p.n = 1.0 + u(rng);
      // Below about -10 nVt the current is -IS to within rounding and a
      // difference quotient can no longer resolve g.
      const double v = -0.25 + 1.05 * u(rng);
      const double fd = deriv([&](double x) { return diode_eval(p, x).i; }, v, 1e-3 * p.nvt());
      check(diode_eval(p, v).g, fd);
    } else {
      MosfetParams p;
      p.polarity = kind == 1 ? Polarity::Nmos : Polarity::Pmos;
      const double sign = kind == 1 ? 1.0 : -1.0;
      p.vto = sign * (0.3 + 0.7 * u(rng));
      p.kp = 5e-5 + 2e-4 * u(rng);
      p.w = 1e-6 * (1.0 + 9.0 * u(rng));
      p.l = 1e-6;
      p.lambda = 0.1 * u(rng);
      const double vgs = sign * 3.0 * u(rng);
      const double vds = -3.0 + 6.0 * u(rng);
      // Away from region boundaries, in the device's own frame.
      const double svgs = sign * vgs;
      const double svds = sign * vds;
      const double vov = (svds >= 0 ? svgs : svgs - svds) - sign * p.vto;
      const double vde = std::abs(svds);
      if (std::abs(vov) < 0.05 || std::abs(vde - vov) < 0.05 || vde < 0.05) continue;
      const auto at = mosfet_eval(p, vgs, vds);
      check(at.gm, deriv([&](double x) { return mosfet_eval(p, x, vds).id; }, vgs, h));
      check(at.gds, deriv([&](double x) { return mosfet_eval(p, vgs, x).id; }, vds, h));
    }
    ++points;
  }
  return {worst <= 1e-6, std::to_string(points) +
                             " bias points (diode, NMOS, PMOS), worst rel " + num(worst)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "lattice oracle equivalence", lattice_equivalence},
      {2, "KCL certificate", kcl_certificate_corpus},
      {3, "linear-theory properties", linear_theory},
      {4, "nonlinear DC", nonlinear_dc},
      {5, "transient accuracy and order", transient_accuracy},
      {6, "AC accuracy", ac_accuracy},
      {7, "metastability study", metastability},
      {8, "DRC and CLI contracts", drc_and_cli},
      {9, "derivative checks", device_derivatives},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %d %s: %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", c.id, c.title,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed,
              std::size(criteria));
  return failed == 0 ? 0 : 1;
}
