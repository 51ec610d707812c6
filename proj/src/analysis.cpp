#include "minispice/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>

namespace minispice {

std::string_view to_string(Homotopy h) {
  switch (h) {
    case Homotopy::None: return "none";
    case Homotopy::GminStepping: return "gmin";
    case Homotopy::SourceStepping: return "source";
  }
  return "?";
}

double probe_value(const NodeMap& nodes, const UnknownLegend& legend, std::span<const double> x,
                   const Probe& probe) {
  if (probe.kind == Probe::Kind::Voltage) return node_voltage(x, nodes, probe.target);
  auto k = legend.branch(probe.target);
  if (!k) {
    throw SolverError(SolverErrorKind::InvalidArgument,
                      "probe " + probe.label() + " has no branch current");
  }
  return x[*k];
}

double OpResult::voltage(std::string_view node) const {
  return node_voltage(solution, nodes, canonical_node_name(node));
}

double OpResult::value(const Probe& probe) const {
  return probe_value(nodes, legend, solution, probe);
}

double SweepResult::value(std::size_t row, const Probe& probe) const {
  return probe_value(nodes, legend, rows.at(row), probe);
}

double TranResult::value(std::size_t row, const Probe& probe) const {
  return probe_value(nodes, legend, rows.at(row), probe);
}

Integration TranResult::step_method(std::size_t k) const {
  return (uic && k == 1) ? Integration::BackwardEuler : method;
}

std::complex<double> AcResult::value(std::size_t row, const Probe& probe) const {
  const auto& x = rows.at(row);
  if (probe.kind == Probe::Kind::Voltage) {
    auto idx = nodes.index(probe.target);
    return idx ? x[*idx] : std::complex<double>{};
  }
  auto k = legend.branch(probe.target);
  if (!k) {
    throw SolverError(SolverErrorKind::InvalidArgument,
                      "probe " + probe.label() + " has no branch current");
  }
  return x[*k];
}

// ---------------------------------------------------------------------------
// Newton-Raphson
// ---------------------------------------------------------------------------

namespace {

struct NewtonProblem {
  const Netlist& netlist;
  const NodeMap& nodes;
  const RealSystem& linear;
  const std::vector<std::size_t>& leak_nodes;
  double extra_gmin = 0.0;  // added on every node during gmin stepping
};

struct NewtonOutcome {
  bool converged = false;
  bool singular = false;
  std::vector<double> x;
  int iterations = 0;
  double residual = 0.0;
};

std::vector<double> diode_voltages(const Netlist& netlist, const NodeMap& nodes,
                                   std::span<const double> x) {
  std::vector<double> out;
  for (const auto& e : netlist.elements) {
    if (const auto* d = e.as<Diode>()) {
      out.push_back(node_voltage(x, nodes, d->anode) - node_voltage(x, nodes, d->cathode));
    }
  }
  return out;
}

RealSystem leaky_copy(const NewtonProblem& p) {
  RealSystem sys = p.linear;
  stamp_gmin(sys, p.leak_nodes, kGmin);
  if (p.extra_gmin > 0.0) {
    for (std::size_t n = 0; n < p.nodes.size(); ++n) sys.matrix(n, n) += p.extra_gmin;
  }
  return sys;
}

// Largest gap between each device's true current at the new point and the
// current its linearization (about the previous point) predicted there.
bool devices_settled(const NewtonProblem& p, const std::vector<DeviceOperatingPoint>& expanded,
                     std::span<const double> x_new, const NewtonOptions& opt,
                     double& worst_residual) {
  const auto actual = evaluate_devices(p.netlist, p.nodes, x_new);
  bool ok = true;
  worst_residual = 0.0;
  for (std::size_t k = 0; k < actual.size(); ++k) {
    const auto& a = actual[k];
    const auto& e = expanded[k];
    double predicted = 0.0;
    if (a.kind == DeviceKind::Diode) {
      predicted = e.i + e.g * (a.v - e.v);
    } else {
      predicted = e.i + e.gm * (a.v - e.v) + e.gds * (a.vds - e.vds);
    }
    const double gap = std::abs(a.i - predicted);
    worst_residual = std::max(worst_residual, gap);
    if (gap > opt.reltol * std::max(std::abs(a.i), std::abs(predicted)) + opt.abstol) ok = false;
  }
  return ok;
}

NewtonOutcome newton(const NewtonProblem& p, std::vector<double> x, const NewtonOptions& opt) {
  NewtonOutcome out;
  const bool nonlinear = p.netlist.has_nonlinear_devices();
  if (!nonlinear) {
    RealSystem sys = leaky_copy(p);
    out.x = solve(std::move(sys.matrix), std::span<const double>(sys.rhs));
    out.iterations = 1;
    out.converged = true;
    return out;
  }

  std::vector<double> junction = diode_voltages(p.netlist, p.nodes, x);
  const std::size_t node_count = p.nodes.size();
  for (int iter = 1; iter <= opt.max_iter; ++iter) {
    RealSystem sys = leaky_copy(p);
    const auto expanded = stamp_linearized_devices(sys, p.netlist, p.nodes, x, junction);
    std::vector<double> x_new;
    try {
      x_new = solve(std::move(sys.matrix), std::span<const double>(sys.rhs));
    } catch (const SolverError& err) {
      if (err.kind() != SolverErrorKind::Singular) throw;
      out.singular = true;
      out.iterations = iter;
      out.x = std::move(x);
      return out;
    }
    if (!std::all_of(x_new.begin(), x_new.end(), [](double v) { return std::isfinite(v); })) {
      out.iterations = iter;
      out.x = std::move(x);
      return out;
    }

    bool limited = false;
    std::vector<double> raw = diode_voltages(p.netlist, p.nodes, x_new);
    {
      std::size_t k = 0;
      for (const auto& e : p.netlist.elements) {
        const auto* d = e.as<Diode>();
        if (!d) continue;
        const double lim = diode_limit(raw[k], junction[k], diode_params(*p.netlist.find_model(d->model)));
        if (lim != raw[k]) limited = true;
        junction[k] = lim;
        ++k;
      }
    }

    bool steady = true;
    for (std::size_t i = 0; i < x_new.size(); ++i) {
      const double tol = opt.reltol * std::max(std::abs(x_new[i]), std::abs(x[i])) +
                         (i < node_count ? opt.vntol : opt.abstol);
      if (std::abs(x_new[i] - x[i]) > tol) {
        steady = false;
        break;
      }
    }
    double residual = 0.0;
    const bool settled = devices_settled(p, expanded, x_new, opt, residual);
    out.residual = residual;
    x = std::move(x_new);
    if (steady && settled && !limited) {
      out.converged = true;
      out.iterations = iter;
      out.x = std::move(x);
      return out;
    }
  }
  out.iterations = opt.max_iter;
  out.x = std::move(x);
  return out;
}

[[noreturn]] void fail(const NewtonOutcome& last, const std::string& what) {
  if (last.singular) {
    throw SolverError(SolverErrorKind::Singular, what + ": singular Jacobian");
  }
  SolverError err(SolverErrorKind::NoConvergence,
                  what + ": Newton did not converge (best device residual " +
                      format_value(last.residual) + " A)");
  err.best_residual = last.residual;
  throw err;
}

struct DcSolve {
  std::vector<double> x;
  int iterations = 0;
  Homotopy homotopy = Homotopy::None;
};

DcSolve solve_dc_point(const Netlist& netlist, const NodeMap& nodes, const SourceContext& ctx,
                       const NewtonOptions& opt, std::span<const double> guess) {
  const RealSystem linear = assemble_linear_dc(netlist, nodes, ctx);
  const auto leak = gmin_nodes(netlist, nodes);
  std::vector<double> x0(linear.legend.size(), 0.0);
  if (!guess.empty()) {
    if (guess.size() != x0.size()) {
      throw SolverError(SolverErrorKind::DimensionMismatch, "initial guess has wrong dimension");
    }
    x0.assign(guess.begin(), guess.end());
  }

  NewtonProblem problem{netlist, nodes, linear, leak, 0.0};
  NewtonOutcome plain = newton(problem, x0, opt);
  if (plain.converged) return {std::move(plain.x), plain.iterations, Homotopy::None};
  int total = plain.iterations;

  NewtonOutcome last = plain;

  // gmin stepping: heavy leaks first, decade by decade down to zero extra.
  if (opt.gmin_steps > 0) {
    std::vector<double> x = x0;
    bool ok = true;
    for (int k = 0; k <= opt.gmin_steps && ok; ++k) {
      problem.extra_gmin = 1e-2 * std::pow(10.0, -k * 10.0 / opt.gmin_steps);
      NewtonOutcome step = newton(problem, x, opt);
      total += step.iterations;
      ok = step.converged;
      x = step.x;
      if (!ok) last = std::move(step);
    }
    problem.extra_gmin = 0.0;
    if (ok) {
      NewtonOutcome final_step = newton(problem, x, opt);
      total += final_step.iterations;
      if (final_step.converged) return {std::move(final_step.x), total, Homotopy::GminStepping};
      last = std::move(final_step);
    }
  }
  if (opt.source_steps <= 0) fail(last, "operating point");

  // Source stepping from a dead circuit up to full strength.
  std::vector<double> x(x0.size(), 0.0);
  NewtonOutcome step;
  for (int k = 1; k <= opt.source_steps; ++k) {
    SourceContext scaled = ctx;
    scaled.scale = ctx.scale * static_cast<double>(k) / opt.source_steps;
    const RealSystem part = assemble_linear_dc(netlist, nodes, scaled);
    NewtonProblem sp{netlist, nodes, part, leak, 0.0};
    step = newton(sp, x, opt);
    total += step.iterations;
    if (!step.converged) fail(step, "operating point");
    x = std::move(step.x);
  }
  return {std::move(x), total, Homotopy::SourceStepping};
}

}  // namespace

OpResult solve_op(const Netlist& netlist, const NewtonOptions& options,
                  std::span<const double> guess, const SourceContext& sources) {
  OpResult result;
  result.nodes = build_node_map(netlist);
  result.legend = make_legend(netlist, result.nodes);
  DcSolve s = solve_dc_point(netlist, result.nodes, sources, options, guess);
  result.solution = std::move(s.x);
  result.iterations = s.iterations;
  result.homotopy = s.homotopy;
  result.devices = evaluate_devices(netlist, result.nodes, result.solution);
  return result;
}

// ---------------------------------------------------------------------------
// DC sweep
// ---------------------------------------------------------------------------

namespace {

Netlist with_source_value(const Netlist& netlist, std::string_view source, double value) {
  Netlist copy = netlist;
  const std::string key = canonical_element_name(source);
  for (auto& e : copy.elements) {
    if (element_name(e) != key) continue;
    std::visit(
        [&](auto& body) {
          using T = std::decay_t<decltype(body)>;
          if constexpr (std::is_base_of_v<SourceCard, T>) body.waveform = DcWave{value};
        },
        e.body);
  }
  return copy;
}

}  // namespace

SweepResult dc_sweep(const Netlist& netlist, std::string_view source, double start, double stop,
                     double step, const NewtonOptions& options, SweepStart mode) {
  const Element* src = netlist.find_element(source);
  if (!src || !(src->as<VSource>() || src->as<ISource>())) {
    throw SolverError(SolverErrorKind::UnknownSource,
                      "no independent source named '" + std::string(source) + "'");
  }
  if (!(step != 0.0) || !std::isfinite(step) || (stop - start) * step < 0.0) {
    throw SolverError(SolverErrorKind::InvalidArgument,
                      "sweep step must be nonzero and point from start to stop");
  }

  SweepResult result;
  result.nodes = build_node_map(netlist);
  result.legend = make_legend(netlist, result.nodes);
  result.source = element_name(*src);
  const auto count = static_cast<std::size_t>(std::llround((stop - start) / step)) + 1;
  for (std::size_t k = 0; k < count; ++k) result.axis.push_back(start + static_cast<double>(k) * step);

  if (mode == SweepStart::Warm) {
    std::vector<double> guess;
    for (std::size_t k = 0; k < count; ++k) {
      const Netlist point = with_source_value(netlist, result.source, result.axis[k]);
      try {
        DcSolve s = solve_dc_point(point, result.nodes, {}, options, guess);
        guess = s.x;
        result.rows.push_back(std::move(s.x));
      } catch (const SolverError& err) {
        result.axis.resize(k);
        throw SweepAborted(err, std::move(result));
      }
    }
    return result;
  }

  std::vector<std::vector<double>> rows(count);
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    try {
      const Netlist point = with_source_value(netlist, result.source, result.axis[i]);
      rows[i] = solve_dc_point(point, result.nodes, {}, options, {}).x;
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (std::size_t k = 0; k < count; ++k) {
    if (!errors[k]) continue;
    try {
      std::rethrow_exception(errors[k]);
    } catch (const SolverError& err) {
      result.axis.resize(k);
      rows.resize(k);
      result.rows = std::move(rows);
      throw SweepAborted(err, std::move(result));
    }
  }
  result.rows = std::move(rows);
  return result;
}

// ---------------------------------------------------------------------------
// Transient
// ---------------------------------------------------------------------------

TranResult transient(const Netlist& netlist, double tstep, double tstop, Integration method,
                     const NewtonOptions& options, bool uic) {
  if (!(tstep > 0.0) || tstop < tstep) {
    throw SolverError(SolverErrorKind::InvalidArgument, "transient needs tstep > 0 and tstop >= tstep");
  }
  TranResult result;
  result.nodes = build_node_map(netlist);
  result.legend = make_legend(netlist, result.nodes);
  result.method = method;
  result.tstep = tstep;
  result.uic = uic;
  const NodeMap& nodes = result.nodes;
  const auto ics = netlist.initial_conditions();

  std::vector<double> x(result.legend.size(), 0.0);
  if (uic) {
    for (const auto& [node, v] : ics) {
      if (auto idx = nodes.index(node)) x[*idx] = v;
    }
  } else {
    std::vector<double> guess;
    if (!ics.empty()) {
      guess.assign(result.legend.size(), 0.0);
      for (const auto& [node, v] : ics) {
        if (auto idx = nodes.index(node)) guess[*idx] = v;
      }
    }
    x = solve_op(netlist, options, guess).solution;
  }

  CompanionState& state = result.initial_state;
  for (const auto& e : netlist.elements) {
    if (const auto* c = e.as<Capacitor>()) {
      double v = node_voltage(x, nodes, c->n1) - node_voltage(x, nodes, c->n2);
      if (uic && c->ic) v = *c->ic;
      state.capacitors.push_back({v, 0.0});
    } else if (const auto* l = e.as<Inductor>()) {
      const std::size_t k = *result.legend.branch(l->name);
      if (uic) x[k] = l->ic.value_or(0.0);
      state.inductors.push_back({x[k], 0.0});
    }
  }

  const auto steps = static_cast<std::size_t>(std::floor(tstop / tstep + 1e-9));
  result.time.reserve(steps + 1);
  result.rows.reserve(steps + 1);
  result.time.push_back(0.0);
  result.rows.push_back(x);

  const auto leak = gmin_nodes(netlist, nodes);
  CompanionState current = state;
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t = static_cast<double>(k) * tstep;
    const Integration rule = result.step_method(k);
    const RealSystem linear =
        assemble_transient_step(netlist, nodes, current, rule, tstep, SourceContext{t, 1.0});
    NewtonProblem problem{netlist, nodes, linear, leak, 0.0};
    NewtonOutcome out;
    try {
      out = newton(problem, x, options);
    } catch (SolverError& err) {
      err.time = t;
      throw;
    }
    if (!out.converged) {
      try {
        fail(out, "transient step at t=" + format_value(t));
      } catch (SolverError& err) {
        err.time = t;
        throw;
      }
    }
    x = std::move(out.x);
    current = advance_companion_state(netlist, nodes, current, rule, tstep, x);
    result.time.push_back(t);
    result.rows.push_back(x);
  }
  return result;
}

// ---------------------------------------------------------------------------
// AC
// ---------------------------------------------------------------------------

std::vector<double> frequency_axis(const AcDirective& sweep) {
  std::vector<double> f;
  if (sweep.scale == AcScale::Dec) {
    const double limit = sweep.fstop * (1.0 + 1e-12);
    for (int k = 0;; ++k) {
      const double v = sweep.fstart * std::pow(10.0, static_cast<double>(k) / sweep.npoints);
      if (v > limit) break;
      f.push_back(v);
    }
  } else if (sweep.npoints <= 1) {
    f.push_back(sweep.fstart);
  } else {
    for (int k = 0; k < sweep.npoints; ++k) {
      f.push_back(sweep.fstart + (sweep.fstop - sweep.fstart) * k / (sweep.npoints - 1));
    }
  }
  return f;
}

namespace {

AcResult ac_setup(const AcDirective& sweep, const OpResult& op) {
  AcResult result;
  result.nodes = op.nodes;
  result.legend = op.legend;
  result.frequency = frequency_axis(sweep);
  result.rows.resize(result.frequency.size());
  return result;
}

std::vector<std::complex<double>> ac_point(const Netlist& netlist, const OpResult& op, double f) {
  ComplexSystem sys = assemble_ac(netlist, op.nodes, op.solution, 2.0 * std::numbers::pi * f);
  return solve(std::move(sys.matrix), std::span<const std::complex<double>>(sys.rhs));
}

}  // namespace

AcResult ac_analysis_serial(const Netlist& netlist, const AcDirective& sweep, const OpResult& op) {
  AcResult result = ac_setup(sweep, op);
  for (std::size_t k = 0; k < result.frequency.size(); ++k) {
    result.rows[k] = ac_point(netlist, op, result.frequency[k]);
  }
  return result;
}

AcResult ac_analysis(const Netlist& netlist, const AcDirective& sweep, const OpResult& op) {
  AcResult result = ac_setup(sweep, op);
  const auto n = static_cast<std::ptrdiff_t>(result.frequency.size());
  std::vector<std::exception_ptr> errors(result.frequency.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    try {
      result.rows[i] = ac_point(netlist, op, result.frequency[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return result;
}

AcResult ac_analysis(const Netlist& netlist, const AcDirective& sweep,
                     const NewtonOptions& options) {
  return ac_analysis(netlist, sweep, solve_op(netlist, options));
}

AcResult ac_analysis_serial(const Netlist& netlist, const AcDirective& sweep,
                            const NewtonOptions& options) {
  return ac_analysis_serial(netlist, sweep, solve_op(netlist, options));
}

// ---------------------------------------------------------------------------
// Thevenin
// ---------------------------------------------------------------------------

TheveninEquivalent thevenin_port(const Netlist& netlist, std::string_view node_a,
                                 std::string_view node_b, const NewtonOptions& options) {
  if (netlist.has_nonlinear_devices()) {
    throw SolverError(SolverErrorKind::NonlinearDeck,
                      "Thevenin reduction needs a linear deck (found diodes or MOSFETs)");
  }
  const std::string a = canonical_node_name(node_a);
  const std::string b = canonical_node_name(node_b);
  const NodeMap nodes = build_node_map(netlist);
  for (const auto& n : {a, b}) {
    if (n != kGround && !nodes.contains(n)) {
      throw SolverError(SolverErrorKind::InvalidArgument, "unknown node '" + n + "'");
    }
  }

  const OpResult open = solve_op(netlist, options);
  const double v_open = open.voltage(a) - open.voltage(b);

  Netlist probe = netlist;
  ISource test;
  test.name = "I__THEVENIN_TEST";
  test.npos = b;
  test.nneg = a;
  test.waveform = DcWave{1.0};
  probe.elements.push_back({test, {}});
  const OpResult loaded = solve_op(probe, options);
  const double v_loaded = loaded.voltage(a) - loaded.voltage(b);
  return {v_open, v_loaded - v_open};
}

// ---------------------------------------------------------------------------
// KCL certificate
// ---------------------------------------------------------------------------

KclContext dc_kcl_context(const Netlist& netlist, const NodeMap& nodes,
                          const SourceContext& sources) {
  KclContext ctx;
  ctx.sources = sources;
  ctx.leak_nodes = gmin_nodes(netlist, nodes);
  return ctx;
}

namespace {

KclReport kcl_report(const std::vector<double>& sum, const std::vector<double>& peak,
                     const NewtonOptions& options) {
  KclReport report;
  report.residual.resize(sum.size());
  report.bound.resize(sum.size());
  for (std::size_t n = 0; n < sum.size(); ++n) {
    report.residual[n] = std::abs(sum[n]);
    report.bound[n] = options.reltol * peak[n] + options.abstol;
    const double ratio = report.residual[n] / report.bound[n];
    if (ratio > report.worst_ratio) {
      report.worst_ratio = ratio;
      report.worst_node = n;
    }
  }
  return report;
}

}  // namespace

KclReport kcl_certificate(const Netlist& netlist, const NodeMap& nodes, std::span<const double> x,
                          const NewtonOptions& options, const KclContext& ctx) {
  const UnknownLegend legend = make_legend(netlist, nodes);
  std::vector<double> sum(nodes.size(), 0.0);
  std::vector<double> peak(nodes.size(), 0.0);
  auto flow = [&](const std::string& from, const std::string& to, double i) {
    if (auto a = nodes.index(from)) {
      sum[*a] += i;
      peak[*a] = std::max(peak[*a], std::abs(i));
    }
    if (auto b = nodes.index(to)) {
      sum[*b] -= i;
      peak[*b] = std::max(peak[*b], std::abs(i));
    }
  };
  auto v = [&](const std::string& n) { return node_voltage(x, nodes, n); };

  std::size_t ci = 0;
  std::size_t li = 0;
  for (const auto& e : netlist.elements) {
    if (const auto* r = e.as<Resistor>()) {
      flow(r->n1, r->n2, (v(r->n1) - v(r->n2)) / r->ohms);
    } else if (const auto* c = e.as<Capacitor>()) {
      if (ctx.companions) {
        const auto comp =
            companion_cap(c->farads, ctx.method, ctx.dt, ctx.companions->capacitors.at(ci++));
        flow(c->n1, c->n2, comp.g_eq * (v(c->n1) - v(c->n2)) - comp.i_eq);
      }
    } else if (const auto* l = e.as<Inductor>()) {
      if (ctx.companions) {
        const auto comp =
            companion_ind(l->henries, ctx.method, ctx.dt, ctx.companions->inductors.at(li++));
        flow(l->n1, l->n2, comp.g_eq * (v(l->n1) - v(l->n2)) + comp.i_eq);
      } else {
        flow(l->n1, l->n2, x[*legend.branch(l->name)]);
      }
    } else if (const auto* vs = e.as<VSource>()) {
      flow(vs->npos, vs->nneg, x[*legend.branch(vs->name)]);
    } else if (const auto* is = e.as<ISource>()) {
      flow(is->npos, is->nneg, source_value(*is, ctx.sources));
    } else if (const auto* d = e.as<Diode>()) {
      const auto p = diode_params(*netlist.find_model(d->model));
      flow(d->anode, d->cathode, diode_eval(p, v(d->anode) - v(d->cathode)).i);
    } else if (const auto* m = e.as<Mosfet>()) {
      const auto p = mosfet_params(*netlist.find_model(m->model));
      const double vs_ = v(m->source);
      flow(m->drain, m->source, mosfet_eval(p, v(m->gate) - vs_, v(m->drain) - vs_).id);
    }
  }
  for (auto n : ctx.leak_nodes) {
    const double i = ctx.leak_g * x[n];
    sum[n] += i;
    peak[n] = std::max(peak[n], std::abs(i));
  }

  return kcl_report(sum, peak, options);
}

KclReport ac_kcl_certificate(const Netlist& netlist, const AcResult& result, std::size_t row,
                             const OpResult& op, const NewtonOptions& options) {
  using C = std::complex<double>;
  const NodeMap& nodes = result.nodes;
  const auto& x = result.rows.at(row);
  const double omega = 2.0 * std::numbers::pi * result.frequency.at(row);
  std::vector<C> sum(nodes.size(), C{});
  std::vector<double> peak(nodes.size(), 0.0);
  auto flow = [&](const std::string& from, const std::string& to, C i) {
    if (auto a = nodes.index(from)) {
      sum[*a] += i;
      peak[*a] = std::max(peak[*a], std::abs(i));
    }
    if (auto b = nodes.index(to)) {
      sum[*b] -= i;
      peak[*b] = std::max(peak[*b], std::abs(i));
    }
  };
  auto v = [&](const std::string& n) {
    const auto k = nodes.index(n);
    return k ? x[*k] : C{};
  };
  auto dc = [&](const std::string& n) { return op.voltage(n); };
  auto phasor = [](const SourceCard& s) {
    return std::polar(s.ac_mag.value_or(0.0), s.ac_phase.value_or(0.0) * std::numbers::pi / 180.0);
  };

  for (const auto& e : netlist.elements) {
    if (const auto* r = e.as<Resistor>()) {
      flow(r->n1, r->n2, (v(r->n1) - v(r->n2)) / r->ohms);
    } else if (const auto* c = e.as<Capacitor>()) {
      flow(c->n1, c->n2, C{0.0, omega * c->farads} * (v(c->n1) - v(c->n2)));
    } else if (const auto* l = e.as<Inductor>()) {
      flow(l->n1, l->n2, x[*result.legend.branch(l->name)]);
    } else if (const auto* vs = e.as<VSource>()) {
      flow(vs->npos, vs->nneg, x[*result.legend.branch(vs->name)]);
    } else if (const auto* is = e.as<ISource>()) {
      flow(is->npos, is->nneg, phasor(*is));
    } else if (const auto* d = e.as<Diode>()) {
      const auto p = diode_params(*netlist.find_model(d->model));
      const double g = diode_eval(p, dc(d->anode) - dc(d->cathode)).g;
      flow(d->anode, d->cathode, g * (v(d->anode) - v(d->cathode)));
    } else if (const auto* m = e.as<Mosfet>()) {
      const auto p = mosfet_params(*netlist.find_model(m->model));
      const double vs0 = dc(m->source);
      const auto f = mosfet_eval(p, dc(m->gate) - vs0, dc(m->drain) - vs0);
      const C vgs = v(m->gate) - v(m->source);
      const C vds = v(m->drain) - v(m->source);
      flow(m->drain, m->source, f.gm * vgs + f.gds * vds);
    }
  }
  for (auto n : gmin_nodes(netlist, nodes)) {
    const C i = kGmin * x[n];
    sum[n] += i;
    peak[n] = std::max(peak[n], std::abs(i));
  }
  std::vector<double> mag(sum.size());
  for (std::size_t n = 0; n < sum.size(); ++n) mag[n] = std::abs(sum[n]);
  return kcl_report(mag, peak, options);
}

double transient_kcl_audit(const Netlist& netlist, const TranResult& result,
                           const NewtonOptions& options) {
  KclContext ctx;
  ctx.leak_nodes = gmin_nodes(netlist, result.nodes);
  ctx.dt = result.tstep;
  CompanionState state = result.initial_state;
  double worst = 0.0;
  for (std::size_t k = 1; k < result.rows.size(); ++k) {
    ctx.sources = SourceContext{result.time[k], 1.0};
    ctx.method = result.step_method(k);
    ctx.companions = &state;
    const auto report = kcl_certificate(netlist, result.nodes, result.rows[k], options, ctx);
    worst = std::max(worst, report.worst_ratio);
    state = advance_companion_state(netlist, result.nodes, state, ctx.method, result.tstep,
                                    result.rows[k]);
  }
  return worst;
}

}  // namespace minispice
