#include "minispice/mna.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace minispice {

std::optional<std::size_t> UnknownLegend::branch(std::string_view element) const {
  const std::string key = canonical_element_name(element);
  for (std::size_t k = 0; k < branch_elements.size(); ++k) {
    if (branch_elements[k] == key) return node_count + k;
  }
  return std::nullopt;
}

UnknownLegend make_legend(const Netlist& netlist, const NodeMap& nodes) {
  UnknownLegend legend;
  legend.node_count = nodes.size();
  for (const auto& n : nodes.names()) legend.labels.push_back("V(" + n + ")");
  for (const auto& e : netlist.elements) {
    if (e.as<VSource>() || e.as<Inductor>()) {
      legend.branch_elements.push_back(element_name(e));
      legend.labels.push_back("I(" + element_name(e) + ")");
    }
  }
  return legend;
}

double source_value(const SourceCard& src, const SourceContext& ctx) {
  return ctx.scale * waveform_eval(src.waveform, ctx.time);
}

std::string_view to_string(Integration method) {
  return method == Integration::BackwardEuler ? "be" : "tr";
}

namespace {

using Index = std::optional<std::size_t>;

template <class Scalar>
class Stamper {
 public:
  Stamper(MnaSystem<Scalar>& sys, const NodeMap& nodes) : sys_(sys), nodes_(nodes) {}

  Index node(const std::string& name) const { return nodes_.index(name); }

  void conductance(Index a, Index b, Scalar g) {
    if (a) sys_.matrix(*a, *a) += g;
    if (b) sys_.matrix(*b, *b) += g;
    if (a && b) {
      sys_.matrix(*a, *b) -= g;
      sys_.matrix(*b, *a) -= g;
    }
  }

  // Current `i` flowing from a through the element to b.
  void current(Index a, Index b, Scalar i) {
    if (a) sys_.rhs[*a] -= i;
    if (b) sys_.rhs[*b] += i;
  }

  // Branch current k leaves a and enters b; row k gets v(a) - v(b).
  void branch_incidence(Index a, Index b, std::size_t k) {
    if (a) {
      sys_.matrix(*a, k) += Scalar{1};
      sys_.matrix(k, *a) += Scalar{1};
    }
    if (b) {
      sys_.matrix(*b, k) -= Scalar{1};
      sys_.matrix(k, *b) -= Scalar{1};
    }
  }

  // Current id = gm * v(g, s) + gds * v(d, s), entering d and leaving s.
  void transconductance(Index d, Index g, Index s, Scalar gm, Scalar gds) {
    conductance(d, s, gds);
    if (d && g) sys_.matrix(*d, *g) += gm;
    if (d && s) sys_.matrix(*d, *s) -= gm;
    if (s && g) sys_.matrix(*s, *g) -= gm;
    if (s) sys_.matrix(*s, *s) += gm;
  }

  MnaSystem<Scalar>& sys() { return sys_; }

 private:
  MnaSystem<Scalar>& sys_;
  const NodeMap& nodes_;
};

template <class Scalar>
void stamp_resistors_and_sources(Stamper<Scalar>& st, const Netlist& netlist,
                                 const SourceContext& ctx) {
  const auto& legend = st.sys().legend;
  for (const auto& e : netlist.elements) {
    if (const auto* r = e.as<Resistor>()) {
      st.conductance(st.node(r->n1), st.node(r->n2), Scalar{1.0 / r->ohms});
    } else if (const auto* v = e.as<VSource>()) {
      const std::size_t k = *legend.branch(v->name);
      st.branch_incidence(st.node(v->npos), st.node(v->nneg), k);
      st.sys().rhs[k] += Scalar{source_value(*v, ctx)};
    } else if (const auto* i = e.as<ISource>()) {
      st.current(st.node(i->npos), st.node(i->nneg), Scalar{source_value(*i, ctx)});
    }
  }
}

}  // namespace

RealSystem assemble_linear_dc(const Netlist& netlist, const NodeMap& nodes,
                              const SourceContext& ctx) {
  RealSystem sys(make_legend(netlist, nodes));
  Stamper<double> st(sys, nodes);
  stamp_resistors_and_sources(st, netlist, ctx);
  for (const auto& e : netlist.elements) {
    if (const auto* l = e.as<Inductor>()) {
      st.branch_incidence(st.node(l->n1), st.node(l->n2), *sys.legend.branch(l->name));
    }
  }
  return sys;
}

// ---------------------------------------------------------------------------
// Transient
// ---------------------------------------------------------------------------

Companion companion_cap(double c, Integration method, double dt, const CapacitorState& s) {
  if (method == Integration::BackwardEuler) {
    const double g = c / dt;
    return {g, g * s.v_prev};
  }
  const double g = 2.0 * c / dt;
  return {g, g * s.v_prev + s.i_prev};
}

Companion companion_ind(double l, Integration method, double dt, const InductorState& s) {
  if (method == Integration::BackwardEuler) return {dt / l, s.i_prev};
  const double g = dt / (2.0 * l);
  return {g, s.i_prev + g * s.v_prev};
}

RealSystem assemble_transient_step(const Netlist& netlist, const NodeMap& nodes,
                                   const CompanionState& state, Integration method, double dt,
                                   const SourceContext& ctx) {
  RealSystem sys(make_legend(netlist, nodes));
  Stamper<double> st(sys, nodes);
  stamp_resistors_and_sources(st, netlist, ctx);
  std::size_t ci = 0;
  std::size_t li = 0;
  for (const auto& e : netlist.elements) {
    if (const auto* c = e.as<Capacitor>()) {
      const auto comp = companion_cap(c->farads, method, dt, state.capacitors.at(ci++));
      const Index a = st.node(c->n1);
      const Index b = st.node(c->n2);
      st.conductance(a, b, comp.g_eq);
      st.current(a, b, -comp.i_eq);
    } else if (const auto* l = e.as<Inductor>()) {
      const auto comp = companion_ind(l->henries, method, dt, state.inductors.at(li++));
      const std::size_t k = *sys.legend.branch(l->name);
      const Index a = st.node(l->n1);
      const Index b = st.node(l->n2);
      if (a) {
        sys.matrix(*a, k) += 1.0;
        sys.matrix(k, *a) -= comp.g_eq;
      }
      if (b) {
        sys.matrix(*b, k) -= 1.0;
        sys.matrix(k, *b) += comp.g_eq;
      }
      sys.matrix(k, k) += 1.0;
      sys.rhs[k] += comp.i_eq;
    }
  }
  return sys;
}

double node_voltage(std::span<const double> x, const NodeMap& nodes, std::string_view name) {
  auto idx = nodes.index(name);
  return idx ? x[*idx] : 0.0;
}

CompanionState advance_companion_state(const Netlist& netlist, const NodeMap& nodes,
                                       const CompanionState& state, Integration method,
                                       double dt, std::span<const double> x) {
  CompanionState next = state;
  std::size_t ci = 0;
  std::size_t li = 0;
  for (const auto& e : netlist.elements) {
    if (const auto* c = e.as<Capacitor>()) {
      const auto& prev = state.capacitors.at(ci);
      const auto comp = companion_cap(c->farads, method, dt, prev);
      const double v = node_voltage(x, nodes, c->n1) - node_voltage(x, nodes, c->n2);
      next.capacitors[ci++] = {v, comp.g_eq * v - comp.i_eq};
    } else if (const auto* l = e.as<Inductor>()) {
      const auto& prev = state.inductors.at(li);
      const auto comp = companion_ind(l->henries, method, dt, prev);
      const double v = node_voltage(x, nodes, l->n1) - node_voltage(x, nodes, l->n2);
      next.inductors[li++] = {comp.g_eq * v + comp.i_eq, v};
    }
  }
  return next;
}

// ---------------------------------------------------------------------------
// Devices
// ---------------------------------------------------------------------------

namespace {

template <class Fn>
void for_each_device(const Netlist& netlist, Fn&& fn) {
  std::size_t diode_index = 0;
  for (const auto& e : netlist.elements) {
    if (const auto* d = e.as<Diode>()) {
      fn(*d, diode_index++);
    } else if (const auto* m = e.as<Mosfet>()) {
      fn(*m, std::size_t{0});
    }
  }
}

struct DeviceVisitor {
  const Netlist& netlist;
  const NodeMap& nodes;
  std::span<const double> x;
  std::span<const double> diode_v;
  RealSystem* system;
  std::vector<DeviceOperatingPoint>& out;

  void operator()(const Diode& d, std::size_t index) {
    const DiodeParams p = diode_params(*netlist.find_model(d.model));
    const double v = index < diode_v.size()
                         ? diode_v[index]
                         : node_voltage(x, nodes, d.anode) - node_voltage(x, nodes, d.cathode);
    const auto lin = linearize_diode(p, v);
    DeviceOperatingPoint op;
    op.name = d.name;
    op.kind = DeviceKind::Diode;
    op.v = v;
    op.i = lin.i_at_point;
    op.g = lin.g_small;
    out.push_back(op);
    if (system) {
      Stamper<double> st(*system, nodes);
      st.conductance(st.node(d.anode), st.node(d.cathode), lin.g_small);
      st.current(st.node(d.anode), st.node(d.cathode), lin.i_equiv);
    }
  }

  void operator()(const Mosfet& m, std::size_t) {
    const MosfetParams p = mosfet_params(*netlist.find_model(m.model));
    const double vs = node_voltage(x, nodes, m.source);
    const double vgs = node_voltage(x, nodes, m.gate) - vs;
    const double vds = node_voltage(x, nodes, m.drain) - vs;
    const auto ev = mosfet_eval(p, vgs, vds);
    DeviceOperatingPoint op;
    op.name = m.name;
    op.kind = DeviceKind::Mosfet;
    op.v = vgs;
    op.vds = vds;
    op.i = ev.id;
    op.gm = ev.gm;
    op.gds = ev.gds;
    op.region = ev.region;
    out.push_back(op);
    if (system) {
      Stamper<double> st(*system, nodes);
      const Index d = st.node(m.drain);
      const Index g = st.node(m.gate);
      const Index s = st.node(m.source);
      st.transconductance(d, g, s, ev.gm, ev.gds);
      st.current(d, s, ev.id - ev.gm * vgs - ev.gds * vds);
    }
  }
};

}  // namespace

std::vector<DeviceOperatingPoint> stamp_linearized_devices(RealSystem& system,
                                                           const Netlist& netlist,
                                                           const NodeMap& nodes,
                                                           std::span<const double> x,
                                                           std::span<const double> diode_v) {
  std::vector<DeviceOperatingPoint> out;
  DeviceVisitor visitor{netlist, nodes, x, diode_v, &system, out};
  for_each_device(netlist, visitor);
  return out;
}

std::vector<DeviceOperatingPoint> evaluate_devices(const Netlist& netlist, const NodeMap& nodes,
                                                   std::span<const double> x) {
  std::vector<DeviceOperatingPoint> out;
  DeviceVisitor visitor{netlist, nodes, x, {}, nullptr, out};
  for_each_device(netlist, visitor);
  return out;
}

std::vector<std::size_t> gmin_nodes(const Netlist& netlist, const NodeMap& nodes) {
  std::vector<std::size_t> out = dc_floating_nodes(netlist, nodes);
  for (const auto& e : netlist.elements) {
    if (!is_nonlinear(e)) continue;
    for (const auto& n : element_nodes(e)) {
      if (auto idx = nodes.index(n)) out.push_back(*idx);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// AC
// ---------------------------------------------------------------------------

ComplexSystem assemble_ac(const Netlist& netlist, const NodeMap& nodes,
                          std::span<const double> op, double omega) {
  using C = std::complex<double>;
  ComplexSystem sys(make_legend(netlist, nodes));
  Stamper<C> st(sys, nodes);

  auto phasor = [](const SourceCard& s) {
    if (!s.ac_mag) return C{};
    const double phase = s.ac_phase.value_or(0.0) * std::numbers::pi / 180.0;
    return std::polar(*s.ac_mag, phase);
  };

  for (const auto& e : netlist.elements) {
    if (const auto* r = e.as<Resistor>()) {
      st.conductance(st.node(r->n1), st.node(r->n2), C{1.0 / r->ohms});
    } else if (const auto* c = e.as<Capacitor>()) {
      st.conductance(st.node(c->n1), st.node(c->n2), C{0.0, omega * c->farads});
    } else if (const auto* l = e.as<Inductor>()) {
      const std::size_t k = *sys.legend.branch(l->name);
      st.branch_incidence(st.node(l->n1), st.node(l->n2), k);
      sys.matrix(k, k) -= C{0.0, omega * l->henries};
    } else if (const auto* v = e.as<VSource>()) {
      const std::size_t k = *sys.legend.branch(v->name);
      st.branch_incidence(st.node(v->npos), st.node(v->nneg), k);
      sys.rhs[k] += phasor(*v);
    } else if (const auto* i = e.as<ISource>()) {
      st.current(st.node(i->npos), st.node(i->nneg), phasor(*i));
    }
  }

  for (const auto& dev : evaluate_devices(netlist, nodes, op)) {
    const Element& e = *netlist.find_element(dev.name);
    if (const auto* d = e.as<Diode>()) {
      st.conductance(st.node(d->anode), st.node(d->cathode), C{dev.g});
    } else if (const auto* m = e.as<Mosfet>()) {
      st.transconductance(st.node(m->drain), st.node(m->gate), st.node(m->source), C{dev.gm},
                          C{dev.gds});
    }
  }
  const auto leak = gmin_nodes(netlist, nodes);
  stamp_gmin(sys, leak, kGmin);
  return sys;
}

}  // namespace minispice
