#pragma once

// Modified nodal analysis assembly.
//
// Unknown order is fixed: node voltages in NodeMap order, then one branch
// current per voltage source and inductor in deck order. Branch currents
// follow the SPICE convention (positive into the first terminal).

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "minispice/devices.hpp"
#include "minispice/linalg.hpp"
#include "minispice/netlist.hpp"
#include "minispice/topology.hpp"

namespace minispice {

inline constexpr double kGmin = 1e-12;

struct UnknownLegend {
  std::size_t node_count = 0;
  std::vector<std::string> labels;
  std::vector<std::string> branch_elements;

  std::size_t size() const noexcept { return labels.size(); }
  std::optional<std::size_t> branch(std::string_view element) const;

  bool operator==(const UnknownLegend&) const = default;
};

UnknownLegend make_legend(const Netlist& netlist, const NodeMap& nodes);

template <class Scalar>
struct MnaSystem {
  static constexpr ScalarField field = scalar_field_v<Scalar>;

  DenseMatrix<Scalar> matrix;
  std::vector<Scalar> rhs;
  UnknownLegend legend;

  explicit MnaSystem(UnknownLegend l)
      : matrix(l.size()), rhs(l.size(), Scalar{}), legend(std::move(l)) {}
};

using RealSystem = MnaSystem<double>;
using ComplexSystem = MnaSystem<std::complex<double>>;

// Independent-source evaluation point: sources take scale * w(time).
struct SourceContext {
  double time = 0.0;
  double scale = 1.0;
};

double source_value(const SourceCard& src, const SourceContext& ctx);

// Resistors, sources and inductors (as 0 V branches); capacitors open;
// diodes and MOSFETs contribute nothing here.
RealSystem assemble_linear_dc(const Netlist& netlist, const NodeMap& nodes,
                              const SourceContext& ctx = {});

// ---------------------------------------------------------------------------
// Transient companions
// ---------------------------------------------------------------------------

enum class Integration { BackwardEuler, Trapezoidal };

std::string_view to_string(Integration method);

struct Companion {
  double g_eq = 0.0;
  double i_eq = 0.0;
};

struct CapacitorState {
  double v_prev = 0.0;
  double i_prev = 0.0;
};

struct InductorState {
  double i_prev = 0.0;
  double v_prev = 0.0;
};

// One entry per capacitor and per inductor, each in deck order.
struct CompanionState {
  std::vector<CapacitorState> capacitors;
  std::vector<InductorState> inductors;
};

// Capacitor current i = g_eq * v - i_eq.
Companion companion_cap(double c, Integration method, double dt, const CapacitorState& s);
// Inductor current i = g_eq * v + i_eq.
Companion companion_ind(double l, Integration method, double dt, const InductorState& s);

// Linear part of one time step. Inductors keep their branch row, which now
// reads i - g_eq * v = i_eq, so the legend matches the DC one.
RealSystem assemble_transient_step(const Netlist& netlist, const NodeMap& nodes,
                                   const CompanionState& state, Integration method, double dt,
                                   const SourceContext& ctx);

// Element state after a step solved to `x`.
CompanionState advance_companion_state(const Netlist& netlist, const NodeMap& nodes,
                                       const CompanionState& state, Integration method,
                                       double dt, std::span<const double> x);

// ---------------------------------------------------------------------------
// Nonlinear devices
// ---------------------------------------------------------------------------

enum class DeviceKind { Diode, Mosfet };

struct DeviceOperatingPoint {
  std::string name;
  DeviceKind kind = DeviceKind::Diode;
  double v = 0.0;    // junction voltage (diode) or vgs (MOSFET)
  double vds = 0.0;  // MOSFET only
  double i = 0.0;    // diode current or drain current
  double g = 0.0;    // diode small-signal conductance
  double gm = 0.0;
  double gds = 0.0;
  MosRegion region = MosRegion::Cutoff;
};

double node_voltage(std::span<const double> x, const NodeMap& nodes, std::string_view name);

// Adds each device's linearization about `x` to the system. When given,
// `diode_v` overrides the junction voltage of each diode (deck order), which
// is how limited junction voltages enter the Newton iteration.
std::vector<DeviceOperatingPoint> stamp_linearized_devices(
    RealSystem& system, const Netlist& netlist, const NodeMap& nodes, std::span<const double> x,
    std::span<const double> diode_v = {});

// Device evaluation at `x` without stamping anything.
std::vector<DeviceOperatingPoint> evaluate_devices(const Netlist& netlist, const NodeMap& nodes,
                                                   std::span<const double> x);

// Nodes that receive the gmin leak in DC solves: every node touched by a
// diode or MOSFET, plus nodes with no conducting DC path to ground.
std::vector<std::size_t> gmin_nodes(const Netlist& netlist, const NodeMap& nodes);

template <class Scalar>
void stamp_gmin(MnaSystem<Scalar>& system, std::span<const std::size_t> nodes, double g) {
  for (auto n : nodes) system.matrix(n, n) += g;
}

// Small-signal system about the DC solution `op` at angular frequency omega.
// Only sources with an AC magnitude drive the right-hand side.
ComplexSystem assemble_ac(const Netlist& netlist, const NodeMap& nodes,
                          std::span<const double> op, double omega);

}  // namespace minispice
