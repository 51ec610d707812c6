#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "minispice/error.hpp"
#include "minispice/mna.hpp"
#include "minispice/netlist.hpp"
#include "minispice/topology.hpp"

namespace minispice {

struct NewtonOptions {
  double reltol = 1e-3;
  double vntol = 1e-6;   // volts
  double abstol = 1e-12; // amps
  int max_iter = 100;
  int gmin_steps = 10;   // decades walked down from 1e-2 S
  int source_steps = 10;
};

enum class Homotopy { None, GminStepping, SourceStepping };

std::string_view to_string(Homotopy h);

struct OpResult {
  NodeMap nodes;
  UnknownLegend legend;
  std::vector<double> solution;
  std::vector<DeviceOperatingPoint> devices;
  int iterations = 0;
  Homotopy homotopy = Homotopy::None;

  double voltage(std::string_view node) const;
  double value(const Probe& probe) const;
};

// Solves the DC operating point. `guess`, when given, seeds Newton and must
// have the legend's dimension.
OpResult solve_op(const Netlist& netlist, const NewtonOptions& options = {},
                  std::span<const double> guess = {}, const SourceContext& sources = {});

struct SweepResult {
  NodeMap nodes;
  UnknownLegend legend;
  std::string source;
  std::vector<double> axis;
  std::vector<std::vector<double>> rows;

  double value(std::size_t row, const Probe& probe) const;
};

// Thrown when a sweep point fails; `partial` holds the points before it.
class SweepAborted : public SolverError {
 public:
  SweepAborted(const SolverError& cause, SweepResult partial)
      : SolverError(cause), partial(std::move(partial)) {}
  SweepResult partial;
};

enum class SweepStart {
  Warm,  // each point continues from the previous solution (sequential)
  Cold,  // each point starts from zero; points are solved in parallel
};

// Points are start + k*step for k = 0..round((stop-start)/step); the step
// sign must agree with stop - start.
SweepResult dc_sweep(const Netlist& netlist, std::string_view source, double start, double stop,
                     double step, const NewtonOptions& options = {},
                     SweepStart mode = SweepStart::Warm);

struct TranResult {
  NodeMap nodes;
  UnknownLegend legend;
  Integration method = Integration::Trapezoidal;
  double tstep = 0.0;
  bool uic = false;
  CompanionState initial_state;
  std::vector<double> time;
  std::vector<std::vector<double>> rows;

  double value(std::size_t row, const Probe& probe) const;
  // Integration rule used for step k (1-based); UIC starts TR with one BE step.
  Integration step_method(std::size_t k) const;
};

// Fixed-step transient. Without UIC the t=0 state is the operating point
// (with any .IC values as the Newton seed); with UIC it comes from .IC and
// element IC= values, anything unspecified being zero.
TranResult transient(const Netlist& netlist, double tstep, double tstop,
                     Integration method = Integration::Trapezoidal,
                     const NewtonOptions& options = {}, bool uic = false);

struct AcResult {
  NodeMap nodes;
  UnknownLegend legend;
  std::vector<double> frequency;
  std::vector<std::vector<std::complex<double>>> rows;

  std::complex<double> value(std::size_t row, const Probe& probe) const;
};

std::vector<double> frequency_axis(const AcDirective& sweep);

// Frequencies are independent and solved in parallel; ac_analysis_serial is
// the single-threaded reference.
AcResult ac_analysis(const Netlist& netlist, const AcDirective& sweep,
                     const NewtonOptions& options = {});
AcResult ac_analysis_serial(const Netlist& netlist, const AcDirective& sweep,
                            const NewtonOptions& options = {});
// Same, about an already solved operating point.
AcResult ac_analysis(const Netlist& netlist, const AcDirective& sweep, const OpResult& op);
AcResult ac_analysis_serial(const Netlist& netlist, const AcDirective& sweep, const OpResult& op);

struct TheveninEquivalent {
  double v_th = 0.0;
  double r_th = 0.0;
};

// Open-circuit voltage, then a second solve with 1 A pushed into node_a and
// drawn out of node_b.
TheveninEquivalent thevenin_port(const Netlist& netlist, std::string_view node_a,
                                 std::string_view node_b, const NewtonOptions& options = {});

// ---------------------------------------------------------------------------
// KCL certificate
// ---------------------------------------------------------------------------

// Element currents are recomputed from each element's own equation at the
// candidate solution, never from the assembled matrix.
struct KclContext {
  SourceContext sources;
  std::vector<std::size_t> leak_nodes;
  double leak_g = kGmin;
  // Transient step: companion state before the step plus its rule and dt.
  const CompanionState* companions = nullptr;
  Integration method = Integration::Trapezoidal;
  double dt = 0.0;
};

struct KclReport {
  // |sum of currents| per node and its allowed bound reltol*max|i| + abstol.
  std::vector<double> residual;
  std::vector<double> bound;
  double worst_ratio = 0.0;
  std::size_t worst_node = 0;

  bool ok() const { return worst_ratio <= 1.0; }
};

KclReport kcl_certificate(const Netlist& netlist, const NodeMap& nodes, std::span<const double> x,
                          const NewtonOptions& options, const KclContext& context);

// Convenience: the DC context used by solve_op (gmin leaks on gmin_nodes()).
KclContext dc_kcl_context(const Netlist& netlist, const NodeMap& nodes,
                          const SourceContext& sources = {});

// Replays the companion recursion from the stored rows and certifies every
// time point after t = 0. Returns the worst ratio over all steps.
double transient_kcl_audit(const Netlist& netlist, const TranResult& result,
                           const NewtonOptions& options = {});

// Small-signal KCL at row `row` of an AC result, devices linearized at `op`.
KclReport ac_kcl_certificate(const Netlist& netlist, const AcResult& result, std::size_t row,
                             const OpResult& op, const NewtonOptions& options = {});

double probe_value(const NodeMap& nodes, const UnknownLegend& legend, std::span<const double> x,
                   const Probe& probe);

}  // namespace minispice
