#include "minispice/lattice.hpp"

#include <cmath>

#include "minispice/linalg.hpp"
#include "minispice/topology.hpp"

namespace minispice {

std::string lattice_node(GridPoint p) {
  return "n" + std::to_string(p.row) + "_" + std::to_string(p.col);
}

Netlist gen_lattice(const LatticeSpec& spec) {
  if (spec.rows < 1 || spec.cols < 1 || !(spec.r_link > 0.0)) {
    throw SolverError(SolverErrorKind::InvalidArgument, "lattice needs rows, cols >= 1 and r > 0");
  }
  Netlist out;
  out.title = "lattice " + std::to_string(spec.rows) + "x" + std::to_string(spec.cols) +
              " r=" + format_value(spec.r_link) +
              (spec.grounded_periphery ? " grounded" : " ungrounded");
  auto link = [&](const std::string& prefix, GridPoint a, GridPoint b) {
    Resistor r;
    r.name = prefix + std::to_string(a.row) + "_" + std::to_string(a.col);
    r.n1 = lattice_node(a);
    r.n2 = lattice_node(b);
    r.ohms = spec.r_link;
    out.elements.push_back({r, {}});
  };
  for (int i = 0; i < spec.rows; ++i) {
    for (int j = 0; j < spec.cols; ++j) {
      if (j + 1 < spec.cols) link("RH", {i, j}, {i, j + 1});
      if (i + 1 < spec.rows) link("RV", {i, j}, {i + 1, j});
    }
  }
  if (spec.grounded_periphery) {
    for (int i = 0; i < spec.rows; ++i) {
      for (int j = 0; j < spec.cols; ++j) {
        const bool boundary = i == 0 || j == 0 || i == spec.rows - 1 || j == spec.cols - 1;
        if (!boundary) continue;
        Resistor r;
        r.name = "RG" + std::to_string(i) + "_" + std::to_string(j);
        r.n1 = lattice_node({i, j});
        r.n2 = std::string(kGround);
        r.ohms = spec.r_link;
        out.elements.push_back({r, {}});
      }
    }
  }
  return out;
}

FdSolution poisson_fd_solve(const FdProblem& p) {
  if (p.rows < 1 || p.cols < 1 || !(p.link_conductance > 0.0)) {
    throw SolverError(SolverErrorKind::InvalidArgument, "grid needs rows, cols >= 1 and g > 0");
  }
  const int total = p.rows * p.cols;
  auto flat = [&](GridPoint q) {
    if (q.row < 0 || q.col < 0 || q.row >= p.rows || q.col >= p.cols) {
      throw SolverError(SolverErrorKind::InvalidArgument, "grid point out of range");
    }
    return q.row * p.cols + q.col;
  };

  std::vector<double> source(static_cast<std::size_t>(total), 0.0);
  double net = 0.0;
  double gross = 0.0;
  for (const auto& inj : p.injections) {
    source[static_cast<std::size_t>(flat(inj.at))] += inj.amps;
    net += inj.amps;
    gross += std::abs(inj.amps);
  }

  // Known potentials: the Dirichlet set, or the single Neumann gauge node.
  std::vector<bool> known(static_cast<std::size_t>(total), false);
  std::vector<double> value(static_cast<std::size_t>(total), 0.0);
  if (p.boundary == Boundary::Neumann) {
    if (std::abs(net) > 1e-12 * std::max(1.0, gross)) {
      throw SolverError(SolverErrorKind::UnbalancedNeumann,
                        "Neumann problem injections sum to " + format_value(net) + " A");
    }
    known[static_cast<std::size_t>(flat(p.reference))] = true;
  } else {
    if (p.fixed.empty()) {
      throw SolverError(SolverErrorKind::InvalidArgument, "Dirichlet problem needs a fixed node");
    }
    for (const auto& f : p.fixed) {
      const auto k = static_cast<std::size_t>(flat(f.at));
      known[k] = true;
      value[k] = f.volts;
    }
  }

  std::vector<int> unknown_index(static_cast<std::size_t>(total), -1);
  int n = 0;
  for (int k = 0; k < total; ++k) {
    if (!known[static_cast<std::size_t>(k)]) unknown_index[static_cast<std::size_t>(k)] = n++;
  }

  RealMatrix a(static_cast<std::size_t>(n));
  std::vector<double> rhs(static_cast<std::size_t>(n), 0.0);
  const double g = p.link_conductance;
  const int di[] = {-1, 1, 0, 0};
  const int dj[] = {0, 0, -1, 1};
  for (int i = 0; i < p.rows; ++i) {
    for (int j = 0; j < p.cols; ++j) {
      const int k = i * p.cols + j;
      const int row = unknown_index[static_cast<std::size_t>(k)];
      if (row < 0) continue;
      const auto r = static_cast<std::size_t>(row);
      rhs[r] += source[static_cast<std::size_t>(k)];
      for (int s = 0; s < 4; ++s) {
        const int ni = i + di[s];
        const int nj = j + dj[s];
        if (ni < 0 || nj < 0 || ni >= p.rows || nj >= p.cols) continue;
        const int nk = ni * p.cols + nj;
        a(r, r) += g;
        const int col = unknown_index[static_cast<std::size_t>(nk)];
        if (col >= 0) {
          a(r, static_cast<std::size_t>(col)) -= g;
        } else {
          rhs[r] += g * value[static_cast<std::size_t>(nk)];
        }
      }
    }
  }

  const auto x = n > 0 ? solve(std::move(a), std::span<const double>(rhs)) : std::vector<double>{};
  FdSolution out{p.rows, p.cols, value};
  for (int k = 0; k < total; ++k) {
    const int idx = unknown_index[static_cast<std::size_t>(k)];
    if (idx >= 0) out.potential[static_cast<std::size_t>(k)] = x[static_cast<std::size_t>(idx)];
  }
  return out;
}

double effective_resistance(const Netlist& netlist, std::string_view node_a,
                            std::string_view node_b, const NewtonOptions& options) {
  for (const auto& e : netlist.elements) {
    if (!e.as<Resistor>()) {
      throw SolverError(SolverErrorKind::InvalidArgument,
                        "effective resistance needs a resistor-only deck, found '" +
                            element_name(e) + "'");
    }
  }
  std::string a = canonical_node_name(node_a);
  std::string b = canonical_node_name(node_b);
  if (a == b) return 0.0;

  Netlist deck = netlist;
  const NodeMap nodes = build_node_map(netlist);
  bool grounded = false;
  for (const auto& e : netlist.elements) {
    for (const auto& n : element_nodes(e)) grounded = grounded || n == kGround;
  }
  for (const auto& n : {a, b}) {
    if (n != kGround && !nodes.contains(n)) {
      throw SolverError(SolverErrorKind::InvalidArgument, "unknown node '" + n + "'");
    }
  }
  if (!grounded) {
    for (auto& e : deck.elements) {
      auto& r = std::get<Resistor>(e.body);
      if (r.n1 == b) r.n1 = std::string(kGround);
      if (r.n2 == b) r.n2 = std::string(kGround);
    }
    b = std::string(kGround);
  }
  ISource probe;
  probe.name = "I__PROBE";
  probe.npos = b;
  probe.nneg = a;
  probe.waveform = DcWave{1.0};
  deck.elements.push_back({probe, {}});
  const OpResult op = solve_op(deck, options);
  return op.voltage(a) - op.voltage(b);
}

double effective_resistance(const LatticeSpec& spec, GridPoint a, GridPoint b) {
  return effective_resistance(gen_lattice(spec), lattice_node(a), lattice_node(b));
}

}  // namespace minispice
