#pragma once

// Rectangular resistor lattices and an independent finite-difference Poisson
// solver for cross-checking the MNA path.

#include <string>
#include <string_view>
#include <vector>

#include "minispice/analysis.hpp"
#include "minispice/netlist.hpp"

namespace minispice {

struct LatticeSpec {
  int rows = 1;
  int cols = 1;
  double r_link = 1.0;
  // Tie every boundary node to ground through one more r_link resistor.
  bool grounded_periphery = false;
};

struct GridPoint {
  int row = 0;
  int col = 0;
  bool operator==(const GridPoint&) const = default;
};

// "n{row}_{col}"
std::string lattice_node(GridPoint p);

// Links are emitted node by node in row-major order, each node's right link
// (RH) before its down link (RV); periphery resistors (RG) follow.
Netlist gen_lattice(const LatticeSpec& spec);

enum class Boundary { Dirichlet, Neumann };

struct Injection {
  GridPoint at;
  double amps = 0.0;
};

struct FixedPotential {
  GridPoint at;
  double volts = 0.0;
};

struct FdProblem {
  int rows = 1;
  int cols = 1;
  double link_conductance = 1.0;
  std::vector<Injection> injections;
  Boundary boundary = Boundary::Neumann;
  std::vector<FixedPotential> fixed;  // Dirichlet
  GridPoint reference;                // Neumann gauge, held at 0 V
};

struct FdSolution {
  int rows = 0;
  int cols = 0;
  std::vector<double> potential;  // row-major

  double at(GridPoint p) const { return potential[static_cast<std::size_t>(p.row * cols + p.col)]; }
};

// Five-point graph Laplacian solve, assembled directly from the grid.
// Throws SolverError(UnbalancedNeumann) when Neumann injections do not sum
// to zero and SolverError(InvalidArgument) for a Dirichlet problem with no
// fixed node.
FdSolution poisson_fd_solve(const FdProblem& problem);

// 1 A pushed into node_a and drawn from node_b; returns v(a) - v(b). A deck
// without ground has node_b taken as the reference.
double effective_resistance(const Netlist& netlist, std::string_view node_a,
                            std::string_view node_b, const NewtonOptions& options = {});
double effective_resistance(const LatticeSpec& spec, GridPoint a, GridPoint b);

}  // namespace minispice
