#include <doctest.h>

#include "minispice/lattice.hpp"
#include "minispice/topology.hpp"

using namespace minispice;

TEST_CASE("generator names and counts") {
  const auto n = gen_lattice({3, 4, 2.0, false});
  // 3 rows of 3 horizontal links, 2 rows of 4 vertical links.
  CHECK(n.elements.size() == 17);
  CHECK(lattice_node({2, 3}) == "n2_3");
  const auto m = build_node_map(n);
  CHECK(m.size() == 12);
  CHECK(m.names().front() == "n0_0");
  for (const auto& e : n.elements) CHECK(std::get<Resistor>(e.body).ohms == 2.0);
  // Without ground the lattice is one floating island.
  CHECK_FALSE(check_drc(n).empty());
}

TEST_CASE("grounded periphery") {
  const auto n = gen_lattice({4, 4, 1.0, true});
  // 24 links plus 12 boundary nodes tied to ground.
  CHECK(n.elements.size() == 36);
  CHECK(check_drc(n).empty());
  const auto one = gen_lattice({1, 1, 1.0, true});
  CHECK(one.elements.size() == 1);
}

TEST_CASE("invalid specs") {
  CHECK_THROWS_AS(gen_lattice({0, 3, 1.0, false}), SolverError);
  CHECK_THROWS_AS(gen_lattice({2, 2, 0.0, false}), SolverError);
}

TEST_CASE("effective resistance anchors") {
  CHECK(effective_resistance({1, 2, 1.0, false}, {0, 0}, {0, 1}) == doctest::Approx(1.0));
  CHECK(effective_resistance({2, 2, 1.0, false}, {0, 0}, {0, 1}) == doctest::Approx(0.75));
  CHECK(effective_resistance({2, 2, 1.0, false}, {0, 0}, {1, 1}) == doctest::Approx(1.0));
  CHECK(effective_resistance({2, 2, 3.0, false}, {0, 0}, {1, 1}) == doctest::Approx(3.0));
  CHECK(effective_resistance({1, 5, 1.0, false}, {0, 0}, {0, 4}) == doctest::Approx(4.0));
  CHECK(effective_resistance({3, 3, 1.0, false}, {1, 1}, {1, 1}) == 0.0);
}

TEST_CASE("Neumann problem must balance") {
  FdProblem p;
  p.rows = p.cols = 3;
  p.injections = {{{0, 0}, 1.0}, {{2, 2}, -0.5}};
  try {
    (void)poisson_fd_solve(p);
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(e.kind() == SolverErrorKind::UnbalancedNeumann);
  }
}

TEST_CASE("Dirichlet problem needs a fixed node") {
  FdProblem p;
  p.boundary = Boundary::Dirichlet;
  p.injections = {{{0, 0}, 1.0}};
  CHECK_THROWS_AS(poisson_fd_solve(p), SolverError);
}

TEST_CASE("finite-difference solve matches the circuit solve") {
  FdProblem p;
  p.rows = 4;
  p.cols = 5;
  p.link_conductance = 0.5;
  p.injections = {{{0, 1}, 2e-3}, {{3, 4}, -2e-3}};
  p.reference = {2, 2};
  const auto fd = poisson_fd_solve(p);
  CHECK(fd.at({2, 2}) == 0.0);

  Netlist n = gen_lattice({4, 5, 2.0, false});
  Resistor tie;
  tie.name = "RTIE";
  tie.n1 = lattice_node({2, 2});
  tie.n2 = "0";
  tie.ohms = 1e-9;
  n.elements.push_back({tie, {}});
  ISource src;
  src.name = "IIN";
  src.npos = lattice_node({3, 4});
  src.nneg = lattice_node({0, 1});
  src.waveform = DcWave{2e-3};
  n.elements.push_back({src, {}});
  const auto op = solve_op(n);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 5; ++c) {
      CHECK(op.voltage(lattice_node({r, c})) == doctest::Approx(fd.at({r, c})).epsilon(1e-9).scale(1e-9));
    }
  }
}

TEST_CASE("Dirichlet potentials are pinned") {
  FdProblem p;
  p.rows = 3;
  p.cols = 3;
  p.boundary = Boundary::Dirichlet;
  p.fixed = {{{0, 0}, 1.0}, {{2, 2}, 0.0}};
  const auto fd = poisson_fd_solve(p);
  CHECK(fd.at({0, 0}) == 1.0);
  CHECK(fd.at({2, 2}) == 0.0);
  // Symmetry about the anti-diagonal.
  CHECK(fd.at({1, 1}) == doctest::Approx(0.5));
  CHECK(fd.at({0, 2}) == doctest::Approx(0.5));
}

TEST_CASE("effective resistance on a netlist rejects unknown nodes") {
  const auto n = gen_lattice({2, 2, 1.0, false});
  CHECK_THROWS_AS(effective_resistance(n, "n0_0", "n9_9"), SolverError);
}
