#include <doctest.h>

#include "minispice/topology.hpp"

using namespace minispice;

namespace {

std::vector<std::string> drc(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& v : check_drc(parse_netlist(text))) out.push_back(format_violation(v));
  return out;
}

}  // namespace

TEST_CASE("node map follows first appearance and skips ground") {
  const NodeMap m = build_node_map(parse_netlist("t\nR1 b a 1\nR2 a 0 1\nR3 c b 1\n"));
  REQUIRE(m.size() == 3);
  CHECK(m.names()[0] == "b");
  CHECK(m.names()[1] == "a");
  CHECK(m.names()[2] == "c");
  CHECK(m.index("a") == 1u);
  CHECK_FALSE(m.index("0").has_value());
  CHECK_FALSE(m.contains("zz"));
}

TEST_CASE("clean decks produce no violations") {
  CHECK(drc("t\nV1 a 0 5\nR1 a b 1k\nR2 b 0 1k\n").empty());
  CHECK(drc("t\nV1 a 0 1\nR1 a b 1\nL1 b 0 1m\nC1 b 0 1u\n").empty());
  CHECK(drc("t\nV1 a 0 1\nM1 d a 0 NM\nR1 a d 1k\n.MODEL NM NMOS\n").empty());
}

TEST_CASE("missing ground") {
  const auto v = drc("t\nV1 a b 5\nR1 a b 1k\n");
  REQUIRE(!v.empty());
  CHECK(v[0] == "DRC NO_GROUND: 0");
}

TEST_CASE("floating island") {
  const auto v = drc("t\nV1 a 0 5\nR1 a 0 1k\nR2 x y 1k\n");
  REQUIRE(v.size() == 1);
  CHECK(v[0] == "DRC FLOATING_ISLAND: x,y");
}

TEST_CASE("gate-only connection leaves the gate node floating") {
  const auto v = drc("t\nV1 d 0 5\nM1 d g 0 NM\n.MODEL NM NMOS\n");
  REQUIRE(v.size() == 1);
  CHECK(v[0] == "DRC FLOATING_ISLAND: g");
}

TEST_CASE("voltage source loops") {
  CHECK(drc("t\nV1 1 0 5\nV2 1 0 3\n.OP\n") == std::vector<std::string>{"DRC VSOURCE_LOOP: V1,V2"});
  CHECK(drc("t\nV1 a 0 1\nV2 a b 1\nV3 b 0 1\nR1 a 0 1\n") ==
        std::vector<std::string>{"DRC VSOURCE_LOOP: V1,V2,V3"});
  // An inductor is a DC short.
  CHECK(drc("t\nV1 a 0 1\nL1 a 0 1m\n") == std::vector<std::string>{"DRC VSOURCE_LOOP: V1,L1"});
  CHECK(drc("t\nV1 a a 1\nR1 a 0 1\n") == std::vector<std::string>{"DRC VSOURCE_LOOP: V1"});
}

TEST_CASE("current source cut sets") {
  // Node x reaches ground only through a capacitor.
  const auto v = drc("t\nV1 in 0 1\nR1 in 0 1k\nI1 in x 1m\nC1 x 0 1n\n");
  REQUIRE(v.size() == 1);
  CHECK(v[0] == "DRC ISOURCE_CUTSET: I1 at x");
  // Current source in series with a capacitor chain and nothing else.
  const auto w = drc("t\nI1 0 a 1m\nC1 a 0 1n\n");
  REQUIRE(w.size() == 1);
  CHECK(w[0] == "DRC ISOURCE_CUTSET: I1 at a");
}

TEST_CASE("violations are ordered by kind") {
  const auto v = check_drc(parse_netlist("t\nV1 a b 1\nV2 a b 2\nI1 a c 1\n"));
  REQUIRE(v.size() >= 2);
  for (std::size_t k = 1; k < v.size(); ++k) {
    CHECK(static_cast<int>(v[k - 1].kind) <= static_cast<int>(v[k].kind));
  }
  CHECK(v.front().kind == DrcKind::NoGround);
}

TEST_CASE("DC-floating nodes") {
  const Netlist n = parse_netlist("t\nV1 a 0 1\nR1 a 0 1\nC1 a b 1n\nC2 b 0 1n\n");
  const NodeMap m = build_node_map(n);
  const auto f = dc_floating_nodes(n, m);
  REQUIRE(f.size() == 1);
  CHECK(m.names()[f[0]] == "b");
}
