#include "minispice/topology.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>

namespace minispice {

NodeMap::NodeMap(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) index_.emplace(names_[i], i);
}

std::optional<std::size_t> NodeMap::index(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeMap build_node_map(const Netlist& netlist) {
  std::vector<std::string> names;
  std::unordered_map<std::string, bool> seen;
  for (const auto& e : netlist.elements) {
    for (auto& n : element_nodes(e)) {
      if (n == kGround) continue;
      if (seen.emplace(n, true).second) names.push_back(n);
    }
  }
  return NodeMap(std::move(names));
}

std::string_view to_string(DrcKind kind) {
  switch (kind) {
    case DrcKind::NoGround: return "NO_GROUND";
    case DrcKind::FloatingIsland: return "FLOATING_ISLAND";
    case DrcKind::VsourceLoop: return "VSOURCE_LOOP";
    case DrcKind::IsourceCutset: return "ISOURCE_CUTSET";
  }
  return "?";
}

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ',';
    out += s;
  }
  return out;
}

// Graph over all nodes, ground included as vertex 0.
struct NodeGraph {
  explicit NodeGraph(const NodeMap& nodes) : map(nodes), adj(nodes.size() + 1) {}

  std::size_t vertex(const std::string& name) const {
    if (name == kGround) return 0;
    return *map.index(name) + 1;
  }
  const std::string& name(std::size_t v) const {
    static const std::string ground(kGround);
    return v == 0 ? ground : map.names()[v - 1];
  }

  void connect(const std::string& a, const std::string& b, std::size_t element) {
    const auto va = vertex(a);
    const auto vb = vertex(b);
    adj[va].push_back({vb, element});
    adj[vb].push_back({va, element});
  }

  // Component label per vertex; labels assigned in vertex order.
  std::vector<std::size_t> components() const {
    constexpr auto kUnset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> label(adj.size(), kUnset);
    std::size_t next = 0;
    for (std::size_t s = 0; s < adj.size(); ++s) {
      if (label[s] != kUnset) continue;
      std::queue<std::size_t> q;
      q.push(s);
      label[s] = next;
      while (!q.empty()) {
        auto v = q.front();
        q.pop();
        for (auto [w, e] : adj[v]) {
          if (label[w] == kUnset) {
            label[w] = next;
            q.push(w);
          }
        }
      }
      ++next;
    }
    return label;
  }

  struct Edge {
    std::size_t to;
    std::size_t element;
  };
  const NodeMap& map;
  std::vector<std::vector<Edge>> adj;
};

bool grounded_anywhere(const Netlist& netlist) {
  for (const auto& e : netlist.elements) {
    for (const auto& n : element_nodes(e)) {
      if (n == kGround) return true;
    }
  }
  return false;
}

// Edges that carry current at DC with a defined voltage relation.
bool conducts_dc(const Element& e) {
  return e.as<Resistor>() || e.as<Inductor>() || e.as<VSource>() || e.as<Diode>() ||
         e.as<Mosfet>();
}

std::pair<std::string, std::string> channel(const Element& e) {
  if (const auto* m = e.as<Mosfet>()) return {m->drain, m->source};
  auto nodes = element_nodes(e);
  return {nodes[0], nodes[1]};
}

void find_source_loops(const Netlist& netlist, const NodeMap& nodes,
                       std::vector<DrcViolation>& out) {
  // Spanning forest of V sources and inductors; a closing edge is a loop.
  NodeGraph forest(nodes);
  std::vector<std::size_t> parent(nodes.size() + 1);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };

  for (std::size_t k = 0; k < netlist.elements.size(); ++k) {
    const Element& e = netlist.elements[k];
    if (!(e.as<VSource>() || e.as<Inductor>())) continue;
    auto [a, b] = channel(e);
    const auto va = forest.vertex(a);
    const auto vb = forest.vertex(b);
    if (find(va) != find(vb)) {
      parent[find(va)] = find(vb);
      forest.connect(a, b, k);
      continue;
    }
    // Recover the tree path a..b to name every source in the loop.
    std::vector<std::size_t> witness{k};
    if (va != vb) {
      std::vector<std::pair<std::size_t, std::size_t>> via(forest.adj.size(), {SIZE_MAX, 0});
      std::queue<std::size_t> q;
      q.push(va);
      via[va] = {va, 0};
      while (!q.empty()) {
        auto v = q.front();
        q.pop();
        if (v == vb) break;
        for (auto [w, el] : forest.adj[v]) {
          if (via[w].first == SIZE_MAX) {
            via[w] = {v, el};
            q.push(w);
          }
        }
      }
      for (auto v = vb; v != va; v = via[v].first) witness.push_back(via[v].second);
    }
    std::sort(witness.begin(), witness.end());
    DrcViolation viol{DrcKind::VsourceLoop, {}, {}, {}};
    for (auto idx : witness) viol.elements.push_back(element_name(netlist.elements[idx]));
    viol.message = "voltage sources/inductors form a loop: " + join(viol.elements);
    out.push_back(std::move(viol));
  }
}

}  // namespace

std::vector<DrcViolation> check_drc(const Netlist& netlist) {
  std::vector<DrcViolation> out;
  const NodeMap nodes = build_node_map(netlist);

  if (!grounded_anywhere(netlist)) {
    out.push_back({DrcKind::NoGround, {}, {std::string(kGround)}, "no element references ground node 0"});
  }

  // Connectivity: everything except current sources; MOSFETs via the channel.
  NodeGraph connect(nodes);
  NodeGraph dc(nodes);
  for (std::size_t k = 0; k < netlist.elements.size(); ++k) {
    const Element& e = netlist.elements[k];
    if (e.as<ISource>()) continue;
    auto [a, b] = channel(e);
    connect.connect(a, b, k);
    if (conducts_dc(e)) dc.connect(a, b, k);
  }

  const auto island = connect.components();
  std::map<std::size_t, std::vector<std::string>> islands;
  for (std::size_t v = 1; v < island.size(); ++v) {
    if (island[v] != island[0]) islands[island[v]].push_back(connect.name(v));
  }
  for (auto& [label, members] : islands) {
    out.push_back({DrcKind::FloatingIsland, {}, members,
                   "nodes have no path to ground: " + join(members)});
  }

  find_source_loops(netlist, nodes, out);

  // A DC component without ground that a current source feeds has nowhere
  // to return the current.
  const auto part = dc.components();
  std::map<std::size_t, std::pair<std::vector<std::string>, std::vector<std::string>>> cutsets;
  for (const auto& e : netlist.elements) {
    const auto* src = e.as<ISource>();
    if (!src) continue;
    for (const auto& n : {src->npos, src->nneg}) {
      const auto label = part[dc.vertex(n)];
      if (label == part[0]) continue;
      auto& entry = cutsets[label];
      if (std::find(entry.first.begin(), entry.first.end(), src->name) == entry.first.end()) {
        entry.first.push_back(src->name);
      }
    }
  }
  for (auto& [label, entry] : cutsets) {
    std::vector<std::string> members;
    for (std::size_t v = 1; v < part.size(); ++v) {
      if (part[v] == label) members.push_back(dc.name(v));
    }
    out.push_back({DrcKind::IsourceCutset, entry.first, members,
                   "current source(s) " + join(entry.first) + " drive nodes with no DC return: " +
                       join(members)});
  }

  std::stable_sort(out.begin(), out.end(), [](const DrcViolation& a, const DrcViolation& b) {
    return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  });
  return out;
}

std::string format_violation(const DrcViolation& v) {
  std::string witness = join(v.elements);
  if (!v.nodes.empty()) {
    if (!witness.empty()) witness += " at ";
    witness += join(v.nodes);
  }
  return "DRC " + std::string(to_string(v.kind)) + ": " + witness;
}

std::vector<std::size_t> dc_floating_nodes(const Netlist& netlist, const NodeMap& nodes) {
  NodeGraph dc(nodes);
  for (std::size_t k = 0; k < netlist.elements.size(); ++k) {
    const Element& e = netlist.elements[k];
    if (!conducts_dc(e)) continue;
    auto [a, b] = channel(e);
    dc.connect(a, b, k);
  }
  const auto part = dc.components();
  std::vector<std::size_t> out;
  for (std::size_t v = 1; v < part.size(); ++v) {
    if (part[v] != part[0]) out.push_back(v - 1);
  }
  return out;
}

}  // namespace minispice
