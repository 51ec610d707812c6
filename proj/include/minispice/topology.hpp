#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "minispice/netlist.hpp"

namespace minispice {

inline constexpr std::string_view kGround = "0";

// Dense numbering of the non-ground nodes in order of first appearance.
class NodeMap {
 public:
  NodeMap() = default;
  explicit NodeMap(std::vector<std::string> names);

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  // Index of a node; empty for ground and for unknown names.
  std::optional<std::size_t> index(std::string_view name) const;
  bool contains(std::string_view name) const { return index(name).has_value(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

NodeMap build_node_map(const Netlist& netlist);

enum class DrcKind { NoGround, FloatingIsland, VsourceLoop, IsourceCutset };

std::string_view to_string(DrcKind kind);

struct DrcViolation {
  DrcKind kind = DrcKind::NoGround;
  std::vector<std::string> elements;
  std::vector<std::string> nodes;
  std::string message;
};

// Violations are ordered by kind, then by first appearance in the deck.
std::vector<DrcViolation> check_drc(const Netlist& netlist);

// "DRC <KIND>: <witness>"
std::string format_violation(const DrcViolation& v);

// Nodes with no conducting DC path to ground (capacitor-only attachments).
// They receive a gmin leak in DC solves so the operating point is defined.
std::vector<std::size_t> dc_floating_nodes(const Netlist& netlist, const NodeMap& nodes);

}  // namespace minispice
