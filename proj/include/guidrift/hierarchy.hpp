#pragma once

#include <optional>
#include <string>
#include <vector>

#include "guidrift/fusion.hpp"

namespace guidrift {

enum class NodeKind { Root, Form, Table, Row, Modal, Group, Leaf };
const char* to_string(NodeKind k);

// One node of the parsed layout tree. Nodes live in UITree::nodes and refer
// to each other by index; node 0 is always the root.
struct UINode {
  int node_id = 0;
  NodeKind kind = NodeKind::Leaf;
  Rect bbox;
  std::vector<int> children;
  // Leaf only: index into the affordance list the tree was parsed from.
  std::optional<int> affordance;
  // Containers only: backing affordance index when a real box (panel, modal
  // surface) produced this node; synthesized rows/tables have none.
  std::optional<int> backing_affordance;
  std::string group_label;      // "group_<id>" when synthetic
  bool synthetic_label = false; // synthetic names never match addresses
};

struct UITree {
  std::vector<UINode> nodes;

  const UINode& root() const { return nodes.front(); }
  const UINode& at(int id) const { return nodes[static_cast<size_t>(id)]; }
  // Leaf node holding the given affordance index, -1 if it backs a container.
  int leaf_of_affordance(int affordance_index) const;
  void validate() const;  // structural invariants; throws SimError
};

struct HierarchyConfig {
  int containment_eps = 3;        // px slack when testing box containment
  double row_overlap_ratio = 0.5; // vertical-extent overlap for row banding
  double column_iou = 0.6;        // x-interval IoU for table columns
};

// Containment pass (smallest-area parent wins, ties to earlier canonical
// order) followed by per-container alignment synthesis: overlap-banded rows,
// stacked rows with consistent columns fold into tables. Containers are
// kinded modal > form > group; labels come from each container's top-left
// static_text leaf, reachable without crossing another real container.
// Deterministic, translation-equivariant, pure.
UITree parse_layout(const std::vector<Affordance>& affordances, const HierarchyConfig& config);

// "The Submit inside Invoice_Form", robust to absolute geometry.
struct RelativeAddress {
  std::string target_label;
  std::vector<std::string> container_path;  // outermost first; may be empty

  std::string key() const;  // cache key, e.g. "Submit@Invoice_Form"
};

enum class ResolveStatus { Found, TargetNotFound, AmbiguousTarget };

struct ResolveResult {
  ResolveStatus status = ResolveStatus::TargetNotFound;
  int node = -1;               // valid when Found
  std::vector<int> candidates; // all text matches (for diagnostics)
};

// Descends container_path by label (descendant semantics, synthetic labels
// never match), then matches leaves by exact, case-sensitive text. Zero
// matches -> TargetNotFound, two or more -> AmbiguousTarget; never guesses.
ResolveResult resolve(const UITree& tree, const std::vector<Affordance>& affordances,
                      const RelativeAddress& address);

}  // namespace guidrift
