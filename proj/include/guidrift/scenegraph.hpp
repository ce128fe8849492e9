#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "guidrift/hierarchy.hpp"

namespace guidrift {

enum class EdgeType { Contains, AlignedRow, AlignedColumn, Labels, LeftOf, Above };
const char* to_string(EdgeType e);
std::optional<EdgeType> edge_type_from_string(const std::string& s);

// What the plan believes visible words do. Annotation source for effect
// preconditions; deliberately NOT wired to ground-truth widget effects.
struct IntentLexicon {
  std::map<std::string, Effect> effects = {
      {"Submit", Effect::Submit}, {"Delete", Effect::Delete}, {"Cancel", Effect::Cancel}};
  std::set<std::string> destructive = {"Delete", "Cancel"};

  std::optional<Effect> annotate(const std::optional<std::string>& text) const {
    if (!text) return std::nullopt;
    const auto it = effects.find(*text);
    if (it == effects.end()) return std::nullopt;
    return it->second;
  }
};

struct SceneNode {
  int id = 0;  // equals the UITree node_id it mirrors
  NodeKind kind = NodeKind::Leaf;
  Rect bbox;
  std::optional<std::string> text;       // leaf affordance text
  std::optional<Category> category;      // leaves only
  std::optional<Effect> annotated_effect;
  std::string label;                     // container label ("" for leaves)
  std::optional<int> affordance;
};

struct SceneEdge {
  int from = 0;
  int to = 0;
  EdgeType type = EdgeType::Contains;
};

struct QueryError : SimError {
  using SimError::SimError;
};

// Immutable relational snapshot of one parsed frame.
class SceneGraph {
 public:
  SceneGraph(std::vector<SceneNode> nodes, std::vector<SceneEdge> edges, int64_t revision);

  const std::vector<SceneNode>& nodes() const { return nodes_; }
  const std::vector<SceneEdge>& edges() const { return edges_; }
  int64_t built_at_revision() const { return revision_; }

  const SceneNode& node(int id) const;

  // Query surface. Malformed input (unknown ids, empty text) -> QueryError.
  std::vector<int> find_by_text(const std::string& text) const;
  std::vector<int> find_by_category(Category c) const;
  std::vector<int> neighbors(int node_id, EdgeType type) const;
  bool path_exists(int from, int to, EdgeType type) const;

  // Smallest leaf under the point; -1 over background. The stale-coordinate
  // diagnosis port ("what actually sits where I was about to click?").
  int leaf_at(Point p) const;
  int node_of_affordance(int affordance_index) const;

 private:
  std::vector<SceneNode> nodes_;
  std::vector<SceneEdge> edges_;
  std::multimap<std::pair<int, int>, int> adjacency_;  // (from, type) -> to
  int64_t revision_;
};

// Leaf-to-label wiring distance: a static_text labels the nearest field or
// button to its right/below within this multiple of the label's height.
inline constexpr double kLabelsReachFactor = 1.5;

SceneGraph build_graph(const UITree& tree, const std::vector<Affordance>& affordances,
                       int64_t revision, const IntentLexicon& lexicon);

// ---------------------------------------------------------------------------
// Preconditions
// ---------------------------------------------------------------------------

struct TargetEffectIs {
  RelativeAddress address;
  Effect effect = Effect::Noop;
};
struct TargetEffectIsNot {
  RelativeAddress address;
  Effect effect = Effect::Noop;
};
struct FieldNonEmpty {
  RelativeAddress address;
};
struct ExistsTarget {
  RelativeAddress address;
};
struct NotExistsLabel {
  std::string label;
};
using Precondition =
    std::variant<TargetEffectIs, TargetEffectIsNot, FieldNonEmpty, ExistsTarget, NotExistsLabel>;

std::string describe(const Precondition& p);

struct Violation {
  std::string precondition;
  std::string explanation;
};

struct VerificationReport {
  bool passed = false;  // true iff violated is empty
  std::vector<Violation> violated;
  std::vector<int> queried_nodes;  // audit trail, deduplicated, sorted
};

// Fail-closed evaluation: unresolvable or ambiguous addresses count as
// violations, never as faults. Pure: the graph is read-only.
VerificationReport verify(const SceneGraph& graph, const UITree& tree,
                          const std::vector<Affordance>& affordances,
                          const std::vector<Precondition>& preconditions);

// Evaluates one effect-flavored precondition against a specific node (e.g.
// whatever occupies a stale coordinate) instead of resolving the address.
std::optional<Violation> check_effect_on_node(const SceneGraph& graph, int node_id,
                                              const Precondition& p);

}  // namespace guidrift
