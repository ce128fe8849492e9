#include "guidrift/scenegraph.hpp"

#include <algorithm>
#include <deque>

namespace guidrift {

const char* to_string(EdgeType e) {
  switch (e) {
    case EdgeType::Contains: return "contains";
    case EdgeType::AlignedRow: return "aligned_row";
    case EdgeType::AlignedColumn: return "aligned_column";
    case EdgeType::Labels: return "labels";
    case EdgeType::LeftOf: return "left_of";
    case EdgeType::Above: return "above";
  }
  return "?";
}

std::optional<EdgeType> edge_type_from_string(const std::string& s) {
  if (s == "contains") return EdgeType::Contains;
  if (s == "aligned_row") return EdgeType::AlignedRow;
  if (s == "aligned_column") return EdgeType::AlignedColumn;
  if (s == "labels") return EdgeType::Labels;
  if (s == "left_of") return EdgeType::LeftOf;
  if (s == "above") return EdgeType::Above;
  return std::nullopt;
}

SceneGraph::SceneGraph(std::vector<SceneNode> nodes, std::vector<SceneEdge> edges, int64_t revision)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), revision_(revision) {
  for (size_t i = 0; i < edges_.size(); ++i) {
    const SceneEdge& e = edges_[i];
    adjacency_.insert({{e.from, static_cast<int>(e.type)}, e.to});
  }
}

const SceneNode& SceneGraph::node(int id) const {
  if (id < 0 || id >= static_cast<int>(nodes_.size()))
    throw QueryError("unknown node id: " + std::to_string(id));
  return nodes_[static_cast<size_t>(id)];
}

std::vector<int> SceneGraph::find_by_text(const std::string& text) const {
  if (text.empty()) throw QueryError("find_by_text: empty pattern");
  std::vector<int> out;
  for (const SceneNode& n : nodes_)
    if ((n.text && *n.text == text) || (!n.label.empty() && n.label == text)) out.push_back(n.id);
  return out;
}

std::vector<int> SceneGraph::find_by_category(Category c) const {
  std::vector<int> out;
  for (const SceneNode& n : nodes_)
    if (n.category && *n.category == c) out.push_back(n.id);
  return out;
}

std::vector<int> SceneGraph::neighbors(int node_id, EdgeType type) const {
  node(node_id);  // validates
  std::vector<int> out;
  const auto [lo, hi] = adjacency_.equal_range({node_id, static_cast<int>(type)});
  for (auto it = lo; it != hi; ++it) out.push_back(it->second);
  std::sort(out.begin(), out.end());
  return out;
}

bool SceneGraph::path_exists(int from, int to, EdgeType type) const {
  node(from);
  node(to);
  std::deque<int> frontier{from};
  std::set<int> seen{from};
  while (!frontier.empty()) {
    const int cur = frontier.front();
    frontier.pop_front();
    if (cur == to) return true;
    for (const int nxt : neighbors(cur, type))
      if (seen.insert(nxt).second) frontier.push_back(nxt);
  }
  return false;
}

int SceneGraph::leaf_at(Point p) const {
  int best = -1;
  for (const SceneNode& n : nodes_) {
    if (n.kind != NodeKind::Leaf || !n.bbox.contains(p)) continue;
    if (best < 0 || n.bbox.area() < nodes_[static_cast<size_t>(best)].bbox.area()) best = n.id;
  }
  return best;
}

int SceneGraph::node_of_affordance(int affordance_index) const {
  for (const SceneNode& n : nodes_)
    if (n.affordance == affordance_index) return n.id;
  return -1;
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

namespace {

bool labelable(const SceneNode& n) {
  return n.kind == NodeKind::Leaf && n.category &&
         (*n.category == Category::TextField || *n.category == Category::Button);
}

}  // namespace

SceneGraph build_graph(const UITree& tree, const std::vector<Affordance>& affordances,
                       int64_t revision, const IntentLexicon& lexicon) {
  std::vector<SceneNode> nodes;
  nodes.reserve(tree.nodes.size());
  for (const UINode& u : tree.nodes) {
    SceneNode n;
    n.id = u.node_id;
    n.kind = u.kind;
    n.bbox = u.bbox;
    const std::optional<int> aff = u.affordance ? u.affordance : u.backing_affordance;
    n.affordance = aff;
    if (u.kind == NodeKind::Leaf && aff) {
      const Affordance& a = affordances[static_cast<size_t>(*aff)];
      n.text = a.text;
      n.category = a.category;
    }
    if (u.kind != NodeKind::Leaf) n.label = u.group_label;
    n.annotated_effect = lexicon.annotate(n.text);
    nodes.push_back(std::move(n));
  }

  std::vector<SceneEdge> edges;
  for (const UINode& u : tree.nodes)
    for (const int c : u.children) edges.push_back({u.node_id, c, EdgeType::Contains});

  // Row / column co-membership.
  for (const UINode& u : tree.nodes) {
    if (u.kind == NodeKind::Row) {
      for (size_t i = 0; i < u.children.size(); ++i)
        for (size_t j = 0; j < u.children.size(); ++j)
          if (i != j) edges.push_back({u.children[i], u.children[j], EdgeType::AlignedRow});
    }
    if (u.kind == NodeKind::Table) {
      const size_t cols = tree.at(u.children.front()).children.size();
      for (size_t col = 0; col < cols; ++col) {
        for (const int ra : u.children)
          for (const int rb : u.children) {
            if (ra == rb) continue;
            const UINode& na = tree.at(ra);
            const UINode& nb = tree.at(rb);
            if (col < na.children.size() && col < nb.children.size())
              edges.push_back({na.children[col], nb.children[col], EdgeType::AlignedColumn});
          }
      }
    }
  }

  // Sibling spatial order (strict, disjoint extents).
  for (const UINode& u : tree.nodes) {
    for (const int a : u.children)
      for (const int b : u.children) {
        if (a == b) continue;
        const Rect ra = tree.at(a).bbox;
        const Rect rb = tree.at(b).bbox;
        if (ra.right() <= rb.x) edges.push_back({a, b, EdgeType::LeftOf});
        if (ra.bottom() <= rb.y) edges.push_back({a, b, EdgeType::Above});
      }
  }

  // Label wiring: static text -> nearest field/button right of or below it,
  // within kLabelsReachFactor label heights.
  for (const SceneNode& n : nodes) {
    if (n.kind != NodeKind::Leaf || !n.category || *n.category != Category::StaticText) continue;
    const double reach = kLabelsReachFactor * n.bbox.h;
    int best = -1;
    double best_gap = 0.0;
    for (const SceneNode& m : nodes) {
      if (!labelable(m)) continue;
      double gap = -1.0;
      const bool right_of =
          m.bbox.x >= n.bbox.right() &&
          interval_overlap_ratio(n.bbox.y, n.bbox.bottom(), m.bbox.y, m.bbox.bottom()) > 0.0;
      const bool below =
          m.bbox.y >= n.bbox.bottom() &&
          interval_overlap_ratio(n.bbox.x, n.bbox.right(), m.bbox.x, m.bbox.right()) > 0.0;
      if (right_of) gap = m.bbox.x - n.bbox.right();
      else if (below) gap = m.bbox.y - n.bbox.bottom();
      if (gap < 0.0 || gap > reach) continue;
      if (best < 0 || gap < best_gap || (gap == best_gap && m.id < best)) {
        best = m.id;
        best_gap = gap;
      }
    }
    if (best >= 0) edges.push_back({n.id, best, EdgeType::Labels});
  }

  return SceneGraph(std::move(nodes), std::move(edges), revision);
}

// ---------------------------------------------------------------------------
// Preconditions
// ---------------------------------------------------------------------------

namespace {

std::string addr_str(const RelativeAddress& a) {
  std::string s = "(\"" + a.target_label + "\", [";
  for (size_t i = 0; i < a.container_path.size(); ++i) {
    if (i) s += ", ";
    s += "\"" + a.container_path[i] + "\"";
  }
  return s + "])";
}

}  // namespace

std::string describe(const Precondition& p) {
  if (const auto* is = std::get_if<TargetEffectIs>(&p))
    return "TargetEffectIs" + addr_str(is->address) + " == " + to_string(is->effect);
  if (const auto* isnt = std::get_if<TargetEffectIsNot>(&p))
    return "TargetEffectIsNot" + addr_str(isnt->address) + " != " + to_string(isnt->effect);
  if (const auto* f = std::get_if<FieldNonEmpty>(&p)) return "FieldNonEmpty" + addr_str(f->address);
  if (const auto* e = std::get_if<ExistsTarget>(&p)) return "Exists" + addr_str(e->address);
  const auto& ne = std::get<NotExistsLabel>(p);
  return "NotExists(\"" + ne.label + "\")";
}

namespace {

struct Evaluator {
  const SceneGraph& graph;
  const UITree& tree;
  const std::vector<Affordance>& affs;
  std::set<int> queried;

  // Address -> graph node, fail-closed. Returns -1 and fills `why` on error.
  int resolve_node(const RelativeAddress& addr, std::string& why) {
    const ResolveResult r = resolve(tree, affs, addr);
    for (const int c : r.candidates) queried.insert(c);
    if (r.status == ResolveStatus::TargetNotFound) {
      why = "address " + addr_str(addr) + " resolves to nothing";
      return -1;
    }
    if (r.status == ResolveStatus::AmbiguousTarget) {
      why = "address " + addr_str(addr) + " is ambiguous (" +
            std::to_string(r.candidates.size()) + " matches)";
      return -1;
    }
    queried.insert(r.node);
    return r.node;
  }

  std::optional<std::string> eval(const Precondition& p) {
    std::string why;
    if (const auto* is = std::get_if<TargetEffectIs>(&p)) {
      const int id = resolve_node(is->address, why);
      if (id < 0) return why;
      const SceneNode& n = graph.node(id);
      if (!n.annotated_effect)
        return "node " + std::to_string(id) + " (\"" + n.text.value_or("") +
               "\") has no effect annotation";
      if (*n.annotated_effect != is->effect)
        return "node " + std::to_string(id) + " (\"" + n.text.value_or("") + "\") reads as " +
               to_string(*n.annotated_effect) + ", not " + to_string(is->effect);
      return std::nullopt;
    }
    if (const auto* isnt = std::get_if<TargetEffectIsNot>(&p)) {
      const int id = resolve_node(isnt->address, why);
      if (id < 0) return why;
      const SceneNode& n = graph.node(id);
      if (n.annotated_effect && *n.annotated_effect == isnt->effect)
        return "node " + std::to_string(id) + " (\"" + n.text.value_or("") +
               "\") reads as forbidden effect " + to_string(isnt->effect);
      return std::nullopt;
    }
    if (const auto* f = std::get_if<FieldNonEmpty>(&p)) {
      int id = resolve_node(f->address, why);
      if (id < 0) return why;
      const SceneNode* n = &graph.node(id);
      // A static label resolves through its labels edge to the real field.
      if (n->category && *n->category == Category::StaticText) {
        const std::vector<int> wired = graph.neighbors(id, EdgeType::Labels);
        if (wired.empty())
          return "label node " + std::to_string(id) + " is not wired to any field";
        id = wired.front();
        queried.insert(id);
        n = &graph.node(id);
      }
      if (!n->category || *n->category != Category::TextField)
        return "node " + std::to_string(id) + " is not a text field";
      if (!n->text || n->text->empty())
        return "field node " + std::to_string(id) + " is empty";
      return std::nullopt;
    }
    if (const auto* e = std::get_if<ExistsTarget>(&p)) {
      const int id = resolve_node(e->address, why);
      if (id < 0) return why;
      return std::nullopt;
    }
    const auto& ne = std::get<NotExistsLabel>(p);
    const std::vector<int> hits = graph.find_by_text(ne.label);
    for (const int h : hits) queried.insert(h);
    if (!hits.empty())
      return "\"" + ne.label + "\" exists (node " + std::to_string(hits.front()) + ")";
    return std::nullopt;
  }
};

}  // namespace

VerificationReport verify(const SceneGraph& graph, const UITree& tree,
                          const std::vector<Affordance>& affordances,
                          const std::vector<Precondition>& preconditions) {
  const int64_t rev_before = graph.built_at_revision();
  Evaluator ev{graph, tree, affordances, {}};
  VerificationReport rep;
  for (const Precondition& p : preconditions) {
    const std::optional<std::string> why = ev.eval(p);
    if (why) rep.violated.push_back({describe(p), *why});
  }
  rep.passed = rep.violated.empty();
  rep.queried_nodes.assign(ev.queried.begin(), ev.queried.end());
  if (graph.built_at_revision() != rev_before) throw SimError("verify mutated the graph");
  return rep;
}

std::optional<Violation> check_effect_on_node(const SceneGraph& graph, int node_id,
                                              const Precondition& p) {
  const SceneNode& n = graph.node(node_id);
  if (const auto* is = std::get_if<TargetEffectIs>(&p)) {
    if (!n.annotated_effect || *n.annotated_effect != is->effect)
      return Violation{describe(p), "node " + std::to_string(node_id) + " (\"" +
                                        n.text.value_or("") + "\") does not read as " +
                                        to_string(is->effect)};
    return std::nullopt;
  }
  if (const auto* isnt = std::get_if<TargetEffectIsNot>(&p)) {
    if (n.annotated_effect && *n.annotated_effect == isnt->effect)
      return Violation{describe(p), "node " + std::to_string(node_id) + " (\"" +
                                        n.text.value_or("") + "\") reads as forbidden effect " +
                                        to_string(isnt->effect)};
    return std::nullopt;
  }
  throw QueryError("check_effect_on_node expects an effect precondition");
}

}  // namespace guidrift
