#include "guidrift/hierarchy.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace guidrift {

const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Root: return "root";
    case NodeKind::Form: return "form";
    case NodeKind::Table: return "table";
    case NodeKind::Row: return "row";
    case NodeKind::Modal: return "modal";
    case NodeKind::Group: return "group";
    case NodeKind::Leaf: return "leaf";
  }
  return "?";
}

int UITree::leaf_of_affordance(int affordance_index) const {
  for (const UINode& n : nodes)
    if (n.kind == NodeKind::Leaf && n.affordance == affordance_index) return n.node_id;
  return -1;
}

void UITree::validate() const {
  if (nodes.empty()) throw SimError("tree has no root");
  std::vector<int> seen(nodes.size(), 0);
  seen[0] = 1;
  for (const UINode& n : nodes) {
    if (n.node_id != &n - nodes.data()) throw SimError("node_id out of sync");
    // A childless modal surface is legal (bare popup); it keeps its
    // affordance like a leaf. Every other container must hold something.
    if (n.kind != NodeKind::Leaf && n.kind != NodeKind::Root && n.children.empty() &&
        !n.affordance)
      throw SimError("container without children");
    for (const int c : n.children) {
      if (c <= 0 || c >= static_cast<int>(nodes.size())) throw SimError("child index out of range");
      if (seen[c]++) throw SimError("node has two parents");
    }
  }
  for (const int s : seen)
    if (!s) throw SimError("orphan node");
}

namespace {

struct Builder {
  const std::vector<Affordance>& affs;
  const HierarchyConfig& cfg;
  std::vector<UINode> nodes;

  int new_node(NodeKind kind) {
    UINode n;
    n.node_id = static_cast<int>(nodes.size());
    n.kind = kind;
    nodes.push_back(std::move(n));
    return nodes.back().node_id;
  }

  Rect node_bbox(int id) const { return nodes[static_cast<size_t>(id)].bbox; }

  bool vertically_banded(int a, int b) const {
    const Rect ra = node_bbox(a);
    const Rect rb = node_bbox(b);
    return interval_overlap_ratio(ra.y, ra.bottom(), rb.y, rb.bottom()) >= cfg.row_overlap_ratio;
  }

  // Rows -> tables when stacked with matching column x-intervals.
  bool columns_match(const UINode& row_a, const UINode& row_b) const {
    if (row_a.children.size() != row_b.children.size()) return false;
    for (size_t i = 0; i < row_a.children.size(); ++i) {
      const Rect ca = node_bbox(row_a.children[i]);
      const Rect cb = node_bbox(row_b.children[i]);
      if (interval_iou(ca.x, ca.right(), cb.x, cb.right()) < cfg.column_iou) return false;
    }
    return true;
  }

  void sort_canonical(std::vector<int>& ids) {
    std::sort(ids.begin(), ids.end(), [&](int a, int b) {
      const Rect ra = node_bbox(a);
      const Rect rb = node_bbox(b);
      if (!(ra == rb)) return rect_less(ra, rb);
      return a < b;
    });
  }

  // Groups a container's direct children into row / table nodes.
  std::vector<int> synthesize_alignment(std::vector<int> children) {
    sort_canonical(children);

    // Modal subtrees float; they never join rows.
    std::vector<int> floating, bandable;
    for (const int c : children) {
      (nodes[static_cast<size_t>(c)].kind == NodeKind::Modal ? floating : bandable).push_back(c);
    }

    // Connected components under pairwise vertical banding.
    std::vector<int> comp(bandable.size());
    std::iota(comp.begin(), comp.end(), 0);
    const auto find = [&](int i) {
      while (comp[static_cast<size_t>(i)] != i) i = comp[static_cast<size_t>(i)] = comp[comp[static_cast<size_t>(i)]];
      return i;
    };
    for (size_t i = 0; i < bandable.size(); ++i)
      for (size_t j = i + 1; j < bandable.size(); ++j)
        if (vertically_banded(bandable[i], bandable[j]))
          comp[static_cast<size_t>(find(static_cast<int>(i)))] = find(static_cast<int>(j));

    std::vector<std::vector<int>> groups;
    {
      std::vector<int> roots;
      for (size_t i = 0; i < bandable.size(); ++i) {
        const int r = find(static_cast<int>(i));
        auto it = std::find(roots.begin(), roots.end(), r);
        if (it == roots.end()) {
          roots.push_back(r);
          groups.emplace_back();
          it = roots.end() - 1;
        }
        groups[static_cast<size_t>(it - roots.begin())].push_back(bandable[i]);
      }
    }

    std::vector<int> result = floating;
    std::vector<int> row_ids;
    for (std::vector<int>& g : groups) {
      if (g.size() < 2) {
        result.push_back(g.front());
        continue;
      }
      std::sort(g.begin(), g.end(),
                [&](int a, int b) { return node_bbox(a).x < node_bbox(b).x; });
      const int row = new_node(NodeKind::Row);
      Rect bb = node_bbox(g.front());
      for (const int c : g) bb = union_rect(bb, node_bbox(c));
      nodes[static_cast<size_t>(row)].bbox = bb;
      nodes[static_cast<size_t>(row)].children = g;
      row_ids.push_back(row);
    }

    // Fold stacked runs of column-consistent rows into tables.
    std::sort(row_ids.begin(), row_ids.end(),
              [&](int a, int b) { return rect_less(node_bbox(a), node_bbox(b)); });
    for (size_t i = 0; i < row_ids.size();) {
      size_t j = i + 1;
      while (j < row_ids.size() &&
             columns_match(nodes[static_cast<size_t>(row_ids[j - 1])], nodes[static_cast<size_t>(row_ids[j])]))
        ++j;
      if (j - i >= 2) {
        const int table = new_node(NodeKind::Table);
        Rect bb = node_bbox(row_ids[i]);
        for (size_t k = i; k < j; ++k) bb = union_rect(bb, node_bbox(row_ids[k]));
        nodes[static_cast<size_t>(table)].bbox = bb;
        for (size_t k = i; k < j; ++k)
          nodes[static_cast<size_t>(table)].children.push_back(row_ids[k]);
        result.push_back(table);
      } else {
        result.push_back(row_ids[i]);
      }
      i = j;
    }

    sort_canonical(result);
    return result;
  }

  // Static-text leaves visible from a container without crossing another
  // real (affordance-backed) container; rows/tables are transparent.
  void visible_text_leaves(int id, bool is_self, std::vector<int>& out) const {
    const UINode& n = nodes[static_cast<size_t>(id)];
    if (!is_self && n.backing_affordance) return;
    if (n.kind == NodeKind::Leaf) {
      const Affordance& a = affs[static_cast<size_t>(*n.affordance)];
      if (a.category == Category::StaticText && a.text && !a.text->empty())
        out.push_back(id);
      return;
    }
    for (const int c : n.children) visible_text_leaves(c, false, out);
  }

  void assign_label(UINode& n) {
    std::vector<int> texts;
    visible_text_leaves(n.node_id, true, texts);
    const int* best = nullptr;
    for (const int& t : texts) {
      if (!best) {
        best = &t;
        continue;
      }
      const Rect rt = node_bbox(t);
      const Rect rb = node_bbox(*best);
      if (rt.y < rb.y || (rt.y == rb.y && rt.x < rb.x)) best = &t;
    }
    if (best) {
      n.group_label = *affs[static_cast<size_t>(*nodes[static_cast<size_t>(*best)].affordance)].text;
      n.synthetic_label = false;
      return;
    }
    // Fallback: a caption fused straight onto the container's own box.
    const std::optional<int> own = n.backing_affordance ? n.backing_affordance : n.affordance;
    if (own && affs[static_cast<size_t>(*own)].text && !affs[static_cast<size_t>(*own)].text->empty()) {
      n.group_label = *affs[static_cast<size_t>(*own)].text;
      n.synthetic_label = false;
      return;
    }
    n.group_label = "group_" + std::to_string(n.node_id);
    n.synthetic_label = true;
  }

  // Kinds are assigned after this runs, so branch on structure, not kind.
  bool has_leaf_category(int id, Category cat) const {
    const UINode& n = nodes[static_cast<size_t>(id)];
    if (n.children.empty())
      return n.affordance && affs[static_cast<size_t>(*n.affordance)].category == cat;
    for (const int c : n.children)
      if (has_leaf_category(c, cat)) return true;
    return false;
  }
};

}  // namespace

UITree parse_layout(const std::vector<Affordance>& affordances, const HierarchyConfig& config) {
  Builder b{affordances, config, {}};
  b.new_node(NodeKind::Root);

  // One node per affordance; parent = smallest containing box. Equal-area
  // containment ties break toward the earlier canonical index, which also
  // rules out cycles.
  const int n = static_cast<int>(affordances.size());
  std::vector<int> node_of(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    node_of[static_cast<size_t>(i)] = b.new_node(NodeKind::Leaf);
    UINode& node = b.nodes[static_cast<size_t>(node_of[static_cast<size_t>(i)])];
    node.bbox = affordances[static_cast<size_t>(i)].bbox;
    node.affordance = i;  // containers drop this when they gain children
  }
  std::vector<int> parent(static_cast<size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    long long best_area = -1;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const Rect& rj = affordances[static_cast<size_t>(j)].bbox;
      const Rect& ri = affordances[static_cast<size_t>(i)].bbox;
      if (!rj.contains_rect(ri, config.containment_eps)) continue;
      const bool strictly_bigger =
          rj.area() > ri.area() || (rj.area() == ri.area() && j < i);
      if (!strictly_bigger) continue;
      if (best_area < 0 || rj.area() < best_area ||
          (rj.area() == best_area && j < parent[static_cast<size_t>(i)])) {
        best_area = rj.area();
        parent[static_cast<size_t>(i)] = j;
      }
    }
  }

  std::vector<std::vector<int>> kids(static_cast<size_t>(n));
  std::vector<int> top;
  for (int i = 0; i < n; ++i) {
    if (parent[static_cast<size_t>(i)] >= 0)
      kids[static_cast<size_t>(parent[static_cast<size_t>(i)])].push_back(node_of[static_cast<size_t>(i)]);
    else
      top.push_back(node_of[static_cast<size_t>(i)]);
  }

  // Containers get their kind and their children (with alignment synthesis)
  // bottom-up so table/row nodes exist before the parent sorts them.
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int c) {
    return affordances[static_cast<size_t>(a)].bbox.area() < affordances[static_cast<size_t>(c)].bbox.area();
  });
  for (const int i : order) {
    if (kids[static_cast<size_t>(i)].empty()) continue;
    // Synthesis allocates row/table nodes, so grab the node reference only
    // after the vector has stopped growing.
    std::vector<int> grouped = b.synthesize_alignment(kids[static_cast<size_t>(i)]);
    UINode& node = b.nodes[static_cast<size_t>(node_of[static_cast<size_t>(i)])];
    node.affordance.reset();
    node.backing_affordance = i;
    node.children = std::move(grouped);
  }
  // Leaf/containment structure is fixed; now kinds.
  for (int i = 0; i < n; ++i) {
    UINode& node = b.nodes[static_cast<size_t>(node_of[static_cast<size_t>(i)])];
    const bool container = !node.children.empty();
    if (affordances[static_cast<size_t>(i)].category == Category::Modal) {
      node.kind = NodeKind::Modal;
      if (!container) node.affordance = i;  // bare popup surface
    } else if (container) {
      const bool form = b.has_leaf_category(node.node_id, Category::TextField) &&
                        b.has_leaf_category(node.node_id, Category::Button);
      node.kind = form ? NodeKind::Form : NodeKind::Group;
    } else {
      node.affordance = i;
    }
  }

  std::vector<int> top_children = b.synthesize_alignment(top);
  UINode& root = b.nodes[0];
  root.children = std::move(top_children);
  Rect bb{0, 0, 1, 1};
  bool first = true;
  for (const int c : root.children) {
    bb = first ? b.node_bbox(c) : union_rect(bb, b.node_bbox(c));
    first = false;
  }
  root.bbox = bb;

  for (UINode& nn : b.nodes)
    if (nn.kind != NodeKind::Leaf) b.assign_label(nn);

  UITree tree{std::move(b.nodes)};
  tree.validate();
  return tree;
}

std::string RelativeAddress::key() const {
  std::string k = target_label + "@";
  for (size_t i = 0; i < container_path.size(); ++i) {
    if (i) k += "/";
    k += container_path[i];
  }
  return k;
}

namespace {

void collect_descendant_containers(const UITree& t, int id, const std::string& label,
                                   std::vector<int>& out) {
  for (const int c : t.at(id).children) {
    const UINode& n = t.at(c);
    if (n.kind != NodeKind::Leaf && !n.synthetic_label && n.group_label == label)
      out.push_back(c);
    if (n.kind != NodeKind::Leaf) collect_descendant_containers(t, c, label, out);
  }
}

void collect_matching_leaves(const UITree& t, const std::vector<Affordance>& affs, int id,
                             const std::string& text, std::set<int>& out) {
  const UINode& n = t.at(id);
  if (n.kind == NodeKind::Leaf) {
    const Affordance& a = affs[static_cast<size_t>(*n.affordance)];
    if (a.text && *a.text == text) out.insert(id);
    return;
  }
  for (const int c : n.children) collect_matching_leaves(t, affs, c, text, out);
}

}  // namespace

ResolveResult resolve(const UITree& tree, const std::vector<Affordance>& affordances,
                      const RelativeAddress& address) {
  std::vector<int> scope{0};
  for (const std::string& label : address.container_path) {
    std::vector<int> next;
    for (const int s : scope) collect_descendant_containers(tree, s, label, next);
    if (next.empty()) return {ResolveStatus::TargetNotFound, -1, {}};
    scope = std::move(next);
  }

  std::set<int> matches;
  for (const int s : scope)
    collect_matching_leaves(tree, affordances, s, address.target_label, matches);

  ResolveResult r;
  r.candidates.assign(matches.begin(), matches.end());
  if (matches.empty()) {
    r.status = ResolveStatus::TargetNotFound;
  } else if (matches.size() > 1) {
    r.status = ResolveStatus::AmbiguousTarget;
  } else {
    r.status = ResolveStatus::Found;
    r.node = *matches.begin();
  }
  return r;
}

}  // namespace guidrift
