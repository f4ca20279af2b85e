#include "ancestral/display_graph.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace ancestral {

DisplayGraph DisplayGraph::build(const Profile& profile) {
  for (std::size_t i = 0; i < profile.trees.size(); ++i) {
    const auto& t = profile.trees[i];
    if (t.empty() || !t.fully_labeled() || !t.singularly_labeled()) {
      throw std::invalid_argument("display graph needs fully and singularly labeled trees (tree " +
                                  std::to_string(i) + ")");
    }
  }

  DisplayGraph g;
  const auto universe = profile.labels.size();
  g.local_.assign(universe, -1);
  std::vector<std::int32_t> k(universe, 0);
  for (const auto& t : profile.trees) {
    for (NodeId v = 0; static_cast<std::size_t>(v) < t.node_count(); ++v) ++k[static_cast<std::size_t>(t.labels(v)[0])];
  }
  for (std::size_t l = 0; l < universe; ++l) {
    if (k[l] == 0) continue;
    g.local_[l] = static_cast<Node>(g.labels_.size());
    g.labels_.push_back(static_cast<LabelId>(l));
  }
  const auto n = g.labels_.size();

  g.occ_begin_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) g.occ_begin_[v + 1] = g.occ_begin_[v] + k[static_cast<std::size_t>(g.labels_[v])];
  g.occ_.resize(static_cast<std::size_t>(g.occ_begin_[n]));
  std::vector<std::int32_t> cursor(g.occ_begin_.begin(), g.occ_begin_.end() - 1);

  std::vector<std::vector<Occurrence>> tree_occ(profile.trees.size());
  std::vector<std::int32_t> degree(n, 0);
  for (std::size_t i = 0; i < profile.trees.size(); ++i) {
    const auto& t = profile.trees[i];
    auto& occ_of = tree_occ[i];
    occ_of.resize(t.node_count());
    for (NodeId v = 0; static_cast<std::size_t>(v) < t.node_count(); ++v) {
      const Node u = g.local_[static_cast<std::size_t>(t.labels(v)[0])];
      const Occurrence o = cursor[static_cast<std::size_t>(u)]++;
      g.occ_[static_cast<std::size_t>(o)] = OccurrenceRecord{static_cast<std::int32_t>(i), u, 0, 0};
      occ_of[static_cast<std::size_t>(v)] = o;
      if (t.parent(v) != kNoNode) {
        ++degree[static_cast<std::size_t>(u)];
        ++degree[static_cast<std::size_t>(g.local_[static_cast<std::size_t>(t.labels(t.parent(v))[0])])];
      }
    }
    g.roots_.push_back(occ_of[static_cast<std::size_t>(t.root())]);
  }

  // Child occurrence lists, grouped by occurrence and kept in tree order.
  std::vector<std::int32_t> child_count(g.occ_.size(), 0);
  for (std::size_t i = 0; i < profile.trees.size(); ++i) {
    const auto& t = profile.trees[i];
    for (NodeId v = 0; static_cast<std::size_t>(v) < t.node_count(); ++v) {
      child_count[static_cast<std::size_t>(tree_occ[i][static_cast<std::size_t>(v)])] =
          static_cast<std::int32_t>(t.children(v).size());
    }
  }
  std::int32_t running = 0;
  for (std::size_t o = 0; o < g.occ_.size(); ++o) {
    g.occ_[o].child_begin = g.occ_[o].child_end = running;
    running += child_count[o];
  }
  g.child_occ_.assign(static_cast<std::size_t>(running), -1);
  for (std::size_t i = 0; i < profile.trees.size(); ++i) {
    const auto& t = profile.trees[i];
    for (NodeId v = 0; static_cast<std::size_t>(v) < t.node_count(); ++v) {
      auto& rec = g.occ_[static_cast<std::size_t>(tree_occ[i][static_cast<std::size_t>(v)])];
      for (NodeId c : t.children(v)) {
        g.child_occ_[static_cast<std::size_t>(rec.child_end++)] = tree_occ[i][static_cast<std::size_t>(c)];
      }
    }
  }

  // Adjacency with parallel edges collapsed.
  std::vector<std::int32_t> begin(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) begin[v + 1] = begin[v] + degree[v];
  std::vector<Node> raw(static_cast<std::size_t>(begin[n]));
  std::vector<std::int32_t> fill(begin.begin(), begin.end() - 1);
  for (const auto& t : profile.trees) {
    for (NodeId v = 0; static_cast<std::size_t>(v) < t.node_count(); ++v) {
      if (t.parent(v) == kNoNode) continue;
      const Node a = g.local_[static_cast<std::size_t>(t.labels(v)[0])];
      const Node b = g.local_[static_cast<std::size_t>(t.labels(t.parent(v))[0])];
      raw[static_cast<std::size_t>(fill[static_cast<std::size_t>(a)]++)] = b;
      raw[static_cast<std::size_t>(fill[static_cast<std::size_t>(b)]++)] = a;
    }
  }
  g.adj_begin_.assign(n + 1, 0);
  g.adj_.reserve(raw.size());
  for (std::size_t v = 0; v < n; ++v) {
    auto first = raw.begin() + begin[v], last = raw.begin() + begin[v + 1];
    std::sort(first, last);
    last = std::unique(first, last);
    g.adj_.insert(g.adj_.end(), first, last);
    g.adj_begin_[v + 1] = static_cast<std::int32_t>(g.adj_.size());
  }
  return g;
}

std::vector<DisplayGraph::Node> DisplayGraph::children(Node v, std::size_t tree) const {
  std::vector<Node> out;
  for (Occurrence o = occurrence_begin(v); o < occurrence_end(v); ++o) {
    if (static_cast<std::size_t>(occurrence_tree(o)) != tree) continue;
    for (Occurrence c : occurrence_children(o)) out.push_back(occurrence_node(c));
  }
  return out;
}

std::vector<std::pair<DisplayGraph::Node, DisplayGraph::Node>> DisplayGraph::edges() const {
  std::vector<std::pair<Node, Node>> out;
  out.reserve(edge_count());
  for (Node u = 0; static_cast<std::size_t>(u) < node_count(); ++u) {
    for (Node v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// positions

Position initial_position(const Profile& profile) {
  Position u;
  for (const auto& t : profile.trees) {
    auto root = t.labels(t.root());
    u.sets.emplace_back(root.begin(), root.end());
    std::sort(u.sets.back().begin(), u.sets.back().end());
  }
  return u;
}

namespace {

std::vector<LabelId> descendants_in(const SemiLabeledTree& t, const std::vector<LabelId>& set) {
  std::vector<LabelId> out;
  std::vector<NodeId> stack;
  std::vector<char> seen(t.node_count(), 0);
  for (LabelId l : set) {
    if (auto v = t.node_of(l)) stack.push_back(*v);
  }
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    if (seen[static_cast<std::size_t>(v)]) continue;
    seen[static_cast<std::size_t>(v)] = 1;
    out.insert(out.end(), t.labels(v).begin(), t.labels(v).end());
    for (NodeId c : t.children(v)) stack.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<LabelId> descendants(const Profile& profile, const Position& position) {
  std::vector<LabelId> out;
  for (std::size_t i = 0; i < profile.trees.size() && i < position.sets.size(); ++i) {
    auto d = descendants_in(profile.trees[i], position.sets[i]);
    out.insert(out.end(), d.begin(), d.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool is_valid_position(const Profile& profile, const Position& position) {
  if (position.sets.size() != profile.trees.size()) return false;
  const auto all = descendants(profile, position);
  for (std::size_t i = 0; i < profile.trees.size(); ++i) {
    const auto& t = profile.trees[i];
    const auto& u = position.sets[i];
    for (LabelId l : u) {
      if (!t.contains(l)) return false;
    }
    if (u.size() >= 2) {
      const NodeId p = t.parent(*t.node_of(u[0]));
      if (p == kNoNode) return false;
      for (LabelId l : u) {
        if (t.parent(*t.node_of(l)) != p) return false;
      }
    }
    std::vector<LabelId> expected;
    for (LabelId l : all) {
      if (t.contains(l)) expected.push_back(l);
    }
    if (descendants_in(t, u) != expected) return false;
  }
  return true;
}

std::vector<std::vector<LabelId>> connected_components(const DisplayGraph& graph) {
  const auto n = graph.node_count();
  std::vector<char> seen(n, 0);
  std::vector<std::vector<LabelId>> out;
  std::vector<DisplayGraph::Node> queue;
  for (DisplayGraph::Node s = 0; static_cast<std::size_t>(s) < n; ++s) {
    if (seen[static_cast<std::size_t>(s)]) continue;
    queue.assign(1, s);
    seen[static_cast<std::size_t>(s)] = 1;
    std::vector<LabelId> comp;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const auto u = queue[head];
      comp.push_back(graph.label(u));
      for (auto w : graph.neighbors(u)) {
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          queue.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

void write_edge_list(const DisplayGraph& graph, const LabelUniverse& labels, std::ostream& out) {
  for (const auto& [u, v] : graph.edges()) {
    out << labels.name(graph.label(u)) << ' ' << labels.name(graph.label(v)) << '\n';
  }
}

}  // namespace ancestral
