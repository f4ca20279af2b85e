#include "ancestral/tree.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace ancestral {

// ---------------------------------------------------------------------------
// SemiLabeledTree

SemiLabeledTree SemiLabeledTree::from_parents(std::span<const NodeId> parents,
                                              std::vector<std::vector<LabelId>> labels) {
  SemiLabeledTree t;
  const auto n = parents.size();
  t.nodes_.resize(n);
  labels.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    const NodeId p = parents[v];
    t.nodes_[v].parent = p;
    if (p == kNoNode) {
      if (t.root_ == kNoNode) t.root_ = static_cast<NodeId>(v);
    } else if (p >= 0 && static_cast<std::size_t>(p) < n && static_cast<std::size_t>(p) != v) {
      t.nodes_[static_cast<std::size_t>(p)].children.push_back(static_cast<NodeId>(v));
    }
    t.nodes_[v].labels = std::move(labels[v]);
    for (LabelId l : t.nodes_[v].labels) t.label_to_node_.emplace(l, static_cast<NodeId>(v));
  }
  return t;
}

NodeId SemiLabeledTree::add_root() {
  if (root_ != kNoNode) throw std::logic_error("tree already has a root");
  nodes_.emplace_back();
  root_ = static_cast<NodeId>(nodes_.size() - 1);
  return root_;
}

NodeId SemiLabeledTree::add_child(NodeId parent) {
  if (parent < 0 || static_cast<std::size_t>(parent) >= nodes_.size()) {
    throw std::out_of_range("add_child: no such parent node");
  }
  const auto v = static_cast<NodeId>(nodes_.size());
  nodes_.emplace_back();
  nodes_.back().parent = parent;
  nodes_[static_cast<std::size_t>(parent)].children.push_back(v);
  return v;
}

void SemiLabeledTree::add_label(NodeId v, LabelId label) {
  auto [it, inserted] = label_to_node_.emplace(label, v);
  if (!inserted) throw std::invalid_argument("label already placed in this tree");
  nodes_[static_cast<std::size_t>(v)].labels.push_back(label);
}

std::optional<NodeId> SemiLabeledTree::node_of(LabelId label) const {
  if (auto it = label_to_node_.find(label); it != label_to_node_.end()) return it->second;
  return std::nullopt;
}

std::vector<LabelId> SemiLabeledTree::label_set() const {
  std::vector<LabelId> out;
  out.reserve(label_to_node_.size());
  for (const auto& [l, v] : label_to_node_) out.push_back(l);
  std::sort(out.begin(), out.end());
  return out;
}

bool SemiLabeledTree::fully_labeled() const {
  return std::all_of(nodes_.begin(), nodes_.end(), [](const Node& n) { return !n.labels.empty(); });
}

bool SemiLabeledTree::singularly_labeled() const {
  return std::all_of(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.labels.size() <= 1; });
}

std::vector<NodeId> SemiLabeledTree::preorder() const {
  std::vector<NodeId> order;
  if (root_ == kNoNode) return order;
  order.reserve(nodes_.size());
  std::vector<NodeId> stack{root_};
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    order.push_back(v);
    const auto& ch = node(v).children;
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
  }
  return order;
}

// ---------------------------------------------------------------------------
// Profile

std::vector<LabelId> Profile::label_set() const {
  std::vector<char> seen(labels.size(), 0);
  for (const auto& t : trees) {
    for (NodeId v = 0; static_cast<std::size_t>(v) < t.node_count(); ++v) {
      for (LabelId l : t.labels(v)) seen[static_cast<std::size_t>(l)] = 1;
    }
  }
  std::vector<LabelId> out;
  for (std::size_t l = 0; l < seen.size(); ++l) {
    if (seen[l]) out.push_back(static_cast<LabelId>(l));
  }
  return out;
}

std::size_t Profile::size() const {
  std::size_t m = 0;
  for (const auto& t : trees) m += t.node_count() + t.edge_count();
  return m;
}

std::uint64_t Profile::degree_square_sum() const {
  std::uint64_t tau = 0;
  for (const auto& t : trees) {
    for (NodeId v = 0; static_cast<std::size_t>(v) < t.node_count(); ++v) {
      if (t.is_leaf(v)) continue;
      const std::uint64_t d = t.children(v).size() + (t.parent(v) == kNoNode ? 0 : 1);
      tau += d * d;
    }
  }
  return tau;
}

// ---------------------------------------------------------------------------
// validate

std::optional<Violation> validate(const SemiLabeledTree& tree) {
  using K = Violation::Kind;
  const auto n = tree.node_count();
  if (n == 0) return Violation{K::kEmptyTree, kNoNode, "tree has no nodes"};

  std::size_t roots = 0;
  for (NodeId v = 0; static_cast<std::size_t>(v) < n; ++v) {
    const NodeId p = tree.parent(v);
    if (p == kNoNode) {
      ++roots;
    } else if (p < 0 || static_cast<std::size_t>(p) >= n || p == v) {
      return Violation{K::kBadParent, v, "parent link out of range"};
    }
  }
  if (roots != 1) {
    return Violation{K::kRootCount, kNoNode, "expected exactly one root, found " + std::to_string(roots)};
  }

  const auto order = tree.preorder();
  if (order.size() != n) {
    std::vector<char> reached(n, 0);
    for (NodeId v : order) reached[static_cast<std::size_t>(v)] = 1;
    const auto it = std::find(reached.begin(), reached.end(), 0);
    return Violation{K::kCycle, static_cast<NodeId>(it - reached.begin()),
                     "node not reachable from the root (cycle or disconnected part)"};
  }

  std::size_t placed = 0;
  for (NodeId v : order) {
    for (LabelId l : tree.labels(v)) {
      ++placed;
      if (tree.node_of(l) != v) {
        return Violation{K::kLabelMapping, v, "label " + std::to_string(l) + " is placed on more than one node"};
      }
    }
  }
  if (placed != tree.label_count()) {
    return Violation{K::kLabelMapping, kNoNode, "label map and node labels disagree"};
  }

  for (NodeId v : order) {
    if (!tree.labels(v).empty()) continue;
    if (tree.is_leaf(v)) return Violation{K::kUnlabeledLeaf, v, "unlabeled leaf"};
    if (tree.children(v).size() < 2) {
      return Violation{K::kUnlabeledLowDegree, v, "unlabeled node with <2 children"};
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// add_distinct_labels

Profile add_distinct_labels(const Profile& profile) {
  Profile out = profile;
  std::vector<std::pair<std::size_t, NodeId>> targets;
  for (std::size_t i = 0; i < out.trees.size(); ++i) {
    const auto& t = out.trees[i];
    if (!t.empty() && t.labels(t.root()).empty()) targets.emplace_back(i, t.root());
  }
  for (std::size_t i = 0; i < out.trees.size(); ++i) {
    const auto& t = out.trees[i];
    for (NodeId v : t.preorder()) {
      if (v != t.root() && t.labels(v).empty()) targets.emplace_back(i, v);
    }
  }
  if (targets.empty()) return out;

  // Pick a prefix under which none of the numbered names is taken.
  std::string prefix;
  for (;;) {
    bool clash = false;
    for (std::size_t j = 1; j <= targets.size() && !clash; ++j) {
      clash = out.labels.find(prefix + std::to_string(j)).has_value();
    }
    if (!clash) break;
    prefix += '_';
  }
  for (std::size_t j = 0; j < targets.size(); ++j) {
    const auto [i, v] = targets[j];
    const LabelId l = out.labels.add_synthetic(prefix + std::to_string(j + 1));
    out.trees[i].add_label(v, l);
  }
  return out;
}

// ---------------------------------------------------------------------------
// clusters / restriction

ClusterSet clusters(const SemiLabeledTree& tree) {
  ClusterSet out;
  if (tree.empty()) return out;
  const auto order = tree.preorder();
  std::vector<Cluster> below(tree.node_count());
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeId v = *it;
    Cluster& x = below[static_cast<std::size_t>(v)];
    x.assign(tree.labels(v).begin(), tree.labels(v).end());
    for (NodeId c : tree.children(v)) {
      auto& cx = below[static_cast<std::size_t>(c)];
      x.insert(x.end(), cx.begin(), cx.end());
    }
    std::sort(x.begin(), x.end());
    if (!x.empty()) out.insert(x);
  }
  return out;
}

SemiLabeledTree restrict_to(const SemiLabeledTree& tree, std::span<const LabelId> keep) {
  if (keep.empty()) throw std::invalid_argument("restriction to an empty label set");
  const auto n = tree.node_count();
  std::vector<char> marked(n, 0);
  std::vector<std::vector<LabelId>> kept_labels(n);
  for (LabelId l : keep) {
    const auto v = tree.node_of(l);
    if (!v) throw std::invalid_argument("restriction label not in tree: " + std::to_string(l));
    auto& kl = kept_labels[static_cast<std::size_t>(*v)];
    if (std::find(kl.begin(), kl.end(), l) == kl.end()) kl.push_back(l);
    marked[static_cast<std::size_t>(*v)] = 1;
  }

  // A node survives if it carries a kept label or joins at least two
  // branches that do.
  const auto order = tree.preorder();
  std::vector<char> has_kept(n, 0);
  std::vector<char> survives(n, 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto v = static_cast<std::size_t>(*it);
    int branches = 0;
    for (NodeId c : tree.children(*it)) branches += has_kept[static_cast<std::size_t>(c)];
    has_kept[v] = marked[v] || branches > 0;
    survives[v] = marked[v] || branches >= 2;
  }

  SemiLabeledTree out;
  std::vector<NodeId> image(n, kNoNode);
  // Nearest surviving ancestor image, propagated in preorder.
  std::vector<NodeId> anchor(n, kNoNode);
  for (NodeId v : order) {
    const auto vi = static_cast<std::size_t>(v);
    const NodeId p = tree.parent(v);
    const NodeId up = p == kNoNode ? kNoNode
                      : image[static_cast<std::size_t>(p)] != kNoNode ? image[static_cast<std::size_t>(p)]
                                                                      : anchor[static_cast<std::size_t>(p)];
    anchor[vi] = up;
    if (!survives[vi]) continue;
    image[vi] = up == kNoNode ? out.add_root() : out.add_child(up);
    auto& kl = kept_labels[vi];
    std::sort(kl.begin(), kl.end());
    for (LabelId l : kl) out.add_label(image[vi], l);
  }
  return out;
}

// ---------------------------------------------------------------------------
// D / N pairs

namespace {

struct Intervals {
  std::vector<std::int32_t> pre;
  std::vector<std::int32_t> last;  // largest preorder index in the subtree
};

Intervals intervals(const SemiLabeledTree& tree, const std::vector<NodeId>& order) {
  Intervals iv;
  iv.pre.assign(tree.node_count(), 0);
  iv.last.assign(tree.node_count(), 0);
  for (std::size_t i = 0; i < order.size(); ++i) iv.pre[static_cast<std::size_t>(order[i])] = static_cast<std::int32_t>(i);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto v = static_cast<std::size_t>(*it);
    std::int32_t last = iv.pre[v];
    for (NodeId c : tree.children(*it)) last = std::max(last, iv.last[static_cast<std::size_t>(c)]);
    iv.last[v] = last;
  }
  return iv;
}

}  // namespace

std::set<LabelPair> d_pairs(const SemiLabeledTree& tree) {
  std::set<LabelPair> out;
  const auto order = tree.preorder();
  for (NodeId v : order) {
    if (tree.labels(v).empty()) continue;
    std::vector<NodeId> stack(tree.children(v).begin(), tree.children(v).end());
    while (!stack.empty()) {
      const NodeId w = stack.back();
      stack.pop_back();
      for (LabelId a : tree.labels(v)) {
        for (LabelId b : tree.labels(w)) out.emplace(a, b);
      }
      for (NodeId c : tree.children(w)) stack.push_back(c);
    }
  }
  return out;
}

std::set<LabelPair> n_pairs(const SemiLabeledTree& tree) {
  std::set<LabelPair> out;
  const auto order = tree.preorder();
  const auto iv = intervals(tree, order);
  const auto labels = tree.label_set();
  auto comparable = [&](NodeId a, NodeId b) {
    const auto ai = static_cast<std::size_t>(a), bi = static_cast<std::size_t>(b);
    return (iv.pre[ai] <= iv.pre[bi] && iv.pre[bi] <= iv.last[ai]) ||
           (iv.pre[bi] <= iv.pre[ai] && iv.pre[ai] <= iv.last[bi]);
  };
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const NodeId a = *tree.node_of(labels[i]);
    for (std::size_t j = i + 1; j < labels.size(); ++j) {
      const NodeId b = *tree.node_of(labels[j]);
      if (!comparable(a, b)) out.emplace(labels[i], labels[j]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// ancestral display
//
// With D(small) ⊆ D(big) established, N(small) ⊆ N(big) reduces to two local
// conditions: labels co-located in big are co-located in small, and for each
// labeled node of big, its nearest labeled proper ancestor (over L(small)) is
// an ancestor-or-equal in small. Chaining the local condition covers every
// comparable pair of big.

std::optional<DisplayViolation> display_violation(const SemiLabeledTree& big,
                                                  const SemiLabeledTree& small) {
  using K = DisplayViolation::Kind;
  if (small.empty()) return std::nullopt;
  const auto small_labels = small.label_set();
  for (LabelId l : small_labels) {
    if (!big.contains(l)) return DisplayViolation{K::kMissingLabel, l, kNoLabel};
  }

  const auto big_order = big.preorder();
  const auto big_iv = intervals(big, big_order);
  const auto small_order = small.preorder();
  const auto small_iv = intervals(small, small_order);
  auto big_pre = [&](LabelId l) { return big_iv.pre[static_cast<std::size_t>(*big.node_of(l))]; };

  // Proper-descendance: every label strictly below a small node must sit
  // strictly below each label of that node in big.
  constexpr std::int32_t kInf = std::numeric_limits<std::int32_t>::max();
  struct Extent {
    std::int32_t lo = kInf, hi = -1;
    LabelId lo_label = kNoLabel, hi_label = kNoLabel;
    void absorb(const Extent& o) {
      if (o.lo < lo) lo = o.lo, lo_label = o.lo_label;
      if (o.hi > hi) hi = o.hi, hi_label = o.hi_label;
    }
  };
  std::vector<Extent> subtree(small.node_count());  // labels at or below v
  for (auto it = small_order.rbegin(); it != small_order.rend(); ++it) {
    const NodeId v = *it;
    Extent below;
    for (NodeId c : small.children(v)) below.absorb(subtree[static_cast<std::size_t>(c)]);
    for (LabelId a : small.labels(v)) {
      const auto bn = static_cast<std::size_t>(*big.node_of(a));
      if (below.hi >= 0) {
        if (below.lo <= big_iv.pre[bn]) return DisplayViolation{K::kMissingDescendant, a, below.lo_label};
        if (below.hi > big_iv.last[bn]) return DisplayViolation{K::kMissingDescendant, a, below.hi_label};
      }
    }
    Extent here = below;
    for (LabelId a : small.labels(v)) {
      const auto p = big_pre(a);
      here.absorb(Extent{p, p, a, a});
    }
    subtree[static_cast<std::size_t>(v)] = here;
  }

  // Representative label (from L(small)) per big node.
  std::vector<LabelId> rep(big.node_count(), kNoLabel);
  auto sorted_pair = [](LabelId a, LabelId b) { return a < b ? LabelPair{a, b} : LabelPair{b, a}; };
  for (LabelId l : small_labels) {
    auto& r = rep[static_cast<std::size_t>(*big.node_of(l))];
    if (r == kNoLabel) {
      r = l;
    } else if (small.node_of(r) != small.node_of(l)) {
      const auto [a, b] = sorted_pair(r, l);
      return DisplayViolation{K::kMissingIncomparable, a, b};
    }
  }

  auto small_ancestor_or_equal = [&](LabelId up, LabelId down) {
    const auto u = static_cast<std::size_t>(*small.node_of(up));
    const auto d = static_cast<std::size_t>(*small.node_of(down));
    return small_iv.pre[u] <= small_iv.pre[d] && small_iv.pre[d] <= small_iv.last[u];
  };
  std::vector<LabelId> nearest(big.node_count(), kNoLabel);  // nearest rep at or above v
  for (NodeId v : big_order) {
    const auto vi = static_cast<std::size_t>(v);
    const NodeId p = big.parent(v);
    const LabelId above = p == kNoNode ? kNoLabel : nearest[static_cast<std::size_t>(p)];
    if (rep[vi] != kNoLabel && above != kNoLabel && !small_ancestor_or_equal(above, rep[vi])) {
      const auto [a, b] = sorted_pair(above, rep[vi]);
      return DisplayViolation{K::kMissingIncomparable, a, b};
    }
    nearest[vi] = rep[vi] != kNoLabel ? rep[vi] : above;
  }

  // Pair conditions say nothing about nodes without exactly one label. For
  // those, X(v) must equal X(u) ∩ L(small) where u is the lca in big of X(v);
  // X(u) ⊇ X(v) by choice of u, so comparing sizes suffices.
  std::vector<NodeId> odd;
  for (NodeId v : small_order) {
    if (small.labels(v).size() != 1) odd.push_back(v);
  }
  if (odd.empty()) return std::nullopt;

  std::vector<std::int32_t> in_small(big_order.size() + 1, 0);  // prefix counts over big preorder
  for (std::size_t i = 0; i < big_order.size(); ++i) {
    std::int32_t here = 0;
    for (LabelId l : big.labels(big_order[i])) here += small.contains(l) ? 1 : 0;
    in_small[i + 1] = in_small[i] + here;
  }
  std::vector<std::int32_t> cluster_size(small.node_count(), 0);
  for (auto it = small_order.rbegin(); it != small_order.rend(); ++it) {
    auto& n = cluster_size[static_cast<std::size_t>(*it)];
    n = static_cast<std::int32_t>(small.labels(*it).size());
    for (NodeId c : small.children(*it)) n += cluster_size[static_cast<std::size_t>(c)];
  }

  // Binary lifting for lca queries in big.
  std::vector<std::int32_t> depth(big.node_count(), 0);
  std::vector<std::vector<NodeId>> up(1, std::vector<NodeId>(big.node_count()));
  for (NodeId v : big_order) {
    const NodeId p = big.parent(v);
    up[0][static_cast<std::size_t>(v)] = p == kNoNode ? v : p;
    depth[static_cast<std::size_t>(v)] = p == kNoNode ? 0 : depth[static_cast<std::size_t>(p)] + 1;
  }
  while ((std::size_t{1} << up.size()) < big.node_count()) {
    const auto& prev = up.back();
    std::vector<NodeId> next(big.node_count());
    for (std::size_t v = 0; v < next.size(); ++v) next[v] = prev[static_cast<std::size_t>(prev[v])];
    up.push_back(std::move(next));
  }
  auto lca = [&](NodeId a, NodeId b) {
    if (depth[static_cast<std::size_t>(a)] < depth[static_cast<std::size_t>(b)]) std::swap(a, b);
    for (std::size_t k = up.size(); k-- > 0;) {
      const NodeId x = up[k][static_cast<std::size_t>(a)];
      if (depth[static_cast<std::size_t>(x)] >= depth[static_cast<std::size_t>(b)]) a = x;
    }
    if (a == b) return a;
    for (std::size_t k = up.size(); k-- > 0;) {
      const NodeId x = up[k][static_cast<std::size_t>(a)], y = up[k][static_cast<std::size_t>(b)];
      if (x != y) a = x, b = y;
    }
    return up[0][static_cast<std::size_t>(a)];
  };

  for (NodeId v : odd) {
    const auto& ext = subtree[static_cast<std::size_t>(v)];
    const NodeId u = lca(*big.node_of(ext.lo_label), *big.node_of(ext.hi_label));
    const auto ui = static_cast<std::size_t>(u);
    const std::int32_t inside = in_small[static_cast<std::size_t>(big_iv.last[ui]) + 1] - in_small[static_cast<std::size_t>(big_iv.pre[ui])];
    if (inside != cluster_size[static_cast<std::size_t>(v)]) {
      return DisplayViolation{K::kMissingCluster, ext.lo_label, ext.hi_label};
    }
  }
  return std::nullopt;
}

bool isomorphic(const SemiLabeledTree& a, const SemiLabeledTree& b) { return clusters(a) == clusters(b); }

}  // namespace ancestral
