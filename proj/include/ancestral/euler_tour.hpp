#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace ancestral::dyncon {

/// Euler-tour forest over splay trees, one per connectivity level.
///
/// Each tree of the forest is stored as a cyclic sequence containing one
/// vertex element per vertex and two arc elements (u->v, v->u) per tree
/// edge. Subtree aggregates: vertex count, minimum vertex id, and whether
/// some vertex or arc in the subtree carries a mark. Elements are created
/// lazily; a vertex without one is a singleton tree.
class EulerTourForest {
 public:
  using Index = std::int32_t;
  using Arcs = std::pair<Index, Index>;
  static constexpr Index kNone = -1;

  explicit EulerTourForest(std::size_t vertex_count);

  bool has_element(std::int32_t v) const { return vertex_[static_cast<std::size_t>(v)] != kNone; }

  /// Joins the trees of u and v with a new tree edge; returns its arcs.
  Arcs link(std::int32_t u, std::int32_t v, std::int32_t edge);
  /// Removes the tree edge given by its two arcs.
  void cut(Arcs arcs);

  bool connected(std::int32_t u, std::int32_t v);
  std::int32_t tree_size(std::int32_t v);
  std::int32_t tree_min(std::int32_t v);

  void set_vertex_mark(std::int32_t v, bool on);
  void set_arc_mark(Index arc, bool on);
  /// Some marked vertex in v's tree, or -1.
  std::int32_t find_marked_vertex(std::int32_t v);
  /// Edge id of some marked arc in v's tree, or -1.
  std::int32_t find_marked_arc(std::int32_t v);

  /// Bulk construction: allocate elements with make_vertex / make_arc, then
  /// hand one tree's Euler-tour sequence to build_sequence.
  Index make_vertex(std::int32_t v);
  Index make_arc(std::int32_t edge);
  void build_sequence(std::span<const Index> tour);

  template <class F>
  void for_each_vertex(std::int32_t v, F&& f) {
    const Index x = vertex_[static_cast<std::size_t>(v)];
    if (x == kNone) {
      f(v);
      return;
    }
    splay(x);
    stack_.clear();
    stack_.push_back(x);
    while (!stack_.empty()) {
      const Index n = stack_.back();
      stack_.pop_back();
      const Node& nd = at(n);
      if (nd.flags & kIsVertex) f(nd.payload);
      if (at(nd.left).vertices > 0) stack_.push_back(nd.left);
      if (at(nd.right).vertices > 0) stack_.push_back(nd.right);
    }
  }

  std::size_t element_count() const { return nodes_.size() - 1 - free_.size(); }

 private:
  static constexpr std::uint8_t kIsVertex = 1;
  static constexpr std::uint8_t kVertexMark = 2;
  static constexpr std::uint8_t kArcMark = 4;
  static constexpr std::uint8_t kAggVertexMark = 8;
  static constexpr std::uint8_t kAggArcMark = 16;
  static constexpr std::int32_t kNoMin = std::numeric_limits<std::int32_t>::max();

  struct Node {
    Index left = kNone;
    Index right = kNone;
    Index parent = kNone;
    std::int32_t vertices = 0;
    std::int32_t min_vertex = kNoMin;
    std::int32_t payload = 0;
    std::uint8_t flags = 0;
  };

  // nodes_[0] is a sentinel standing in for kNone, so at(kNone) is an empty
  // subtree and pull needs no branches. Never write through at(kNone).
  Node& at(Index i) { return nodes_[static_cast<std::size_t>(i + 1)]; }
  Index alloc();
  void release(Index i);
  void pull(Index x);
  void rotate(Index x);
  void splay(Index x);
  Index rightmost(Index root);
  Index join(Index a, Index b);
  Index reroot(Index x);
  Index ensure_vertex(std::int32_t v);
  Index find_marked(Index root, std::uint8_t own, std::uint8_t agg);
  Index build_balanced(std::span<const Index> seq, Index parent);

  std::vector<Node> nodes_;
  std::vector<Index> free_;
  std::vector<Index> vertex_;
  std::vector<Index> stack_;
};

}  // namespace ancestral::dyncon
