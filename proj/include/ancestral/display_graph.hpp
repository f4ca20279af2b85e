#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "ancestral/tree.hpp"

namespace ancestral {

/// The graph obtained from the disjoint union of a fully and singularly
/// labeled profile by gluing equal labels. Graph nodes are dense local
/// indices; `label(v)` maps back into the profile's universe.
///
/// Every (label, tree) incidence is an *occurrence*. Occurrences of one node
/// are contiguous, so k_v is the length of its occurrence range, and each
/// occurrence stores the occurrences of its children in that tree.
class DisplayGraph {
 public:
  using Node = std::int32_t;
  using Occurrence = std::int32_t;

  /// Throws std::invalid_argument unless every tree is fully and singularly
  /// labeled.
  static DisplayGraph build(const Profile& profile);

  std::size_t node_count() const { return labels_.size(); }
  std::size_t edge_count() const { return adj_.size() / 2; }
  std::size_t tree_count() const { return roots_.size(); }

  LabelId label(Node v) const { return labels_[static_cast<std::size_t>(v)]; }
  /// Local node of a universe label, or -1 if the label is not in L(P).
  Node node_of(LabelId l) const {
    return static_cast<std::size_t>(l) < local_.size() ? local_[static_cast<std::size_t>(l)] : -1;
  }

  std::span<const Node> neighbors(Node v) const {
    const auto b = adj_begin_[static_cast<std::size_t>(v)], e = adj_begin_[static_cast<std::size_t>(v) + 1];
    return {adj_.data() + b, static_cast<std::size_t>(e - b)};
  }

  /// k_v: number of trees containing v.
  std::int32_t multiplicity(Node v) const {
    return occ_begin_[static_cast<std::size_t>(v) + 1] - occ_begin_[static_cast<std::size_t>(v)];
  }
  std::int32_t occurrence_begin(Node v) const { return occ_begin_[static_cast<std::size_t>(v)]; }
  std::int32_t occurrence_end(Node v) const { return occ_begin_[static_cast<std::size_t>(v) + 1]; }
  std::size_t occurrence_count() const { return occ_.size(); }

  std::int32_t occurrence_tree(Occurrence o) const { return occ_[static_cast<std::size_t>(o)].tree; }
  Node occurrence_node(Occurrence o) const { return occ_[static_cast<std::size_t>(o)].node; }
  std::span<const Occurrence> occurrence_children(Occurrence o) const {
    const auto& r = occ_[static_cast<std::size_t>(o)];
    return {child_occ_.data() + r.child_begin, static_cast<std::size_t>(r.child_end - r.child_begin)};
  }
  /// Occurrence of the root label of tree i.
  Occurrence root_occurrence(std::size_t tree) const { return roots_[tree]; }

  /// Ch_i(v) as local nodes; empty if v is a leaf of tree i or absent from it.
  std::vector<Node> children(Node v, std::size_t tree) const;

  /// All undirected edges (u < v), in node order.
  std::vector<std::pair<Node, Node>> edges() const;

 private:
  struct OccurrenceRecord {
    std::int32_t tree;
    Node node;
    std::int32_t child_begin;
    std::int32_t child_end;
  };

  std::vector<LabelId> labels_;
  std::vector<Node> local_;
  std::vector<std::int32_t> adj_begin_;
  std::vector<Node> adj_;
  std::vector<std::int32_t> occ_begin_;
  std::vector<OccurrenceRecord> occ_;
  std::vector<Occurrence> child_occ_;
  std::vector<Occurrence> roots_;
};

/// Per-tree label sets U(1..k), each sorted.
struct Position {
  std::vector<std::vector<LabelId>> sets;
  bool operator==(const Position&) const = default;
};

/// U_init: the root label of every tree.
Position initial_position(const Profile& profile);

/// Desc_P(U), sorted.
std::vector<LabelId> descendants(const Profile& profile, const Position& position);

/// Checks the sibling condition and the descendant-consistency condition.
bool is_valid_position(const Profile& profile, const Position& position);

/// Static connected components (BFS), as sorted universe label sets ordered
/// by their smallest label.
std::vector<std::vector<LabelId>> connected_components(const DisplayGraph& graph);

/// One "a b" line per edge, using display names.
void write_edge_list(const DisplayGraph& graph, const LabelUniverse& labels, std::ostream& out);

}  // namespace ancestral
