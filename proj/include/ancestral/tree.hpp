#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ancestral/label.hpp"

namespace ancestral {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

/// A rooted tree plus a labeling function from labels to nodes. Nodes may
/// carry any number of labels; internal nodes may be unlabeled.
///
/// The tree is assembled through add_root/add_child/add_label (or from a
/// parent array) and treated as immutable afterwards. Structural rules are
/// checked by validate(), not on construction, so that arbitrary candidate
/// structures can be represented and diagnosed.
class SemiLabeledTree {
 public:
  SemiLabeledTree() = default;

  /// Builds a tree from a parent array (`kNoNode` marks a root) and per-node
  /// label lists. No validation is performed.
  static SemiLabeledTree from_parents(std::span<const NodeId> parents,
                                      std::vector<std::vector<LabelId>> labels);

  NodeId add_root();
  NodeId add_child(NodeId parent);
  /// Throws std::invalid_argument if `label` is already placed in this tree.
  void add_label(NodeId node, LabelId label);

  std::size_t node_count() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  NodeId root() const { return root_; }
  NodeId parent(NodeId v) const { return node(v).parent; }
  std::span<const NodeId> children(NodeId v) const { return node(v).children; }
  std::span<const LabelId> labels(NodeId v) const { return node(v).labels; }
  bool is_leaf(NodeId v) const { return node(v).children.empty(); }

  std::optional<NodeId> node_of(LabelId label) const;
  bool contains(LabelId label) const { return label_to_node_.contains(label); }
  std::size_t label_count() const { return label_to_node_.size(); }
  /// Sorted label set L(T).
  std::vector<LabelId> label_set() const;

  bool fully_labeled() const;
  bool singularly_labeled() const;

  /// Nodes in preorder (parents before children), computed iteratively.
  std::vector<NodeId> preorder() const;

  std::size_t edge_count() const { return nodes_.empty() ? 0 : nodes_.size() - 1; }

 private:
  struct Node {
    NodeId parent = kNoNode;
    std::vector<NodeId> children;
    std::vector<LabelId> labels;
  };
  const Node& node(NodeId v) const { return nodes_[static_cast<std::size_t>(v)]; }

  std::vector<Node> nodes_;
  NodeId root_ = kNoNode;
  std::unordered_map<LabelId, NodeId> label_to_node_;
};

/// An ordered collection of trees over a shared label universe.
struct Profile {
  LabelUniverse labels;
  std::vector<SemiLabeledTree> trees;

  /// Sorted L(P).
  std::vector<LabelId> label_set() const;
  /// M_P = |V(P)| + |E(P)|.
  std::size_t size() const;
  /// Sum over trees of sum over internal nodes of squared degree.
  std::uint64_t degree_square_sum() const;
};

struct Violation {
  enum class Kind {
    kEmptyTree,
    kRootCount,
    kBadParent,
    kCycle,
    kUnlabeledLeaf,
    kUnlabeledLowDegree,
    kLabelMapping,
  };
  Kind kind;
  NodeId node = kNoNode;
  std::string message;
};

/// Checks every structural rule of a semi-labeled tree; returns the first
/// violation found.
std::optional<Violation> validate(const SemiLabeledTree& tree);

/// Returns a copy of `profile` in which every unlabeled node carries a fresh
/// synthetic label. Roots are numbered first (in tree order), then the
/// remaining unlabeled nodes in tree order and preorder.
Profile add_distinct_labels(const Profile& profile);

using Cluster = std::vector<LabelId>;  // sorted, nonempty
using ClusterSet = std::set<Cluster>;

ClusterSet clusters(const SemiLabeledTree& tree);

/// T|A. Throws std::invalid_argument if A is empty or not a subset of L(T).
SemiLabeledTree restrict_to(const SemiLabeledTree& tree, std::span<const LabelId> keep);

using LabelPair = std::pair<LabelId, LabelId>;

/// Ordered pairs (a, b) with a a proper ancestor of b.
std::set<LabelPair> d_pairs(const SemiLabeledTree& tree);
/// Unordered incomparable pairs, stored with first < second.
std::set<LabelPair> n_pairs(const SemiLabeledTree& tree);

struct DisplayViolation {
  // kMissingCluster: an unlabeled or multi-labeled node of `small` whose
  // cluster is not a cluster of big|L(small); first/second are two of its labels.
  enum class Kind { kMissingLabel, kMissingDescendant, kMissingIncomparable, kMissingCluster };
  Kind kind;
  LabelId first = kNoLabel;
  LabelId second = kNoLabel;
};

/// Why `big` fails to ancestrally display `small` (Cl(small) ⊆
/// Cl(big|L(small)) together with D/N pair containment), or nullopt. Labeled single-label nodes are covered by
/// the D/N pair conditions; other nodes of `small` get a direct cluster test.
/// O(|big| + |small|) when `small` is fully and singularly labeled, with an
/// extra log factor otherwise.
std::optional<DisplayViolation> display_violation(const SemiLabeledTree& big,
                                                  const SemiLabeledTree& small);

inline bool ancestrally_displays(const SemiLabeledTree& big, const SemiLabeledTree& small) {
  return !display_violation(big, small).has_value();
}

bool isomorphic(const SemiLabeledTree& a, const SemiLabeledTree& b);

}  // namespace ancestral
