#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ancestral/display_graph.hpp"
#include "ancestral/tree.hpp"

namespace ancestral {

struct Verdict {
  bool compatible = false;
  std::optional<SemiLabeledTree> witness_tree;  // present iff compatible
};

/// One activation of the reference engine: the component, its explicit
/// position and its semi-universal labels, in the extended universe.
struct NaiveActivation {
  std::vector<LabelId> labels;
  Position position;
  std::vector<LabelId> semi;
};

struct NaiveOptions {
  bool keep_synthetic = false;
  std::vector<NaiveActivation>* trace = nullptr;
  /// Receives the universe extended by the synthetic labels.
  LabelUniverse* extended_labels = nullptr;
};

/// Reference engine: recomputes semi-universal labels from the explicit
/// position and components by BFS at every step.
Verdict naive_build(const Profile& profile, const NaiveOptions& options = {});

/// Decides compatibility by trying every semi-labeled tree on L(P).
/// Throws std::invalid_argument for more than 5 labels.
Verdict exhaustive_compatible(const Profile& profile);

/// Every distinct semi-labeled tree with label set exactly `labels`
/// (at most 5), as cluster sets.
std::vector<ClusterSet> enumerate_semi_labeled_trees(const std::vector<LabelId>& labels);

/// Rebuilds the tree whose clusters are `cs`.
SemiLabeledTree tree_from_clusters(const ClusterSet& cs);

struct OutputViolation {
  std::size_t tree = 0;
  DisplayViolation violation;
};

/// First input tree, and pair, that `tree` fails to display.
std::optional<OutputViolation> verify_output(const Profile& profile, const SemiLabeledTree& tree);

std::string describe(const OutputViolation& v, const LabelUniverse& labels);

/// P|X: the restrictions T_i|X of the trees that meet X.
Profile restrict_profile(const Profile& profile, const std::vector<LabelId>& keep);

}  // namespace ancestral
