#pragma once

#include <cstdint>
#include <iosfwd>
#include <variant>
#include <vector>

#include "ancestral/display_graph.hpp"
#include "ancestral/tree.hpp"

namespace ancestral {

/// A component of the shrinking display graph together with its implicit
/// position, read off the MAP fields.
struct ComponentSnapshot {
  std::vector<LabelId> labels;  // sorted
  Position position;            // one set per input tree, empty where MAP(i) is undefined
};

struct SplitEvent {
  LabelId deleted = kNoLabel;  // the label whose edge was removed
  LabelId neighbor = kNoLabel;
  std::int32_t count_deleted_side = 0;
  std::int32_t count_neighbor_side = 0;
  std::int64_t weight_deleted_side = 0;
  std::int64_t weight_neighbor_side = 0;
};

/// Hooks for traces and tests. Snapshots cost time linear in the component,
/// so they are only taken when an observer is installed.
class BuildObserver {
 public:
  virtual ~BuildObserver() = default;
  /// Called once with the universe extended by the synthetic labels; the
  /// reference dies with the run (BuildOutcome::labels holds a copy).
  virtual void on_start(const LabelUniverse& /*labels*/) {}
  virtual void on_activation(const ComponentSnapshot& /*component*/, const std::vector<LabelId>& /*semi*/) {}
  /// Components left after the labels of `semi` were removed, ordered by
  /// smallest label.
  virtual void on_successors(const std::vector<LabelId>& /*semi*/,
                             const std::vector<ComponentSnapshot>& /*children*/) {}
  virtual void on_split(const SplitEvent& /*event*/) {}
};

/// One line per activation and per split, using display names.
class TraceObserver : public BuildObserver {
 public:
  explicit TraceObserver(std::ostream& out) : out_(out) {}
  void on_start(const LabelUniverse& labels) override { labels_ = &labels; }
  void on_activation(const ComponentSnapshot& component, const std::vector<LabelId>& semi) override;
  void on_split(const SplitEvent& event) override;

 private:
  const LabelUniverse* labels_ = nullptr;
  std::ostream& out_;
  std::size_t count_ = 0;
};

struct BuildStats {
  std::uint64_t activations = 0;
  std::uint64_t map_operations = 0;
  std::uint64_t connectivity_deletions = 0;
  std::uint64_t splits = 0;
  std::uint64_t migrations = 0;
  std::uint64_t halving_violations = 0;
  std::uint64_t invariant_violations = 0;
  // HDT only
  std::uint64_t tree_edge_deletions = 0;
  std::uint64_t replacements = 0;
  std::uint64_t level_promotions = 0;
};

enum class ConnectivityKind { kHdt, kBfs };

struct BuildOptions {
  BuildObserver* observer = nullptr;
  /// Keep the synthetic labels of full-labeling in the output.
  bool keep_synthetic = false;
  /// Recheck weight, cnt and SEMI against their definitions at every
  /// activation (quadratic; for tests).
  bool check_invariants = false;
  ConnectivityKind connectivity = ConnectivityKind::kHdt;
};

struct Supertree {
  SemiLabeledTree tree;
};

struct Incompatible {
  /// Labels of the component whose position had no semi-universal label.
  std::vector<LabelId> witness;
};

struct BuildOutcome {
  std::variant<Supertree, Incompatible> result;
  /// The input universe extended with the synthetic labels; ids of input
  /// labels are unchanged.
  LabelUniverse labels;
  BuildStats stats;

  bool compatible() const { return std::holds_alternative<Supertree>(result); }
  const SemiLabeledTree& tree() const { return std::get<Supertree>(result).tree; }
  const std::vector<LabelId>& witness() const { return std::get<Incompatible>(result).witness; }
};

/// Decides ancestral compatibility and builds a supertree. Throws
/// std::invalid_argument if some tree violates the structural rules or is
/// not singularly labeled.
BuildOutcome run_build(const Profile& profile, const BuildOptions& options = {});

}  // namespace ancestral
