#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ancestral/euler_tour.hpp"

namespace ancestral::dyncon {

using Vertex = std::int32_t;
using Edge = std::pair<Vertex, Vertex>;

/// Names a component. `id` is reused by the larger side of a split, with a
/// bumped version, so a handle from before the split reads as stale.
struct ComponentHandle {
  std::int32_t id = -1;
  std::uint32_t version = 0;
  bool operator==(const ComponentHandle&) const = default;
};

struct SplitResult {
  bool split = false;
  ComponentHandle a;  // side of the first endpoint
  ComponentHandle b;  // side of the second endpoint
};

/// Bookkeeping shared by both implementations: a component id per vertex,
/// one representative per id, and version counters.
class ComponentIds {
 public:
  explicit ComponentIds(std::size_t vertex_count = 0);

  std::int32_t id_of(Vertex v) const { return comp_of_[static_cast<std::size_t>(v)]; }
  bool is_live(std::int32_t id) const { return id >= 0 && static_cast<std::size_t>(id) < live_.size() && live_[static_cast<std::size_t>(id)]; }
  bool is_current(ComponentHandle h) const {
    return is_live(h.id) && version_[static_cast<std::size_t>(h.id)] == h.version;
  }
  ComponentHandle handle_of(std::int32_t id) const { return {id, version_[static_cast<std::size_t>(id)]}; }
  Vertex representative(std::int32_t id) const { return rep_[static_cast<std::size_t>(id)]; }
  std::size_t live_count() const { return live_count_; }
  /// Upper bound on ids ever issued.
  std::size_t id_bound() const { return live_.size(); }

  std::int32_t fresh(Vertex rep);
  void assign(Vertex v, std::int32_t id) { comp_of_[static_cast<std::size_t>(v)] = id; }
  void bump(std::int32_t id, Vertex rep);
  void kill(std::int32_t id);

 private:
  std::vector<std::int32_t> comp_of_;
  std::vector<Vertex> rep_;
  std::vector<std::uint32_t> version_;
  std::vector<char> live_;
  std::size_t live_count_ = 0;
};

/// Sorted adjacency with an edge id per slot; edge ids index the input list.
class EdgeTable {
 public:
  EdgeTable() = default;
  EdgeTable(std::size_t vertex_count, std::span<const Edge> edges);

  std::size_t vertex_count() const { return begin_.empty() ? 0 : begin_.size() - 1; }
  std::size_t edge_count() const { return ends_.size(); }
  /// Edge id or -1.
  std::int32_t find(Vertex u, Vertex v) const;
  const Edge& ends(std::int32_t e) const { return ends_[static_cast<std::size_t>(e)]; }
  std::span<const Vertex> neighbors(Vertex v) const;
  std::span<const std::int32_t> edge_ids(Vertex v) const;

 private:
  std::vector<std::int32_t> begin_;
  std::vector<Vertex> nbr_;
  std::vector<std::int32_t> id_;
  std::vector<Edge> ends_;
};

/// Decremental connectivity with the level hierarchy of Holm, de Lichtenberg
/// and Thorup: amortized O(log^2 N) per deletion.
class ConnectivityIndex {
 public:
  /// Self-loops and duplicate edges are rejected with std::invalid_argument.
  ConnectivityIndex(std::size_t vertex_count, std::span<const Edge> edges);

  std::size_t vertex_count() const { return table_.vertex_count(); }
  bool has_node(Vertex v) const { return !removed_[static_cast<std::size_t>(v)]; }
  bool has_edge(Vertex u, Vertex v) const;
  /// Present and in the spanning forest. Deleting such an edge may split.
  bool is_tree_edge(Vertex u, Vertex v) const;
  std::int32_t degree(Vertex v) const { return degree_[static_cast<std::size_t>(v)]; }

  /// Throws std::invalid_argument if the edge is absent.
  SplitResult delete_edge(Vertex u, Vertex v);
  /// Throws std::invalid_argument if v still has edges or is already gone.
  void delete_isolated_node(Vertex v);

  bool connected(Vertex u, Vertex v) { return ids_.id_of(u) == ids_.id_of(v); }
  ComponentHandle component_of(Vertex v) const { return ids_.handle_of(ids_.id_of(v)); }
  std::int32_t component_id(Vertex v) const { return ids_.id_of(v); }
  bool is_current(ComponentHandle h) const { return ids_.is_current(h); }
  bool is_live(std::int32_t id) const { return ids_.is_live(id); }
  ComponentHandle handle_of(std::int32_t id) const { return ids_.handle_of(id); }
  std::size_t component_count() const { return ids_.live_count(); }
  std::size_t id_bound() const { return ids_.id_bound(); }

  /// The accessors below throw std::invalid_argument on stale handles.
  std::int32_t count(ComponentHandle h);
  Vertex min_node(ComponentHandle h);
  std::vector<Vertex> nodes(ComponentHandle h);
  template <class F>
  void for_each_node(ComponentHandle h, F&& f) {
    forests_[0].for_each_vertex(checked_rep(h), f);
  }

  std::size_t level_count() const { return forests_.size(); }

  struct Stats {
    std::uint64_t tree_deletions = 0;
    std::uint64_t sampled_replacements = 0;
    std::uint64_t replacements = 0;
    std::uint64_t promotions = 0;  // tree and non-tree edges raised a level
  };
  const Stats& stats() const { return stats_; }

 private:
  Vertex checked_rep(ComponentHandle h) const;
  void ensure_level(std::size_t level);
  void list_insert(std::size_t level, std::int32_t e);
  void list_erase(std::size_t level, std::int32_t e);
  void link_tree_edge(std::int32_t e, std::size_t level);
  bool replace(std::int32_t e, std::size_t level);
  SplitResult record_split(Vertex u, Vertex v);

  EdgeTable table_;
  std::vector<std::int8_t> level_;  // -1 once deleted
  std::vector<char> tree_;
  std::vector<std::vector<EulerTourForest::Arcs>> arcs_;  // per tree edge, one pair per level
  std::vector<std::int32_t> next_, prev_;                 // per edge end 2e / 2e+1
  std::vector<std::vector<std::int32_t>> heads_;          // per level, per vertex
  std::vector<EulerTourForest> forests_;
  std::vector<std::int32_t> degree_;
  std::vector<char> removed_;
  ComponentIds ids_;
  Stats stats_;
};

/// Recomputes components by BFS after every deletion. Same interface and id
/// semantics as ConnectivityIndex; used as a differential oracle.
class BfsConnectivity {
 public:
  BfsConnectivity(std::size_t vertex_count, std::span<const Edge> edges);

  std::size_t vertex_count() const { return table_.vertex_count(); }
  bool has_node(Vertex v) const { return !removed_[static_cast<std::size_t>(v)]; }
  bool has_edge(Vertex u, Vertex v) const;
  /// No spanning forest here; every present edge counts.
  bool is_tree_edge(Vertex u, Vertex v) const { return has_edge(u, v); }
  std::int32_t degree(Vertex v) const { return degree_[static_cast<std::size_t>(v)]; }

  SplitResult delete_edge(Vertex u, Vertex v);
  void delete_isolated_node(Vertex v);

  bool connected(Vertex u, Vertex v) { return ids_.id_of(u) == ids_.id_of(v); }
  ComponentHandle component_of(Vertex v) const { return ids_.handle_of(ids_.id_of(v)); }
  std::int32_t component_id(Vertex v) const { return ids_.id_of(v); }
  bool is_current(ComponentHandle h) const { return ids_.is_current(h); }
  bool is_live(std::int32_t id) const { return ids_.is_live(id); }
  ComponentHandle handle_of(std::int32_t id) const { return ids_.handle_of(id); }
  std::size_t component_count() const { return ids_.live_count(); }
  std::size_t id_bound() const { return ids_.id_bound(); }

  std::int32_t count(ComponentHandle h);
  Vertex min_node(ComponentHandle h);
  std::vector<Vertex> nodes(ComponentHandle h);
  template <class F>
  void for_each_node(ComponentHandle h, F&& f) {
    for (Vertex v : reach(checked_rep(h))) f(v);
  }

 private:
  Vertex checked_rep(ComponentHandle h) const;
  std::vector<Vertex> reach(Vertex s);

  EdgeTable table_;
  std::vector<char> present_;
  std::vector<std::int32_t> degree_;
  std::vector<char> removed_;
  std::vector<char> seen_;
  ComponentIds ids_;
};

}  // namespace ancestral::dyncon
