#include "ancestral/dyncon.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace ancestral::dyncon {

namespace {
constexpr int kSampleBudget = 8;
}  // namespace

// ---------------------------------------------------------------------------
// ComponentIds

ComponentIds::ComponentIds(std::size_t vertex_count) : comp_of_(vertex_count, -1) {}

std::int32_t ComponentIds::fresh(Vertex rep) {
  rep_.push_back(rep);
  version_.push_back(0);
  live_.push_back(1);
  ++live_count_;
  return static_cast<std::int32_t>(rep_.size() - 1);
}

void ComponentIds::bump(std::int32_t id, Vertex rep) {
  ++version_[static_cast<std::size_t>(id)];
  rep_[static_cast<std::size_t>(id)] = rep;
}

void ComponentIds::kill(std::int32_t id) {
  ++version_[static_cast<std::size_t>(id)];
  live_[static_cast<std::size_t>(id)] = 0;
  --live_count_;
}

// ---------------------------------------------------------------------------
// EdgeTable

EdgeTable::EdgeTable(std::size_t vertex_count, std::span<const Edge> edges)
    : begin_(vertex_count + 1, 0), ends_(edges.begin(), edges.end()) {
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= vertex_count || static_cast<std::size_t>(v) >= vertex_count) {
      throw std::invalid_argument("edge endpoint out of range");
    }
    if (u == v) throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
    ++begin_[static_cast<std::size_t>(u) + 1];
    ++begin_[static_cast<std::size_t>(v) + 1];
  }
  for (std::size_t i = 0; i < vertex_count; ++i) begin_[i + 1] += begin_[i];
  std::vector<std::pair<Vertex, std::int32_t>> slots(static_cast<std::size_t>(begin_[vertex_count]));
  std::vector<std::int32_t> fill(begin_.begin(), begin_.end() - 1);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [u, v] = edges[e];
    slots[static_cast<std::size_t>(fill[static_cast<std::size_t>(u)]++)] = {v, static_cast<std::int32_t>(e)};
    slots[static_cast<std::size_t>(fill[static_cast<std::size_t>(v)]++)] = {u, static_cast<std::int32_t>(e)};
  }
  nbr_.resize(slots.size());
  id_.resize(slots.size());
  for (std::size_t v = 0; v < vertex_count; ++v) {
    auto first = slots.begin() + begin_[v], last = slots.begin() + begin_[v + 1];
    std::sort(first, last);
    for (auto it = first; it != last; ++it) {
      if (it != first && it->first == (it - 1)->first) {
        throw std::invalid_argument("duplicate edge " + std::to_string(v) + "-" + std::to_string(it->first));
      }
      const auto k = static_cast<std::size_t>(it - slots.begin());
      nbr_[k] = it->first;
      id_[k] = it->second;
    }
  }
}

std::int32_t EdgeTable::find(Vertex u, Vertex v) const {
  if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= vertex_count() || static_cast<std::size_t>(v) >= vertex_count()) return -1;
  const auto first = nbr_.begin() + begin_[static_cast<std::size_t>(u)];
  const auto last = nbr_.begin() + begin_[static_cast<std::size_t>(u) + 1];
  const auto it = std::lower_bound(first, last, v);
  if (it == last || *it != v) return -1;
  return id_[static_cast<std::size_t>(it - nbr_.begin())];
}

std::span<const Vertex> EdgeTable::neighbors(Vertex v) const {
  const auto b = begin_[static_cast<std::size_t>(v)], e = begin_[static_cast<std::size_t>(v) + 1];
  return {nbr_.data() + b, static_cast<std::size_t>(e - b)};
}

std::span<const std::int32_t> EdgeTable::edge_ids(Vertex v) const {
  const auto b = begin_[static_cast<std::size_t>(v)], e = begin_[static_cast<std::size_t>(v) + 1];
  return {id_.data() + b, static_cast<std::size_t>(e - b)};
}

// ---------------------------------------------------------------------------
// ConnectivityIndex

ConnectivityIndex::ConnectivityIndex(std::size_t vertex_count, std::span<const Edge> edges)
    : table_(vertex_count, edges),
      level_(edges.size(), 0),
      tree_(edges.size(), 0),
      arcs_(edges.size()),
      next_(2 * edges.size(), -1),
      prev_(2 * edges.size(), -1),
      degree_(vertex_count, 0),
      removed_(vertex_count, 0),
      ids_(vertex_count) {
  // A level-i tree never exceeds N / 2^i vertices, so this never reallocates.
  const auto levels = static_cast<std::size_t>(std::bit_width(std::max<std::size_t>(vertex_count, 1))) + 1;
  forests_.reserve(levels);
  heads_.reserve(levels);
  ensure_level(0);
  for (const auto& [u, v] : edges) {
    ++degree_[static_cast<std::size_t>(u)];
    ++degree_[static_cast<std::size_t>(v)];
  }

  // Spanning forest by iterative DFS; the visit order is the Euler tour.
  auto& f0 = forests_[0];
  std::vector<char> seen(vertex_count, 0);
  std::vector<std::pair<Vertex, std::size_t>> stack;
  std::vector<EulerTourForest::Index> tour;
  std::vector<std::size_t> tour_end;
  std::vector<EulerTourForest::Index> up_arc(vertex_count, EulerTourForest::kNone);
  for (Vertex s = 0; static_cast<std::size_t>(s) < vertex_count; ++s) {
    if (seen[static_cast<std::size_t>(s)]) continue;
    const std::int32_t id = ids_.fresh(s);
    seen[static_cast<std::size_t>(s)] = 1;
    ids_.assign(s, id);
    if (table_.neighbors(s).empty()) continue;
    tour.push_back(f0.make_vertex(s));
    stack.assign(1, {s, 0});
    while (!stack.empty()) {
      auto& [x, k] = stack.back();
      const auto nbrs = table_.neighbors(x);
      if (k == nbrs.size()) {
        if (up_arc[static_cast<std::size_t>(x)] != EulerTourForest::kNone) tour.push_back(up_arc[static_cast<std::size_t>(x)]);
        stack.pop_back();
        continue;
      }
      const Vertex w = nbrs[k];
      const std::int32_t e = table_.edge_ids(x)[k];
      ++k;
      if (seen[static_cast<std::size_t>(w)]) continue;
      seen[static_cast<std::size_t>(w)] = 1;
      ids_.assign(w, id);
      const auto down = f0.make_arc(e);
      const auto up = f0.make_arc(e);
      f0.set_arc_mark(down, true);
      tree_[static_cast<std::size_t>(e)] = 1;
      arcs_[static_cast<std::size_t>(e)].push_back({down, up});
      up_arc[static_cast<std::size_t>(w)] = up;
      tour.push_back(down);
      tour.push_back(f0.make_vertex(w));
      stack.push_back({w, 0});
    }
    tour_end.push_back(tour.size());
  }

  // Non-tree edges go into the level-0 lists before the tours are built, so
  // the vertex marks can be set on still isolated elements.
  auto& heads = heads_[0];
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (tree_[e]) continue;
    const auto [a, b] = edges[e];
    for (int side = 0; side < 2; ++side) {
      const auto x = static_cast<std::size_t>(side ? b : a);
      const auto t = static_cast<std::int32_t>(2 * e) + side;
      if (heads[x] == -1) {
        f0.set_vertex_mark(static_cast<Vertex>(x), true);
      } else {
        prev_[static_cast<std::size_t>(heads[x])] = t;
      }
      next_[static_cast<std::size_t>(t)] = heads[x];
      heads[x] = t;
    }
  }
  std::size_t begin = 0;
  for (std::size_t end : tour_end) {
    f0.build_sequence(std::span<const EulerTourForest::Index>(tour).subspan(begin, end - begin));
    begin = end;
  }
}

void ConnectivityIndex::ensure_level(std::size_t level) {
  while (forests_.size() <= level) {
    forests_.emplace_back(vertex_count());
    heads_.emplace_back(vertex_count(), -1);
  }
}

void ConnectivityIndex::list_insert(std::size_t level, std::int32_t e) {
  const auto [a, b] = table_.ends(e);
  auto& heads = heads_[level];
  for (int side = 0; side < 2; ++side) {
    const Vertex x = side ? b : a;
    const std::int32_t t = 2 * e + side;
    const std::int32_t head = heads[static_cast<std::size_t>(x)];
    next_[static_cast<std::size_t>(t)] = head;
    prev_[static_cast<std::size_t>(t)] = -1;
    if (head != -1) prev_[static_cast<std::size_t>(head)] = t;
    heads[static_cast<std::size_t>(x)] = t;
    if (head == -1) forests_[level].set_vertex_mark(x, true);
  }
}

void ConnectivityIndex::list_erase(std::size_t level, std::int32_t e) {
  const auto [a, b] = table_.ends(e);
  auto& heads = heads_[level];
  for (int side = 0; side < 2; ++side) {
    const Vertex x = side ? b : a;
    const auto t = static_cast<std::size_t>(2 * e + side);
    const std::int32_t p = prev_[t], n = next_[t];
    if (p != -1) {
      next_[static_cast<std::size_t>(p)] = n;
    } else {
      heads[static_cast<std::size_t>(x)] = n;
    }
    if (n != -1) prev_[static_cast<std::size_t>(n)] = p;
    if (heads[static_cast<std::size_t>(x)] == -1) forests_[level].set_vertex_mark(x, false);
  }
}

void ConnectivityIndex::link_tree_edge(std::int32_t e, std::size_t level) {
  const auto [a, b] = table_.ends(e);
  auto& arcs = arcs_[static_cast<std::size_t>(e)];
  arcs.clear();
  for (std::size_t i = 0; i <= level; ++i) arcs.push_back(forests_[i].link(a, b, e));
  forests_[level].set_arc_mark(arcs[level].first, true);
  tree_[static_cast<std::size_t>(e)] = 1;
  level_[static_cast<std::size_t>(e)] = static_cast<std::int8_t>(level);
}

bool ConnectivityIndex::has_edge(Vertex u, Vertex v) const {
  const auto e = table_.find(u, v);
  return e >= 0 && level_[static_cast<std::size_t>(e)] >= 0;
}

bool ConnectivityIndex::is_tree_edge(Vertex u, Vertex v) const {
  const auto e = table_.find(u, v);
  return e >= 0 && level_[static_cast<std::size_t>(e)] >= 0 && tree_[static_cast<std::size_t>(e)];
}

// Looks for a replacement edge at `level` after a tree edge between the
// trees of u and v was cut, pushing the smaller tree's edges one level up.
bool ConnectivityIndex::replace(std::int32_t e, std::size_t level) {
  const auto [u, v] = table_.ends(e);
  ensure_level(level + 1);
  auto& f = forests_[level];
  auto& up = forests_[level + 1];
  const Vertex s = f.tree_size(u) <= f.tree_size(v) ? u : v;

  // Cheap first look: a few non-tree edges at one vertex of the small tree.
  // A crossing edge found here needs no promotions, and the level invariants
  // hold without them.
  if (const Vertex x = f.find_marked_vertex(s); x != -1) {
    int budget = kSampleBudget;
    for (std::int32_t t = heads_[level][static_cast<std::size_t>(x)]; t != -1 && budget > 0; t = next_[static_cast<std::size_t>(t)], --budget) {
      const std::int32_t cand = t / 2;
      const auto [a, b] = table_.ends(cand);
      if (!f.connected(a == x ? b : a, x)) {
        list_erase(level, cand);
        link_tree_edge(cand, level);
        ++stats_.sampled_replacements;
        return true;
      }
    }
  }

  for (std::int32_t t; (t = f.find_marked_arc(s)) != -1;) {
    auto& arcs = arcs_[static_cast<std::size_t>(t)];
    f.set_arc_mark(arcs[level].first, false);
    const auto [a, b] = table_.ends(t);
    arcs.push_back(up.link(a, b, t));
    up.set_arc_mark(arcs[level + 1].first, true);
    level_[static_cast<std::size_t>(t)] = static_cast<std::int8_t>(level + 1);
    ++stats_.promotions;
  }

  for (Vertex x; (x = f.find_marked_vertex(s)) != -1;) {
    while (heads_[level][static_cast<std::size_t>(x)] != -1) {
      const std::int32_t t = heads_[level][static_cast<std::size_t>(x)];
      const std::int32_t cand = t / 2;
      const auto [a, b] = table_.ends(cand);
      const Vertex other = a == x ? b : a;
      list_erase(level, cand);
      if (f.connected(x, other)) {
        level_[static_cast<std::size_t>(cand)] = static_cast<std::int8_t>(level + 1);
        list_insert(level + 1, cand);
        ++stats_.promotions;
      } else {
        link_tree_edge(cand, level);
        ++stats_.replacements;
        return true;
      }
    }
  }
  return false;
}

SplitResult ConnectivityIndex::delete_edge(Vertex u, Vertex v) {
  const auto e = table_.find(u, v);
  if (e < 0 || level_[static_cast<std::size_t>(e)] < 0) {
    throw std::invalid_argument("no edge " + std::to_string(u) + "-" + std::to_string(v));
  }
  const auto es = static_cast<std::size_t>(e);
  const auto level = static_cast<std::size_t>(level_[es]);
  --degree_[static_cast<std::size_t>(u)];
  --degree_[static_cast<std::size_t>(v)];
  if (!tree_[es]) {
    list_erase(level, e);
    level_[es] = -1;
    const auto h = component_of(u);
    return {false, h, h};
  }
  ++stats_.tree_deletions;
  for (std::size_t i = 0; i <= level; ++i) forests_[i].cut(arcs_[es][i]);
  arcs_[es].clear();
  tree_[es] = 0;
  level_[es] = -1;
  // An endpoint left without edges cannot be reached by a replacement.
  if (degree_[static_cast<std::size_t>(u)] == 0 || degree_[static_cast<std::size_t>(v)] == 0) return record_split(u, v);
  for (std::size_t i = level + 1; i-- > 0;) {
    if (replace(e, i)) {
      const auto h = component_of(u);
      return {false, h, h};
    }
  }
  return record_split(u, v);
}

SplitResult ConnectivityIndex::record_split(Vertex u, Vertex v) {
  auto& f0 = forests_[0];
  const std::int32_t id = ids_.id_of(u);
  const bool keep_u = f0.tree_size(u) >= f0.tree_size(v);
  const Vertex big = keep_u ? u : v;
  const Vertex small = keep_u ? v : u;
  const std::int32_t fresh = ids_.fresh(small);
  f0.for_each_vertex(small, [&](Vertex w) { ids_.assign(w, fresh); });
  ids_.bump(id, big);
  return {true, component_of(u), component_of(v)};
}

void ConnectivityIndex::delete_isolated_node(Vertex v) {
  if (v < 0 || static_cast<std::size_t>(v) >= vertex_count() || removed_[static_cast<std::size_t>(v)]) {
    throw std::invalid_argument("no node " + std::to_string(v));
  }
  if (degree_[static_cast<std::size_t>(v)] != 0) {
    throw std::invalid_argument("node " + std::to_string(v) + " still has edges");
  }
  removed_[static_cast<std::size_t>(v)] = 1;
  ids_.kill(ids_.id_of(v));
}

Vertex ConnectivityIndex::checked_rep(ComponentHandle h) const {
  if (!ids_.is_current(h)) throw std::invalid_argument("stale component handle " + std::to_string(h.id));
  return ids_.representative(h.id);
}

std::int32_t ConnectivityIndex::count(ComponentHandle h) { return forests_[0].tree_size(checked_rep(h)); }

Vertex ConnectivityIndex::min_node(ComponentHandle h) { return forests_[0].tree_min(checked_rep(h)); }

std::vector<Vertex> ConnectivityIndex::nodes(ComponentHandle h) {
  std::vector<Vertex> out;
  for_each_node(h, [&](Vertex v) { out.push_back(v); });
  return out;
}

// ---------------------------------------------------------------------------
// BfsConnectivity

BfsConnectivity::BfsConnectivity(std::size_t vertex_count, std::span<const Edge> edges)
    : table_(vertex_count, edges),
      present_(edges.size(), 1),
      degree_(vertex_count, 0),
      removed_(vertex_count, 0),
      seen_(vertex_count, 0),
      ids_(vertex_count) {
  for (const auto& [u, v] : edges) {
    ++degree_[static_cast<std::size_t>(u)];
    ++degree_[static_cast<std::size_t>(v)];
  }
  std::vector<char> done(vertex_count, 0);
  for (Vertex s = 0; static_cast<std::size_t>(s) < vertex_count; ++s) {
    if (done[static_cast<std::size_t>(s)]) continue;
    const std::int32_t id = ids_.fresh(s);
    for (Vertex w : reach(s)) {
      done[static_cast<std::size_t>(w)] = 1;
      ids_.assign(w, id);
    }
  }
}

std::vector<Vertex> BfsConnectivity::reach(Vertex s) {
  std::vector<Vertex> out{s};
  seen_[static_cast<std::size_t>(s)] = 1;
  for (std::size_t head = 0; head < out.size(); ++head) {
    const Vertex x = out[head];
    const auto nbrs = table_.neighbors(x);
    const auto ids = table_.edge_ids(x);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      if (!present_[static_cast<std::size_t>(ids[k])] || seen_[static_cast<std::size_t>(nbrs[k])]) continue;
      seen_[static_cast<std::size_t>(nbrs[k])] = 1;
      out.push_back(nbrs[k]);
    }
  }
  for (Vertex w : out) seen_[static_cast<std::size_t>(w)] = 0;
  return out;
}

bool BfsConnectivity::has_edge(Vertex u, Vertex v) const {
  const auto e = table_.find(u, v);
  return e >= 0 && present_[static_cast<std::size_t>(e)];
}

SplitResult BfsConnectivity::delete_edge(Vertex u, Vertex v) {
  const auto e = table_.find(u, v);
  if (e < 0 || !present_[static_cast<std::size_t>(e)]) {
    throw std::invalid_argument("no edge " + std::to_string(u) + "-" + std::to_string(v));
  }
  present_[static_cast<std::size_t>(e)] = 0;
  --degree_[static_cast<std::size_t>(u)];
  --degree_[static_cast<std::size_t>(v)];
  const auto side_u = reach(u);
  if (std::find(side_u.begin(), side_u.end(), v) != side_u.end()) {
    const auto h = component_of(u);
    return {false, h, h};
  }
  const auto side_v = reach(v);
  const std::int32_t id = ids_.id_of(u);
  const bool keep_u = side_u.size() >= side_v.size();
  const std::int32_t fresh = ids_.fresh(keep_u ? v : u);
  for (Vertex w : keep_u ? side_v : side_u) ids_.assign(w, fresh);
  ids_.bump(id, keep_u ? u : v);
  return {true, component_of(u), component_of(v)};
}

void BfsConnectivity::delete_isolated_node(Vertex v) {
  if (v < 0 || static_cast<std::size_t>(v) >= vertex_count() || removed_[static_cast<std::size_t>(v)]) {
    throw std::invalid_argument("no node " + std::to_string(v));
  }
  if (degree_[static_cast<std::size_t>(v)] != 0) {
    throw std::invalid_argument("node " + std::to_string(v) + " still has edges");
  }
  removed_[static_cast<std::size_t>(v)] = 1;
  ids_.kill(ids_.id_of(v));
}

Vertex BfsConnectivity::checked_rep(ComponentHandle h) const {
  if (!ids_.is_current(h)) throw std::invalid_argument("stale component handle " + std::to_string(h.id));
  return ids_.representative(h.id);
}

std::int32_t BfsConnectivity::count(ComponentHandle h) {
  return static_cast<std::int32_t>(reach(checked_rep(h)).size());
}

Vertex BfsConnectivity::min_node(ComponentHandle h) {
  const auto r = reach(checked_rep(h));
  return *std::min_element(r.begin(), r.end());
}

std::vector<Vertex> BfsConnectivity::nodes(ComponentHandle h) { return reach(checked_rep(h)); }

}  // namespace ancestral::dyncon
