#include "ancestral/build.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <string>

#include "ancestral/dyncon.hpp"

namespace ancestral {

namespace {

using Node = DisplayGraph::Node;
using Occurrence = DisplayGraph::Occurrence;
using dyncon::ComponentHandle;

// One MAP(i) entry: an intrusive list of occurrences of tree i, owned by a
// component record.
struct MapSet {
  std::int32_t tree = -1;
  std::int32_t size = 0;
  Occurrence head = -1;
  std::int32_t record = -1;
  std::int32_t prev = -1;  // within the owning record's list
  std::int32_t next = -1;
};

struct Record {
  std::int64_t weight = 0;
  std::vector<Node> semi;
  std::int32_t sets = -1;  // head of the MapSet list
};

template <class Connectivity>
class Engine {
 public:
  Engine(const Profile& extended, const BuildOptions& options, BuildStats& stats)
      : profile_(extended),
        graph_(DisplayGraph::build(extended)),
        conn_(graph_.node_count(), graph_.edges()),
        options_(options),
        stats_(stats) {
    const auto n = graph_.node_count();
    const auto occ = graph_.occurrence_count();
    cnt_.assign(n, 0);
    semi_owner_.assign(n, -1);
    semi_pos_.assign(n, -1);
    set_of_.assign(occ, -1);
    onext_.assign(occ, -1);
    oprev_.assign(occ, -1);
    scratch_.assign(graph_.tree_count(), -1);
    record_of_.assign(conn_.id_bound(), -1);
  }

  std::variant<Supertree, Incompatible> run();
  const Connectivity& connectivity() const { return conn_; }

 private:
  struct Work {
    std::int32_t id;
    NodeId parent;
  };

  // --- MAP sets -----------------------------------------------------------
  std::int32_t new_set(std::int32_t record, std::int32_t tree) {
    std::int32_t s;
    if (!free_sets_.empty()) {
      s = free_sets_.back();
      free_sets_.pop_back();
    } else {
      s = static_cast<std::int32_t>(sets_.size());
      sets_.emplace_back();
    }
    auto& ms = sets_[static_cast<std::size_t>(s)];
    ms = MapSet{};
    ms.tree = tree;
    ms.record = record;
    auto& rec = records_[static_cast<std::size_t>(record)];
    ms.next = rec.sets;
    if (rec.sets != -1) sets_[static_cast<std::size_t>(rec.sets)].prev = s;
    rec.sets = s;
    return s;
  }

  void free_set(std::int32_t s) {
    auto& ms = sets_[static_cast<std::size_t>(s)];
    auto& rec = records_[static_cast<std::size_t>(ms.record)];
    if (ms.prev != -1) {
      sets_[static_cast<std::size_t>(ms.prev)].next = ms.next;
    } else {
      rec.sets = ms.next;
    }
    if (ms.next != -1) sets_[static_cast<std::size_t>(ms.next)].prev = ms.prev;
    ms = MapSet{};
    free_sets_.push_back(s);
  }

  void set_insert(std::int32_t s, Occurrence o) {
    auto& ms = sets_[static_cast<std::size_t>(s)];
    onext_[static_cast<std::size_t>(o)] = ms.head;
    oprev_[static_cast<std::size_t>(o)] = -1;
    if (ms.head != -1) oprev_[static_cast<std::size_t>(ms.head)] = o;
    ms.head = o;
    ++ms.size;
    set_of_[static_cast<std::size_t>(o)] = s;
    ++stats_.map_operations;
  }

  void set_erase(Occurrence o) {
    auto& ms = sets_[static_cast<std::size_t>(set_of_[static_cast<std::size_t>(o)])];
    const Occurrence p = oprev_[static_cast<std::size_t>(o)], nx = onext_[static_cast<std::size_t>(o)];
    if (p != -1) {
      onext_[static_cast<std::size_t>(p)] = nx;
    } else {
      ms.head = nx;
    }
    if (nx != -1) oprev_[static_cast<std::size_t>(nx)] = p;
    --ms.size;
    set_of_[static_cast<std::size_t>(o)] = -1;
    ++stats_.map_operations;
  }

  // --- records, SEMI and cnt ----------------------------------------------
  std::int32_t new_record(std::int64_t weight) {
    std::int32_t r;
    if (!free_records_.empty()) {
      r = free_records_.back();
      free_records_.pop_back();
    } else {
      r = static_cast<std::int32_t>(records_.size());
      records_.emplace_back();
    }
    records_[static_cast<std::size_t>(r)] = Record{};
    records_[static_cast<std::size_t>(r)].weight = weight;
    return r;
  }

  void bind(std::int32_t id, std::int32_t record) {
    if (record_of_.size() <= static_cast<std::size_t>(id)) record_of_.resize(conn_.id_bound(), -1);
    record_of_[static_cast<std::size_t>(id)] = record;
  }

  std::int32_t record_of_node(Node v) const {
    return record_of_[static_cast<std::size_t>(conn_.component_id(v))];
  }

  void semi_add(std::int32_t record, Node v) {
    auto& semi = records_[static_cast<std::size_t>(record)].semi;
    semi_owner_[static_cast<std::size_t>(v)] = record;
    semi_pos_[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(semi.size());
    semi.push_back(v);
  }

  void semi_remove(Node v) {
    const auto record = semi_owner_[static_cast<std::size_t>(v)];
    if (record == -1) return;
    auto& semi = records_[static_cast<std::size_t>(record)].semi;
    const auto pos = static_cast<std::size_t>(semi_pos_[static_cast<std::size_t>(v)]);
    semi[pos] = semi.back();
    semi_pos_[static_cast<std::size_t>(semi[pos])] = static_cast<std::int32_t>(pos);
    semi.pop_back();
    semi_owner_[static_cast<std::size_t>(v)] = -1;
    semi_pos_[static_cast<std::size_t>(v)] = -1;
  }

  void bump(Node v) {
    if (++cnt_[static_cast<std::size_t>(v)] == graph_.multiplicity(v)) semi_add(record_of_node(v), v);
  }

  void unbump(Node v) {
    if (cnt_[static_cast<std::size_t>(v)] == graph_.multiplicity(v)) semi_remove(v);
    --cnt_[static_cast<std::size_t>(v)];
  }

  Node single_element(std::int32_t s) const {
    return graph_.occurrence_node(sets_[static_cast<std::size_t>(s)].head);
  }

  // --- the two steps per semi-universal label ------------------------------
  void initialize(Node l);
  void remove(Node l, std::vector<std::int32_t>& touched);
  void on_split(Node l, Node alpha, const dyncon::SplitResult& r, std::vector<std::int32_t>& touched);

  ComponentSnapshot snapshot(std::int32_t id);
  std::vector<LabelId> component_labels(std::int32_t id);
  void check_invariants(std::int32_t id);

  const Profile& profile_;
  DisplayGraph graph_;
  Connectivity conn_;
  const BuildOptions& options_;
  BuildStats& stats_;

  std::vector<std::int32_t> cnt_;
  std::vector<std::int32_t> semi_owner_;
  std::vector<std::int32_t> semi_pos_;
  std::vector<std::int32_t> set_of_;
  std::vector<Occurrence> onext_, oprev_;
  std::vector<MapSet> sets_;
  std::vector<std::int32_t> free_sets_;
  std::vector<Record> records_;
  std::vector<std::int32_t> free_records_;
  std::vector<std::int32_t> record_of_;  // per connectivity component id
  std::vector<std::int32_t> scratch_;    // per tree, new MAP(i) during a migration
  std::vector<std::pair<std::int32_t, std::int32_t>> migrated_;  // (tree, old set)
};

template <class C>
void Engine<C>::initialize(Node l) {
  semi_remove(l);
  for (Occurrence o = graph_.occurrence_begin(l); o < graph_.occurrence_end(l); ++o) {
    const auto s = set_of_[static_cast<std::size_t>(o)];
    set_erase(o);
    --cnt_[static_cast<std::size_t>(l)];
    const auto kids = graph_.occurrence_children(o);
    if (kids.empty()) {
      free_set(s);
      continue;
    }
    for (Occurrence c : kids) set_insert(s, c);
    if (sets_[static_cast<std::size_t>(s)].size == 1) bump(single_element(s));
  }
}

template <class C>
void Engine<C>::on_split(Node l, Node alpha, const dyncon::SplitResult& r, std::vector<std::int32_t>& touched) {
  ++stats_.splits;
  touched.push_back(r.a.id);
  touched.push_back(r.b.id);
  // The kept id is the one with a record; the other is fresh.
  const bool a_old = static_cast<std::size_t>(r.a.id) < record_of_.size() && record_of_[static_cast<std::size_t>(r.a.id)] != -1;
  const std::int32_t old_id = a_old ? r.a.id : r.b.id;
  const std::int32_t record = record_of_[static_cast<std::size_t>(old_id)];
  const std::int64_t total = records_[static_cast<std::size_t>(record)].weight;

  // Weights: scan the side with fewer nodes.
  const auto count_a = conn_.count(r.a), count_b = conn_.count(r.b);
  const auto& fewer = count_a <= count_b ? r.a : r.b;
  std::int64_t w_fewer = 0;
  conn_.for_each_node(fewer, [&](Node v) { w_fewer += graph_.multiplicity(v); });
  const std::int64_t w_a = count_a <= count_b ? w_fewer : total - w_fewer;
  const std::int64_t w_b = total - w_a;

  if (options_.observer) {
    options_.observer->on_split(SplitEvent{graph_.label(l), graph_.label(alpha), count_a, count_b, w_a, w_b});
  }

  // Migrate the fields of the lighter side; ties go to the smaller label.
  bool a_light = w_a < w_b;
  if (w_a == w_b) a_light = conn_.min_node(r.a) < conn_.min_node(r.b);
  const auto& light = a_light ? r.a : r.b;
  const auto& heavy = a_light ? r.b : r.a;
  const std::int64_t w_light = a_light ? w_a : w_b;
  const std::int32_t fresh = new_record(w_light);
  records_[static_cast<std::size_t>(record)].weight = total - w_light;
  bind(heavy.id, record);
  bind(light.id, fresh);
  if (2 * w_light > total) ++stats_.halving_violations;

  std::int64_t scanned = 0;
  migrated_.clear();
  conn_.for_each_node(light, [&](Node v) {
    scanned += graph_.multiplicity(v);
    for (Occurrence o = graph_.occurrence_begin(v); o < graph_.occurrence_end(v); ++o) {
      const auto s = set_of_[static_cast<std::size_t>(o)];
      if (s == -1) continue;
      const auto tree = sets_[static_cast<std::size_t>(s)].tree;
      if (scratch_[static_cast<std::size_t>(tree)] == -1) {
        // A singleton MAP(i) is counted in cnt; recount it after the move.
        if (sets_[static_cast<std::size_t>(s)].size == 1) unbump(v);
        scratch_[static_cast<std::size_t>(tree)] = new_set(fresh, tree);
        migrated_.emplace_back(tree, s);
      }
      set_erase(o);
      set_insert(scratch_[static_cast<std::size_t>(tree)], o);
      ++stats_.migrations;
    }
  });
  if (scanned != w_light) ++stats_.invariant_violations;

  for (const auto& [tree, old_set] : migrated_) {
    const auto ns = scratch_[static_cast<std::size_t>(tree)];
    scratch_[static_cast<std::size_t>(tree)] = -1;
    const auto old_size = sets_[static_cast<std::size_t>(old_set)].size;
    if (old_size == 0) {
      free_set(old_set);
    } else if (old_size == 1) {
      bump(single_element(old_set));
    }
    if (sets_[static_cast<std::size_t>(ns)].size == 1) bump(single_element(ns));
  }
}

template <class C>
void Engine<C>::remove(Node l, std::vector<std::int32_t>& touched) {
  // Non-tree edges first, so no replacement search settles on an edge of l.
  for (Node alpha : graph_.neighbors(l)) {
    if (conn_.has_edge(l, alpha) && !conn_.is_tree_edge(l, alpha)) {
      conn_.delete_edge(l, alpha);
      ++stats_.connectivity_deletions;
    }
  }
  for (Node alpha : graph_.neighbors(l)) {
    if (!conn_.has_edge(l, alpha)) continue;
    const auto r = conn_.delete_edge(l, alpha);
    ++stats_.connectivity_deletions;
    if (r.split) on_split(l, alpha, r, touched);
  }
  const std::int32_t id = conn_.component_id(l);
  const std::int32_t record = record_of_[static_cast<std::size_t>(id)];
  const auto& rec = records_[static_cast<std::size_t>(record)];
  if (rec.sets != -1 || !rec.semi.empty() || rec.weight != graph_.multiplicity(l)) ++stats_.invariant_violations;
  conn_.delete_isolated_node(l);
  ++stats_.connectivity_deletions;
  record_of_[static_cast<std::size_t>(id)] = -1;
  free_records_.push_back(record);
}

template <class C>
std::vector<LabelId> Engine<C>::component_labels(std::int32_t id) {
  std::vector<LabelId> out;
  conn_.for_each_node(conn_.handle_of(id), [&](Node v) { out.push_back(graph_.label(v)); });
  std::sort(out.begin(), out.end());
  return out;
}

template <class C>
ComponentSnapshot Engine<C>::snapshot(std::int32_t id) {
  ComponentSnapshot snap;
  snap.labels = component_labels(id);
  snap.position.sets.assign(graph_.tree_count(), {});
  const auto& rec = records_[static_cast<std::size_t>(record_of_[static_cast<std::size_t>(id)])];
  for (auto s = rec.sets; s != -1; s = sets_[static_cast<std::size_t>(s)].next) {
    auto& out = snap.position.sets[static_cast<std::size_t>(sets_[static_cast<std::size_t>(s)].tree)];
    for (auto o = sets_[static_cast<std::size_t>(s)].head; o != -1; o = onext_[static_cast<std::size_t>(o)]) {
      out.push_back(graph_.label(graph_.occurrence_node(o)));
    }
    std::sort(out.begin(), out.end());
  }
  return snap;
}

template <class C>
void Engine<C>::check_invariants(std::int32_t id) {
  const auto record = record_of_[static_cast<std::size_t>(id)];
  const auto& rec = records_[static_cast<std::size_t>(record)];
  std::vector<Node> nodes;
  conn_.for_each_node(conn_.handle_of(id), [&](Node v) { nodes.push_back(v); });
  std::int64_t weight = 0;
  bool ok = true;
  for (Node v : nodes) {
    weight += graph_.multiplicity(v);
    std::int32_t singles = 0;
    for (Occurrence o = graph_.occurrence_begin(v); o < graph_.occurrence_end(v); ++o) {
      const auto s = set_of_[static_cast<std::size_t>(o)];
      if (s == -1) continue;
      ok &= sets_[static_cast<std::size_t>(s)].record == record;
      if (sets_[static_cast<std::size_t>(s)].size == 1) ++singles;
    }
    ok &= singles == cnt_[static_cast<std::size_t>(v)];
    const bool in_semi = semi_owner_[static_cast<std::size_t>(v)] == record;
    ok &= in_semi == (singles == graph_.multiplicity(v));
  }
  ok &= weight == rec.weight;
  std::vector<char> seen_tree(graph_.tree_count(), 0);
  for (auto s = rec.sets; s != -1; s = sets_[static_cast<std::size_t>(s)].next) {
    const auto& ms = sets_[static_cast<std::size_t>(s)];
    ok &= ms.size > 0 && !seen_tree[static_cast<std::size_t>(ms.tree)];
    seen_tree[static_cast<std::size_t>(ms.tree)] = 1;
    std::int32_t len = 0;
    for (auto o = ms.head; o != -1; o = onext_[static_cast<std::size_t>(o)]) {
      ++len;
      ok &= graph_.occurrence_tree(o) == ms.tree && conn_.component_id(graph_.occurrence_node(o)) == id;
    }
    ok &= len == ms.size;
  }
  for (Node v : rec.semi) ok &= conn_.component_id(v) == id;
  if (!ok) ++stats_.invariant_violations;
}

template <class C>
std::variant<Supertree, Incompatible> Engine<C>::run() {
  SemiLabeledTree out;
  const auto k = graph_.tree_count();

  // One record per initial component.
  std::vector<std::int32_t> roots;
  for (std::int32_t id = 0; static_cast<std::size_t>(id) < conn_.id_bound(); ++id) {
    if (conn_.is_live(id)) roots.push_back(id);
  }
  for (auto id : roots) bind(id, new_record(0));
  for (Node v = 0; static_cast<std::size_t>(v) < graph_.node_count(); ++v) {
    records_[static_cast<std::size_t>(record_of_node(v))].weight += graph_.multiplicity(v);
  }
  for (std::size_t i = 0; i < k; ++i) {
    const Occurrence o = graph_.root_occurrence(i);
    const auto record = record_of_node(graph_.occurrence_node(o));
    set_insert(new_set(record, static_cast<std::int32_t>(i)), o);
  }
  for (std::size_t i = 0; i < k; ++i) bump(graph_.occurrence_node(graph_.root_occurrence(i)));

  std::vector<Work> stack;
  const NodeId top = roots.size() > 1 ? out.add_root() : kNoNode;
  for (auto it = roots.rbegin(); it != roots.rend(); ++it) stack.push_back({*it, top});

  std::vector<std::int32_t> touched;
  std::vector<std::int32_t> children;
  while (!stack.empty()) {
    const Work w = stack.back();
    stack.pop_back();
    ++stats_.activations;
    if (options_.check_invariants) check_invariants(w.id);

    auto& rec = records_[static_cast<std::size_t>(record_of_[static_cast<std::size_t>(w.id)])];
    std::vector<Node> semi = rec.semi;
    std::sort(semi.begin(), semi.end());
    std::vector<LabelId> semi_labels;
    for (Node v : semi) semi_labels.push_back(graph_.label(v));
    if (options_.observer) options_.observer->on_activation(snapshot(w.id), semi_labels);
    if (semi.empty()) return Incompatible{component_labels(w.id)};

    const NodeId node = w.parent == kNoNode ? out.add_root() : out.add_child(w.parent);
    for (LabelId l : semi_labels) out.add_label(node, l);

    touched.assign(1, w.id);
    for (Node l : semi) {
      initialize(l);
      remove(l, touched);
    }

    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    children.clear();
    for (auto id : touched) {
      if (conn_.is_live(id)) children.push_back(id);
    }
    std::vector<std::pair<Node, std::int32_t>> order;
    for (auto id : children) order.emplace_back(conn_.min_node(conn_.handle_of(id)), id);
    std::sort(order.begin(), order.end());
    if (options_.observer) {
      std::vector<ComponentSnapshot> snaps;
      for (const auto& [m, id] : order) snaps.push_back(snapshot(id));
      options_.observer->on_successors(semi_labels, snaps);
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) stack.push_back({it->second, node});
  }
  return Supertree{std::move(out)};
}

}  // namespace

void TraceObserver::on_activation(const ComponentSnapshot& component, const std::vector<LabelId>& semi) {
  ++count_;
  out_ << "activation " << count_ << ": size " << component.labels.size() << " S={";
  for (std::size_t i = 0; i < semi.size(); ++i) out_ << (i ? "," : "") << (labels_ ? labels_->name(semi[i]) : std::to_string(semi[i]));
  out_ << "} U=(";
  for (std::size_t t = 0; t < component.position.sets.size(); ++t) {
    out_ << (t ? "," : "") << '{';
    const auto& set = component.position.sets[t];
    for (std::size_t i = 0; i < set.size(); ++i) out_ << (i ? "," : "") << (labels_ ? labels_->name(set[i]) : std::to_string(set[i]));
    out_ << '}';
  }
  out_ << ")\n";
}

void TraceObserver::on_split(const SplitEvent& e) {
  auto name = [&](LabelId l) { return labels_ ? labels_->name(l) : std::to_string(l); };
  out_ << "  split " << name(e.deleted) << "-" << name(e.neighbor) << ": nodes " << e.count_deleted_side << "/"
       << e.count_neighbor_side << " weight " << e.weight_deleted_side << "/" << e.weight_neighbor_side << "\n";
}

BuildOutcome run_build(const Profile& profile, const BuildOptions& options) {
  for (std::size_t i = 0; i < profile.trees.size(); ++i) {
    const auto& t = profile.trees[i];
    if (auto v = validate(t)) throw std::invalid_argument("tree " + std::to_string(i) + ": " + v->message);
    if (!t.singularly_labeled()) throw std::invalid_argument("tree " + std::to_string(i) + " is not singularly labeled");
  }

  BuildOutcome outcome;
  Profile extended = add_distinct_labels(profile);
  if (options.observer) options.observer->on_start(extended.labels);
  if (extended.trees.empty()) {
    outcome.result = Supertree{};
  } else if (options.connectivity == ConnectivityKind::kBfs) {
    Engine<dyncon::BfsConnectivity> engine(extended, options, outcome.stats);
    outcome.result = engine.run();
  } else {
    Engine<dyncon::ConnectivityIndex> engine(extended, options, outcome.stats);
    outcome.result = engine.run();
    const auto& cs = engine.connectivity().stats();
    outcome.stats.tree_edge_deletions = cs.tree_deletions;
    outcome.stats.replacements = cs.replacements + cs.sampled_replacements;
    outcome.stats.level_promotions = cs.promotions;
  }

  if (outcome.compatible() && !options.keep_synthetic && extended.labels.synthetic_count() > 0) {
    std::vector<LabelId> keep;
    for (LabelId l : profile.label_set()) keep.push_back(l);
    auto& tree = std::get<Supertree>(outcome.result).tree;
    tree = restrict_to(tree, keep);
  }
  outcome.labels = std::move(extended.labels);
  return outcome;
}

}  // namespace ancestral
