#include "ancestral/oracle.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace ancestral {

// ---------------------------------------------------------------------------
// naive_build

namespace {

class NaiveEngine {
 public:
  explicit NaiveEngine(const Profile& p) : p_(p) {
    for (const auto& t : p_.trees) {
      for (NodeId v = 0; static_cast<std::size_t>(v) < t.node_count(); ++v) {
        const NodeId par = t.parent(v);
        if (par == kNoNode) continue;
        const LabelId a = t.labels(v)[0], b = t.labels(par)[0];
        adj_[a].push_back(b);
        adj_[b].push_back(a);
      }
    }
  }

  std::vector<LabelId> children(std::size_t i, LabelId l) const {
    const auto& t = p_.trees[i];
    std::vector<LabelId> out;
    for (NodeId c : t.children(*t.node_of(l))) out.push_back(t.labels(c)[0]);
    std::sort(out.begin(), out.end());
    return out;
  }

  std::set<LabelId> desc(const Position& u) const {
    std::set<LabelId> out;
    for (std::size_t i = 0; i < u.sets.size(); ++i) {
      const auto& t = p_.trees[i];
      std::vector<NodeId> stack;
      for (LabelId l : u.sets[i]) stack.push_back(*t.node_of(l));
      while (!stack.empty()) {
        const NodeId v = stack.back();
        stack.pop_back();
        out.insert(t.labels(v)[0]);
        for (NodeId c : t.children(v)) stack.push_back(c);
      }
    }
    return out;
  }

  // Components of the display graph induced on `alive`, ordered by smallest
  // label.
  std::vector<std::vector<LabelId>> components(const std::set<LabelId>& alive) const {
    std::vector<std::vector<LabelId>> out;
    std::set<LabelId> seen;
    for (LabelId s : alive) {
      if (seen.contains(s)) continue;
      std::vector<LabelId> comp{s};
      seen.insert(s);
      for (std::size_t h = 0; h < comp.size(); ++h) {
        auto it = adj_.find(comp[h]);
        if (it == adj_.end()) continue;
        for (LabelId w : it->second) {
          if (alive.contains(w) && !seen.contains(w)) {
            seen.insert(w);
            comp.push_back(w);
          }
        }
      }
      std::sort(comp.begin(), comp.end());
      out.push_back(std::move(comp));
    }
    return out;
  }

  static Position restrict_position(const Position& u, const std::vector<LabelId>& w) {
    Position out;
    for (const auto& set : u.sets) {
      std::vector<LabelId> r;
      std::set_intersection(set.begin(), set.end(), w.begin(), w.end(), std::back_inserter(r));
      out.sets.push_back(std::move(r));
    }
    return out;
  }

  std::vector<LabelId> semi_universal(const Position& u) const {
    std::set<LabelId> candidates;
    for (const auto& set : u.sets) candidates.insert(set.begin(), set.end());
    std::vector<LabelId> out;
    for (LabelId l : candidates) {
      bool ok = true;
      for (std::size_t i = 0; i < p_.trees.size() && ok; ++i) {
        if (p_.trees[i].contains(l)) ok = u.sets[i] == std::vector<LabelId>{l};
      }
      if (ok) out.push_back(l);
    }
    return out;
  }

  Verdict run(std::vector<NaiveActivation>* trace) {
    Position init;
    for (const auto& t : p_.trees) init.sets.push_back({t.labels(t.root())[0]});
    std::set<LabelId> all;
    for (const auto& t : p_.trees) {
      for (LabelId l : t.label_set()) all.insert(l);
    }
    const auto comps = components(all);

    struct Work {
      Position u;
      std::vector<LabelId> w;
      NodeId parent;
    };
    SemiLabeledTree out;
    std::vector<Work> stack;
    const NodeId top = comps.size() > 1 ? out.add_root() : kNoNode;
    for (auto it = comps.rbegin(); it != comps.rend(); ++it) stack.push_back({restrict_position(init, *it), *it, top});

    while (!stack.empty()) {
      Work work = std::move(stack.back());
      stack.pop_back();
      const auto s = semi_universal(work.u);
      if (trace) trace->push_back({work.w, work.u, s});
      if (s.empty()) return Verdict{false, std::nullopt};
      const NodeId node = work.parent == kNoNode ? out.add_root() : out.add_child(work.parent);
      for (LabelId l : s) out.add_label(node, l);

      Position next = work.u;
      for (std::size_t i = 0; i < next.sets.size(); ++i) {
        auto& set = next.sets[i];
        if (set.size() == 1 && std::binary_search(s.begin(), s.end(), set[0])) set = children(i, set[0]);
      }
      const auto kids = components(desc(next));
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back({restrict_position(next, *it), *it, node});
    }
    return Verdict{true, std::move(out)};
  }

 private:
  const Profile& p_;
  std::unordered_map<LabelId, std::vector<LabelId>> adj_;
};

void require_valid(const Profile& profile) {
  for (std::size_t i = 0; i < profile.trees.size(); ++i) {
    const auto& t = profile.trees[i];
    if (auto v = validate(t)) throw std::invalid_argument("tree " + std::to_string(i) + ": " + v->message);
    if (!t.singularly_labeled()) throw std::invalid_argument("tree " + std::to_string(i) + " is not singularly labeled");
  }
}

}  // namespace

Verdict naive_build(const Profile& profile, const NaiveOptions& options) {
  require_valid(profile);
  const Profile full = add_distinct_labels(profile);
  if (options.extended_labels) *options.extended_labels = full.labels;
  if (full.trees.empty()) return Verdict{true, SemiLabeledTree{}};
  Verdict v = NaiveEngine(full).run(options.trace);
  if (v.compatible && !options.keep_synthetic && full.labels.synthetic_count() > 0) {
    const auto keep = profile.label_set();
    v.witness_tree = restrict_to(*v.witness_tree, keep);
  }
  return v;
}

// ---------------------------------------------------------------------------
// exhaustive enumeration

namespace {

using Mask = std::uint32_t;
using MaskTree = std::vector<Mask>;  // sorted cluster masks

class Enumerator {
 public:
  const std::vector<MaskTree>& trees(Mask mask) {
    if (auto it = memo_.find(mask); it != memo_.end()) return it->second;
    std::set<MaskTree> found;
    // Root label set r; the rest is split among child subtrees.
    for (Mask r = mask;; r = (r - 1) & mask) {
      const Mask rest = mask & ~r;
      if (rest == 0) {
        if (r != 0) found.insert({mask});
      } else {
        partitions(rest, {}, [&](const std::vector<Mask>& blocks) {
          if (r == 0 && blocks.size() < 2) return;
          combine(blocks, 0, {mask}, found);
        });
      }
      if (r == 0) break;
    }
    return memo_[mask] = {found.begin(), found.end()};
  }

 private:
  template <class F>
  void partitions(Mask rest, std::vector<Mask> blocks, F&& f) {
    if (rest == 0) {
      f(blocks);
      return;
    }
    const Mask low = rest & (~rest + 1);
    const Mask others = rest & ~low;
    for (Mask sub = others;; sub = (sub - 1) & others) {
      blocks.push_back(low | sub);
      partitions(rest & ~(low | sub), blocks, f);
      blocks.pop_back();
      if (sub == 0) break;
    }
  }

  void combine(const std::vector<Mask>& blocks, std::size_t i, MaskTree acc, std::set<MaskTree>& found) {
    if (i == blocks.size()) {
      std::sort(acc.begin(), acc.end());
      found.insert(std::move(acc));
      return;
    }
    // Copy: trees() may grow the memo and move the vector.
    const std::vector<MaskTree> options = trees(blocks[i]);
    for (const auto& sub : options) {
      MaskTree next = acc;
      next.insert(next.end(), sub.begin(), sub.end());
      combine(blocks, i + 1, std::move(next), found);
    }
  }

  std::map<Mask, std::vector<MaskTree>> memo_;
};

}  // namespace

std::vector<ClusterSet> enumerate_semi_labeled_trees(const std::vector<LabelId>& labels) {
  if (labels.size() > 5) throw std::invalid_argument("exhaustive enumeration supports at most 5 labels");
  std::vector<ClusterSet> out;
  if (labels.empty()) return out;
  Enumerator e;
  const Mask all = (Mask{1} << labels.size()) - 1;
  for (const auto& mt : e.trees(all)) {
    assert(mt.size() <= 2 * labels.size() - 1);
    if (mt.size() > 2 * labels.size() - 1) throw std::logic_error("enumerated tree exceeds 2n-1 nodes");
    ClusterSet cs;
    for (Mask m : mt) {
      Cluster c;
      for (std::size_t b = 0; b < labels.size(); ++b) {
        if (m & (Mask{1} << b)) c.push_back(labels[b]);
      }
      std::sort(c.begin(), c.end());
      cs.insert(std::move(c));
    }
    out.push_back(std::move(cs));
  }
  return out;
}

SemiLabeledTree tree_from_clusters(const ClusterSet& cs) {
  std::vector<const Cluster*> order;
  for (const auto& c : cs) order.push_back(&c);
  std::stable_sort(order.begin(), order.end(), [](const Cluster* a, const Cluster* b) { return a->size() > b->size(); });
  SemiLabeledTree t;
  std::vector<NodeId> node(order.size(), kNoNode);
  std::vector<Cluster> own(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    // Parent: the smallest earlier cluster containing this one.
    std::size_t parent = order.size();
    for (std::size_t j = 0; j < i; ++j) {
      if (order[j]->size() > order[i]->size() &&
          std::includes(order[j]->begin(), order[j]->end(), order[i]->begin(), order[i]->end()) &&
          (parent == order.size() || order[j]->size() < order[parent]->size())) {
        parent = j;
      }
    }
    node[i] = parent == order.size() ? t.add_root() : t.add_child(node[parent]);
    own[i] = *order[i];
    if (parent != order.size()) {
      auto& po = own[parent];
      Cluster diff;
      std::set_difference(po.begin(), po.end(), order[i]->begin(), order[i]->end(), std::back_inserter(diff));
      po = std::move(diff);
    }
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (LabelId l : own[i]) t.add_label(node[i], l);
  }
  return t;
}

Verdict exhaustive_compatible(const Profile& profile) {
  const auto labels = profile.label_set();
  if (labels.size() > 5) throw std::invalid_argument("exhaustive_compatible supports at most 5 labels");
  if (labels.empty()) return Verdict{true, SemiLabeledTree{}};
  for (const auto& cs : enumerate_semi_labeled_trees(labels)) {
    SemiLabeledTree t = tree_from_clusters(cs);
    bool ok = true;
    for (const auto& input : profile.trees) {
      if (!ancestrally_displays(t, input)) {
        ok = false;
        break;
      }
    }
    if (ok) return Verdict{true, std::move(t)};
  }
  return Verdict{false, std::nullopt};
}

// ---------------------------------------------------------------------------
// verification

std::optional<OutputViolation> verify_output(const Profile& profile, const SemiLabeledTree& tree) {
  for (std::size_t i = 0; i < profile.trees.size(); ++i) {
    if (auto v = display_violation(tree, profile.trees[i])) return OutputViolation{i, *v};
  }
  return std::nullopt;
}

std::string describe(const OutputViolation& v, const LabelUniverse& labels) {
  const std::string where = "tree " + std::to_string(v.tree + 1) + ": ";
  const auto& d = v.violation;
  switch (d.kind) {
    case DisplayViolation::Kind::kMissingLabel:
      return where + "label " + labels.name(d.first) + " is missing";
    case DisplayViolation::Kind::kMissingDescendant:
      return where + labels.name(d.second) + " must be a proper descendant of " + labels.name(d.first);
    case DisplayViolation::Kind::kMissingIncomparable:
      return where + labels.name(d.first) + " and " + labels.name(d.second) + " must be incomparable";
    case DisplayViolation::Kind::kMissingCluster:
      return where + "no node has exactly the cluster of the node above " + labels.name(d.first) + " and " +
             labels.name(d.second);
  }
  return where + "violation";
}

Profile restrict_profile(const Profile& profile, const std::vector<LabelId>& keep) {
  std::vector<LabelId> sorted = keep;
  std::sort(sorted.begin(), sorted.end());
  Profile out;
  out.labels = profile.labels;
  for (const auto& t : profile.trees) {
    std::vector<LabelId> here;
    for (LabelId l : sorted) {
      if (t.contains(l)) here.push_back(l);
    }
    if (!here.empty()) out.trees.push_back(restrict_to(t, here));
  }
  return out;
}

}  // namespace ancestral
