#include "ancestral/generate.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace ancestral {

Family parse_family(const std::string& name) {
  if (name == "random") return Family::kRandom;
  if (name == "binary") return Family::kBinary;
  if (name == "taxonomy") return Family::kTaxonomy;
  throw std::invalid_argument("unknown family: " + name);
}

std::string family_name(Family f) {
  switch (f) {
    case Family::kRandom: return "random";
    case Family::kBinary: return "binary";
    case Family::kTaxonomy: return "taxonomy";
  }
  return "random";
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t x = engine_();
    if (x >= threshold) return x % n;
  }
}

bool Rng::chance(double p) {
  return static_cast<double>(engine_() >> 11) * (1.0 / 9007199254740992.0) < p;
}

namespace {

template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

struct Shape {
  std::vector<NodeId> parent;
  std::vector<std::vector<LabelId>> labels;

  NodeId add(NodeId p) {
    parent.push_back(p);
    labels.emplace_back();
    return static_cast<NodeId>(parent.size() - 1);
  }
};

Shape random_shape(std::size_t n, LabelUniverse& u, Rng& rng) {
  Shape s;
  std::vector<std::vector<NodeId>> kids;
  for (std::size_t i = 0; i < n; ++i) {
    const NodeId p = i == 0 ? kNoNode : static_cast<NodeId>(rng.below(i));
    const NodeId v = s.add(p);
    s.labels[static_cast<std::size_t>(v)].push_back(u.intern("t" + std::to_string(i + 1)));
    kids.emplace_back();
    if (p != kNoNode) kids[static_cast<std::size_t>(p)].push_back(v);
  }
  // Unlabeled internal nodes: group some children of wide nodes.
  const std::size_t groupings = n / 6;
  for (std::size_t g = 0, tries = 0; g < groupings && tries < 8 * n; ++tries) {
    const auto v = static_cast<NodeId>(rng.below(s.parent.size()));
    auto& ch = kids[static_cast<std::size_t>(v)];
    if (ch.size() < 3) continue;
    shuffle(ch, rng);
    const std::size_t m = 2 + rng.below(ch.size() - 2);
    const NodeId w = s.add(v);
    std::vector<NodeId> group(ch.end() - static_cast<std::ptrdiff_t>(m), ch.end());
    ch.resize(ch.size() - m);
    ch.push_back(w);
    for (NodeId c : group) s.parent[static_cast<std::size_t>(c)] = w;
    kids.push_back(std::move(group));  // invalidates ch
    ++g;
  }
  return s;
}

Shape binary_shape(std::size_t n, LabelUniverse& u, Rng& rng) {
  Shape s;
  s.add(kNoNode);
  s.labels[0].push_back(u.intern("t1"));
  for (std::size_t i = 1; i < n; ++i) {
    // Subdivide the edge above a random node and hang a new leaf there.
    const auto x = static_cast<NodeId>(rng.below(s.parent.size()));
    const NodeId y = s.add(s.parent[static_cast<std::size_t>(x)]);
    s.parent[static_cast<std::size_t>(x)] = y;
    const NodeId leaf = s.add(y);
    s.labels[static_cast<std::size_t>(leaf)].push_back(u.intern("t" + std::to_string(i + 1)));
  }
  return s;
}

Shape taxonomy_shape(std::size_t n, std::size_t genus_size, LabelUniverse& u) {
  Shape s;
  const NodeId root = s.add(kNoNode);
  s.labels[0].push_back(u.intern("Life"));
  if (n == 1) return s;
  const std::size_t genera = std::max<std::size_t>(1, (n - 1) / (genus_size + 1));
  const std::size_t families = genera > 20 ? (genera + 19) / 20 : 0;
  std::size_t used = 1;
  std::vector<NodeId> fam;
  for (std::size_t f = 0; f < families && used < n; ++f, ++used) {
    fam.push_back(s.add(root));
    s.labels.back().push_back(u.intern("Fam" + std::to_string(f + 1)));
  }
  std::vector<NodeId> gen;
  for (std::size_t g = 0; g < genera && used < n; ++g, ++used) {
    gen.push_back(s.add(fam.empty() ? root : fam[g % fam.size()]));
    s.labels.back().push_back(u.intern("Gen" + std::to_string(g + 1)));
  }
  for (std::size_t sp = 0; used < n; ++sp, ++used) {
    s.add(gen[sp % gen.size()]);
    s.labels.back().push_back(u.intern("s" + std::to_string(sp + 1)));
  }
  return s;
}

}  // namespace

SemiLabeledTree generate_master(const GenerateOptions& options, LabelUniverse& labels, Rng& rng) {
  if (options.labels == 0) throw std::invalid_argument("need at least one label");
  Shape s;
  switch (options.family) {
    case Family::kRandom: s = random_shape(options.labels, labels, rng); break;
    case Family::kBinary: s = binary_shape(options.labels, labels, rng); break;
    case Family::kTaxonomy: s = taxonomy_shape(options.labels, options.genus_size, labels); break;
  }
  return SemiLabeledTree::from_parents(s.parent, std::move(s.labels));
}

namespace {

// Swaps a random label with the label of its nearest labeled ancestor.
bool swap_comparable(SemiLabeledTree& t, Rng& rng) {
  std::vector<std::pair<NodeId, NodeId>> pairs;  // (ancestor, descendant)
  std::vector<NodeId> nearest(t.node_count(), kNoNode);
  for (NodeId v : t.preorder()) {
    const NodeId p = t.parent(v);
    const NodeId above = p == kNoNode ? kNoNode : (t.labels(p).empty() ? nearest[static_cast<std::size_t>(p)] : p);
    nearest[static_cast<std::size_t>(v)] = above;
    if (above != kNoNode && !t.labels(v).empty()) pairs.emplace_back(above, v);
  }
  if (pairs.empty()) return false;
  const auto [a, b] = pairs[rng.below(pairs.size())];
  std::vector<NodeId> parents(t.node_count());
  std::vector<std::vector<LabelId>> labels(t.node_count());
  for (NodeId v = 0; static_cast<std::size_t>(v) < t.node_count(); ++v) {
    parents[static_cast<std::size_t>(v)] = t.parent(v);
    labels[static_cast<std::size_t>(v)].assign(t.labels(v).begin(), t.labels(v).end());
  }
  std::swap(labels[static_cast<std::size_t>(a)][0], labels[static_cast<std::size_t>(b)][0]);
  t = SemiLabeledTree::from_parents(parents, std::move(labels));
  return true;
}

}  // namespace

Profile generate_profile(const GenerateOptions& options) {
  if (options.trees == 0) throw std::invalid_argument("need at least one tree");
  Rng rng(options.seed);
  Profile p;
  const SemiLabeledTree master = generate_master(options, p.labels, rng);
  const auto all = master.label_set();
  for (std::size_t i = 0; i < options.trees; ++i) {
    std::vector<LabelId> keep;
    for (LabelId l : all) {
      if (rng.chance(options.coverage)) keep.push_back(l);
    }
    if (keep.empty()) keep.push_back(all[rng.below(all.size())]);
    p.trees.push_back(restrict_to(master, keep));
  }
  if (options.conflict) {
    const std::size_t start = rng.below(p.trees.size());
    for (std::size_t j = 0; j < p.trees.size(); ++j) {
      if (swap_comparable(p.trees[(start + j) % p.trees.size()], rng)) break;
    }
  }
  return p;
}

}  // namespace ancestral
