#include <algorithm>
#include <set>

#include "ancestral/oracle.hpp"
#include "ancestral/tree.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace ancestral;

namespace {

// Pairs straight from the definitions: walk up from every labeled node.
std::set<LabelPair> brute_d(const SemiLabeledTree& t) {
  std::set<LabelPair> out;
  for (NodeId v = 0; static_cast<std::size_t>(v) < t.node_count(); ++v) {
    for (NodeId a = t.parent(v); a != kNoNode; a = t.parent(a)) {
      for (LabelId x : t.labels(a)) {
        for (LabelId y : t.labels(v)) out.insert({x, y});
      }
    }
  }
  return out;
}

bool is_ancestor_or_self(const SemiLabeledTree& t, NodeId a, NodeId v) {
  for (; v != kNoNode; v = t.parent(v)) {
    if (v == a) return true;
  }
  return false;
}

std::set<LabelPair> brute_n(const SemiLabeledTree& t) {
  std::set<LabelPair> out;
  const auto ls = t.label_set();
  for (LabelId x : ls) {
    for (LabelId y : ls) {
      if (x >= y) continue;
      const NodeId u = *t.node_of(x), v = *t.node_of(y);
      if (!is_ancestor_or_self(t, u, v) && !is_ancestor_or_self(t, v, u)) out.insert({x, y});
    }
  }
  return out;
}

// D/N pair containment. Matches display only when small is fully and
// singularly labeled; ((a,b),c) passes against a star otherwise.
bool pairs_contained(const SemiLabeledTree& big, const SemiLabeledTree& small) {
  for (LabelId l : small.label_set()) {
    if (!big.contains(l)) return false;
  }
  const auto db = brute_d(big), nb = brute_n(big);
  const auto ds = brute_d(small), ns = brute_n(small);
  return std::includes(db.begin(), db.end(), ds.begin(), ds.end()) &&
         std::includes(nb.begin(), nb.end(), ns.begin(), ns.end());
}

// Cl(small) ⊆ Cl(big|L(small)) plus the ancestor and incomparability
// conditions. Clusters alone would accept (b)a against a star.
bool brute_displays(const SemiLabeledTree& big, const SemiLabeledTree& small) {
  if (!pairs_contained(big, small)) return false;
  const auto mine = clusters(small);
  const auto theirs = clusters(restrict_to(big, small.label_set()));
  return std::includes(theirs.begin(), theirs.end(), mine.begin(), mine.end());
}

std::vector<SemiLabeledTree> random_trees(std::size_t count, std::size_t max_labels, LabelUniverse& u) {
  std::vector<SemiLabeledTree> out;
  Rng rng(99);
  for (std::size_t i = 0; i < count; ++i) {
    GenerateOptions g;
    g.labels = 1 + rng.below(max_labels);
    const auto master = generate_master(g, u, rng);
    std::vector<LabelId> keep;
    for (LabelId l : master.label_set()) {
      if (rng.chance(0.7)) keep.push_back(l);
    }
    if (keep.empty()) keep.push_back(master.label_set().front());
    out.push_back(restrict_to(master, keep));
  }
  return out;
}

}  // namespace

TEST_CASE("validate: legal and illegal structures") {
  Profile p = test::profile_of({"a;", "(a,b)c;"});
  CHECK_FALSE(validate(p.trees[0]));
  CHECK_FALSE(validate(p.trees[1]));

  // root unlabeled with a single child
  SemiLabeledTree chain;
  const NodeId r = chain.add_root();
  chain.add_label(chain.add_child(r), 0);
  auto v = validate(chain);
  REQUIRE(v);
  CHECK(v->kind == Violation::Kind::kUnlabeledLowDegree);
  CHECK(v->node == r);
  CHECK(v->message == "unlabeled node with <2 children");

  SemiLabeledTree leaf;
  const NodeId lr = leaf.add_root();
  leaf.add_label(lr, 0);
  leaf.add_child(lr);
  REQUIRE(validate(leaf));
  CHECK(validate(leaf)->kind == Violation::Kind::kUnlabeledLeaf);

  CHECK(validate(SemiLabeledTree{})->kind == Violation::Kind::kEmptyTree);

  const std::vector<NodeId> two_roots{kNoNode, kNoNode};
  CHECK(validate(SemiLabeledTree::from_parents(two_roots, {{0}, {1}}))->kind == Violation::Kind::kRootCount);
  const std::vector<NodeId> cycle{kNoNode, 2, 1};
  CHECK(validate(SemiLabeledTree::from_parents(cycle, {{0}, {1}, {2}}))->kind == Violation::Kind::kCycle);
  const std::vector<NodeId> dup{kNoNode, 0};
  CHECK(validate(SemiLabeledTree::from_parents(dup, {{0}, {0}}))->kind == Violation::Kind::kLabelMapping);
}

TEST_CASE("validate: the example trees with their added labels") {
  const Profile p = read_profile_file(test::fixture("figure1_labeled.nwk"));
  REQUIRE(p.trees.size() == 3);
  for (const auto& t : p.trees) {
    CHECK_FALSE(validate(t));
    CHECK(t.fully_labeled());
    CHECK(t.singularly_labeled());
  }
}

TEST_CASE("add_distinct_labels") {
  SUBCASE("fully labeled profile is unchanged") {
    const Profile p = test::profile_of({"(a,b)c;", "(c)d;"});
    const Profile q = add_distinct_labels(p);
    CHECK(q.labels.synthetic_count() == 0);
    CHECK(q.labels.size() == p.labels.size());
    for (std::size_t i = 0; i < p.trees.size(); ++i) CHECK(isomorphic(p.trees[i], q.trees[i]));
  }
  SUBCASE("unlabeled root gains one label") {
    const Profile q = add_distinct_labels(test::profile_of({"(a,b);"}));
    CHECK(q.labels.synthetic_count() == 1);
    const auto& t = q.trees[0];
    REQUIRE(t.labels(t.root()).size() == 1);
    CHECK(q.labels.name(t.labels(t.root())[0]) == "1");
    CHECK(q.labels.synthetic(t.labels(t.root())[0]));
  }
  SUBCASE("example profile: numbering matches figure1_labeled.nwk") {
    const Profile p = read_profile_file(test::fixture("figure1.nwk"));
    const Profile q = add_distinct_labels(p);
    CHECK(q.labels.synthetic_count() == 4);
    Profile expected = read_profile_file(test::fixture("figure1_labeled.nwk"));
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(q.trees[i].fully_labeled());
      // Compare through names: the universes differ in id order.
      CHECK(write_newick(q.trees[i], q.labels) == write_newick(expected.trees[i], expected.labels));
    }
  }
  SUBCASE("names dodge existing labels") {
    const Profile q = add_distinct_labels(test::profile_of({"((1,b),(c,d));"}));
    CHECK(q.labels.synthetic_count() == 3);
    CHECK(q.labels.find("_1"));
    CHECK(q.labels.find("_3"));
    CHECK_FALSE(q.labels.find("2"));
  }
}

TEST_CASE("clusters") {
  const Profile p = test::profile_of({"a;", "(a,b)c;"});
  CHECK(clusters(p.trees[0]) == ClusterSet{{test::id(p, "a")}});
  ClusterSet expected{test::ids(p, {"a"}), test::ids(p, {"b"})};
  auto all = test::ids(p, {"a", "b", "c"});
  std::sort(all.begin(), all.end());
  expected.insert(all);
  CHECK(clusters(p.trees[1]) == expected);
}

TEST_CASE("restriction") {
  const Profile p = test::profile_of({"((a,b)x,(c,(d)y))r;"});
  const auto& t = p.trees[0];
  CHECK(isomorphic(restrict_to(t, t.label_set()), t));
  const auto single = restrict_to(t, test::ids(p, {"d"}));
  CHECK(single.node_count() == 1);
  CHECK(single.labels(single.root()).size() == 1);
  CHECK_THROWS_AS(restrict_to(t, std::vector<LabelId>{}), std::invalid_argument);

  // Cl(T|A) = { C ∩ A : C ∈ Cl(T) } minus the empty set, on random input.
  LabelUniverse u;
  Rng rng(5);
  for (const auto& tree : random_trees(300, 12, u)) {
    const auto ls = tree.label_set();
    std::vector<LabelId> keep;
    for (LabelId l : ls) {
      if (rng.chance(0.5)) keep.push_back(l);
    }
    if (keep.empty()) keep.push_back(ls.back());
    const auto r = restrict_to(tree, keep);
    CHECK_FALSE(validate(r));
    ClusterSet expected;
    for (const auto& c : clusters(tree)) {
      Cluster meet;
      std::set_intersection(c.begin(), c.end(), keep.begin(), keep.end(), std::back_inserter(meet));
      if (!meet.empty()) expected.insert(meet);
    }
    CHECK(clusters(r) == expected);
  }
}

TEST_CASE("D and N pairs") {
  const Profile p = test::profile_of({"(a,b)c;", "((a)b)c;"});
  const auto a = test::id(p, "a"), b = test::id(p, "b"), c = test::id(p, "c");
  CHECK(d_pairs(p.trees[0]) == std::set<LabelPair>{{c, a}, {c, b}});
  CHECK(n_pairs(p.trees[0]) == std::set<LabelPair>{{std::min(a, b), std::max(a, b)}});
  CHECK(d_pairs(p.trees[1]) == std::set<LabelPair>{{c, b}, {c, a}, {b, a}});
  CHECK(n_pairs(p.trees[1]).empty());

  LabelUniverse u;
  for (const auto& t : random_trees(200, 8, u)) {
    const auto d = d_pairs(t), n = n_pairs(t);
    CHECK(d == brute_d(t));
    CHECK(n == brute_n(t));
    // Every unordered pair of distinct labels is in exactly one relation.
    const auto m = t.label_count();
    std::set<LabelPair> seen;
    for (auto [x, y] : d) seen.insert({std::min(x, y), std::max(x, y)});
    CHECK(seen.size() == d.size());
    for (auto pr : n) CHECK_FALSE(seen.contains(pr));
    CHECK(d.size() + n.size() == m * (m - 1) / 2);
  }
}

TEST_CASE("ancestral display: small cases") {
  const Profile p = test::profile_of({"(b)a;", "(a)b;", "(a,b)c;", "(b,a)c;"});
  CHECK_FALSE(ancestrally_displays(p.trees[0], p.trees[1]));
  CHECK(ancestrally_displays(p.trees[0], p.trees[0]));
  CHECK(isomorphic(p.trees[2], p.trees[3]));
  CHECK_FALSE(isomorphic(p.trees[0], p.trees[1]));

  // Same D/N pairs, but the star has no {a,b} cluster.
  const Profile q = test::profile_of({"(a,b,c);", "((a,b),c);"});
  const auto v = display_violation(q.trees[0], q.trees[1]);
  REQUIRE(v);
  CHECK(v->kind == DisplayViolation::Kind::kMissingCluster);
  CHECK(ancestrally_displays(q.trees[1], q.trees[0]));
  CHECK(ancestrally_displays(q.trees[1], q.trees[1]));
}

TEST_CASE("ancestral display: the example supertree displays every input") {
  Profile p = read_profile_file(test::fixture("figure1.nwk"));
  const auto t = read_tree_file(test::fixture("figure2.nwk"), p.labels);
  for (const auto& ti : p.trees) CHECK(ancestrally_displays(t, ti));
}

TEST_CASE("ancestral display agrees with the cluster definition") {
  // All semi-labeled trees on {a,b,c} against all on {a,b,c,d}.
  LabelUniverse u;
  const LabelId a = u.intern("a"), b = u.intern("b"), c = u.intern("c"), d = u.intern("d");
  std::vector<SemiLabeledTree> small, big;
  for (const auto& cs : enumerate_semi_labeled_trees({a, b, c})) small.push_back(tree_from_clusters(cs));
  for (const auto& cs : enumerate_semi_labeled_trees({a, b, c, d})) big.push_back(tree_from_clusters(cs));
  std::size_t yes = 0;
  for (const auto& s : small) {
    for (const auto& t : big) {
      const bool fast = ancestrally_displays(t, s);
      REQUIRE(fast == brute_displays(t, s));
      if (s.fully_labeled() && s.singularly_labeled()) CHECK(fast == pairs_contained(t, s));
      yes += fast;
    }
  }
  CHECK(yes > 0);
  CHECK(yes < small.size() * big.size());

  // And on random pairs sharing a universe.
  LabelUniverse w;
  const auto trees = random_trees(120, 7, w);
  for (std::size_t i = 0; i + 1 < trees.size(); i += 2) {
    CHECK(ancestrally_displays(trees[i], trees[i + 1]) == brute_displays(trees[i], trees[i + 1]));
    const auto ls = trees[i].label_set();
    const auto r = restrict_to(trees[i], std::vector<LabelId>(ls.begin(), ls.begin() + static_cast<std::ptrdiff_t>((ls.size() + 1) / 2)));
    CHECK(ancestrally_displays(trees[i], r));
    CHECK(brute_displays(trees[i], r));
  }
}

TEST_CASE("profile size and degree sum") {
  const Profile p = test::profile_of({"(a,b)c;", "((a,b,d)e)c;"});
  CHECK(p.size() == 5 + 9);
  CHECK(p.degree_square_sum() == 4 + 1 + 16);  // degree counts the parent edge
  CHECK(p.label_set().size() == 5);
}
