#include <algorithm>
#include <set>

#include "ancestral/build.hpp"
#include "ancestral/oracle.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace ancestral;

namespace {

// Every singularly labeled semi-labeled tree whose label set is a nonempty
// subset of `all`.
std::vector<SemiLabeledTree> input_trees(const std::vector<LabelId>& all) {
  std::vector<SemiLabeledTree> out;
  for (unsigned mask = 1; mask < (1u << all.size()); ++mask) {
    std::vector<LabelId> subset;
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (mask & (1u << i)) subset.push_back(all[i]);
    }
    for (const auto& cs : enumerate_semi_labeled_trees(subset)) {
      auto t = tree_from_clusters(cs);
      if (t.singularly_labeled()) out.push_back(std::move(t));
    }
  }
  return out;
}

std::vector<LabelId> random_subset(const std::vector<LabelId>& ls, Rng& rng) {
  std::vector<LabelId> out;
  for (LabelId l : ls) {
    if (rng.chance(0.5)) out.push_back(l);
  }
  if (out.empty()) out.push_back(ls[rng.below(ls.size())]);
  return out;
}

}  // namespace

TEST_CASE("enumeration of semi-labeled trees") {
  LabelUniverse u;
  const LabelId a = u.intern("a"), b = u.intern("b"), c = u.intern("c");
  CHECK(enumerate_semi_labeled_trees({a}).size() == 1);
  // a over b, b over a, one node {a,b}, unlabeled root over a and b.
  CHECK(enumerate_semi_labeled_trees({a, b}).size() == 4);
  const auto three = enumerate_semi_labeled_trees({a, b, c});
  CHECK(std::set<ClusterSet>(three.begin(), three.end()).size() == three.size());
  for (const auto& cs : three) {
    const auto t = tree_from_clusters(cs);
    CHECK_FALSE(validate(t));
    CHECK(t.node_count() <= 5);
    CHECK(clusters(t) == cs);
    CHECK(t.label_set() == std::vector<LabelId>{a, b, c});
  }
  LabelUniverse big;
  std::vector<LabelId> six;
  for (const char* n : {"a", "b", "c", "d", "e", "f"}) six.push_back(big.intern(n));
  CHECK_THROWS_AS(enumerate_semi_labeled_trees(six), std::invalid_argument);
}

TEST_CASE("small verdicts from each oracle") {
  const Profile bad = test::profile_of({"(b)a;", "(a)b;"});
  CHECK_FALSE(naive_build(bad).compatible);
  CHECK_FALSE(exhaustive_compatible(bad).compatible);
  const Profile one = test::profile_of({"((a,b)c,d)e;"});
  CHECK(naive_build(one).compatible);
  CHECK(exhaustive_compatible(one).compatible);

  const Profile fig = read_profile_file(test::fixture("figure1.nwk"));
  const auto v = naive_build(fig);
  REQUIRE(v.compatible);
  CHECK_FALSE(verify_output(fig, *v.witness_tree));
}

TEST_CASE("verify_output") {
  Profile p = read_profile_file(test::fixture("figure1.nwk"));
  const auto fig2 = read_tree_file(test::fixture("figure2.nwk"), p.labels);
  CHECK_FALSE(verify_output(p, fig2));

  // A star over L(P) loses every ancestor relation.
  Profile q = test::profile_of({"(b)a;", "c;"});
  SemiLabeledTree star;
  const NodeId r = star.add_root();
  for (LabelId l : q.label_set()) star.add_label(star.add_child(r), l);
  const auto bad = verify_output(q, star);
  REQUIRE(bad);
  CHECK(bad->tree == 0);
  CHECK(bad->violation.kind == DisplayViolation::Kind::kMissingDescendant);
  CHECK(bad->violation.first == test::id(q, "a"));
  CHECK(bad->violation.second == test::id(q, "b"));
  CHECK(describe(*bad, q.labels) == "tree 1: b must be a proper descendant of a");

  const Profile r2 = test::profile_of({"(b)a;"});
  const auto missing = verify_output(test::profile_of({"(b)a;", "(c)a;"}), r2.trees[0]);
  REQUIRE(missing);
  CHECK(missing->violation.kind == DisplayViolation::Kind::kMissingLabel);
}

TEST_CASE("exhaustive sweep: all two-tree profiles over three labels") {
  Profile base;
  const std::vector<LabelId> all{base.labels.intern("a"), base.labels.intern("b"), base.labels.intern("c")};
  const auto trees = input_trees(all);
  std::size_t count = 0, yes = 0;
  for (const auto& t1 : trees) {
    for (const auto& t2 : trees) {
      Profile p{base.labels, {t1, t2}};
      const bool truth = exhaustive_compatible(p).compatible;
      const auto fast = run_build(p);
      INFO(write_newick(t1, p.labels), " ", write_newick(t2, p.labels));
      REQUIRE(fast.compatible() == truth);
      REQUIRE(naive_build(p).compatible == truth);
      if (truth) CHECK_FALSE(verify_output(p, fast.tree()));
      ++count;
      yes += truth;
    }
  }
  CHECK(count == trees.size() * trees.size());
  CHECK(yes > 0);
  CHECK(yes < count);
}

TEST_CASE("exhaustive agrees on random profiles over at most five labels") {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    const Profile p = test::small_profile(seed, 5, 3, seed % 2 == 0);
    if (p.label_set().size() > 5) continue;
    const bool truth = exhaustive_compatible(p).compatible;
    CHECK(run_build(p).compatible() == truth);
  }
}

TEST_CASE("adding distinct labels preserves the verdict") {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    const Profile p = test::small_profile(seed, 12, 4, seed % 3 == 0);
    const Profile full = add_distinct_labels(p);
    const auto v = naive_build(p);
    const auto w = naive_build(full);
    REQUIRE(v.compatible == w.compatible);
    if (w.compatible) {
      // The witness for the full profile, synthetic labels stripped, displays P.
      std::vector<LabelId> keep = p.label_set();
      const auto stripped = restrict_to(*w.witness_tree, keep);
      CHECK_FALSE(verify_output(p, stripped));
      CHECK_FALSE(verify_output(full, *w.witness_tree));
    }
  }
}

TEST_CASE("restrictions of a witness display restricted profiles") {
  Rng rng(77);
  std::size_t checked = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const Profile p = test::small_profile(seed, 20, 4, false);
    const auto r = run_build(p);
    REQUIRE(r.compatible());
    const auto ls = p.label_set();
    for (int k = 0; k < 10; ++k) {
      const auto x = random_subset(ls, rng);
      const Profile px = restrict_profile(p, x);
      CHECK_FALSE(verify_output(px, restrict_to(r.tree(), x)));
      ++checked;
    }
  }
  CHECK(checked == 2000);
}

TEST_CASE("restrict_profile drops trees that miss X") {
  const Profile p = test::profile_of({"(b)a;", "(d)c;"});
  const Profile x = restrict_profile(p, test::ids(p, {"a", "b"}));
  REQUIRE(x.trees.size() == 1);
  CHECK(x.trees[0].label_count() == 2);
}
