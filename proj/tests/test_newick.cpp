#include <sstream>

#include "ancestral/newick.hpp"
#include "ancestral/tree.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace ancestral;

namespace {

ParseError parse_error(const std::string& text) {
  LabelUniverse u;
  try {
    parse_newick(text, u);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("no error for " << text);
  return ParseError("", 0, 0);
}

}  // namespace

TEST_CASE("internal labels") {
  LabelUniverse u;
  const auto t = parse_newick("(a,b)c;", u);
  REQUIRE(t.node_count() == 3);
  REQUIRE(t.labels(t.root()).size() == 1);
  CHECK(u.name(t.labels(t.root())[0]) == "c");
  CHECK(t.children(t.root()).size() == 2);
  for (NodeId ch : t.children(t.root())) CHECK(t.is_leaf(ch));
  CHECK(write_newick(t, u) == "(a,b)c;");
}

TEST_CASE("unlabeled internals get synthetic labels") {
  Profile p = test::profile_of({"((a,b),(c,d));"});
  CHECK_FALSE(p.trees[0].fully_labeled());
  const Profile full = add_distinct_labels(p);
  CHECK(full.labels.synthetic_count() == 3);
  CHECK(full.trees[0].fully_labeled());
  CHECK(full.labels.size() == 7);
}

TEST_CASE("parse errors") {
  CHECK(parse_error("((a,b);").position() == 6);
  parse_error("(a,b)c");
  parse_error("");
  parse_error("(a,)b;");
  parse_error("(a,a)b;");
  parse_error("(a+b)c;");
  parse_error("((a))b;");  // unlabeled node with one child
  parse_error("(a,b)c;x");
  const auto e = parse_error("(a,b)c;;");
  CHECK(e.line() == 0);

  LabelUniverse u;
  const auto multi = parse_newick("(a+b)c;", u, true);
  CHECK(multi.labels(multi.children(multi.root())[0]).size() == 2);
}

TEST_CASE("quoting, comments, branch lengths") {
  LabelUniverse u;
  const auto t = parse_newick("('Homo sapiens':1.5,'it''s'[note]:2e-3)'Homininae';", u);
  CHECK(u.find("Homo sapiens"));
  CHECK(u.find("it's"));
  CHECK(u.find("Homininae"));
  CHECK(t.node_count() == 3);
  const std::string w = write_newick(t, u);
  CHECK(w == "('Homo sapiens','it''s')Homininae;");
  LabelUniverse v;
  CHECK(isomorphic(parse_newick(w, v), parse_newick(w, v)));
  CHECK(newick_quote("plain") == "plain");
  CHECK(newick_quote("a b") == "'a b'");
}

TEST_CASE("round trip on random trees") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const Profile p = test::small_profile(seed, 30, 3, false);
    for (const auto& t : p.trees) {
      LabelUniverse u = p.labels;
      const auto back = parse_newick(write_newick(t, p.labels), u);
      CHECK(u.size() == p.labels.size());
      CHECK(isomorphic(back, t));
      CHECK(clusters(back) == clusters(t));
    }
  }
}

TEST_CASE("write: single node and stripping") {
  const Profile one = test::profile_of({"a;"});
  CHECK(write_newick(one.trees[0], one.labels) == "a;");

  // Root chain made only of synthetic labels collapses onto its child.
  const Profile full = add_distinct_labels(test::profile_of({"(a,b);"}));
  CHECK(write_newick(full.trees[0], full.labels, true) == "(a,b);");
  LabelUniverse u = full.labels;
  SemiLabeledTree chain;
  const NodeId r = chain.add_root();
  chain.add_label(r, u.add_synthetic("_s"));
  const NodeId m = chain.add_child(r);
  chain.add_label(m, u.add_synthetic("_t"));
  const NodeId x = chain.add_child(m);
  chain.add_label(x, *u.find("a"));
  chain.add_label(chain.add_child(x), *u.find("b"));
  CHECK(write_newick(chain, u, true) == "(b)a;");
  CHECK(write_newick(chain, u) == "(((b)a)_t)_s;");
}

TEST_CASE("profile files") {
  std::istringstream in("# comment\n\n(a,b)c;\n((a)c,d);\n");
  const Profile p = read_profile(in);
  REQUIRE(p.trees.size() == 2);
  CHECK(p.labels.size() == 4);
  std::ostringstream out;
  write_profile(p, out);
  CHECK(out.str() == "(a,b)c;\n((a)c,d);\n");

  std::istringstream bad("(a,b)c;\n\n(a,(b)c;\n");
  try {
    read_profile(bad);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(read_profile_file("/nonexistent/profile.nwk"), std::runtime_error);
}
