#include <sstream>

#include "ancestral/bench.hpp"
#include "ancestral/build.hpp"
#include "ancestral/generate.hpp"
#include "ancestral/newick.hpp"
#include "ancestral/oracle.hpp"
#include "doctest.h"

using namespace ancestral;

namespace {

std::string text_of(const Profile& p) {
  std::ostringstream out;
  write_profile(p, out);
  return out.str();
}

}  // namespace

TEST_CASE("same seed gives the same file") {
  for (auto family : {Family::kRandom, Family::kBinary, Family::kTaxonomy}) {
    GenerateOptions g;
    g.family = family;
    g.labels = 500;
    g.trees = 4;
    g.seed = 9;
    g.genus_size = 40;
    CHECK(text_of(generate_profile(g)) == text_of(generate_profile(g)));
    g.conflict = true;
    CHECK(text_of(generate_profile(g)) == text_of(generate_profile(g)));
    const auto a = text_of(generate_profile(g));
    g.seed = 10;
    CHECK(a != text_of(generate_profile(g)));
  }
}

TEST_CASE("one label, one tree") {
  GenerateOptions g;
  g.labels = 1;
  g.trees = 1;
  const Profile p = generate_profile(g);
  REQUIRE(p.trees.size() == 1);
  CHECK(p.trees[0].node_count() == 1);
  CHECK(p.size() == 1);
}

TEST_CASE("generated trees are valid and compatible without conflict") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    for (auto family : {Family::kRandom, Family::kBinary, Family::kTaxonomy}) {
      GenerateOptions g;
      g.family = family;
      g.labels = 1 + seed * 3;
      g.trees = 1 + seed % 5;
      g.seed = seed;
      g.genus_size = 8;
      const Profile p = generate_profile(g);
      CHECK(p.trees.size() == g.trees);
      for (const auto& t : p.trees) CHECK_FALSE(validate(t));
      const auto r = run_build(p);
      REQUIRE(r.compatible());
      CHECK_FALSE(verify_output(p, r.tree()));
    }
  }
}

TEST_CASE("conflict usually breaks compatibility") {
  std::size_t broken = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    GenerateOptions g;
    g.labels = 40;
    g.trees = 3;
    g.seed = seed;
    g.conflict = true;
    broken += run_build(generate_profile(g)).compatible() ? 0 : 1;
  }
  CHECK(broken > 50);
}

TEST_CASE("bench CSV columns match recomputation") {
  BenchOptions o;
  o.sizes = {2000, 5000};
  o.seed = 3;
  for (auto family : {Family::kRandom, Family::kBinary, Family::kTaxonomy}) {
    o.family = family;
    const auto records = run_bench(o);
    REQUIRE(records.size() == 2);
    std::ostringstream csv;
    write_bench_csv(records, csv);
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "id,m_p,tau_p,millis,verdict");
    for (std::size_t i = 0; i < records.size(); ++i) {
      REQUIRE(std::getline(in, line));
      std::istringstream row(line);
      std::string id, mp, tau, ms, verdict;
      std::getline(row, id, ',');
      std::getline(row, mp, ',');
      std::getline(row, tau, ',');
      std::getline(row, ms, ',');
      std::getline(row, verdict, ',');
      const Profile p = generate_profile(sized_options(o.sizes[i], family, o.trees, o.seed + i));
      CHECK(std::stoull(mp) == p.size());
      CHECK(std::stoull(tau) == p.degree_square_sum());
      CHECK(verdict == "compatible");
      CHECK(std::stod(ms) >= 0);
      // Within 10% of the requested size.
      CHECK(static_cast<double>(p.size()) > 0.9 * static_cast<double>(o.sizes[i]));
      CHECK(static_cast<double>(p.size()) < 1.1 * static_cast<double>(o.sizes[i]));
    }
  }
}

TEST_CASE("loglog slope") {
  CHECK(loglog_slope({1, 10, 100}, {3, 30, 300}) == doctest::Approx(1.0));
  CHECK(loglog_slope({1, 10, 100}, {1, 100, 10000}) == doctest::Approx(2.0));
}
