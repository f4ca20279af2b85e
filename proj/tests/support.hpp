#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "ancestral/generate.hpp"
#include "ancestral/newick.hpp"
#include "ancestral/tree.hpp"

namespace test {

inline ancestral::Profile profile_of(const std::vector<std::string>& newicks) {
  ancestral::Profile p;
  for (const auto& s : newicks) p.trees.push_back(ancestral::parse_newick(s, p.labels));
  return p;
}

inline std::string fixture(const std::string& name) { return std::string(ANCESTRAL_FIXTURES) + "/" + name; }

inline ancestral::LabelId id(const ancestral::Profile& p, const std::string& name) { return *p.labels.find(name); }

inline std::vector<ancestral::LabelId> ids(const ancestral::Profile& p, const std::vector<std::string>& names) {
  std::vector<ancestral::LabelId> out;
  for (const auto& n : names) out.push_back(id(p, n));
  return out;
}

inline std::vector<std::string> names(const ancestral::LabelUniverse& u, const std::vector<ancestral::LabelId>& ls) {
  std::vector<std::string> out;
  for (auto l : ls) out.push_back(u.name(l));
  std::sort(out.begin(), out.end());
  return out;
}

/// Small random profile: up to `max_labels` labels, up to `max_trees` trees,
/// drawn from the random family, optionally with a conflict swap.
inline ancestral::Profile small_profile(std::uint64_t seed, std::size_t max_labels, std::size_t max_trees,
                                        bool conflict) {
  ancestral::Rng rng(seed * 7919 + 13);
  ancestral::GenerateOptions g;
  g.labels = 1 + rng.below(max_labels);
  g.trees = 1 + rng.below(max_trees);
  g.seed = seed;
  g.conflict = conflict;
  g.coverage = 0.4 + 0.5 * static_cast<double>(rng.below(100)) / 100.0;
  return ancestral::generate_profile(g);
}

}  // namespace test
