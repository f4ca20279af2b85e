#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "ancestral/tree.hpp"

namespace ancestral {

enum class Family {
  kRandom,    // random attachment, labeled internals, some unlabeled groupings
  kBinary,    // binary shape, labels on leaves only
  kTaxonomy,  // labeled ranks with very wide genera
};

Family parse_family(const std::string& name);
std::string family_name(Family f);

struct GenerateOptions {
  std::size_t labels = 10;
  std::size_t trees = 3;
  std::uint64_t seed = 1;
  bool conflict = false;
  Family family = Family::kRandom;
  /// Probability that a label enters a given tree.
  double coverage = 0.6;
  /// Taxonomy only: species per genus.
  std::size_t genus_size = 1000;
};

/// Portable bounded draws on top of mt19937_64 (the standard distributions
/// are not reproducible across library implementations).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform in [0, n).
  std::uint64_t below(std::uint64_t n);
  /// True with probability p.
  bool chance(double p);
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// The tree the profile is cut from.
SemiLabeledTree generate_master(const GenerateOptions& options, LabelUniverse& labels, Rng& rng);

/// k restrictions of a random master tree, so compatible unless `conflict`
/// swaps two comparable labels in one tree.
Profile generate_profile(const GenerateOptions& options);

}  // namespace ancestral
