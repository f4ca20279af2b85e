#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ancestral/generate.hpp"

namespace ancestral {

struct BenchRecord {
  std::string id;
  std::size_t m_p = 0;
  std::uint64_t tau_p = 0;
  double millis = 0;
  bool compatible = false;
};

struct BenchOptions {
  std::vector<std::size_t> sizes;  // target M_P per instance
  std::uint64_t seed = 1;
  Family family = Family::kRandom;
  std::size_t trees = 4;
};

/// Generator settings whose profile has M_P close to `target`.
GenerateOptions sized_options(std::size_t target, Family family, std::size_t trees, std::uint64_t seed);

/// Times run_build only; generation is excluded.
BenchRecord bench_one(const std::string& id, const Profile& profile);
std::vector<BenchRecord> run_bench(const BenchOptions& options);

void write_bench_csv(const std::vector<BenchRecord>& records, std::ostream& out);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ancestral
