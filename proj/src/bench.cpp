#include "ancestral/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "ancestral/build.hpp"

namespace ancestral {

GenerateOptions sized_options(std::size_t target, Family family, std::size_t trees, std::uint64_t seed) {
  GenerateOptions g;
  g.family = family;
  g.trees = trees;
  g.seed = seed;
  g.coverage = family == Family::kRandom ? 0.6 : 0.9;
  g.genus_size = 1500;
  // Each kept label costs about two units of M_P (a node and its edge). The
  // binary family adds as many unlabeled internal nodes again; the random
  // family's groupings and the unlabeled nodes restriction keeps above
  // them cost about a third more (measured).
  double extra = 1.0;
  if (family == Family::kBinary) extra = 2.0;
  if (family == Family::kRandom) extra = 1.31;
  const double per_label = 2.0 * g.coverage * static_cast<double>(trees) * extra;
  g.labels = std::max<std::size_t>(1, static_cast<std::size_t>(static_cast<double>(target) / per_label));
  return g;
}

BenchRecord bench_one(const std::string& id, const Profile& profile) {
  BenchRecord r;
  r.id = id;
  r.m_p = profile.size();
  r.tau_p = profile.degree_square_sum();
  const auto start = std::chrono::steady_clock::now();
  const auto outcome = run_build(profile);
  const auto stop = std::chrono::steady_clock::now();
  r.millis = std::chrono::duration<double, std::milli>(stop - start).count();
  r.compatible = outcome.compatible();
  return r;
}

std::vector<BenchRecord> run_bench(const BenchOptions& options) {
  std::vector<BenchRecord> out;
  for (std::size_t i = 0; i < options.sizes.size(); ++i) {
    const auto g = sized_options(options.sizes[i], options.family, options.trees, options.seed + i);
    out.push_back(bench_one(family_name(options.family) + "-" + std::to_string(i + 1), generate_profile(g)));
  }
  return out;
}

void write_bench_csv(const std::vector<BenchRecord>& records, std::ostream& out) {
  out << "id,m_p,tau_p,millis,verdict\n";
  for (const auto& r : records) {
    out << r.id << ',' << r.m_p << ',' << r.tau_p << ',' << r.millis << ','
        << (r.compatible ? "compatible" : "incompatible") << '\n';
  }
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope needs two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace ancestral
