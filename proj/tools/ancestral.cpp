#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "ancestral/bench.hpp"
#include "ancestral/build.hpp"
#include "ancestral/display_graph.hpp"
#include "ancestral/generate.hpp"
#include "ancestral/newick.hpp"
#include "ancestral/oracle.hpp"

namespace {

using namespace ancestral;

constexpr int kError = 2;

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

int check(const std::string& path, bool trace, const std::string& dump_graph) {
  const Profile p = read_profile_file(path);
  if (!dump_graph.empty()) {
    const Profile ext = add_distinct_labels(p);
    auto out = open_output(dump_graph);
    write_edge_list(DisplayGraph::build(ext), ext.labels, out);
  }
  TraceObserver observer(std::cerr);
  BuildOptions options;
  if (trace) options.observer = &observer;
  const BuildOutcome outcome = run_build(p, options);
  if (outcome.compatible()) {
    std::cout << "COMPATIBLE\n" << write_newick(outcome.tree(), outcome.labels, true) << '\n';
    return 0;
  }
  // Synthetic labels mean nothing to the caller; fall back to them only if
  // nothing else is left.
  std::vector<std::string> names, synthetic;
  for (LabelId l : outcome.witness()) {
    (outcome.labels.synthetic(l) ? synthetic : names).push_back(outcome.labels.name(l));
  }
  if (names.empty()) names = synthetic;
  std::sort(names.begin(), names.end());
  std::cout << "INCOMPATIBLE\n{";
  for (std::size_t i = 0; i < names.size(); ++i) std::cout << (i ? "," : "") << newick_quote(names[i]);
  std::cout << "}\n";
  return 1;
}

int verify(const std::string& profile_path, const std::string& tree_path) {
  Profile p = read_profile_file(profile_path);
  const SemiLabeledTree t = read_tree_file(tree_path, p.labels);
  if (auto v = validate(t)) throw std::invalid_argument(tree_path + ": " + v->message);
  if (const auto bad = verify_output(p, t)) {
    std::cout << "FAIL " << describe(*bad, p.labels) << '\n';
    return 1;
  }
  std::cout << "OK\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ancestral compatibility of semi-labeled trees"};
  app.require_subcommand(1);

  std::string profile, tree, dump_graph, output;
  bool trace = false;
  auto* check_cmd = app.add_subcommand("check", "decide compatibility and print a supertree");
  check_cmd->add_option("profile", profile, "one Newick tree per line")->required();
  check_cmd->add_flag("--trace", trace, "print engine activations to stderr");
  check_cmd->add_option("--dump-graph", dump_graph, "write the display graph as an edge list");

  auto* verify_cmd = app.add_subcommand("verify", "check that a tree ancestrally displays a profile");
  verify_cmd->add_option("profile", profile)->required();
  verify_cmd->add_option("tree", tree, "Newick; several labels on a node are joined by '+'")->required();

  GenerateOptions gen;
  std::string family = "random";
  auto* gen_cmd = app.add_subcommand("gen", "write a random profile");
  gen_cmd->add_option("--labels", gen.labels)->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--trees", gen.trees)->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.seed)->required();
  gen_cmd->add_flag("--conflict", gen.conflict, "swap two comparable labels in one tree");
  gen_cmd->add_option("--family", family)->check(CLI::IsMember({"random", "binary", "taxonomy"}));
  gen_cmd->add_option("--coverage", gen.coverage)->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("-o", output)->required();

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "time the engine on generated profiles");
  bench_cmd->add_option("--sizes", bench.sizes, "target M_P values")->required()->delimiter(',');
  bench_cmd->add_option("--seed", bench.seed)->required();
  bench_cmd->add_option("--family", family)->check(CLI::IsMember({"random", "binary", "taxonomy"}));
  bench_cmd->add_option("--trees", bench.trees)->check(CLI::PositiveNumber);
  bench_cmd->add_option("-o", output)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kError;
  }

  try {
    if (*check_cmd) return check(profile, trace, dump_graph);
    if (*verify_cmd) return verify(profile, tree);
    if (*gen_cmd) {
      gen.family = parse_family(family);
      auto out = open_output(output);
      write_profile(generate_profile(gen), out);
      return 0;
    }
    if (*bench_cmd) {
      bench.family = parse_family(family);
      const auto records = run_bench(bench);
      auto out = open_output(output);
      write_bench_csv(records, out);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return kError;
}
