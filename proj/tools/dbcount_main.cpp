#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "dbcount/bigcount.hpp"
#include "dbcount/classify.hpp"
#include "dbcount/counter.hpp"
#include "dbcount/decomposer.hpp"
#include "dbcount/formats.hpp"
#include "dbcount/generator.hpp"
#include "dbcount/hypergraph.hpp"
#include "dbcount/relation.hpp"

using namespace dbcount;

namespace {

// Exit codes: 0 success, 1 unreadable or invalid input, 2 structurally
// sound input that admits no (requested) decomposition or fails a check.
constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kNegative = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
}

CspNegInstance load_instance(const std::string& path) {
  return to_instance(parse_auto(read_file(path)));
}

int run_count(const std::string& path, bool brute, const std::string& decomposition_path) {
  CspNegInstance inst = load_instance(path);
  if (brute) {
    std::cout << to_string(brute_force_count(inst)) << "\n";
    return kOk;
  }
  if (!decomposition_path.empty()) {
    if (inst.unsatisfiable()) {
      std::cout << "0\n";
      return kOk;
    }
    DecompositionDocument doc = read_decomposition_document(read_file(decomposition_path));
    DisjunctiveInstance psi = to_disjunctive(inst);
    Hypergraph h = hypergraph_of(psi);
    std::string why;
    std::optional<Decomposition> d = match_decomposition(doc, h, &why);
    if (!d) {
      std::cerr << "error: decomposition does not describe this instance: " << why << "\n";
      return kInputError;
    }
    BigCount avoid = pow2(psi.variables.size()) - count_disjunctive(psi, *d);
    std::cout << to_string(avoid * pow2(inst.free_variable_count())) << "\n";
    return kOk;
  }
  try {
    std::cout << to_string(count_models(inst)) << "\n";
  } catch (const NotDecomposable& e) {
    std::cout << "NOT_DECOMPOSABLE component=" << e.component << "\n";
    return kNegative;
  }
  return kOk;
}

int run_decompose(const std::string& path, std::optional<int> root) {
  CspNegInstance inst = load_instance(path);
  DisjunctiveInstance psi = to_disjunctive(inst);
  Hypergraph h = hypergraph_of(psi);
  if (h.edge_count() == 0) {
    std::cerr << "error: the instance has no constraints to decompose\n";
    return kInputError;
  }
  Decomposition d{0, {}};
  if (root.has_value()) {
    if (*root < 0 || *root >= static_cast<int>(h.edge_count())) {
      std::cerr << "error: unknown edge id " << *root << "; the instance has edges 0.."
                << h.edge_count() - 1 << "\n";
      return kInputError;
    }
    DbOutcome out = compute_db(h, *root);
    if (!out.ok()) {
      std::cerr << "no decomposition rooted at edge " << *root << ": " << to_string(out.reason)
                << "\n";
      std::cout << "NOT_DECOMPOSABLE root=" << *root << "\n";
      return kNegative;
    }
    d = std::move(*out.tree);
  } else {
    DecompositionSearch found = find_decomposition(h);
    if (!found.ok()) {
      std::cout << "NOT_DECOMPOSABLE component=" << *found.failed_component << "\n";
      return kNegative;
    }
    d = glue_decompositions(found.trees);
  }
  std::cout << write_decomposition(d, h);
  return kOk;
}

int run_check(const std::string& instance_path, const std::string& decomposition_path) {
  CspNegInstance inst = load_instance(instance_path);
  DecompositionDocument doc = read_decomposition_schema(read_file(decomposition_path));
  Hypergraph h = hypergraph_of(to_disjunctive(inst));

  std::string why;
  std::optional<Decomposition> d = match_decomposition(doc, h, &why);
  bool ok = false;
  if (d) {
    try {
      ok = is_join_tree(h, *d) && is_disjoint_branches(h, *d);
      if (!ok) why = "the tree violates a decomposition predicate";
    } catch (const std::invalid_argument& e) {
      why = e.what();
    }
  }
  if (ok) {
    std::cout << "OK\n";
    return kOk;
  }
  std::cerr << "check failed: " << why << "\n";
  std::cout << "FAIL\n";
  return kNegative;
}

int run_classify(const std::string& path) {
  CspNegInstance inst = load_instance(path);
  Hypergraph h = hypergraph_of(to_disjunctive(inst));
  const bool with_beta = h.edge_count() <= 15;
  AcyclicityReport rep = classify(h, with_beta);

  auto yn = [](bool b) { return b ? "true" : "false"; };
  std::cout << "edges=" << h.edge_count() << " vertices=" << h.vertex_count()
            << " free_variables=" << inst.free_variable_count() << "\n";
  std::cout << "alpha=" << yn(rep.alpha) << "\n";
  if (rep.beta.has_value())
    std::cout << "beta=" << yn(*rep.beta) << "\n";
  else
    std::cout << "beta=skipped (edge count above the subset-test guard)\n";
  std::cout << "gamma=" << yn(rep.gamma) << "\n";
  std::cout << "disjoint_branches=" << yn(rep.disjoint_branches) << "\n";
  std::cout << "join_path=" << yn(rep.join_path) << "\n";
  return kOk;
}

int run_gen(const GeneratorConfig& cfg, const std::string& format, const std::string& out_path,
            std::string witness_path) {
  GeneratedInstance gen = gen_db_instance(cfg);
  if (witness_path.empty()) witness_path = out_path + ".decomposition.json";

  write_file(out_path, format == "cnf" ? write_dimacs(gen.instance) : write_cspneg(gen.instance));
  Hypergraph h = hypergraph_of(to_disjunctive(gen.instance));
  write_file(witness_path, write_decomposition(gen.witness, h));

  std::cerr << "generated " << gen.instance.constraints().size() << " relations over "
            << gen.instance.variable_count() << " variables (seed " << cfg.seed << ") -> "
            << out_path << ", witness -> " << witness_path << "\n";
  return kOk;
}

int run_brute(const std::string& path) {
  std::cout << to_string(brute_force_count(load_instance(path))) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact model counting for CNF / negative CSP instances whose hypergraphs have "
               "disjoint-branches decompositions"};
  app.require_subcommand(1);

  std::string path, decomposition_path, instance_path;
  bool brute = false;
  int root = -1;

  CLI::App* count = app.add_subcommand(
      "count", "print the exact model count, or NOT_DECOMPOSABLE component=<k> (exit 2)");
  count->add_option("instance", path, "CNF or cspneg file")->required();
  count->add_flag("--brute", brute, "force the enumeration oracle (guarded to 24 variables)");
  count->add_option("--decomposition", decomposition_path,
                    "use this decomposition document instead of searching");

  CLI::App* decompose = app.add_subcommand(
      "decompose", "print a disjoint-branches decomposition as JSON, or exit 2");
  decompose->add_option("instance", path, "CNF or cspneg file")->required();
  decompose->add_option("--root", root, "edge id the decomposition must be rooted at");

  CLI::App* check = app.add_subcommand(
      "check", "print OK when the document is a disjoint-branches decomposition of the "
               "instance, else FAIL (exit 2)");
  check->add_option("instance", instance_path, "CNF or cspneg file")->required();
  check->add_option("decomposition", decomposition_path, "decomposition document")->required();

  CLI::App* classify_cmd = app.add_subcommand(
      "classify", "report where the instance's hypergraph sits in the acyclicity hierarchy");
  classify_cmd->add_option("instance", path, "CNF or cspneg file")->required();

  GeneratorConfig cfg;
  std::string format = "cnf", out_path, witness_path;
  CLI::App* gen = app.add_subcommand(
      "gen", "generate a decomposable instance plus its witness decomposition");
  gen->add_option("--seed", cfg.seed, "rng seed (default 1)");
  gen->add_option("--edges", cfg.edge_count, "number of relations (default 1)");
  gen->add_option("--max-edge-size", cfg.max_edge_size, "largest scope (default 3)");
  gen->add_option("--branching", cfg.branching, "children per tree node, at most (default 2)");
  gen->add_option("--tuples-min", cfg.tuples_min, "fewest forbidden tuples per relation");
  gen->add_option("--tuples-max", cfg.tuples_max, "most forbidden tuples per relation");
  gen->add_option("--format", format, "instance format (default cnf)")
      ->check(CLI::IsMember({"cnf", "cspneg"}));
  gen->add_option("--out", out_path, "instance file to write")->required();
  gen->add_option("--witness", witness_path,
                  "witness file to write (default: <out>.decomposition.json)");

  CLI::App* brute_cmd = app.add_subcommand(
      "brute-count", "print the model count by enumeration (guarded to 24 variables)");
  brute_cmd->add_option("instance", path, "CNF or cspneg file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (count->parsed()) return run_count(path, brute, decomposition_path);
    if (decompose->parsed())
      return run_decompose(path, decompose->count("--root") ? std::optional<int>(root)
                                                            : std::nullopt);
    if (check->parsed()) return run_check(instance_path, decomposition_path);
    if (classify_cmd->parsed()) return run_classify(path);
    if (gen->parsed()) return run_gen(cfg, format, out_path, witness_path);
    if (brute_cmd->parsed()) return run_brute(path);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kOk;
}
