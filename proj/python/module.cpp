// Python bindings over the counting and decomposition core. Everything
// speaks text: instances travel as CNF / cspneg strings, decompositions as
// JSON documents, counts as decimal strings (they outgrow machine ints).
#include <optional>
#include <stdexcept>
#include <string>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dbcount/bigcount.hpp"
#include "dbcount/classify.hpp"
#include "dbcount/counter.hpp"
#include "dbcount/decomposer.hpp"
#include "dbcount/formats.hpp"
#include "dbcount/generator.hpp"
#include "dbcount/hypergraph.hpp"
#include "dbcount/relation.hpp"

namespace py = pybind11;
using namespace dbcount;

namespace {

// Raised when a requested root admits no decomposition; translated to the
// same Python exception as the component-level failure.
struct RootNotDecomposable {
  std::string message;
};

CspNegInstance instance_of(const std::string& text) { return to_instance(parse_auto(text)); }

std::string count_text(const std::string& text) {
  return to_string(count_models(instance_of(text)));
}

std::string brute_count_text(const std::string& text) {
  return to_string(brute_force_count(instance_of(text)));
}

std::string decompose_text(const std::string& text, std::optional<int> root) {
  CspNegInstance inst = instance_of(text);
  Hypergraph h = hypergraph_of(to_disjunctive(inst));
  if (h.edge_count() == 0)
    throw std::invalid_argument("the instance has no constraints to decompose");
  if (root.has_value()) {
    if (*root < 0 || *root >= static_cast<int>(h.edge_count()))
      throw std::invalid_argument("unknown edge id " + std::to_string(*root) +
                                  "; the instance has edges 0.." +
                                  std::to_string(h.edge_count() - 1));
    DbOutcome out = compute_db(h, *root);
    if (!out.ok())
      throw RootNotDecomposable{"no decomposition rooted at edge " + std::to_string(*root) +
                                ": " + to_string(out.reason)};
    return write_decomposition(*out.tree, h);
  }
  DecompositionSearch found = find_decomposition(h);
  if (!found.ok()) throw NotDecomposable(*found.failed_component);
  return write_decomposition(glue_decompositions(found.trees), h);
}

bool check_text(const std::string& instance_text, const std::string& decomposition_text) {
  CspNegInstance inst = instance_of(instance_text);
  DecompositionDocument doc = read_decomposition_schema(decomposition_text);
  Hypergraph h = hypergraph_of(to_disjunctive(inst));
  std::optional<Decomposition> d = match_decomposition(doc, h);
  if (!d) return false;
  try {
    return is_join_tree(h, *d) && is_disjoint_branches(h, *d);
  } catch (const std::invalid_argument&) {
    return false;
  }
}

py::dict classify_text(const std::string& text) {
  CspNegInstance inst = instance_of(text);
  Hypergraph h = hypergraph_of(to_disjunctive(inst));
  const bool with_beta = h.edge_count() <= 15;
  AcyclicityReport rep = classify(h, with_beta);

  py::dict out;
  out["edges"] = h.edge_count();
  out["vertices"] = h.vertex_count();
  out["free_variables"] = inst.free_variable_count();
  out["alpha"] = rep.alpha;
  out["beta"] = rep.beta.has_value() ? py::cast(*rep.beta) : py::none();
  out["gamma"] = rep.gamma;
  out["disjoint_branches"] = rep.disjoint_branches;
  out["join_path"] = rep.join_path;
  return out;
}

py::tuple generate_text(std::uint64_t seed, int edges, int max_edge_size, int branching,
                        int tuples_min, int tuples_max, const std::string& fmt) {
  if (fmt != "cnf" && fmt != "cspneg")
    throw std::invalid_argument("format must be 'cnf' or 'cspneg'");
  GeneratorConfig cfg;
  cfg.seed = seed;
  cfg.edge_count = edges;
  cfg.max_edge_size = max_edge_size;
  cfg.branching = branching;
  cfg.tuples_min = tuples_min;
  cfg.tuples_max = tuples_max;
  GeneratedInstance gen = gen_db_instance(cfg);

  std::string instance_text =
      fmt == "cnf" ? write_dimacs(gen.instance) : write_cspneg(gen.instance);
  Hypergraph h = hypergraph_of(to_disjunctive(gen.instance));
  return py::make_tuple(instance_text, write_decomposition(gen.witness, h));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "exact model counting for instances with disjoint-branches "
            "decomposable hypergraphs";

  static py::exception<NotDecomposable> not_decomposable(m, "NotDecomposableError");
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const NotDecomposable& e) {
      PyErr_SetString(not_decomposable.ptr(), e.what());
    } catch (const RootNotDecomposable& e) {
      PyErr_SetString(not_decomposable.ptr(), e.message.c_str());
    }
  });

  m.def("count", &count_text, py::arg("text"),
        "Exact model count of a CNF/cspneg string, as a decimal string. "
        "Raises NotDecomposableError when some component has no "
        "disjoint-branches decomposition.");
  m.def("brute_count", &brute_count_text, py::arg("text"),
        "Model count by enumeration (guarded to 24 variables), as a decimal "
        "string.");
  m.def("decompose", &decompose_text, py::arg("text"), py::arg("root") = py::none(),
        "Disjoint-branches decomposition as a JSON document; `root` pins the "
        "root edge id.");
  m.def("check", &check_text, py::arg("instance_text"), py::arg("decomposition_text"),
        "True when the document is a disjoint-branches decomposition of the "
        "instance's hypergraph.");
  m.def("classify", &classify_text, py::arg("text"),
        "Acyclicity report: alpha, beta (None above the 15-edge guard), "
        "gamma, disjoint_branches, join_path, plus sizes.");
  m.def("generate", &generate_text, py::arg("seed") = 1, py::arg("edges") = 1,
        py::arg("max_edge_size") = 3, py::arg("branching") = 2, py::arg("tuples_min") = 1,
        py::arg("tuples_max") = 2, py::arg("format") = "cnf",
        "Deterministic decomposable instance: returns (instance_text, "
        "witness_decomposition_json).");
}
