#pragma once

#include <cstdint>
#include <optional>

#include "dbcount/hypergraph.hpp"
#include "dbcount/relation.hpp"

namespace dbcount {

// Knobs for gen_db_instance. All bounds must be positive; a config with more
// than one edge needs max_edge_size >= 2 so a child can hold a parent vertex
// plus a fresh one. Identical configs produce identical instances.
struct GeneratorConfig {
  std::uint64_t seed = 1;
  int edge_count = 1;
  int max_edge_size = 3;
  int branching = 2;     // children per node, at most
  int tuples_min = 1;    // forbidden tuples per relation, clamped to the
  int tuples_max = 2;    //   2^arity distinct possibilities
};

struct GeneratedInstance {
  CspNegInstance instance;
  Decomposition witness;  // over the ids of hypergraph_of(to_disjunctive(instance))
};

// Random instance that is decomposable by construction: a rooted tree of
// edges grown top-down, each child claiming a nonempty slice of its parent's
// unclaimed vertices plus at least one fresh vertex. Claims never overlap
// and fresh vertices are never reused, so sibling subtrees stay disjoint;
// the witness tree is re-checked against both validators before returning.
// Every relation gets a random set of distinct forbidden tuples. Throws
// std::invalid_argument on out-of-range config fields.
GeneratedInstance gen_db_instance(const GeneratorConfig& cfg);

// Brute-force completeness oracle: enumerates every rooted labeled tree on
// the edges of h (all Pruefer sequences, each rooted at every edge — or only
// at the given root) and returns the first that passes both is_join_tree and
// is_disjoint_branches, else nothing. Guarded: throws std::invalid_argument
// above 6 edges, std::out_of_range on an unknown root.
std::optional<Decomposition> exhaustive_db_search(const Hypergraph& h,
                                                  std::optional<EdgeId> root = std::nullopt);

// The star family: n wide edges {y_i, x_1..x_n} plus the n singletons {x_i},
// with x_i = 0..n-1 and y_i = n..2n-1. Decomposable from any root, yet its
// incidence graph has unbounded treewidth as n grows.
Hypergraph make_hn(int n);

}  // namespace dbcount
