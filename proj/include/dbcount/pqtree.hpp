#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dbcount/hypergraph.hpp"

namespace dbcount {

// PQF-trees represent sets of leaf orderings (frontiers):
//   P: children permute freely          (>= 2 children)
//   Q: stored order or its reversal     (>= 3 children)
//   F: stored order only                (>= 2 children)
// Normal form additionally bans F-nodes with F-node children and any
// single-child internal node.
enum class NodeKind { leaf, P, Q, F };

struct PQFNode {
  NodeKind kind = NodeKind::leaf;
  EdgeId leaf = -1;            // valid iff kind == leaf
  std::vector<int> children;   // node ids, in stored order
};

struct PQFTree {
  std::vector<PQFNode> nodes;
  int root = -1;

  int add(PQFNode n);
  static PQFTree single_leaf(EdgeId e);

  const PQFNode& at(int id) const { return nodes[id]; }
  bool empty() const { return root < 0; }

  std::vector<EdgeId> frontier() const;             // leftmost frontier
  std::vector<EdgeId> leaves_under(int id) const;   // frontier order
  std::vector<EdgeId> leaf_set() const;             // sorted
  bool has_f_nodes() const;

  // Structural invariants: arities, normal form, distinct leaves.
  bool valid() const;
};

// Subtree designator: the full subtree at a leaf or P node, or a child range
// [lo, hi] (0-based, inclusive, lo < hi unless the ref is a leaf) of a Q/F
// node. A full-range Q/F ref keeps the node's own reversal semantics.
struct PQFSubtreeRef {
  int node = -1;
  int lo = 0;
  int hi = -1;

  bool operator==(const PQFSubtreeRef&) const = default;
};

PQFSubtreeRef full_ref(const PQFTree& t, int node);

// Rebuilds the tree bottom-up into normal form: splices F-children of
// F-nodes and single-child nodes, renormalizes 2-child Q-nodes to P, sorts
// P children by smallest descendant leaf id, and drops unreachable arena
// entries. Frontier-set preserving.
PQFTree normalized(const PQFTree& t);

// PQ-tree of all join-path orders of the subhypergraph (union of a, a):
// frontiers are exactly the edge orders in which every vertex's edge set is
// consecutive. Returns nullopt when no such order exists. The result has no
// F-nodes. Throws std::invalid_argument when a is empty or names unknown
// edges.
std::optional<PQFTree> build_pq_tree(const Hypergraph& h, const std::vector<EdgeId>& a);

// Test oracle: materializes the frontier set. Throws std::invalid_argument
// when the set would exceed the desk-scale guard (~10^4).
std::set<std::vector<EdgeId>> enumerate_frontiers(const PQFTree& t);
std::set<std::vector<EdgeId>> enumerate_frontiers(const PQFTree& t, const PQFSubtreeRef& s);

// Deepest subtree whose leaf set is exactly A = { leaf e | vset ⊆ e }.
// Throws std::invalid_argument when A is empty, std::logic_error when the
// tree is not consistent with vset (no exact subtree exists).
PQFSubtreeRef locate_subtree(const PQFTree& t, const Hypergraph& h,
                             const std::vector<VertexId>& vset);

// Suffix restriction: F(result) = { l1 l2 in F(t) | l2 in F(s) } — the
// leaves of s forced to the end of the frontier, internally ordered by s.
// Returns nullopt when that set is empty.
std::optional<PQFTree> force(const PQFTree& t, const PQFSubtreeRef& s);

// Same restriction applied inside the block of s: frontiers of t where the
// contiguous block of s's leaves ends with r's leaves ordered by r. Requires
// r to designate a subtree within s.
std::optional<PQFTree> force_within(const PQFTree& t, const PQFSubtreeRef& s,
                                    const PQFSubtreeRef& r);

// Keeps only frontiers in which the leaves meeting vset appear in
// inclusion-nondecreasing order of their traces (e ∩ vset). Precondition
// (caller-checked): those traces form an inclusion chain. No-op when no leaf
// meets vset.
std::optional<PQFTree> restrict_inclusion_order(const PQFTree& t, const Hypergraph& h,
                                                const std::vector<VertexId>& vset);

// Debug serialization, e.g. "(P 0 (Q 1 2 3))"; leaves print their EdgeId.
std::string to_debug_string(const PQFTree& t);
PQFTree parse_debug_tree(const std::string& s);  // test fixtures; throws on malformed input

}  // namespace dbcount
