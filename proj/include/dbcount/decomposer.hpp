#pragma once

#include <optional>
#include <vector>

#include "dbcount/hypergraph.hpp"

namespace dbcount {

// The recursive decomposition search has several distinct dead ends; tests
// (and humans reading rejections) want to know which one bit.
enum class RejectReason {
  empty_cover,        // a component of h minus the root has no edge covering the root's trace
  no_join_path,       // the cover set admits no join path at all
  trace_not_chain,    // some component sees incomparable traces on the cover set
  empty_restriction,  // the per-component ordering constraints are jointly unsatisfiable
  recursion_failure,  // a branch hypergraph is not rootable where the path demands
};

const char* to_string(RejectReason r);

// An ordered join path a1..ak over a designated edge set A. For every
// connected component C of the ambient hypergraph minus A, the traces
// a_i /\ V_C of edges meeting C never shrink along the list.
struct Separator {
  std::vector<EdgeId> order;
};

struct SeparatorOutcome {
  std::optional<Separator> separator;
  RejectReason reason = RejectReason::no_join_path;  // meaningful when !ok()
  bool ok() const { return separator.has_value(); }
};

// Orders the edges of a into a separator for h if one exists: builds the
// join-path tree of a, then folds in each component's ordering constraint.
// Rejects with no_join_path, trace_not_chain or empty_restriction. Throws
// std::invalid_argument on an empty a, std::out_of_range on unknown ids.
SeparatorOutcome compute_separator(const Hypergraph& h, const std::vector<EdgeId>& a);

// Checks the separator definition directly: p.order must be a permutation of
// a forming a join path of the sub-hypergraph on a, and every component of
// h minus a must see inclusion-nondecreasing traces along it.
bool validate_separator(const Hypergraph& h, const std::vector<EdgeId>& a, const Separator& p);

struct DbOutcome {
  std::optional<Decomposition> tree;
  RejectReason reason = RejectReason::empty_cover;  // meaningful when !ok()
  bool ok() const { return tree.has_value(); }
};

// Disjoint-branches decomposition of h rooted at root, or a structured
// reject when none rooted there exists. For each component of h minus the
// root: collect the edges covering the root's trace, order them into a
// separator hanging off the root, and recurse on the branch hypergraphs
// pinned to their last meeting separator edge. A disconnected h is handled
// by decomposing the root's component at root and hanging every other
// component beneath the root at any workable edge (cross-component branches
// are vertex-disjoint for free). Throws std::out_of_range on an unknown root.
DbOutcome compute_db(const Hypergraph& h, EdgeId root);

struct DecompositionSearch {
  std::vector<Decomposition> trees;         // one per component when ok()
  std::optional<int> failed_component;      // component index no root decomposes
  bool ok() const { return !failed_component.has_value(); }
};

// Decomposes every connected component separately, trying roots in ascending
// EdgeId order and keeping the first success; trees come back in component
// order.
DecompositionSearch find_decomposition(const Hypergraph& h);

// Joins per-component decompositions into one tree by hanging every later
// tree's root beneath the first tree's root. Sound whenever the trees cover
// vertex-disjoint edge sets, as find_decomposition's results do: branches
// from different components can never share a vertex.
Decomposition glue_decompositions(const std::vector<Decomposition>& trees);

}  // namespace dbcount
