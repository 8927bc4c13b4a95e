#pragma once

#include <optional>

#include "dbcount/hypergraph.hpp"

namespace dbcount {

// Where a hypergraph sits in the acyclicity hierarchy. The five answers come
// from independent tests; gamma => disjoint_branches => beta => alpha holds
// on every input, and join_path => disjoint_branches (a path rooted at an
// end has no incomparable nodes). The beta test enumerates edge subsets and
// is therefore guarded to desk scale.
struct AcyclicityReport {
  bool alpha = false;
  std::optional<bool> beta;  // empty when the subset test was not requested
  bool gamma = false;
  bool disjoint_branches = false;
  bool join_path = false;
};

// True when iterated reduction erases the whole edge set: vertices on at
// most one edge vanish, then edges contained in another edge vanish, until
// nothing changes. A hypergraph with no edges counts as reducible.
bool alpha_acyclic(const Hypergraph& h);

// alpha_acyclic on every nonempty subset of the edges. Guarded: throws
// std::invalid_argument above 15 edges.
bool beta_acyclic(const Hypergraph& h);

// gamma: rootable at every edge (each rooted decomposition attempt must
// succeed). disjoint_branches: every connected component rootable somewhere.
// join_path: some edge order keeps every vertex's edges consecutive.
// with_beta=false skips the guarded subset test and leaves beta empty; a
// true flag on a hypergraph beyond the guard throws.
AcyclicityReport classify(const Hypergraph& h, bool with_beta = true);

}  // namespace dbcount
