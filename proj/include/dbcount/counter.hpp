#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dbcount/bigcount.hpp"
#include "dbcount/decomposer.hpp"
#include "dbcount/hypergraph.hpp"
#include "dbcount/relation.hpp"

namespace dbcount {

// Number of assignments b of the variable set x with b consistent with a and
// b restricted to scope(r) a tuple of r: every consistent tuple extends
// freely on the variables of x outside scope(r) and dom(a). Throws
// std::invalid_argument unless scope(r) and dom(a) are subsets of x.
BigCount s_relation(const Relation& r, const std::vector<VertexId>& x,
                    const PartialAssignment& a);

// One disjunct of a variable-disjoint disjunction: its variable set X_i plus
// a callback returning the precomputed subcount S_{X_i}(phi_i, c) for a
// conditioning c with dom(c) contained in X_i.
struct CombinePart {
  std::vector<VertexId> vars;
  std::function<BigCount(const PartialAssignment&)> subcount;
};

// Number of assignments b of x with b consistent with a satisfying at least
// one of the disjuncts, by the closed form
//
//   2^{|x \ (X0 u X1 u ... u Xk)|} *
//     sum_i S_i * prod_{j<i} (2^{|Xj \ X0|} - S_j) * prod_{j>i} 2^{|Xj \ X0|}
//
// with X0 = dom(a) and S_i = parts[i].subcount(a restricted to X_i): the
// i-th term counts the extensions whose first satisfied disjunct is the
// i-th. An empty part list is the empty disjunction (always false, count 0).
// Throws std::invalid_argument when the X_i overlap, escape x, or a subcount
// exceeds its 2^{|X_i \ X0|} ceiling.
BigCount combine_disjoint(const std::vector<CombinePart>& parts,
                          const std::vector<VertexId>& x, const PartialAssignment& a);

// Number of assignments of psi's variables satisfying at least one relation,
// computed leaf-to-root along d: each node t stores S_{V_t}(phi_t, c) for
// the empty conditioning and for each ancestor tuple's restriction onto
// var(R_t), where V_t spans t's subtree and phi_t is its disjunction. The
// recurrence per node is
//
//   S(c) = s_relation(R_t, V_t, c) + combine_disjoint(children, V_t, c)
//        - sum over tuples a of R_t consistent with c of
//            combine_disjoint(children, V_t, a)
//
// (satisfies R_t, plus satisfies a child branch, minus both). Coinciding
// restrictions of distinct ancestor tuples share one memo entry, which also
// keeps distant conditionings collapsed onto the empty one. Validates d
// (join tree + disjoint branches over psi's hypergraph) and the scope/node
// correspondence; throws std::invalid_argument on a violation.
BigCount count_disjunctive(const DisjunctiveInstance& psi, const Decomposition& d);

// Raised by count_models when some connected component of the instance's
// hypergraph admits no disjoint branches decomposition.
class NotDecomposable : public std::runtime_error {
 public:
  explicit NotDecomposable(int component_index)
      : std::runtime_error("component " + std::to_string(component_index) +
                           " has no disjoint branches decomposition"),
        component(component_index) {}

  int component;
};

// Pluggable decomposition strategy; the default is find_decomposition. The
// returned trees must use the hypergraph's (global) edge ids, one tree per
// connected component in component order.
using DecomposerHook = std::function<DecompositionSearch(const Hypergraph&)>;

// Model count of the instance: 0 when flagged unsatisfiable, else the
// product over connected components c of (2^{|vars(c)|} - violating
// assignments of c), times 2^{free variables}. The violating assignments per
// component are counted by count_disjunctive on its decomposition. Throws
// NotDecomposable (carrying the component index) when the hook fails.
BigCount count_models(const CspNegInstance& inst, const DecomposerHook& decompose = {});

// Exhaustive oracle: walks all 2^n assignments and checks every constraint.
// Throws std::invalid_argument when n > 24.
BigCount brute_force_count(const CspNegInstance& inst);

}  // namespace dbcount
