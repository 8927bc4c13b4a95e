#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "dbcount/hypergraph.hpp"

namespace dbcount {

// A Boolean tuple, one value (0/1) per scope position.
using Tuple = std::vector<std::uint8_t>;

// Sparse Boolean assignment: a finite map variable id -> {0,1}, stored sorted
// by variable. Immutable value type; doubles as a canonical memo key, so two
// assignments with the same graph compare equal regardless of how they were
// built.
class PartialAssignment {
 public:
  PartialAssignment() = default;

  // Throws std::invalid_argument on a duplicate variable or a value other
  // than 0/1.
  explicit PartialAssignment(std::vector<std::pair<VertexId, std::uint8_t>> items);

  // The assignment scope[i] -> t[i]. Throws std::invalid_argument on arity
  // mismatch or duplicate variables.
  static PartialAssignment from_tuple(const std::vector<VertexId>& scope, const Tuple& t);

  const std::vector<std::pair<VertexId, std::uint8_t>>& items() const { return items_; }
  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }

  std::optional<std::uint8_t> value_of(VertexId v) const;
  std::vector<VertexId> domain() const;

  // Restriction onto the given variables (unlisted ones are dropped).
  PartialAssignment restrict_to(const std::vector<VertexId>& vars) const;

  // True iff the two assignments agree on every shared variable.
  bool consistent_with(const PartialAssignment& other) const;

  friend bool operator==(const PartialAssignment& a, const PartialAssignment& b) {
    return a.items_ == b.items_;
  }
  friend bool operator<(const PartialAssignment& a, const PartialAssignment& b) {
    return a.items_ < b.items_;
  }

 private:
  std::vector<std::pair<VertexId, std::uint8_t>> items_;  // sorted by variable
};

// A relation in positive representation: the assignments of its scope that
// satisfy it, listed explicitly. The constructor canonicalizes: the scope is
// sorted ascending with every tuple permuted to match, and tuples are stored
// sorted and deduplicated. Throws std::invalid_argument on an empty scope, a
// duplicate scope variable, an arity mismatch, or a non-binary value.
struct Relation {
  std::vector<VertexId> scope;  // sorted, distinct, non-empty
  std::vector<Tuple> tuples;    // sorted, distinct, arity = scope size

  Relation(std::vector<VertexId> scope_in, std::vector<Tuple> tuples_in);
};

// One negative-representation constraint: every assignment of the scope is
// allowed except the forbidden tuples. Scope order is preserved as written
// (canonicalization happens in to_disjunctive).
struct Constraint {
  std::vector<VertexId> scope;  // distinct variable ids, input order
  std::vector<Tuple> forbidden;
};

// A CSP in negative representation over variables 0..n-1. Declared variables
// that occur in no scope are "free": they only scale the model count.
class CspNegInstance {
 public:
  // Validates every constraint (variables in range and distinct, arities
  // matching, binary values) and deduplicates forbidden tuples; throws
  // std::invalid_argument on a violation. The unsatisfiable flag records an
  // empty clause seen upstream: it forces a model count of zero without a
  // representable constraint.
  CspNegInstance(int n, std::vector<Constraint> constraints, bool unsatisfiable = false);

  int variable_count() const { return n_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  bool unsatisfiable() const { return unsat_; }
  int free_variable_count() const { return free_; }

 private:
  int n_ = 0;
  std::vector<Constraint> constraints_;
  bool unsat_ = false;
  int free_ = 0;  // declared variables occurring in no scope
};

// A disjunction of relations with pairwise-distinct scope sets covering the
// variable set: an assignment satisfies the instance iff it satisfies at
// least one relation. The scopes are exactly the hyperedges of the
// instance's hypergraph.
struct DisjunctiveInstance {
  std::vector<VertexId> variables;  // sorted union of the scopes
  std::vector<Relation> relations;
};

// Translates clauses (signed DIMACS-style literals: +k is variable k-1
// positive, -k negative; k ranges over 1..n) into negative representation.
// A non-tautological clause contributes its unique countermodel as the one
// forbidden tuple on its variable set; duplicate literals are deduplicated; a
// clause containing complementary literals forbids nothing (empty tuple set
// on its scope); an empty clause sets the unsatisfiable flag. Throws
// std::invalid_argument on a zero or out-of-range literal.
CspNegInstance cnf_to_cspneg(const std::vector<std::vector<int>>& clauses, int n);

// Complements the instance into positive disjunctive form: an assignment
// satisfies the result iff it violates at least one constraint, so over the
// used variables X the instance has 2^|X| - (solutions of the result) models.
// Constraints over the same variable set merge into one relation (tuple-set
// union, aligned by variable id); a scope that is a strict subset of another
// stays a separate relation, mirroring the hypergraph's edge set.
DisjunctiveInstance to_disjunctive(const CspNegInstance& inst);

// The hypergraph whose edge i is the scope of relations[i]. Throws
// std::invalid_argument when two relations share a scope set or some listed
// variable occurs in no scope.
Hypergraph hypergraph_of(const DisjunctiveInstance& psi);

}  // namespace dbcount
