#include "dbcount/relation.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace dbcount {

namespace {

void check_binary(const Tuple& t) {
  for (std::uint8_t v : t)
    if (v > 1) throw std::invalid_argument("tuple value must be 0 or 1");
}

}  // namespace

PartialAssignment::PartialAssignment(std::vector<std::pair<VertexId, std::uint8_t>> items)
    : items_(std::move(items)) {
  std::sort(items_.begin(), items_.end());
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (items_[i].second > 1) throw std::invalid_argument("assignment value must be 0 or 1");
    if (i > 0 && items_[i].first == items_[i - 1].first)
      throw std::invalid_argument("duplicate variable in assignment");
  }
}

PartialAssignment PartialAssignment::from_tuple(const std::vector<VertexId>& scope,
                                                const Tuple& t) {
  if (scope.size() != t.size())
    throw std::invalid_argument("tuple arity does not match scope");
  std::vector<std::pair<VertexId, std::uint8_t>> items;
  items.reserve(scope.size());
  for (std::size_t i = 0; i < scope.size(); ++i) items.emplace_back(scope[i], t[i]);
  return PartialAssignment(std::move(items));
}

std::optional<std::uint8_t> PartialAssignment::value_of(VertexId v) const {
  auto it = std::lower_bound(items_.begin(), items_.end(), v,
                             [](const auto& p, VertexId x) { return p.first < x; });
  if (it == items_.end() || it->first != v) return std::nullopt;
  return it->second;
}

std::vector<VertexId> PartialAssignment::domain() const {
  std::vector<VertexId> out;
  out.reserve(items_.size());
  for (const auto& [v, b] : items_) out.push_back(v);
  return out;
}

PartialAssignment PartialAssignment::restrict_to(const std::vector<VertexId>& vars) const {
  std::vector<VertexId> want(vars);
  std::sort(want.begin(), want.end());
  std::vector<std::pair<VertexId, std::uint8_t>> kept;
  auto i = items_.begin();
  auto j = want.begin();
  while (i != items_.end() && j != want.end()) {
    if (i->first < *j)
      ++i;
    else if (*j < i->first)
      ++j;
    else {
      kept.push_back(*i);
      ++i;
      ++j;
    }
  }
  PartialAssignment out;
  out.items_ = std::move(kept);  // already sorted and distinct
  return out;
}

bool PartialAssignment::consistent_with(const PartialAssignment& other) const {
  auto i = items_.begin();
  auto j = other.items_.begin();
  while (i != items_.end() && j != other.items_.end()) {
    if (i->first < j->first)
      ++i;
    else if (j->first < i->first)
      ++j;
    else {
      if (i->second != j->second) return false;
      ++i;
      ++j;
    }
  }
  return true;
}

Relation::Relation(std::vector<VertexId> scope_in, std::vector<Tuple> tuples_in)
    : scope(std::move(scope_in)), tuples(std::move(tuples_in)) {
  if (scope.empty()) throw std::invalid_argument("relation scope must be non-empty");

  // Sort the scope, carrying every tuple along with the same permutation.
  std::vector<std::size_t> perm(scope.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::sort(perm.begin(), perm.end(),
            [&](std::size_t a, std::size_t b) { return scope[a] < scope[b]; });
  std::vector<VertexId> sorted_scope;
  sorted_scope.reserve(scope.size());
  for (std::size_t p : perm) sorted_scope.push_back(scope[p]);
  for (std::size_t i = 1; i < sorted_scope.size(); ++i)
    if (sorted_scope[i] == sorted_scope[i - 1])
      throw std::invalid_argument("duplicate variable in relation scope");

  for (Tuple& t : tuples) {
    if (t.size() != scope.size())
      throw std::invalid_argument("tuple arity does not match relation scope");
    check_binary(t);
    Tuple reordered;
    reordered.reserve(t.size());
    for (std::size_t p : perm) reordered.push_back(t[p]);
    t = std::move(reordered);
  }
  scope = std::move(sorted_scope);
  std::sort(tuples.begin(), tuples.end());
  tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
}

CspNegInstance::CspNegInstance(int n, std::vector<Constraint> constraints, bool unsatisfiable)
    : n_(n), constraints_(std::move(constraints)), unsat_(unsatisfiable) {
  if (n_ < 0) throw std::invalid_argument("variable count must be non-negative");
  std::set<VertexId> used;
  for (Constraint& c : constraints_) {
    if (c.scope.empty()) throw std::invalid_argument("constraint scope must be non-empty");
    std::set<VertexId> seen;
    for (VertexId v : c.scope) {
      if (v < 0 || v >= n_)
        throw std::invalid_argument("constraint references variable " + std::to_string(v) +
                                    " outside 0.." + std::to_string(n_ - 1));
      if (!seen.insert(v).second)
        throw std::invalid_argument("duplicate variable in constraint scope");
      used.insert(v);
    }
    for (const Tuple& t : c.forbidden) {
      if (t.size() != c.scope.size())
        throw std::invalid_argument("forbidden tuple arity does not match scope");
      check_binary(t);
    }
    std::sort(c.forbidden.begin(), c.forbidden.end());
    c.forbidden.erase(std::unique(c.forbidden.begin(), c.forbidden.end()), c.forbidden.end());
  }
  free_ = n_ - static_cast<int>(used.size());
}

CspNegInstance cnf_to_cspneg(const std::vector<std::vector<int>>& clauses, int n) {
  std::vector<Constraint> constraints;
  bool unsat = false;
  for (const std::vector<int>& clause : clauses) {
    if (clause.empty()) {
      unsat = true;
      continue;
    }
    // variable -> sign(s) seen; a variable seen with both signs makes the
    // clause tautological, so it forbids nothing.
    std::map<VertexId, std::set<bool>> signs;
    for (int lit : clause) {
      if (lit == 0 || std::abs(lit) > n)
        throw std::invalid_argument("malformed literal " + std::to_string(lit) +
                                    " (expected non-zero magnitude <= " + std::to_string(n) + ")");
      signs[std::abs(lit) - 1].insert(lit > 0);
    }
    Constraint c;
    bool tautological = false;
    for (const auto& [var, ss] : signs) {
      c.scope.push_back(var);
      if (ss.size() == 2) tautological = true;
    }
    if (!tautological) {
      // The unique countermodel falsifies every literal: 0 under a positive
      // occurrence, 1 under a negative one.
      Tuple counter;
      counter.reserve(c.scope.size());
      for (const auto& [var, ss] : signs) counter.push_back(*ss.begin() ? 0 : 1);
      c.forbidden.push_back(std::move(counter));
    }
    constraints.push_back(std::move(c));
  }
  return CspNegInstance(n, std::move(constraints), unsat);
}

DisjunctiveInstance to_disjunctive(const CspNegInstance& inst) {
  // Canonicalize each constraint through Relation (sorted scope, aligned
  // tuples), then merge equal scope sets by tuple-set union.
  std::map<std::vector<VertexId>, std::set<Tuple>> by_scope;
  for (const Constraint& c : inst.constraints()) {
    Relation r(c.scope, c.forbidden);
    auto& bucket = by_scope[r.scope];
    bucket.insert(r.tuples.begin(), r.tuples.end());
  }
  DisjunctiveInstance psi;
  std::set<VertexId> vars;
  for (const auto& [scope, tuples] : by_scope) {
    vars.insert(scope.begin(), scope.end());
    psi.relations.emplace_back(scope, std::vector<Tuple>(tuples.begin(), tuples.end()));
  }
  psi.variables.assign(vars.begin(), vars.end());
  return psi;
}

Hypergraph hypergraph_of(const DisjunctiveInstance& psi) {
  std::vector<std::vector<VertexId>> sets;
  sets.reserve(psi.relations.size());
  for (const Relation& r : psi.relations) sets.push_back(r.scope);
  Hypergraph h(sets);
  if (h.edge_count() != psi.relations.size())
    throw std::invalid_argument("two relations share one scope set");
  if (h.vertices() != psi.variables)
    throw std::invalid_argument("instance variables must be exactly the union of the scopes");
  return h;
}

}  // namespace dbcount
