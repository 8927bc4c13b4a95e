#include "dbcount/counter.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dbcount {

namespace {

// Sorted copy of a variable set; rejects duplicates so that size arithmetic
// below stays honest.
std::vector<VertexId> as_sorted_set(const std::vector<VertexId>& vars, const char* what) {
  std::vector<VertexId> out(vars);
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end())
    throw std::invalid_argument(std::string(what) + " contains a duplicate variable");
  return out;
}

bool subset_of(const std::vector<VertexId>& inner, const std::vector<VertexId>& outer) {
  return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

std::vector<VertexId> sorted_union(const std::vector<VertexId>& a,
                                   const std::vector<VertexId>& b) {
  std::vector<VertexId> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::size_t intersection_size(const std::vector<VertexId>& a, const std::vector<VertexId>& b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j)
      ++i;
    else if (*j < *i)
      ++j;
    else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

bool tuple_consistent(const Relation& r, const Tuple& t, const PartialAssignment& a) {
  for (std::size_t i = 0; i < r.scope.size(); ++i) {
    auto bound = a.value_of(r.scope[i]);
    if (bound && *bound != t[i]) return false;
  }
  return true;
}

}  // namespace

BigCount s_relation(const Relation& r, const std::vector<VertexId>& x,
                    const PartialAssignment& a) {
  std::vector<VertexId> xs = as_sorted_set(x, "variable set x");
  std::vector<VertexId> dom = a.domain();
  if (!subset_of(r.scope, xs))
    throw std::invalid_argument("relation scope escapes the variable set x");
  if (!subset_of(dom, xs))
    throw std::invalid_argument("assignment domain escapes the variable set x");

  std::size_t matching = 0;
  for (const Tuple& t : r.tuples)
    if (tuple_consistent(r, t, a)) ++matching;

  std::size_t covered = sorted_union(r.scope, dom).size();
  return BigCount(static_cast<unsigned long>(matching))
         << static_cast<unsigned long>(xs.size() - covered);
}

BigCount combine_disjoint(const std::vector<CombinePart>& parts,
                          const std::vector<VertexId>& x, const PartialAssignment& a) {
  std::vector<VertexId> xs = as_sorted_set(x, "variable set x");
  std::vector<VertexId> dom = a.domain();
  if (!subset_of(dom, xs))
    throw std::invalid_argument("assignment domain escapes the variable set x");

  std::vector<std::vector<VertexId>> sets;
  std::vector<VertexId> all;
  for (const CombinePart& p : parts) {
    std::vector<VertexId> vs = as_sorted_set(p.vars, "part variable set");
    if (!subset_of(vs, xs))
      throw std::invalid_argument("part variable set escapes the variable set x");
    all.insert(all.end(), vs.begin(), vs.end());
    sets.push_back(std::move(vs));
  }
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end())
    throw std::invalid_argument("part variable sets overlap");

  // Exponents e_i = |X_i \ X0| and the subcounts S_i, each capped by 2^e_i.
  std::vector<unsigned long> exps;
  std::vector<BigCount> subs;
  unsigned long exp_rest = 0;  // sum of e_j over the parts after the current one
  for (std::size_t i = 0; i < sets.size(); ++i) {
    unsigned long e =
        static_cast<unsigned long>(sets[i].size() - intersection_size(sets[i], dom));
    BigCount s = parts[i].subcount(a.restrict_to(sets[i]));
    if (s < 0 || s > pow2(e))
      throw std::invalid_argument("subcount exceeds its 2^|X_i \\ dom| ceiling");
    exps.push_back(e);
    subs.push_back(std::move(s));
    if (i > 0) exp_rest += e;
  }

  // sum_i S_i * prod_{j<i} (2^{e_j} - S_j) * 2^{sum_{j>i} e_j}, i.e. group the
  // satisfying extensions by the first satisfied disjunct.
  BigCount total = 0;
  BigCount prefix = 1;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    total += (subs[i] * prefix) << exp_rest;
    prefix *= pow2(exps[i]) - subs[i];
    exp_rest -= (i + 1 < sets.size()) ? exps[i + 1] : 0;
  }

  std::size_t touched = sorted_union(all, dom).size();
  return total << static_cast<unsigned long>(xs.size() - touched);
}

namespace {

// Leaf-to-root evaluation state for one decomposed instance. Relations are
// indexed by the edge ids of hypergraph_of(psi), i.e. relation i <-> node i.
struct SubtreeCounter {
  const DisjunctiveInstance& psi;
  std::vector<std::vector<EdgeId>> kids;       // children per node, ascending
  std::vector<std::vector<VertexId>> sub_vars;  // V_t: variables of t's subtree

  explicit SubtreeCounter(const DisjunctiveInstance& instance, const Decomposition& d)
      : psi(instance), kids(instance.relations.size()), sub_vars(instance.relations.size()) {
    for (const auto& [node, par] : d.parent)
      if (node != par) kids[par].push_back(node);
    fill_sub_vars(d.root);
  }

  void fill_sub_vars(EdgeId t) {
    sub_vars[t] = psi.relations[t].scope;
    for (EdgeId c : kids[t]) {
      fill_sub_vars(c);
      sub_vars[t] = sorted_union(sub_vars[t], sub_vars[c]);
    }
  }

  // Computes S_{V_t}(phi_t, c) for every conditioning in keys. keys always
  // contains the empty assignment and otherwise restrictions of ancestor
  // tuples onto var(R_t); the restriction collapses coinciding and
  // non-overlapping ancestors, which keeps the table at most one entry per
  // ancestor tuple plus one.
  std::map<PartialAssignment, BigCount> solve(EdgeId t,
                                              const std::set<PartialAssignment>& keys) {
    const Relation& rel = psi.relations[t];

    // Conditionings a child will be asked about: restrictions of our keys
    // (ancestor tuples) and of our own tuples, both onto the child's scope.
    // By per-variable connectedness of the join tree these equal the
    // restrictions onto the child's whole subtree variable set.
    std::vector<std::map<PartialAssignment, BigCount>> tables;
    tables.reserve(kids[t].size());
    for (EdgeId c : kids[t]) {
      const std::vector<VertexId>& child_scope = psi.relations[c].scope;
      std::set<PartialAssignment> child_keys;
      for (const PartialAssignment& k : keys) child_keys.insert(k.restrict_to(child_scope));
      for (const Tuple& tup : rel.tuples)
        child_keys.insert(
            PartialAssignment::from_tuple(rel.scope, tup).restrict_to(child_scope));
      tables.push_back(solve(c, child_keys));
    }

    std::vector<CombinePart> parts;
    parts.reserve(kids[t].size());
    for (std::size_t i = 0; i < kids[t].size(); ++i) {
      parts.push_back(CombinePart{
          sub_vars[kids[t][i]], [&tables, i](const PartialAssignment& c) -> BigCount {
            auto it = tables[i].find(c);
            if (it == tables[i].end())
              throw std::logic_error("conditioning missed the precomputed table");
            return it->second;
          }});
    }

    std::map<PartialAssignment, BigCount> table;
    for (const PartialAssignment& c : keys) {
      // Satisfies R_t, plus satisfies some child branch, minus counted twice.
      BigCount s = s_relation(rel, sub_vars[t], c) + combine_disjoint(parts, sub_vars[t], c);
      for (const Tuple& tup : rel.tuples) {
        if (!tuple_consistent(rel, tup, c)) continue;
        s -= combine_disjoint(parts, sub_vars[t],
                              PartialAssignment::from_tuple(rel.scope, tup));
      }
      table.emplace(c, std::move(s));
    }
    return table;
  }
};

}  // namespace

BigCount count_disjunctive(const DisjunctiveInstance& psi, const Decomposition& d) {
  if (psi.relations.empty())
    throw std::invalid_argument("cannot decompose an instance without relations");
  Hypergraph h = hypergraph_of(psi);
  if (!is_join_tree(h, d))
    throw std::invalid_argument("decomposition is not a join tree of the instance");
  if (!is_disjoint_branches(h, d))
    throw std::invalid_argument("decomposition branches share variables");

  SubtreeCounter dp(psi, d);
  std::set<PartialAssignment> empty_only{PartialAssignment{}};
  return dp.solve(d.root, empty_only).at(PartialAssignment{});
}

BigCount count_models(const CspNegInstance& inst, const DecomposerHook& decompose) {
  if (inst.unsatisfiable()) return BigCount(0);

  DisjunctiveInstance psi = to_disjunctive(inst);
  BigCount total = pow2(static_cast<unsigned long>(inst.free_variable_count()));
  if (psi.relations.empty()) return total;  // nothing constrained

  Hypergraph h = hypergraph_of(psi);
  DecompositionSearch found = decompose ? decompose(h) : find_decomposition(h);
  if (!found.ok()) throw NotDecomposable(*found.failed_component);

  std::vector<ComponentView> comps = connected_components(h);
  if (found.trees.size() != comps.size())
    throw std::invalid_argument("decomposer returned one tree per component, expected " +
                                std::to_string(comps.size()));

  for (std::size_t i = 0; i < comps.size(); ++i) {
    const ComponentView& cv = comps[i];

    // Re-index the component as its own instance: local relation/node id =
    // rank of the global edge id within the component.
    DisjunctiveInstance local;
    local.variables = cv.vertices;
    for (EdgeId e : cv.edges) local.relations.push_back(psi.relations[e]);

    auto local_id = [&cv](EdgeId global) {
      auto it = std::lower_bound(cv.edges.begin(), cv.edges.end(), global);
      if (it == cv.edges.end() || *it != global)
        throw std::invalid_argument("decomposition node lies outside its component");
      return static_cast<EdgeId>(it - cv.edges.begin());
    };
    Decomposition ld;
    ld.root = local_id(found.trees[i].root);
    for (const auto& [node, par] : found.trees[i].parent)
      ld.parent.emplace_back(local_id(node), local_id(par));
    std::sort(ld.parent.begin(), ld.parent.end());

    BigCount violating = count_disjunctive(local, ld);
    total *= pow2(static_cast<unsigned long>(cv.vertices.size())) - violating;
  }
  return total;
}

BigCount brute_force_count(const CspNegInstance& inst) {
  const int n = inst.variable_count();
  if (n > 24)
    throw std::invalid_argument("brute force enumeration is limited to 24 variables");
  if (inst.unsatisfiable()) return BigCount(0);

  // Pack each constraint's forbidden tuples into bitmasks over its scope.
  struct Packed {
    std::vector<int> scope;
    std::vector<std::uint32_t> bad;  // sorted codes, bit j = value of scope[j]
  };
  std::vector<Packed> packed;
  packed.reserve(inst.constraints().size());
  for (const Constraint& c : inst.constraints()) {
    Packed p;
    p.scope.assign(c.scope.begin(), c.scope.end());
    for (const Tuple& t : c.forbidden) {
      std::uint32_t code = 0;
      for (std::size_t j = 0; j < t.size(); ++j) code |= static_cast<std::uint32_t>(t[j]) << j;
      p.bad.push_back(code);
    }
    std::sort(p.bad.begin(), p.bad.end());
    packed.push_back(std::move(p));
  }

  std::uint64_t models = 0;
  const std::uint32_t limit = std::uint32_t{1} << n;
  for (std::uint32_t m = 0; m < limit; ++m) {
    bool ok = true;
    for (const Packed& p : packed) {
      std::uint32_t code = 0;
      for (std::size_t j = 0; j < p.scope.size(); ++j)
        code |= ((m >> p.scope[j]) & 1u) << j;
      if (std::binary_search(p.bad.begin(), p.bad.end(), code)) {
        ok = false;
        break;
      }
    }
    if (ok) ++models;
  }
  return BigCount(models);
}

}  // namespace dbcount
