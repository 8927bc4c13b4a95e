#include "dbcount/generator.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dbcount {

namespace {

// Decodes a Pruefer sequence over 0..m-1 into the tree's adjacency lists.
std::vector<std::vector<int>> decode_pruefer(const std::vector<int>& seq, int m) {
  std::vector<int> degree(m, 1);
  for (int x : seq) ++degree[x];
  std::vector<std::vector<int>> adj(m);
  auto link = [&](int u, int v) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  };
  std::vector<bool> used(m, false);
  for (int x : seq) {
    int leaf = -1;
    for (int i = 0; i < m; ++i)
      if (degree[i] == 1 && !used[i]) {
        leaf = i;
        break;
      }
    link(leaf, x);
    used[leaf] = true;
    --degree[x];
  }
  int u = -1, v = -1;
  for (int i = 0; i < m; ++i)
    if (degree[i] == 1 && !used[i]) (u < 0 ? u : v) = i;
  link(u, v);
  return adj;
}

// Roots the adjacency structure at r and emits sorted (node, parent) pairs in
// the hypergraph's edge ids.
Decomposition rooted(const std::vector<std::vector<int>>& adj, int r,
                     const std::vector<EdgeId>& ids) {
  const int m = static_cast<int>(adj.size());
  std::vector<std::pair<EdgeId, EdgeId>> parent;
  parent.reserve(m);
  std::vector<int> stack{r};
  std::vector<bool> seen(m, false);
  seen[r] = true;
  parent.emplace_back(ids[r], ids[r]);
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int w : adj[u])
      if (!seen[w]) {
        seen[w] = true;
        parent.emplace_back(ids[w], ids[u]);
        stack.push_back(w);
      }
  }
  std::sort(parent.begin(), parent.end());
  return Decomposition{ids[r], std::move(parent)};
}

}  // namespace

std::optional<Decomposition> exhaustive_db_search(const Hypergraph& h,
                                                  std::optional<EdgeId> root) {
  const int m = static_cast<int>(h.edge_count());
  if (m > 6)
    throw std::invalid_argument("exhaustive_db_search: " + std::to_string(m) +
                                " edges exceed the enumeration guard of 6");
  std::vector<EdgeId> ids = h.edge_ids();
  int root_index = -1;
  if (root.has_value()) {
    auto it = std::find(ids.begin(), ids.end(), *root);
    if (it == ids.end())
      throw std::out_of_range("exhaustive_db_search: unknown root id " + std::to_string(*root));
    root_index = static_cast<int>(it - ids.begin());
  }

  auto try_roots = [&](const std::vector<std::vector<int>>& adj) -> std::optional<Decomposition> {
    for (int r = 0; r < m; ++r) {
      if (root_index >= 0 && r != root_index) continue;
      Decomposition d = rooted(adj, r, ids);
      if (is_join_tree(h, d) && is_disjoint_branches(h, d)) return d;
    }
    return std::nullopt;
  };

  if (m == 1) {
    Decomposition d{ids[0], {{ids[0], ids[0]}}};
    if (is_join_tree(h, d) && is_disjoint_branches(h, d)) return d;
    return std::nullopt;
  }

  // Pruefer sequences of length m-2 over 0..m-1, lexicographically.
  std::vector<int> seq(m - 2, 0);
  while (true) {
    if (auto found = try_roots(decode_pruefer(seq, m))) return found;
    int i = static_cast<int>(seq.size()) - 1;
    while (i >= 0 && seq[i] == m - 1) seq[i--] = 0;
    if (i < 0) break;
    ++seq[i];
  }
  return std::nullopt;
}

GeneratedInstance gen_db_instance(const GeneratorConfig& cfg) {
  if (cfg.edge_count < 1 || cfg.max_edge_size < 1 || cfg.branching < 1 || cfg.tuples_min < 1 ||
      cfg.tuples_max < cfg.tuples_min)
    throw std::invalid_argument("gen_db_instance: every config bound must be positive and "
                                "tuples_min <= tuples_max");
  if (cfg.edge_count > 1 && cfg.max_edge_size < 2)
    throw std::invalid_argument("gen_db_instance: growing past one edge needs max_edge_size >= 2 "
                                "(a parent vertex plus a fresh one)");

  std::mt19937_64 rng(cfg.seed);
  auto draw = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };

  struct Node {
    std::vector<VertexId> vars;
    std::vector<VertexId> unclaimed;  // vertices no child has taken yet
    int children = 0;
  };
  std::vector<Node> nodes;
  std::vector<int> parent_of{0};  // tree indices; root points at itself
  VertexId next_vertex = 0;

  {
    int size = 1 + draw(cfg.max_edge_size);
    std::vector<VertexId> vars(size);
    for (int i = 0; i < size; ++i) vars[i] = next_vertex++;
    nodes.push_back({vars, vars, 0});
  }

  while (static_cast<int>(nodes.size()) < cfg.edge_count) {
    std::vector<int> eligible;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i].children < cfg.branching && !nodes[i].unclaimed.empty())
        eligible.push_back(static_cast<int>(i));
    // the newest node is always childless with a full pool, so this cannot
    // run dry
    int p = eligible[draw(static_cast<int>(eligible.size()))];
    Node& par = nodes[p];

    int claim = 1 + draw(std::min<int>(static_cast<int>(par.unclaimed.size()),
                                       cfg.max_edge_size - 1));
    for (int i = 0; i < claim; ++i) {  // partial Fisher-Yates over the pool
      int j = i + draw(static_cast<int>(par.unclaimed.size()) - i);
      std::swap(par.unclaimed[i], par.unclaimed[j]);
    }
    std::vector<VertexId> vars(par.unclaimed.begin(), par.unclaimed.begin() + claim);
    par.unclaimed.erase(par.unclaimed.begin(), par.unclaimed.begin() + claim);
    par.children++;

    int fresh = 1 + draw(cfg.max_edge_size - claim);
    for (int i = 0; i < fresh; ++i) vars.push_back(next_vertex++);
    std::sort(vars.begin(), vars.end());
    parent_of.push_back(p);
    nodes.push_back({vars, vars, 0});
  }

  std::vector<Constraint> constraints;
  constraints.reserve(nodes.size());
  for (const Node& node : nodes) {
    const int arity = static_cast<int>(node.vars.size());
    int want = cfg.tuples_min + draw(cfg.tuples_max - cfg.tuples_min + 1);
    if (arity < 30) want = std::min(want, 1 << arity);  // wider scopes can't hit the cap
    std::set<Tuple> tuples;
    while (static_cast<int>(tuples.size()) < want) {
      Tuple t(arity);
      for (int j = 0; j < arity; ++j) t[j] = static_cast<std::uint8_t>(rng() & 1);
      tuples.insert(std::move(t));
    }
    constraints.push_back({node.vars, {tuples.begin(), tuples.end()}});
  }

  CspNegInstance instance(static_cast<int>(next_vertex), constraints);

  // The pipeline orders relations by scope, so translate tree indices into
  // the edge ids the instance's hypergraph will assign.
  std::map<std::vector<VertexId>, EdgeId> id_of_scope;
  for (const Node& node : nodes) id_of_scope[node.vars] = 0;
  EdgeId next_id = 0;
  for (auto& [scope, id] : id_of_scope) id = next_id++;

  std::vector<std::pair<EdgeId, EdgeId>> links;
  links.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i)
    links.emplace_back(id_of_scope.at(nodes[i].vars), id_of_scope.at(nodes[parent_of[i]].vars));
  std::sort(links.begin(), links.end());
  Decomposition witness{id_of_scope.at(nodes[0].vars), std::move(links)};

  Hypergraph h = hypergraph_of(to_disjunctive(instance));
  if (!is_join_tree(h, witness) || !is_disjoint_branches(h, witness))
    throw std::logic_error("gen_db_instance: constructed witness failed validation");

  return {std::move(instance), std::move(witness)};
}

Hypergraph make_hn(int n) {
  if (n < 1) throw std::invalid_argument("make_hn: n must be positive");
  std::vector<std::vector<VertexId>> sets;
  sets.reserve(2 * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<VertexId> big{n + i};
    for (int j = 0; j < n; ++j) big.push_back(j);
    sets.push_back(std::move(big));
  }
  for (int i = 0; i < n; ++i) sets.push_back({i});
  return Hypergraph(sets);
}

}  // namespace dbcount
