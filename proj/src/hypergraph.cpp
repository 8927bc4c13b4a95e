#include "dbcount/hypergraph.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace dbcount {

namespace {

std::vector<VertexId> sorted_unique(std::vector<VertexId> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool sorted_intersects(const std::vector<VertexId>& a, const std::vector<VertexId>& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) ++i;
    else if (b[j] < a[i]) ++j;
    else return true;
  }
  return false;
}

}  // namespace

Hypergraph::Hypergraph(const std::vector<std::vector<VertexId>>& sets,
                       const std::vector<int>& labels) {
  std::map<std::vector<VertexId>, std::size_t> seen;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    std::vector<VertexId> vars = sorted_unique(sets[i]);
    if (vars.empty()) throw std::invalid_argument("hypergraph: empty edge");
    int label = i < labels.size() ? labels[i] : static_cast<int>(i);
    auto it = seen.find(vars);
    if (it != seen.end()) {
      edges_[it->second].labels.push_back(label);
      continue;
    }
    Edge e;
    e.id = static_cast<EdgeId>(edges_.size());
    e.vars = std::move(vars);
    e.labels = {label};
    seen.emplace(e.vars, edges_.size());
    edges_.push_back(std::move(e));
  }
}

bool Hypergraph::has_edge(EdgeId id) const {
  auto it = std::lower_bound(edges_.begin(), edges_.end(), id,
                             [](const Edge& e, EdgeId v) { return e.id < v; });
  return it != edges_.end() && it->id == id;
}

const Edge& Hypergraph::edge(EdgeId id) const {
  auto it = std::lower_bound(edges_.begin(), edges_.end(), id,
                             [](const Edge& e, EdgeId v) { return e.id < v; });
  if (it == edges_.end() || it->id != id)
    throw std::out_of_range("hypergraph: unknown edge id " + std::to_string(id));
  return *it;
}

std::vector<VertexId> Hypergraph::vertices() const {
  std::vector<VertexId> all;
  for (const Edge& e : edges_) all.insert(all.end(), e.vars.begin(), e.vars.end());
  return sorted_unique(std::move(all));
}

std::size_t Hypergraph::vertex_count() const { return vertices().size(); }

Hypergraph Hypergraph::remove_edge(EdgeId e) const {
  if (!has_edge(e)) throw std::out_of_range("remove_edge: unknown edge id " + std::to_string(e));
  Hypergraph out;
  for (const Edge& ed : edges_)
    if (ed.id != e) out.edges_.push_back(ed);
  return out;
}

Hypergraph Hypergraph::remove_edges(const std::vector<EdgeId>& ids) const {
  for (EdgeId id : ids)
    if (!has_edge(id)) throw std::out_of_range("remove_edges: unknown edge id " + std::to_string(id));
  std::vector<EdgeId> drop = ids;
  std::sort(drop.begin(), drop.end());
  Hypergraph out;
  for (const Edge& ed : edges_)
    if (!std::binary_search(drop.begin(), drop.end(), ed.id)) out.edges_.push_back(ed);
  return out;
}

std::vector<EdgeId> Hypergraph::edge_ids() const {
  std::vector<EdgeId> ids;
  ids.reserve(edges_.size());
  for (const Edge& e : edges_) ids.push_back(e.id);
  return ids;
}

Hypergraph subhypergraph(const Hypergraph& h, const std::vector<EdgeId>& keep) {
  std::vector<EdgeId> want = keep;
  std::sort(want.begin(), want.end());
  Hypergraph out;
  for (const Edge& ed : h.edges())
    if (std::binary_search(want.begin(), want.end(), ed.id)) out.edges_.push_back(ed);
  if (out.edges_.size() != want.size())
    throw std::out_of_range("subhypergraph: unknown edge id in selection");
  return out;
}

std::vector<ComponentView> connected_components(const Hypergraph& h) {
  const auto& edges = h.edges();
  const std::size_t m = edges.size();
  std::vector<std::size_t> uf(m);
  std::iota(uf.begin(), uf.end(), 0);
  auto find = [&](std::size_t x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  std::unordered_map<VertexId, std::size_t> first_edge;
  for (std::size_t i = 0; i < m; ++i)
    for (VertexId v : edges[i].vars) {
      auto [it, inserted] = first_edge.emplace(v, i);
      if (!inserted) uf[find(i)] = find(it->second);
    }

  std::map<std::size_t, ComponentView> by_root;
  for (std::size_t i = 0; i < m; ++i) {
    ComponentView& c = by_root[find(i)];
    c.edges.push_back(edges[i].id);
    c.vertices.insert(c.vertices.end(), edges[i].vars.begin(), edges[i].vars.end());
  }
  std::vector<ComponentView> out;
  for (auto& [root, c] : by_root) {
    std::sort(c.vertices.begin(), c.vertices.end());
    c.vertices.erase(std::unique(c.vertices.begin(), c.vertices.end()), c.vertices.end());
    out.push_back(std::move(c));
  }
  // Deterministic order: by smallest edge id (edges were pushed ascending).
  std::sort(out.begin(), out.end(),
            [](const ComponentView& a, const ComponentView& b) { return a.edges[0] < b.edges[0]; });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].index = static_cast<int>(i);
  return out;
}

std::vector<EdgeId> Decomposition::nodes() const {
  std::vector<EdgeId> out;
  out.reserve(parent.size());
  for (const auto& [node, par] : parent) out.push_back(node);
  return out;
}

EdgeId Decomposition::parent_of(EdgeId e) const {
  auto it = std::lower_bound(parent.begin(), parent.end(), e,
                             [](const auto& p, EdgeId v) { return p.first < v; });
  if (it == parent.end() || it->first != e)
    throw std::out_of_range("decomposition: unknown node " + std::to_string(e));
  return it->second;
}

std::vector<EdgeId> Decomposition::children_of(EdgeId e) const {
  std::vector<EdgeId> out;
  for (const auto& [node, par] : parent)
    if (par == e && node != e) out.push_back(node);
  return out;  // parent is sorted by node, so children come out ascending
}

Decomposition Decomposition::path(const std::vector<EdgeId>& order) {
  Decomposition d;
  if (order.empty()) return d;
  d.root = order.front();
  d.parent.emplace_back(order.front(), order.front());
  for (std::size_t i = 1; i < order.size(); ++i)
    d.parent.emplace_back(order[i], order[i - 1]);
  std::sort(d.parent.begin(), d.parent.end());
  return d;
}

namespace {

// Checks d is a rooted tree over exactly h's edge ids; throws otherwise.
void require_tree_over(const Hypergraph& h, const Decomposition& d) {
  std::vector<EdgeId> nodes = d.nodes();
  std::vector<EdgeId> ids = h.edge_ids();
  std::sort(nodes.begin(), nodes.end());
  if (nodes != ids)
    throw std::invalid_argument("decomposition node set differs from hypergraph edge set");
  if (nodes.empty()) return;
  if (!h.has_edge(d.root) || d.parent_of(d.root) != d.root)
    throw std::invalid_argument("decomposition root is not a self-parented node");
  const std::size_t m = nodes.size();
  for (EdgeId n : nodes) {
    EdgeId cur = n;
    std::size_t steps = 0;
    while (cur != d.root) {
      cur = d.parent_of(cur);  // throws if a parent is not a node
      if (++steps > m) throw std::invalid_argument("decomposition parent links contain a cycle");
    }
  }
}

}  // namespace

bool is_join_tree(const Hypergraph& h, const Decomposition& d) {
  require_tree_over(h, d);
  // v's nodes form a connected subtree iff exactly one of them is the
  // top of the set (the root, or a node whose parent lies outside).
  std::unordered_map<VertexId, std::vector<EdgeId>> occ;
  for (const Edge& e : h.edges())
    for (VertexId v : e.vars) occ[v].push_back(e.id);
  for (auto& [v, set] : occ) {
    std::sort(set.begin(), set.end());
    int tops = 0;
    for (EdgeId e : set) {
      if (e == d.root || !std::binary_search(set.begin(), set.end(), d.parent_of(e))) ++tops;
    }
    if (tops != 1) return false;
  }
  return true;
}

bool is_disjoint_branches(const Hypergraph& h, const Decomposition& d) {
  if (!is_join_tree(h, d)) return false;  // a non-join-tree is never a valid decomposition
  const auto& edges = h.edges();
  const std::size_t m = edges.size();
  if (m == 0) return true;

  // Euler intervals from one traversal; ancestor(a,b) <=> in[a]<=in[b] && out[b]<=out[a].
  std::unordered_map<EdgeId, std::size_t> idx;
  for (std::size_t i = 0; i < m; ++i) idx.emplace(edges[i].id, i);
  std::vector<std::vector<EdgeId>> kids(m);
  for (const auto& [node, par] : d.parent)
    if (node != d.root) kids[idx.at(par)].push_back(node);
  std::vector<int> in(m, -1), out(m, -1);
  int timer = 0;
  std::vector<std::pair<EdgeId, std::size_t>> stack{{d.root, 0}};
  in[idx.at(d.root)] = timer++;
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    std::size_t ni = idx.at(node);
    if (next < kids[ni].size()) {
      EdgeId c = kids[ni][next++];
      in[idx.at(c)] = timer++;
      stack.emplace_back(c, 0);
    } else {
      out[ni] = timer++;
      stack.pop_back();
    }
  }

  auto is_ancestor = [&](std::size_t a, std::size_t b) {
    return in[a] <= in[b] && out[b] <= out[a];
  };
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      if (is_ancestor(i, j) || is_ancestor(j, i)) continue;
      if (sorted_intersects(edges[i].vars, edges[j].vars)) return false;
    }
  return true;
}

bool check_join_path_order(const Hypergraph& h, const std::vector<EdgeId>& order) {
  std::vector<EdgeId> sorted_order = order;
  std::sort(sorted_order.begin(), sorted_order.end());
  if (sorted_order != h.edge_ids())
    throw std::invalid_argument("check_join_path_order: order is not a permutation of the edges");
  // Join path <=> every vertex's occurrences are consecutive positions.
  std::unordered_map<VertexId, std::pair<int, int>> span;  // first/last position
  std::unordered_map<VertexId, int> count;
  for (std::size_t p = 0; p < order.size(); ++p) {
    for (VertexId v : h.edge(order[p]).vars) {
      auto [it, inserted] = span.emplace(v, std::pair<int, int>(p, p));
      if (!inserted) it->second.second = static_cast<int>(p);
      ++count[v];
    }
  }
  for (const auto& [v, se] : span)
    if (se.second - se.first + 1 != count[v]) return false;
  return true;
}

namespace {

struct Mask {
  std::vector<std::uint64_t> w;
  bool any() const {
    for (auto x : w) if (x) return true;
    return false;
  }
  bool test(std::size_t b) const { return (w[b >> 6] >> (b & 63)) & 1; }
  void reset(std::size_t b) { w[b >> 6] &= ~(std::uint64_t(1) << (b & 63)); }
  int lowest() const {
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i]) return static_cast<int>(i * 64 + __builtin_ctzll(w[i]));
    return -1;
  }
};

Mask mask_and(const Mask& a, const Mask& b) {
  Mask r = a;
  for (std::size_t i = 0; i < r.w.size(); ++i) r.w[i] &= b.w[i];
  return r;
}

Mask mask_minus(const Mask& a, const Mask& b) {
  Mask r = a;
  for (std::size_t i = 0; i < r.w.size(); ++i) r.w[i] &= ~b.w[i];
  return r;
}

}  // namespace

std::optional<GammaCycle> find_gamma_cycle(const Hypergraph& h) {
  const std::size_t m = h.edge_count();
  if (m > 10) throw std::invalid_argument("find_gamma_cycle: size guard (|E| <= 10) exceeded");
  if (m < 3) return std::nullopt;

  std::vector<VertexId> verts = h.vertices();
  const std::size_t k = verts.size();
  const std::size_t words = (k + 63) / 64;
  std::unordered_map<VertexId, std::size_t> dense;
  for (std::size_t i = 0; i < k; ++i) dense.emplace(verts[i], i);
  const auto& edges = h.edges();
  std::vector<Mask> em(m);
  for (std::size_t i = 0; i < m; ++i) {
    em[i].w.assign(words, 0);
    for (VertexId v : edges[i].vars) {
      std::size_t b = dense.at(v);
      em[i].w[b >> 6] |= std::uint64_t(1) << (b & 63);
    }
  }

  // DFS over ordered tuples of distinct edges. cand[i] tracks the legal
  // picks for x_{i+1} given the edges chosen so far; it only shrinks as the
  // tuple grows, so an empty cand prunes the whole branch.
  std::vector<std::size_t> tuple;
  std::vector<char> used(m, 0);
  std::vector<Mask> cand;  // cand[i]: vertices usable between tuple[i], tuple[i+1]
  std::optional<GammaCycle> found;

  auto try_close = [&]() -> bool {
    const std::size_t n = tuple.size();
    Mask closing = mask_and(em[tuple[n - 1]], em[tuple[0]]);
    if (!closing.any()) return false;
    // Greedy: keep closing vertices free unless a cand set forces one.
    std::vector<int> picks;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      Mask avoid = mask_minus(cand[i], closing);
      int x = avoid.any() ? avoid.lowest() : cand[i].lowest();
      picks.push_back(x);
      if (closing.test(static_cast<std::size_t>(x))) closing.reset(static_cast<std::size_t>(x));
    }
    if (!closing.any()) return false;
    picks.push_back(closing.lowest());
    GammaCycle gc;
    for (std::size_t e : tuple) gc.edges.push_back(edges[e].id);
    for (int b : picks) gc.vertices.push_back(verts[static_cast<std::size_t>(b)]);
    found = std::move(gc);
    return true;
  };

  std::function<bool()> rec = [&]() -> bool {
    if (tuple.size() >= 3 && try_close()) return true;
    if (tuple.size() == m) return false;
    for (std::size_t e = 0; e < m; ++e) {
      if (used[e]) continue;
      // x between the previous edge and e: in both, in no earlier edge.
      Mask next = mask_and(em[tuple.back()], em[e]);
      for (std::size_t j = 0; j + 1 < tuple.size(); ++j) next = mask_minus(next, em[tuple[j]]);
      if (!next.any()) continue;
      std::vector<Mask> saved = cand;
      bool ok = true;
      for (Mask& c : cand) {
        c = mask_minus(c, em[e]);
        if (!c.any()) { ok = false; break; }
      }
      if (ok) {
        cand.push_back(std::move(next));
        tuple.push_back(e);
        used[e] = 1;
        if (rec()) return true;
        used[e] = 0;
        tuple.pop_back();
        cand.pop_back();
      }
      cand = std::move(saved);
    }
    return false;
  };

  for (std::size_t e0 = 0; e0 < m && !found; ++e0) {
    tuple.assign(1, e0);
    used.assign(m, 0);
    used[e0] = 1;
    cand.clear();
    rec();
  }
  return found;
}

}  // namespace dbcount
