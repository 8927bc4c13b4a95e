#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "dbcount/pqtree.hpp"

// Consecutive-ones reduction: one pass per vertex v constrains the leaves
// whose edges contain v to be consecutive in every frontier. Mixed (partial)
// nodes dissolve into an ordered chain — empties first, fulls last — that the
// pertinent root reassembles. Correctness contract is the frontier set; the
// test suite checks it against brute-force permutation filtering.

namespace dbcount {

namespace {

enum class St { empty, full, partial };

struct Res {
  St st = St::empty;
  std::vector<int> chain;  // partial only: replacement nodes, empties then fulls
};

struct Reducer {
  PQFTree& t;
  const std::set<EdgeId>& a;

  // wraps a group of siblings in a fresh P-node (or passes a singleton through)
  int group(std::vector<int> list) {
    if (list.size() == 1) return list[0];
    PQFNode p;
    p.kind = NodeKind::P;
    p.children = std::move(list);
    return t.add(std::move(p));
  }

  // chain -> tree node (2 entries keep full permutability: P; more fix a Q)
  int chain_node(std::vector<int> chain) {
    if (chain.size() == 1) return chain[0];
    PQFNode n;
    n.kind = chain.size() == 2 ? NodeKind::P : NodeKind::Q;
    n.children = std::move(chain);
    return t.add(std::move(n));
  }

  std::optional<Res> process(int id) {
    const PQFNode node = t.at(id);  // copy: t may grow below
    if (node.kind == NodeKind::leaf) {
      Res r;
      r.st = a.count(node.leaf) ? St::full : St::empty;
      return r;
    }
    std::vector<Res> kid;
    for (int c : node.children) {
      auto r = process(c);
      if (!r) return std::nullopt;
      kid.push_back(std::move(*r));
    }
    int partials = 0;
    bool any_empty = false, any_full = false;
    for (const Res& r : kid) {
      if (r.st == St::partial) ++partials;
      if (r.st == St::empty) any_empty = true;
      if (r.st == St::full) any_full = true;
    }
    if (partials == 0 && !(any_empty && any_full)) {
      Res r;
      r.st = any_full ? St::full : St::empty;
      return r;
    }
    if (partials > 1) return std::nullopt;

    if (node.kind == NodeKind::P) {
      std::vector<int> empties, fulls;
      std::vector<int> pchain;
      for (std::size_t i = 0; i < kid.size(); ++i) {
        if (kid[i].st == St::empty) empties.push_back(node.children[i]);
        else if (kid[i].st == St::full) fulls.push_back(node.children[i]);
        else pchain = kid[i].chain;
      }
      Res r;
      r.st = St::partial;
      if (!empties.empty()) r.chain.push_back(group(std::move(empties)));
      r.chain.insert(r.chain.end(), pchain.begin(), pchain.end());
      if (!fulls.empty()) r.chain.push_back(group(std::move(fulls)));
      return r;
    }

    // Q-node: children must read empties, then at most one partial, then
    // fulls — in stored order or reversed.
    auto try_orient = [&](const std::vector<int>& ch, const std::vector<const Res*>& st)
        -> std::optional<Res> {
      std::size_t i = 0;
      while (i < ch.size() && st[i]->st == St::empty) ++i;
      std::vector<int> chain(ch.begin(), ch.begin() + i);
      if (i < ch.size() && st[i]->st == St::partial) {
        chain.insert(chain.end(), st[i]->chain.begin(), st[i]->chain.end());
        ++i;
      }
      for (; i < ch.size(); ++i) {
        if (st[i]->st != St::full) return std::nullopt;
        chain.push_back(ch[i]);
      }
      Res r;
      r.st = St::partial;
      r.chain = std::move(chain);
      return r;
    };
    std::vector<const Res*> st;
    for (const Res& r : kid) st.push_back(&r);
    if (auto r = try_orient(node.children, st)) return r;
    std::vector<int> rev_ch(node.children.rbegin(), node.children.rend());
    std::vector<const Res*> rev_st(st.rbegin(), st.rend());
    return try_orient(rev_ch, rev_st);
  }

  // The pertinent root may keep its full block interior; boundary partials
  // expand with their full sides facing the block.
  bool reduce_root(int pr) {
    PQFNode& node = t.nodes[pr];
    if (node.kind == NodeKind::leaf) return true;
    const std::vector<int> children = node.children;
    std::vector<Res> kid;
    for (int c : children) {
      auto r = process(c);
      if (!r) return false;
      kid.push_back(std::move(*r));
    }
    int partials = 0;
    for (const Res& r : kid)
      if (r.st == St::partial) ++partials;
    if (partials > 2) return false;

    if (t.nodes[pr].kind == NodeKind::P) {
      std::vector<int> empties, fulls;
      std::vector<std::vector<int>> pchains;
      for (std::size_t i = 0; i < kid.size(); ++i) {
        if (kid[i].st == St::empty) empties.push_back(children[i]);
        else if (kid[i].st == St::full) fulls.push_back(children[i]);
        else pchains.push_back(kid[i].chain);
      }
      if (pchains.empty() && fulls.size() <= 1) return true;  // already consecutive
      std::vector<int> block;
      if (!pchains.empty()) block = pchains[0];
      if (!fulls.empty()) block.push_back(group(std::move(fulls)));
      if (pchains.size() == 2)
        block.insert(block.end(), pchains[1].rbegin(), pchains[1].rend());
      if (empties.empty()) {
        PQFNode& n = t.nodes[pr];
        n.kind = block.size() == 2 ? NodeKind::P : NodeKind::Q;
        n.children = std::move(block);
      } else {
        int bn = chain_node(std::move(block));
        PQFNode& n = t.nodes[pr];
        n.children = std::move(empties);
        n.children.push_back(bn);
      }
      return true;
    }

    // Q root: fulls must already be contiguous, partials adjacent to the
    // block boundaries (left one expands forward, right one reversed).
    int fmin = -1, fmax = -1;
    for (std::size_t i = 0; i < kid.size(); ++i) {
      if (kid[i].st != St::full) continue;
      if (fmin < 0) fmin = static_cast<int>(i);
      fmax = static_cast<int>(i);
    }
    if (fmin >= 0) {
      for (int i = fmin; i <= fmax; ++i)
        if (kid[i].st != St::full) return false;
    }
    std::vector<int> left_positions;  // where partials may sit
    for (std::size_t i = 0; i < kid.size(); ++i) {
      if (kid[i].st != St::partial) continue;
      left_positions.push_back(static_cast<int>(i));
    }
    int left = -1, right = -1;  // boundary partial indices
    if (fmin >= 0) {
      for (int p : left_positions) {
        if (p == fmin - 1) left = p;
        else if (p == fmax + 1) right = p;
        else return false;
      }
    } else {
      if (left_positions.size() == 2) {
        if (left_positions[1] != left_positions[0] + 1) return false;
        left = left_positions[0];
        right = left_positions[1];
      } else if (left_positions.size() == 1) {
        left = left_positions[0];  // lone partial: either orientation works
      }
    }
    std::vector<int> rebuilt;
    for (std::size_t i = 0; i < kid.size(); ++i) {
      if (static_cast<int>(i) == left) {
        rebuilt.insert(rebuilt.end(), kid[i].chain.begin(), kid[i].chain.end());
      } else if (static_cast<int>(i) == right) {
        rebuilt.insert(rebuilt.end(), kid[i].chain.rbegin(), kid[i].chain.rend());
      } else {
        rebuilt.push_back(children[i]);
      }
    }
    t.nodes[pr].children = std::move(rebuilt);
    return true;
  }
};

// One consecutive-ones pass for the leaf set `a`.
bool reduce(PQFTree& t, const std::set<EdgeId>& a) {
  // leaf counts, then descend to the deepest node covering all of a
  std::map<int, std::size_t> cnt;
  std::function<std::size_t(int)> count = [&](int id) -> std::size_t {
    const PQFNode& n = t.at(id);
    std::size_t c = 0;
    if (n.kind == NodeKind::leaf) c = a.count(n.leaf) ? 1 : 0;
    for (int ch : n.children) c += count(ch);
    cnt[id] = c;
    return c;
  };
  count(t.root);
  int pr = t.root;
  for (;;) {
    int next = -1;
    for (int c : t.at(pr).children)
      if (cnt[c] == a.size()) { next = c; break; }
    if (next < 0) break;
    pr = next;
  }
  Reducer r{t, a};
  return r.reduce_root(pr);
}

}  // namespace

std::optional<PQFTree> build_pq_tree(const Hypergraph& h, const std::vector<EdgeId>& a_in) {
  std::vector<EdgeId> a = a_in;
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  if (a.empty()) throw std::invalid_argument("build_pq_tree: empty edge selection");
  for (EdgeId e : a) h.edge(e);  // throws on unknown ids

  if (a.size() == 1) return PQFTree::single_leaf(a[0]);

  PQFTree t;
  PQFNode root;
  root.kind = NodeKind::P;
  for (EdgeId e : a) {
    PQFNode leaf;
    leaf.kind = NodeKind::leaf;
    leaf.leaf = e;
    root.children.push_back(t.add(std::move(leaf)));
  }
  t.root = t.add(std::move(root));

  std::map<VertexId, std::set<EdgeId>> occ;
  for (EdgeId e : a)
    for (VertexId v : h.edge(e).vars) occ[v].insert(e);
  for (const auto& [v, edges] : occ) {
    if (edges.size() < 2 || edges.size() == a.size()) continue;
    if (!reduce(t, edges)) return std::nullopt;
  }
  return normalized(t);
}

}  // namespace dbcount
