#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "dbcount/pqtree.hpp"

// Suffix forcing. The leaves of the target ref R must end the block of the
// enclosing ref S; the tree is rewritten along the path from R's node up to
// S's node. P-nodes regroup their other children into a fresh sibling inside
// an F-node; Q-nodes admit the path child only at an extremity (reversing
// the whole child list when it sits at the left) and freeze into F-nodes;
// F-nodes admit it only at the right end and cannot reverse.

namespace dbcount {

namespace {

std::map<int, int> parent_map(const PQFTree& t) {
  std::map<int, int> par;
  std::function<void(int)> walk = [&](int id) {
    for (int c : t.at(id).children) {
      par[c] = id;
      walk(c);
    }
  };
  if (t.root >= 0) walk(t.root);
  return par;
}

int child_index(const PQFNode& n, int child) {
  for (std::size_t i = 0; i < n.children.size(); ++i)
    if (n.children[i] == child) return static_cast<int>(i);
  throw std::logic_error("pqtree: child not under its recorded parent");
}

bool is_full_range(const PQFNode& n, int lo, int hi) {
  return lo == 0 && hi == static_cast<int>(n.children.size()) - 1;
}

// grouped sibling for the P-node rewrite
int group_others(PQFTree& t, const std::vector<int>& children, int keep) {
  std::vector<int> others;
  for (int c : children)
    if (c != keep) others.push_back(c);
  if (others.size() == 1) return others[0];
  PQFNode p;
  p.kind = NodeKind::P;
  p.children = std::move(others);
  return t.add(std::move(p));
}

}  // namespace

std::optional<PQFTree> force_within(const PQFTree& t, const PQFSubtreeRef& s,
                                    const PQFSubtreeRef& r) {
  if (s == r) return normalized(t);
  PQFTree w = t;

  if (s.node == r.node) {
    PQFNode& n = w.nodes[s.node];
    switch (n.kind) {
      case NodeKind::Q:
        if (r.hi == s.hi) {
          n.kind = NodeKind::F;
        } else if (r.lo == s.lo) {
          std::reverse(n.children.begin(), n.children.end());
          n.kind = NodeKind::F;
        } else {
          return std::nullopt;
        }
        break;
      case NodeKind::F:
        if (r.hi != s.hi) return std::nullopt;
        break;
      default:
        // leaf/P refs are degenerate/full: equal refs were handled above
        return std::nullopt;
    }
    PQFTree out = normalized(w);
    return out;
  }

  std::map<int, int> par = parent_map(w);

  // pin R's own node when the ref is a partial child range
  {
    PQFNode& n = w.nodes[r.node];
    if (n.kind == NodeKind::Q && !is_full_range(n, r.lo, r.hi)) {
      if (r.hi == static_cast<int>(n.children.size()) - 1) {
        n.kind = NodeKind::F;
      } else if (r.lo == 0) {
        std::reverse(n.children.begin(), n.children.end());
        n.kind = NodeKind::F;
      } else {
        return std::nullopt;
      }
    } else if (n.kind == NodeKind::F && !is_full_range(n, r.lo, r.hi)) {
      if (r.hi != static_cast<int>(n.children.size()) - 1) return std::nullopt;
    }
  }

  // climb to s.node, keeping the carrier rightmost at every step
  int cur = r.node;
  while (true) {
    auto it = par.find(cur);
    if (it == par.end()) throw std::logic_error("force: target ref is not inside the enclosing ref");
    int p = it->second;
    if (p == s.node) break;
    PQFNode& n = w.nodes[p];
    int idx = child_index(n, cur);
    int last = static_cast<int>(n.children.size()) - 1;
    switch (n.kind) {
      case NodeKind::P: {
        int grp = group_others(w, n.children, cur);
        PQFNode& np = w.nodes[p];  // re-fetch: group_others may reallocate
        np.kind = NodeKind::F;
        np.children = {grp, cur};
        break;
      }
      case NodeKind::Q:
        if (idx == last) {
          n.kind = NodeKind::F;
        } else if (idx == 0) {
          std::reverse(n.children.begin(), n.children.end());
          n.kind = NodeKind::F;
        } else {
          return std::nullopt;
        }
        break;
      case NodeKind::F:
        if (idx != last) return std::nullopt;
        break;
      case NodeKind::leaf:
        throw std::logic_error("force: leaf with children");
    }
    cur = p;
  }

  // final step: the carrier must end the block of s
  {
    PQFNode& n = w.nodes[s.node];
    int idx = child_index(n, cur);
    switch (n.kind) {
      case NodeKind::P: {
        int grp = group_others(w, n.children, cur);
        PQFNode& np = w.nodes[s.node];
        np.kind = NodeKind::F;
        np.children = {grp, cur};
        break;
      }
      case NodeKind::Q:
        if (idx == s.hi) {
          n.kind = NodeKind::F;
        } else if (idx == s.lo) {
          std::reverse(n.children.begin(), n.children.end());
          n.kind = NodeKind::F;
        } else {
          return std::nullopt;
        }
        break;
      case NodeKind::F:
        if (idx != s.hi) return std::nullopt;
        break;
      case NodeKind::leaf:
        throw std::logic_error("force: leaf as enclosing ref with a strict subtree");
    }
  }

  PQFTree out = normalized(w);
  return out;
}

std::optional<PQFTree> force(const PQFTree& t, const PQFSubtreeRef& s) {
  return force_within(t, full_ref(t, t.root), s);
}

PQFSubtreeRef locate_subtree(const PQFTree& t, const Hypergraph& h,
                             const std::vector<VertexId>& vset) {
  std::vector<VertexId> vs = vset;
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());

  std::set<EdgeId> a;
  for (EdgeId e : t.leaf_set()) {
    const auto& vars = h.edge(e).vars;
    if (std::includes(vars.begin(), vars.end(), vs.begin(), vs.end())) a.insert(e);
  }
  if (a.empty()) throw std::invalid_argument("locate_subtree: no edge contains the vertex set");

  std::map<int, std::size_t> cnt, total;
  std::function<void(int)> count = [&](int id) {
    const PQFNode& n = t.at(id);
    std::size_t c = 0, tot = 0;
    if (n.kind == NodeKind::leaf) {
      c = a.count(n.leaf) ? 1 : 0;
      tot = 1;
    }
    for (int ch : n.children) {
      count(ch);
      c += cnt[ch];
      tot += total[ch];
    }
    cnt[id] = c;
    total[id] = tot;
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

  const PQFNode& n = t.at(pr);
  PQFSubtreeRef ref;
  ref.node = pr;
  switch (n.kind) {
    case NodeKind::leaf:
      ref.lo = ref.hi = 0;
      break;
    case NodeKind::P:
      if (total[pr] != a.size())
        throw std::logic_error("locate_subtree: leaves under P node exceed the target set");
      ref.lo = 0;
      ref.hi = static_cast<int>(n.children.size()) - 1;
      break;
    case NodeKind::Q:
    case NodeKind::F: {
      int lo = -1, hi = -1;
      std::size_t covered = 0;
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (cnt[n.children[i]] == 0) continue;
        if (lo < 0) lo = static_cast<int>(i);
        hi = static_cast<int>(i);
        covered += total[n.children[i]];
      }
      if (lo == hi) throw std::logic_error("locate_subtree: descent missed a covering child");
      // every leaf inside the range must belong to the target set
      for (int i = lo; i <= hi; ++i)
        if (cnt[n.children[i]] != total[n.children[i]])
          throw std::logic_error("locate_subtree: range contains foreign leaves");
      if (covered != a.size())
        throw std::logic_error("locate_subtree: range does not cover the target set");
      ref.lo = lo;
      ref.hi = hi;
      break;
    }
  }
  return ref;
}

std::optional<PQFTree> restrict_inclusion_order(const PQFTree& t, const Hypergraph& h,
                                                const std::vector<VertexId>& vset) {
  std::vector<VertexId> vs = vset;
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());

  std::vector<VertexId> vmin, vmax;
  bool any = false;
  for (EdgeId e : t.leaf_set()) {
    const auto& vars = h.edge(e).vars;
    std::vector<VertexId> trace;
    std::set_intersection(vars.begin(), vars.end(), vs.begin(), vs.end(),
                          std::back_inserter(trace));
    if (trace.empty()) continue;
    if (!any) {
      vmin = vmax = trace;
      any = true;
      continue;
    }
    if (trace.size() < vmin.size()) vmin = trace;
    if (trace.size() > vmax.size()) vmax = std::move(trace);
  }
  if (!any || vmin == vmax) return t;  // no leaf meets vset, or all traces equal

  PQFSubtreeRef s = locate_subtree(t, h, vmin);
  PQFSubtreeRef r = locate_subtree(t, h, vmax);
  return force_within(t, s, r);
}

}  // namespace dbcount
