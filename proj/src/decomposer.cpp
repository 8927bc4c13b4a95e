#include "dbcount/decomposer.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

#include "dbcount/pqtree.hpp"

namespace dbcount {

namespace {

std::vector<VertexId> intersect(const std::vector<VertexId>& a, const std::vector<VertexId>& b) {
  std::vector<VertexId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool meets(const std::vector<VertexId>& a, const std::vector<VertexId>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j)
      ++i;
    else if (*j < *i)
      ++j;
    else
      return true;
  }
  return false;
}

// A branch hypergraph in its own coordinate system: vertices re-indexed to
// 0..n-1, edge ids dense 0..m-1 with the translation back to the caller's
// ids. Keeps each recursion level self-contained.
struct LocalInstance {
  Hypergraph h;
  std::vector<EdgeId> to_caller;  // local edge id -> caller edge id
};

LocalInstance make_local(const Hypergraph& g, const std::vector<EdgeId>& edges) {
  std::vector<VertexId> verts;
  for (EdgeId e : edges) {
    const auto& vs = g.edge(e).vars;
    verts.insert(verts.end(), vs.begin(), vs.end());
  }
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());

  std::vector<std::vector<VertexId>> sets;
  sets.reserve(edges.size());
  for (EdgeId e : edges) {
    std::vector<VertexId> local;
    for (VertexId v : g.edge(e).vars)
      local.push_back(static_cast<VertexId>(
          std::lower_bound(verts.begin(), verts.end(), v) - verts.begin()));
    sets.push_back(std::move(local));
  }
  return LocalInstance{Hypergraph(sets), edges};
}

// Core of compute_db; assumes h is connected and root is one of its edges.
// Decomposition comes back in h's own edge ids.
DbOutcome db_core(const Hypergraph& h, EdgeId root) {
  DbOutcome out;
  if (h.edge_count() == 1) {
    out.tree = Decomposition{root, {{root, root}}};
    return out;
  }

  const std::vector<VertexId>& root_vars = h.edge(root).vars;
  std::vector<std::pair<EdgeId, EdgeId>> parent{{root, root}};

  for (const ComponentView& c : connected_components(h.remove_edge(root))) {
    // Edges of the component that cover the root's trace; the next edge on
    // any branch below the root must be one of them.
    std::vector<VertexId> trace = intersect(root_vars, c.vertices);
    std::vector<EdgeId> cover;
    for (EdgeId f : c.edges) {
      const auto& vs = h.edge(f).vars;
      if (std::includes(vs.begin(), vs.end(), trace.begin(), trace.end())) cover.push_back(f);
    }
    if (cover.empty()) {
      out.reason = RejectReason::empty_cover;
      return out;
    }

    Hypergraph hi = subhypergraph(h, c.edges);
    SeparatorOutcome sep = compute_separator(hi, cover);
    if (!sep.ok()) {
      out.reason = sep.reason;
      return out;
    }
    const std::vector<EdgeId>& path = sep.separator->order;
    parent.emplace_back(path[0], root);
    for (std::size_t j = 1; j < path.size(); ++j) parent.emplace_back(path[j], path[j - 1]);

    // Everything below the separator hangs off the last separator edge its
    // component still touches; recurse with that edge pinned as the root.
    for (const ComponentView& cc : connected_components(hi.remove_edges(cover))) {
      int last = -1;
      for (std::size_t j = 0; j < path.size(); ++j)
        if (meets(h.edge(path[j]).vars, cc.vertices)) last = static_cast<int>(j);
      if (last < 0) throw std::logic_error("compute_db: branch component misses its separator");

      std::vector<EdgeId> branch = cc.edges;
      branch.push_back(path[last]);
      LocalInstance li = make_local(h, branch);
      DbOutcome sub = db_core(li.h, static_cast<EdgeId>(branch.size()) - 1);
      if (!sub.ok()) {
        out.reason = RejectReason::recursion_failure;
        return out;
      }
      for (auto [n, p] : sub.tree->parent)
        if (n != sub.tree->root) parent.emplace_back(li.to_caller[n], li.to_caller[p]);
    }
  }

  std::sort(parent.begin(), parent.end());
  out.tree = Decomposition{root, std::move(parent)};
  return out;
}

}  // namespace

const char* to_string(RejectReason r) {
  switch (r) {
    case RejectReason::empty_cover: return "empty_cover";
    case RejectReason::no_join_path: return "no_join_path";
    case RejectReason::trace_not_chain: return "trace_not_chain";
    case RejectReason::empty_restriction: return "empty_restriction";
    case RejectReason::recursion_failure: return "recursion_failure";
  }
  return "unknown";
}

SeparatorOutcome compute_separator(const Hypergraph& h, const std::vector<EdgeId>& a) {
  SeparatorOutcome out;
  auto tree = build_pq_tree(h, a);  // throws on empty a / unknown ids
  if (!tree.has_value()) {
    out.reason = RejectReason::no_join_path;
    return out;
  }

  for (const ComponentView& c : connected_components(h.remove_edges(a))) {
    // Distinct traces on the component must form an inclusion chain; sorted
    // by size, each must contain its predecessor.
    std::vector<std::vector<VertexId>> traces;
    for (EdgeId e : a) {
      std::vector<VertexId> tr = intersect(h.edge(e).vars, c.vertices);
      if (!tr.empty()) traces.push_back(std::move(tr));
    }
    std::sort(traces.begin(), traces.end(),
              [](const auto& p, const auto& q) { return p.size() < q.size(); });
    traces.erase(std::unique(traces.begin(), traces.end()), traces.end());
    for (std::size_t i = 0; i + 1 < traces.size(); ++i)
      if (!std::includes(traces[i + 1].begin(), traces[i + 1].end(), traces[i].begin(),
                         traces[i].end())) {
        out.reason = RejectReason::trace_not_chain;
        return out;
      }

    auto next = restrict_inclusion_order(*tree, h, c.vertices);
    if (!next.has_value()) {
      out.reason = RejectReason::empty_restriction;
      return out;
    }
    tree = std::move(next);
  }

  out.separator = Separator{tree->frontier()};
  return out;
}

bool validate_separator(const Hypergraph& h, const std::vector<EdgeId>& a, const Separator& p) {
  std::vector<EdgeId> want = a;
  std::sort(want.begin(), want.end());
  want.erase(std::unique(want.begin(), want.end()), want.end());
  std::vector<EdgeId> got = p.order;
  std::sort(got.begin(), got.end());
  if (got != want || want.empty()) return false;

  if (!check_join_path_order(subhypergraph(h, want), p.order)) return false;

  for (const ComponentView& c : connected_components(h.remove_edges(want))) {
    std::vector<VertexId> prev;
    bool met = false;
    for (EdgeId e : p.order) {
      std::vector<VertexId> tr = intersect(h.edge(e).vars, c.vertices);
      if (tr.empty()) continue;
      if (met && !std::includes(tr.begin(), tr.end(), prev.begin(), prev.end())) return false;
      prev = std::move(tr);
      met = true;
    }
  }
  return true;
}

DbOutcome compute_db(const Hypergraph& h, EdgeId root) {
  h.edge(root);  // id check; throws on unknown
  auto comps = connected_components(h);
  if (comps.size() == 1) return db_core(h, root);

  DbOutcome out;
  std::vector<std::pair<EdgeId, EdgeId>> parent{{root, root}};
  for (const ComponentView& c : comps) {
    Hypergraph sub = subhypergraph(h, c.edges);
    DbOutcome part;
    if (std::binary_search(c.edges.begin(), c.edges.end(), root)) {
      part = db_core(sub, root);
      if (!part.ok()) return part;
    } else {
      for (EdgeId e : c.edges) {
        part = db_core(sub, e);
        if (part.ok()) break;
      }
      if (!part.ok()) {
        out.reason = RejectReason::recursion_failure;
        return out;
      }
      parent.emplace_back(part.tree->root, root);
    }
    for (auto [n, p] : part.tree->parent)
      if (n != part.tree->root) parent.emplace_back(n, p);
  }

  std::sort(parent.begin(), parent.end());
  out.tree = Decomposition{root, std::move(parent)};
  return out;
}

DecompositionSearch find_decomposition(const Hypergraph& h) {
  DecompositionSearch out;
  for (const ComponentView& c : connected_components(h)) {
    Hypergraph sub = subhypergraph(h, c.edges);
    std::optional<Decomposition> found;
    for (EdgeId e : c.edges) {
      DbOutcome r = db_core(sub, e);
      if (r.ok()) {
        found = std::move(r.tree);
        break;
      }
    }
    if (!found.has_value()) {
      out.trees.clear();
      out.failed_component = c.index;
      return out;
    }
    out.trees.push_back(std::move(*found));
  }
  return out;
}

Decomposition glue_decompositions(const std::vector<Decomposition>& trees) {
  if (trees.empty()) throw std::invalid_argument("glue: need at least one tree");
  std::vector<std::pair<EdgeId, EdgeId>> links;
  for (std::size_t t = 0; t < trees.size(); ++t)
    for (const auto& [node, par] : trees[t].parent)
      links.emplace_back(node, t > 0 && node == par ? trees[0].root : par);
  std::sort(links.begin(), links.end());
  return Decomposition{trees[0].root, std::move(links)};
}

}  // namespace dbcount
