#include "dbcount/classify.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dbcount/decomposer.hpp"
#include "dbcount/pqtree.hpp"

namespace dbcount {

namespace {

// Iterated reduction over plain vertex lists (sorted, as stored by
// Hypergraph): vertices on at most one edge vanish, empty and contained
// edges vanish, equal sets collapse to one copy. True when nothing is left.
bool reduce_to_empty(std::vector<std::vector<VertexId>> es) {
  bool changed = true;
  while (changed && !es.empty()) {
    changed = false;

    std::map<VertexId, int> occurrences;
    for (const auto& e : es)
      for (VertexId v : e) ++occurrences[v];
    for (auto& e : es) {
      auto tail = std::remove_if(e.begin(), e.end(),
                                 [&](VertexId v) { return occurrences[v] == 1; });
      if (tail != e.end()) {
        e.erase(tail, e.end());
        changed = true;
      }
    }

    std::sort(es.begin(), es.end());
    std::vector<bool> drop(es.size(), false);
    for (std::size_t i = 0; i < es.size(); ++i) {
      if (es[i].empty() || (i + 1 < es.size() && es[i] == es[i + 1])) {
        drop[i] = true;
        continue;
      }
      for (std::size_t j = 0; j < es.size() && !drop[i]; ++j)
        drop[i] = es[i] != es[j] && es[i].size() <= es[j].size() &&
                  std::includes(es[j].begin(), es[j].end(), es[i].begin(), es[i].end());
    }

    std::vector<std::vector<VertexId>> kept;
    for (std::size_t i = 0; i < es.size(); ++i) {
      if (drop[i])
        changed = true;
      else
        kept.push_back(std::move(es[i]));
    }
    es = std::move(kept);
  }
  return es.empty();
}

// The same reduction with every edge a machine word (usable whenever the
// hypergraph has at most 64 vertices); the subset test below calls this in
// its inner loop.
bool reduce_to_empty_masks(std::vector<std::uint64_t> es) {
  bool changed = true;
  while (changed && !es.empty()) {
    changed = false;

    std::uint64_t seen_once = 0, seen_more = 0;
    for (std::uint64_t e : es) {
      seen_more |= seen_once & e;
      seen_once |= e;
    }
    const std::uint64_t lone = seen_once & ~seen_more;
    if (lone != 0) {
      for (std::uint64_t& e : es)
        if ((e & lone) != 0) {
          e &= ~lone;
          changed = true;
        }
    }

    std::sort(es.begin(), es.end());
    std::vector<bool> drop(es.size(), false);
    for (std::size_t i = 0; i < es.size(); ++i) {
      if (es[i] == 0 || (i + 1 < es.size() && es[i] == es[i + 1])) {
        drop[i] = true;
        continue;
      }
      for (std::size_t j = 0; j < es.size() && !drop[i]; ++j)
        drop[i] = es[i] != es[j] && (es[i] & es[j]) == es[i];
    }

    std::vector<std::uint64_t> kept;
    for (std::size_t i = 0; i < es.size(); ++i) {
      if (drop[i])
        changed = true;
      else
        kept.push_back(es[i]);
    }
    es = std::move(kept);
  }
  return es.empty();
}

}  // namespace

bool alpha_acyclic(const Hypergraph& h) {
  std::vector<std::vector<VertexId>> es;
  es.reserve(h.edge_count());
  for (const Edge& e : h.edges()) es.push_back(e.vars);
  return reduce_to_empty(std::move(es));
}

bool beta_acyclic(const Hypergraph& h) {
  const int m = h.edge_count();
  if (m > 15)
    throw std::invalid_argument("beta subset test is guarded to 15 edges; this hypergraph has " +
                                std::to_string(m));

  const std::vector<VertexId> verts = h.vertices();
  const bool word_sized = verts.size() <= 64;
  std::vector<std::uint64_t> masks;
  if (word_sized) {
    std::map<VertexId, int> bit;
    for (std::size_t i = 0; i < verts.size(); ++i) bit[verts[i]] = static_cast<int>(i);
    for (const Edge& e : h.edges()) {
      std::uint64_t mask = 0;
      for (VertexId v : e.vars) mask |= std::uint64_t{1} << bit[v];
      masks.push_back(mask);
    }
  }

  for (std::uint32_t subset = 1; subset < (std::uint32_t{1} << m); ++subset) {
    if (std::popcount(subset) < 3) continue;  // one or two edges always reduce to nothing
    if (word_sized) {
      std::vector<std::uint64_t> es;
      for (int i = 0; i < m; ++i)
        if (subset & (std::uint32_t{1} << i)) es.push_back(masks[i]);
      if (!reduce_to_empty_masks(std::move(es))) return false;
    } else {
      std::vector<std::vector<VertexId>> es;
      for (int i = 0; i < m; ++i)
        if (subset & (std::uint32_t{1} << i)) es.push_back(h.edges()[i].vars);
      if (!reduce_to_empty(std::move(es))) return false;
    }
  }
  return true;
}

AcyclicityReport classify(const Hypergraph& h, bool with_beta) {
  if (with_beta && h.edge_count() > 15)
    throw std::invalid_argument("beta subset test is guarded to 15 edges; this hypergraph has " +
                                std::to_string(h.edge_count()) +
                                " (classify with with_beta=false instead)");

  AcyclicityReport rep;
  rep.alpha = alpha_acyclic(h);
  if (with_beta) rep.beta = beta_acyclic(h);

  rep.disjoint_branches = find_decomposition(h).ok();
  rep.gamma = rep.disjoint_branches;  // a failed component already sinks every root
  if (rep.gamma) {
    for (EdgeId e : h.edge_ids()) {
      if (!compute_db(h, e).ok()) {
        rep.gamma = false;
        break;
      }
    }
  }

  rep.join_path = h.edge_count() == 0 || build_pq_tree(h, h.edge_ids()).has_value();
  return rep;
}

}  // namespace dbcount
